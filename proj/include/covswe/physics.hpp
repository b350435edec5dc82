#pragma once

#include <array>

#include "covswe/constants.hpp"
#include "covswe/geometry.hpp"
#include "covswe/types.hpp"

namespace covswe {

/// Conservative state (h, hv^1, hv^2) with contravariant momentum.
using State = std::array<double, 3>;
using Flux = std::array<double, 3>;

/// Pointwise geometry and forcing data needed by the physics routines.
struct AuxNode {
  double J = 1.0;
  Mat2 G = Mat2::identity();
  Mat2 Ginv = Mat2::identity();
  Christoffel Gamma;
  double f = 0.0;
  double b = 0.0;
};

AuxNode aux_from(const NodalGeometry& node);

struct EntropyVars {
  double w1 = 0.0;  ///< g(h + b) - v_i v^i / 2
  double w2 = 0.0;  ///< v_1
  double w3 = 0.0;  ///< v_2

  std::array<double, 3> as_array() const { return {w1, w2, w3}; }
};

/// Derived quantities at one node, shared by every two-point flux that
/// touches it. Reference directions are indexed d = 0 (xi^1) and d = 1 (xi^2)
/// throughout.
struct NodePrimitives {
  double h = 0.0;
  double b = 0.0;
  double v[2] = {0.0, 0.0};   ///< contravariant velocity v^i
  double vc[2] = {0.0, 0.0};  ///< covariant velocity v_i
  double Jhv[2] = {0.0, 0.0}; ///< J h v^d
  double JGh[2][2] = {};      ///< J h G^{id}
};

/// Throws NonpositiveDepthError if h is not a positive finite number.
NodePrimitives primitives(const State& u, const AuxNode& aux);

/// J f^d: (J h v^d, J (h v^i v^d + g h^2 G^{id} / 2)).
Flux physical_flux(const State& u, const AuxNode& aux, int d);

/// Total energy eta = h v_i v^i / 2 + g h^2 / 2 + g h b, the function whose
/// gradient is entropy_variables.
double entropy(const State& u, const AuxNode& aux);

EntropyVars entropy_variables(const State& u, const AuxNode& aux);

/// J Psi^d = J g h^2 v^d / 2.
double flux_potential(const State& u, const AuxNode& aux, int d);

/// J F^d with F^d = h v_i v^i v^d / 2 + g h^2 v^d + g h b v^d.
double entropy_flux(const State& u, const AuxNode& aux, int d);

/// Closed-form Jacobian dw/du (symmetric, positive definite for h > 0),
/// row-major.
std::array<std::array<double, 3>, 3> entropy_hessian(const State& u, const AuxNode& aux);

/// Nonsymmetric entropy-conservative two-point flux in direction d. For
/// interface use, u_r is already expressed in L's coordinates and aux_r
/// carries L's geometry with R's topography.
Flux ec_flux(const State& u_l, const State& u_r, const AuxNode& aux_l, const AuxNode& aux_r,
             int d);

/// Same flux from precomputed node data; ginv_l is G^{ij} on the L side.
Flux ec_flux(const NodePrimitives& l, const NodePrimitives& r, const Mat2& ginv_l, int d);

/// lambda^d = |v^d| + sqrt(g h G^{dd}).
double wave_speed(const State& u, const AuxNode& aux, int d);

/// LLF dissipation J_L max(lambda_L, lambda_R) (u_R - u_L) / 2, with both
/// wave speeds evaluated on L's geometry.
Flux llf_dissipation(const State& u_l, const State& u_r, const AuxNode& aux_l, int d);

/// Entropy-stable interface flux. outward_sign is +1 when the reference
/// direction d points out of L through the face and -1 when it points in,
/// so the dissipation always acts against the jump across the face.
Flux es_flux(const State& u_l, const State& u_r, const AuxNode& aux_l, const AuxNode& aux_r,
             int d, double outward_sign = 1.0);

/// Arithmetic mean of the physical fluxes.
Flux central_flux(const State& u_l, const State& u_r, const AuxNode& aux_l,
                  const AuxNode& aux_r, int d);

/// Split-form source: zero in mass; momentum from the Christoffel and
/// Coriolis terms, with epsilon_12 = 1.
State source_term(const State& u, const AuxNode& aux);

/// Unsplit source for the standard DG baseline: Coriolis, -g h G^{ij} d_j b
/// and -Gamma^i_jk tau^jk with tau^jk = h v^j v^k + g h^2 G^{jk} / 2.
State naive_source_term(const State& u, const AuxNode& aux, const std::array<double, 2>& db);

}  // namespace covswe
