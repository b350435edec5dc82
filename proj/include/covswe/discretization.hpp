#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "covswe/mesh.hpp"
#include "covswe/physics.hpp"
#include "covswe/sbp.hpp"

namespace covswe {

enum class FluxVariant { EC, ES, CENTRAL };
enum class SourceVariant { SPLIT, NAIVE };

std::string to_string(FluxVariant v);
/// Accepts "ec", "es", "central" (case-insensitive); throws ConfigError.
FluxVariant parse_flux_variant(const std::string& name);

/// Source form paired with each flux variant.
SourceVariant default_source(FluxVariant v);

/// Nodal states of every element, stored element-major with the xi^1 index
/// outermost: node (e, i, j) lives at (e * (N+1) + i) * (N+1) + j.
class StateField {
 public:
  StateField() = default;
  StateField(std::size_t num_elements, int degree)
      : elements_(num_elements),
        n_(degree + 1),
        data_(num_elements * static_cast<std::size_t>((degree + 1) * (degree + 1)),
              State{0.0, 0.0, 0.0}) {}

  std::size_t num_elements() const { return elements_; }
  int degree() const { return n_ - 1; }
  int nodes_per_dim() const { return n_; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(std::size_t e, int i, int j) const {
    return (e * n_ + static_cast<std::size_t>(i)) * n_ + static_cast<std::size_t>(j);
  }
  State& operator()(std::size_t e, int i, int j) { return data_[index(e, i, j)]; }
  const State& operator()(std::size_t e, int i, int j) const { return data_[index(e, i, j)]; }
  State& operator[](std::size_t k) { return data_[k]; }
  const State& operator[](std::size_t k) const { return data_[k]; }

  std::vector<State>& data() { return data_; }
  const std::vector<State>& data() const { return data_; }

 private:
  std::size_t elements_ = 0;
  int n_ = 0;
  std::vector<State> data_;
};

using ScalarFunction = std::function<double(const Vec3&)>;

/// Complete spatial discretization on one mesh and polynomial degree.
/// Immutable after construction; rhs may be called concurrently.
class Discretization {
 public:
  /// topography and coriolis are sampled at node positions. Throws
  /// ConfigError when the flux and source variants are not a valid pair
  /// (EC/ES with SPLIT, CENTRAL with NAIVE) and PairingError when b differs
  /// across paired interface nodes by more than 1e-9 of its scale.
  Discretization(MeshTopology mesh, int degree, FluxVariant flux, SourceVariant source,
                 const ScalarFunction& topography, const ScalarFunction& coriolis);

  Discretization(MeshTopology mesh, int degree, FluxVariant flux,
                 const ScalarFunction& topography, const ScalarFunction& coriolis)
      : Discretization(std::move(mesh), degree, flux, default_source(flux), topography,
                       coriolis) {}

  const MeshTopology& mesh() const { return mesh_; }
  const SbpOperators& operators() const { return ops_; }
  const NodePairing& pairing() const { return pairing_; }
  int degree() const { return ops_.degree; }
  int nodes_per_dim() const { return ops_.degree + 1; }
  std::size_t num_elements() const { return mesh_.num_elements(); }
  std::size_t num_nodes() const { return geometry_.size(); }
  FluxVariant flux() const { return flux_; }
  SourceVariant source() const { return source_; }

  std::size_t index(std::size_t e, int i, int j) const {
    const std::size_t n = nodes_per_dim();
    return (e * n + static_cast<std::size_t>(i)) * n + static_cast<std::size_t>(j);
  }
  const NodalGeometry& geometry(std::size_t k) const { return geometry_[k]; }
  const NodalGeometry& geometry(std::size_t e, int i, int j) const {
    return geometry_[index(e, i, j)];
  }
  const AuxNode& aux(std::size_t k) const { return aux_[k]; }
  /// Collocation derivative of b, (d_1 b, d_2 b), at node k.
  const std::array<double, 2>& topography_gradient(std::size_t k) const { return db_[k]; }
  /// A_{R->L} for the neighbor of (element, face, t).
  const Mat2& face_transform(std::size_t e, int face, int t) const {
    return transforms_[(e * kFacesPerElement + face) * nodes_per_dim() + t];
  }
  /// Quadrature weight w_i w_j J_ij of node k.
  double mass_weight(std::size_t k) const { return mass_[k]; }

  StateField make_field() const { return StateField(num_elements(), degree()); }

  /// Worker count for rhs (1 = serial). Results are bit-identical for any
  /// count since every element's output is computed by one worker.
  void set_threads(int threads);
  int threads() const { return threads_; }

  /// Weak-form semi-discrete right-hand side. Throws AdmissibilityError
  /// at the first node (in storage order) with h <= 0.
  void rhs(const StateField& q, double t, StateField& dqdt) const;
  StateField rhs(const StateField& q, double t) const;

  /// Strong-form assembly of the flux-differencing scheme (EC/ES only).
  StateField rhs_strong(const StateField& q, double t) const;

  /// Sum over nodes of w_i w_j J w^T du/dt.
  double semidiscrete_entropy_rate(const StateField& q, double t) const;

 private:
  void compute_primitives(const StateField& q, double t, std::vector<NodePrimitives>& prims) const;
  void element_rhs(std::size_t e, const StateField& q, const std::vector<NodePrimitives>& prims,
                   StateField& dqdt) const;
  State exterior_state(const StateField& q, std::size_t e, int face, int t) const;
  Flux interface_flux(const State& u_int, const NodePrimitives& p_int, const State& u_ext,
                      std::size_t k_int, std::size_t k_ext, int d, double sign) const;
  void for_each_element(const std::function<void(std::size_t, std::size_t)>& body) const;

  MeshTopology mesh_;
  SbpOperators ops_;
  NodePairing pairing_;
  FluxVariant flux_;
  SourceVariant source_;
  std::vector<NodalGeometry> geometry_;
  std::vector<AuxNode> aux_;
  std::vector<double> mass_;
  std::vector<std::array<double, 2>> db_;
  std::vector<Mat2> transforms_;
  int threads_ = 1;
};

}  // namespace covswe
