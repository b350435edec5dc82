#include "covswe/physics.hpp"

#include <algorithm>
#include <cmath>

#include "covswe/errors.hpp"

namespace covswe {

namespace {

void check_depth(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw NonpositiveDepthError(h);
}

// Coriolis part -f J G^{ij} eps_jk h v^k.
double coriolis(const State& u, const AuxNode& aux, int i) {
  return -aux.f * aux.J * (aux.Ginv(i, 0) * u[2] - aux.Ginv(i, 1) * u[1]);
}

}  // namespace

AuxNode aux_from(const NodalGeometry& node) {
  AuxNode aux;
  aux.J = node.J;
  aux.G = node.G;
  aux.Ginv = node.Ginv;
  aux.Gamma = node.Gamma;
  aux.f = node.f;
  aux.b = node.b;
  return aux;
}

NodePrimitives primitives(const State& u, const AuxNode& aux) {
  check_depth(u[0]);
  NodePrimitives p;
  p.h = u[0];
  p.b = aux.b;
  p.v[0] = u[1] / u[0];
  p.v[1] = u[2] / u[0];
  for (int i = 0; i < 2; ++i) {
    p.vc[i] = aux.G(i, 0) * p.v[0] + aux.G(i, 1) * p.v[1];
    p.Jhv[i] = aux.J * u[1 + i];
    for (int d = 0; d < 2; ++d) p.JGh[i][d] = aux.J * u[0] * aux.Ginv(i, d);
  }
  return p;
}

Flux physical_flux(const State& u, const AuxNode& aux, int d) {
  const NodePrimitives p = primitives(u, aux);
  Flux f;
  f[0] = p.Jhv[d];
  for (int i = 0; i < 2; ++i) {
    f[1 + i] = p.Jhv[d] * p.v[i] + 0.5 * kGravity * p.JGh[i][d] * p.h;
  }
  return f;
}

double entropy(const State& u, const AuxNode& aux) {
  const NodePrimitives p = primitives(u, aux);
  const double vv = p.v[0] * p.vc[0] + p.v[1] * p.vc[1];
  return 0.5 * p.h * vv + 0.5 * kGravity * p.h * p.h + kGravity * p.h * aux.b;
}

EntropyVars entropy_variables(const State& u, const AuxNode& aux) {
  const NodePrimitives p = primitives(u, aux);
  const double vv = p.v[0] * p.vc[0] + p.v[1] * p.vc[1];
  return {kGravity * (p.h + aux.b) - 0.5 * vv, p.vc[0], p.vc[1]};
}

double flux_potential(const State& u, const AuxNode& aux, int d) {
  const NodePrimitives p = primitives(u, aux);
  return aux.J * 0.5 * kGravity * p.h * p.h * p.v[d];
}

double entropy_flux(const State& u, const AuxNode& aux, int d) {
  const NodePrimitives p = primitives(u, aux);
  const double vv = p.v[0] * p.vc[0] + p.v[1] * p.vc[1];
  const double F = 0.5 * p.h * vv * p.v[d] + kGravity * p.h * p.h * p.v[d] +
                   kGravity * p.h * aux.b * p.v[d];
  return aux.J * F;
}

std::array<std::array<double, 3>, 3> entropy_hessian(const State& u, const AuxNode& aux) {
  const NodePrimitives p = primitives(u, aux);
  const double vv = p.v[0] * p.vc[0] + p.v[1] * p.vc[1];
  const double s = 1.0 / p.h;
  return {{{s * (kGravity * p.h + vv), -s * p.vc[0], -s * p.vc[1]},
           {-s * p.vc[0], s * aux.G(0, 0), s * aux.G(0, 1)},
           {-s * p.vc[1], s * aux.G(1, 0), s * aux.G(1, 1)}}};
}

Flux ec_flux(const NodePrimitives& l, const NodePrimitives& r, const Mat2& ginv_l, int d) {
  Flux f;
  f[0] = 0.5 * (l.Jhv[d] + r.Jhv[d]);
  const double pressure = 0.5 * kGravity * (r.h + r.b - l.b);
  for (int i = 0; i < 2; ++i) {
    const double raised = ginv_l(i, 0) * r.vc[0] + ginv_l(i, 1) * r.vc[1];
    f[1 + i] = 0.25 * (l.Jhv[d] * l.v[i] + r.Jhv[d] * r.v[i] + r.Jhv[d] * l.v[i] +
                       l.Jhv[d] * raised) +
               pressure * l.JGh[i][d];
  }
  return f;
}

Flux ec_flux(const State& u_l, const State& u_r, const AuxNode& aux_l, const AuxNode& aux_r,
             int d) {
  return ec_flux(primitives(u_l, aux_l), primitives(u_r, aux_r), aux_l.Ginv, d);
}

double wave_speed(const State& u, const AuxNode& aux, int d) {
  check_depth(u[0]);
  return std::abs(u[1 + d] / u[0]) + std::sqrt(kGravity * u[0] * aux.Ginv(d, d));
}

Flux llf_dissipation(const State& u_l, const State& u_r, const AuxNode& aux_l, int d) {
  const double lambda = std::max(wave_speed(u_l, aux_l, d), wave_speed(u_r, aux_l, d));
  const double c = 0.5 * aux_l.J * lambda;
  return {c * (u_r[0] - u_l[0]), c * (u_r[1] - u_l[1]), c * (u_r[2] - u_l[2])};
}

Flux es_flux(const State& u_l, const State& u_r, const AuxNode& aux_l, const AuxNode& aux_r,
             int d, double outward_sign) {
  Flux f = ec_flux(u_l, u_r, aux_l, aux_r, d);
  const Flux diss = llf_dissipation(u_l, u_r, aux_l, d);
  for (int k = 0; k < 3; ++k) f[k] -= outward_sign * diss[k];
  return f;
}

Flux central_flux(const State& u_l, const State& u_r, const AuxNode& aux_l,
                  const AuxNode& aux_r, int d) {
  const Flux fl = physical_flux(u_l, aux_l, d);
  const Flux fr = physical_flux(u_r, aux_r, d);
  return {0.5 * (fl[0] + fr[0]), 0.5 * (fl[1] + fr[1]), 0.5 * (fl[2] + fr[2])};
}

State source_term(const State& u, const AuxNode& aux) {
  const NodePrimitives p = primitives(u, aux);
  const auto& G = aux.Gamma.gamma;
  // Gamma^l_jk h v^j v_l, indexed by k.
  double lowered[2] = {0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < 2; ++j) {
      for (int l = 0; l < 2; ++l) lowered[k] += G[l][j][k] * u[1 + j] * p.vc[l];
    }
  }
  State s{0.0, 0.0, 0.0};
  for (int i = 0; i < 2; ++i) {
    double geo = 0.0;
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) geo += G[i][j][k] * u[1 + j] * p.v[k];
    }
    const double lifted = aux.Ginv(i, 0) * lowered[0] + aux.Ginv(i, 1) * lowered[1];
    s[1 + i] = -0.5 * (geo - lifted) + coriolis(u, aux, i);
  }
  return s;
}

State naive_source_term(const State& u, const AuxNode& aux, const std::array<double, 2>& db) {
  const NodePrimitives p = primitives(u, aux);
  const auto& G = aux.Gamma.gamma;
  State s{0.0, 0.0, 0.0};
  for (int i = 0; i < 2; ++i) {
    double geo = 0.0;
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        const double tau = u[1 + j] * p.v[k] + 0.5 * kGravity * p.h * p.h * aux.Ginv(j, k);
        geo += G[i][j][k] * tau;
      }
    }
    const double bottom = -kGravity * p.h * (aux.Ginv(i, 0) * db[0] + aux.Ginv(i, 1) * db[1]);
    s[1 + i] = coriolis(u, aux, i) + bottom - geo;
  }
  return s;
}

}  // namespace covswe
