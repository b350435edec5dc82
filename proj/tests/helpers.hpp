#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "covswe/constants.hpp"
#include "covswe/physics.hpp"

namespace covswe::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random SPD metric G = A^T A + 0.1 I with Christoffel symbols symmetric in
// the lower indices, plus random f and b.
inline AuxNode random_aux(Rng& rng, double b_max = 50.0) {
  double a[2][2];
  for (auto& row : a) {
    for (double& v : row) v = uniform(rng, -1.0, 1.0);
  }
  AuxNode aux;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      aux.G(i, j) = a[0][i] * a[0][j] + a[1][i] * a[1][j] + (i == j ? 0.1 : 0.0);
    }
  }
  aux.Ginv = aux.G.inverse();
  aux.J = std::sqrt(aux.G.det());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = j; k < 2; ++k) {
        aux.Gamma.gamma[i][j][k] = aux.Gamma.gamma[i][k][j] = uniform(rng, -1.0, 1.0);
      }
    }
  }
  aux.f = uniform(rng, -1.5e-4, 1.5e-4);
  aux.b = uniform(rng, 0.0, b_max);
  return aux;
}

inline State random_state(Rng& rng, double h_lo = 1.0, double h_hi = 100.0, double v_max = 5.0) {
  const double h = uniform(rng, h_lo, h_hi);
  return State{h, h * uniform(rng, -v_max, v_max), h * uniform(rng, -v_max, v_max)};
}

inline double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double max_abs(std::initializer_list<double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace covswe::test

#include "covswe/discretization.hpp"
#include "covswe/geometry.hpp"

namespace covswe::test {

// Smooth admissible field built from Cartesian functions: depth
// h0 (1 + 0.1 sin(k.x/a)) and a tangent velocity of magnitude ~u0, with
// random wave vectors drawn from rng.
inline StateField smooth_field(const Discretization& disc, Rng& rng, double h0 = 5000.0,
                               double u0 = 20.0) {
  const double a = disc.mesh().radius;
  const Vec3 k1{uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3)};
  const Vec3 k2{uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3)};
  const Vec3 c1{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
  const Vec3 c2{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
  StateField q = disc.make_field();
  for (std::size_t k = 0; k < disc.num_nodes(); ++k) {
    const NodalGeometry& g = disc.geometry(k);
    const Vec3 xh = (1.0 / a) * g.x;
    const double h = h0 * (1.0 + 0.1 * std::sin(dot(k1, xh)));
    Vec3 v = u0 * (std::cos(dot(k2, xh)) * cross(c1, xh) + std::sin(dot(k1, xh)) * c2);
    v -= dot(v, xh) * xh;
    const auto vc = cartesian_to_contravariant(v, g);
    q[k] = State{h, h * vc[0], h * vc[1]};
  }
  return q;
}

// Nodal (discontinuous) random perturbation of a field.
inline void add_noise(StateField& q, Rng& rng, double rel) {
  for (auto& u : q.data()) {
    const double h = u[0];
    u[0] = h * (1.0 + rel * uniform(rng, -1, 1));
    u[1] *= 1.0 + rel * uniform(rng, -1, 1);
    u[2] *= 1.0 + rel * uniform(rng, -1, 1);
  }
}

inline double field_max_abs(const StateField& q, int component) {
  double m = 0.0;
  for (const auto& u : q.data()) m = std::max(m, std::abs(u[component]));
  return m;
}

}  // namespace covswe::test
