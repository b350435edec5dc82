#include "covswe/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "covswe/errors.hpp"

namespace covswe {

namespace {

// Neumaier compensated sum.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <class F>
double integrate_nodes(const Discretization& disc, F&& f) {
  Accumulator acc;
  for (std::size_t k = 0; k < disc.num_nodes(); ++k) acc.add(disc.mass_weight(k) * f(k));
  return acc.value();
}

}  // namespace

double discrete_integral(const Discretization& disc, const std::vector<double>& values) {
  if (values.size() != disc.num_nodes()) {
    throw Error("nodal value count does not match the discretization");
  }
  return integrate_nodes(disc, [&](std::size_t k) { return values[k]; });
}

double l2_height_error(const Discretization& disc, const StateField& q,
                       const HeightFunction& reference, double t) {
  std::vector<double> ref(disc.num_nodes());
  for (std::size_t k = 0; k < ref.size(); ++k) ref[k] = reference(disc.geometry(k).x, t);
  const double num = integrate_nodes(disc, [&](std::size_t k) {
    const double diff = q[k][0] + disc.geometry(k).b - ref[k];
    return diff * diff;
  });
  const double den = integrate_nodes(disc, [&](std::size_t k) { return ref[k] * ref[k]; });
  if (!(den > 0.0)) throw Error("reference height has zero norm");
  return std::sqrt(num) / std::sqrt(den);
}

std::vector<double> relative_vorticity(const Discretization& disc, const StateField& q) {
  const int n = disc.nodes_per_dim();
  const auto& D = disc.operators().D;
  std::vector<double> zeta(disc.num_nodes(), 0.0);
  std::vector<std::array<double, 2>> vcov(static_cast<std::size_t>(n) * n);
  for (std::size_t e = 0; e < disc.num_elements(); ++e) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t k = disc.index(e, i, j);
        const NodePrimitives p = primitives(q[k], disc.aux(k));
        vcov[i * n + j] = {p.vc[0], p.vc[1]};
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double d2v1 = 0.0;
        double d1v2 = 0.0;
        for (int m = 0; m < n; ++m) {
          d2v1 += D(j, m) * vcov[i * n + m][0];
          d1v2 += D(i, m) * vcov[m * n + j][1];
        }
        const std::size_t k = disc.index(e, i, j);
        zeta[k] = (d2v1 - d1v2) / disc.geometry(k).J;
      }
    }
  }
  return zeta;
}

double potential_enstrophy(const Discretization& disc, const StateField& q) {
  const std::vector<double> zeta = relative_vorticity(disc, q);
  return integrate_nodes(disc, [&](std::size_t k) {
    const double pv = zeta[k] + disc.geometry(k).f;
    return pv * pv / q[k][0];
  });
}

double total_mass(const Discretization& disc, const StateField& q) {
  return integrate_nodes(disc, [&](std::size_t k) { return q[k][0]; });
}

double total_entropy(const Discretization& disc, const StateField& q) {
  return integrate_nodes(disc, [&](std::size_t k) { return entropy(q[k], disc.aux(k)); });
}

DiagnosticRecord DiagnosticTracker::record(double t, double dt, const StateField& q) {
  DiagnosticRecord r;
  r.t = t;
  r.dt = dt;
  r.total_mass = total_mass(disc_, q);
  r.total_entropy = total_entropy(disc_, q);
  r.potential_enstrophy = potential_enstrophy(disc_, q);
  if (!have_initial_) {
    mass0_ = r.total_mass;
    entropy0_ = r.total_entropy;
    have_initial_ = true;
  }
  r.normalized_mass_change = (r.total_mass - mass0_) / mass0_;
  r.normalized_entropy_change = (r.total_entropy - entropy0_) / std::abs(entropy0_);
  if (reference_) r.normalized_l2_height_error = l2_height_error(disc_, q, reference_, t);
  r.min_h = std::numeric_limits<double>::infinity();
  r.max_wave_speed = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const NodePrimitives p = primitives(q[k], disc_.aux(k));
    const double speed = std::sqrt(std::max(0.0, p.v[0] * p.vc[0] + p.v[1] * p.vc[1]));
    r.min_h = std::min(r.min_h, p.h);
    r.max_wave_speed = std::max(r.max_wave_speed, speed + std::sqrt(kGravity * p.h));
  }
  records_.push_back(r);
  return r;
}

}  // namespace covswe
