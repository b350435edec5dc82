#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "covswe/discretization.hpp"

namespace covswe {

/// H(x, t) = h + b reference surface height.
using HeightFunction = std::function<double(const Vec3& x, double t)>;

/// Sum over elements and nodes of w_i w_j J_ij v_ij, with compensated
/// summation. values are indexed like StateField storage.
double discrete_integral(const Discretization& disc, const std::vector<double>& values);

/// I[(H - H_ref)^2]^(1/2) / I[H_ref^2]^(1/2). Throws Error if the reference
/// norm vanishes.
double l2_height_error(const Discretization& disc, const StateField& q,
                       const HeightFunction& reference, double t);

/// Element-local collocation estimate of (d_2 v_1 - d_1 v_2) / J.
std::vector<double> relative_vorticity(const Discretization& disc, const StateField& q);

/// I[(zeta + f)^2 / h].
double potential_enstrophy(const Discretization& disc, const StateField& q);

double total_mass(const Discretization& disc, const StateField& q);
double total_entropy(const Discretization& disc, const StateField& q);

struct DiagnosticRecord {
  double t = 0.0;
  double dt = 0.0;
  double total_mass = 0.0;
  double total_entropy = 0.0;
  double potential_enstrophy = 0.0;
  double normalized_mass_change = 0.0;
  double normalized_entropy_change = 0.0;
  std::optional<double> normalized_l2_height_error;
  double min_h = 0.0;
  double max_wave_speed = 0.0;  ///< max of |v| + sqrt(g h) in m/s
};

/// Computes records relative to the first state it sees.
class DiagnosticTracker {
 public:
  DiagnosticTracker(const Discretization& disc, HeightFunction reference = {})
      : disc_(disc), reference_(std::move(reference)) {}

  DiagnosticRecord record(double t, double dt, const StateField& q);
  const std::vector<DiagnosticRecord>& records() const { return records_; }

 private:
  const Discretization& disc_;
  HeightFunction reference_;
  bool have_initial_ = false;
  double mass0_ = 0.0;
  double entropy0_ = 0.0;
  std::vector<DiagnosticRecord> records_;
};

}  // namespace covswe
