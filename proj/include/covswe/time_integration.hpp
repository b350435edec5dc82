#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "covswe/discretization.hpp"

namespace covswe {

struct IntegratorConfig {
  double courant = 0.1;
  double t_end = 0.0;     ///< s
  double cadence = 0.0;   ///< s between callbacks; <= 0 means only t = 0 and t_end
  std::vector<double> extra_times;  ///< further output times in [0, t_end] (s)
};

/// Throws ConfigError unless 0 < courant <= 2, t_end >= 0 and both finite.
void validate(const IntegratorConfig& cfg);

/// Five-stage fourth-order 2N-storage Runge-Kutta coefficients.
struct Lsrk54 {
  static const std::array<double, 5> A;
  static const std::array<double, 5> B;
  static const std::array<double, 5> C;
};

/// C * min over nodes of (2 / (N + 1)) / (lambda^1 + lambda^2).
double compute_dt(const Discretization& disc, const StateField& q, double courant);

using RhsFunction = std::function<void(const StateField& q, double t, StateField& dqdt)>;

/// One low-storage step in place. du is the step register and k receives
/// each stage's right-hand side; both are resized as needed. An
/// AdmissibilityError from the right-hand side is rethrown with the stage.
void lsrk54_step(const RhsFunction& rhs, StateField& q, double t, double dt, StateField& du,
                 StateField& k);

/// Convenience overload that allocates its own registers.
StateField lsrk54_step(const RhsFunction& rhs, const StateField& q, double t, double dt);

struct CrashRecord {
  double time = 0.0;
  std::size_t element = 0;
  int i = 0;
  int j = 0;
  int stage = -1;
  std::string message;
};

struct IntegrationResult {
  StateField state;
  double t = 0.0;
  std::size_t steps = 0;
  std::optional<CrashRecord> crash;
};

/// Bit flags telling a callback why it was invoked.
enum OutputKind : unsigned {
  kOutputInitial = 1u,
  kOutputCadence = 2u,
  kOutputExtra = 4u,
  kOutputFinal = 8u,
};

/// Invoked at t = 0, at every multiple of the cadence, at every extra time
/// and at t_end with the step size that led there (the initial CFL step at
/// t = 0). Times that coincide are merged into one call.
using StepCallback =
    std::function<void(double t, double dt, const StateField& q, unsigned kinds)>;

/// Advances q0 to cfg.t_end with CFL-adaptive steps clipped to land exactly
/// on every output time. A run that becomes inadmissible stops and reports
/// the crash instead of throwing.
IntegrationResult integrate(const Discretization& disc, const StateField& q0,
                            const IntegratorConfig& cfg, const StepCallback& callback = {});

}  // namespace covswe
