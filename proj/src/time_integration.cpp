#include "covswe/time_integration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "covswe/errors.hpp"

namespace covswe {

const std::array<double, 5> Lsrk54::A{0.0,
                                      -567301805773.0 / 1357537059087.0,
                                      -2404267990393.0 / 2016746695238.0,
                                      -3550918686646.0 / 2091501179385.0,
                                      -1275806237668.0 / 842570457699.0};
const std::array<double, 5> Lsrk54::B{1432997174477.0 / 9575080441755.0,
                                      5161836677717.0 / 13612068292357.0,
                                      1720146321549.0 / 2090206949498.0,
                                      3134564353537.0 / 4481467310338.0,
                                      2277821191437.0 / 14882151754819.0};
const std::array<double, 5> Lsrk54::C{0.0,
                                      1432997174477.0 / 9575080441755.0,
                                      2526269341429.0 / 6820363962896.0,
                                      2006345519317.0 / 3224310063776.0,
                                      2802321613138.0 / 2924317926251.0};

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.courant > 0.0 && cfg.courant <= 2.0)) {
    throw ConfigError("courant number must be in (0, 2]");
  }
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) {
    throw ConfigError("end time must be finite and nonnegative");
  }
  if (!std::isfinite(cfg.cadence)) throw ConfigError("output cadence must be finite");
}

double compute_dt(const Discretization& disc, const StateField& q, double courant) {
  const int n = disc.nodes_per_dim();
  double max_rate = 0.0;
  for (std::size_t e = 0; e < disc.num_elements(); ++e) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t k = disc.index(e, i, j);
        const State& u = q[k];
        const AuxNode& aux = disc.aux(k);
        double rate = std::numeric_limits<double>::quiet_NaN();
        if (u[0] > 0.0) rate = wave_speed(u, aux, 0) + wave_speed(u, aux, 1);
        if (!std::isfinite(rate)) {
          throw AdmissibilityError("nonfinite wave speed at element " + std::to_string(e), e,
                                   i, j, 0.0);
        }
        max_rate = std::max(max_rate, rate);
      }
    }
  }
  return courant * (2.0 / n) / max_rate;
}

void lsrk54_step(const RhsFunction& rhs, StateField& q, double t, double dt, StateField& du,
                 StateField& k) {
  if (du.size() != q.size()) du = StateField(q.num_elements(), q.degree());
  if (k.size() != q.size()) k = StateField(q.num_elements(), q.degree());
  for (auto& d : du.data()) d = State{0.0, 0.0, 0.0};
  for (int s = 0; s < 5; ++s) {
    try {
      rhs(q, t + Lsrk54::C[s] * dt, k);
    } catch (const AdmissibilityError& err) {
      throw err.with_stage(s);
    }
    const double a = Lsrk54::A[s];
    const double b = Lsrk54::B[s];
    for (std::size_t p = 0; p < q.size(); ++p) {
      for (int r = 0; r < 3; ++r) {
        du[p][r] = a * du[p][r] + dt * k[p][r];
        q[p][r] += b * du[p][r];
      }
    }
  }
}

StateField lsrk54_step(const RhsFunction& rhs, const StateField& q, double t, double dt) {
  StateField out = q;
  StateField du;
  StateField k;
  lsrk54_step(rhs, out, t, dt, du, k);
  return out;
}

IntegrationResult integrate(const Discretization& disc, const StateField& q0,
                            const IntegratorConfig& cfg, const StepCallback& callback) {
  validate(cfg);
  IntegrationResult res;
  res.state = q0;
  const RhsFunction rhs = [&disc](const StateField& q, double t, StateField& out) {
    disc.rhs(q, t, out);
  };
  auto record_crash = [&](const AdmissibilityError& err, double t) {
    CrashRecord c;
    c.time = std::isfinite(err.time()) && err.time() > 0.0 ? err.time() : t;
    c.element = err.element();
    c.i = err.node_i();
    c.j = err.node_j();
    c.stage = err.stage();
    c.message = err.what();
    res.crash = c;
  };

  // Merged output schedule.
  std::vector<std::pair<double, unsigned>> outputs;
  if (cfg.cadence > 0.0) {
    for (std::size_t m = 1;; ++m) {
      const double tm = static_cast<double>(m) * cfg.cadence;
      if (tm >= cfg.t_end) break;
      outputs.emplace_back(tm, kOutputCadence);
    }
  }
  unsigned initial_kinds = kOutputInitial;
  for (double te : cfg.extra_times) {
    if (!(te >= 0.0 && te <= cfg.t_end)) throw ConfigError("output time outside the run");
    if (te == 0.0) {
      initial_kinds |= kOutputExtra;
    } else {
      outputs.emplace_back(te, kOutputExtra);
    }
  }
  if (cfg.t_end > 0.0) outputs.emplace_back(cfg.t_end, kOutputFinal);
  std::sort(outputs.begin(), outputs.end());
  std::vector<std::pair<double, unsigned>> schedule;
  for (const auto& o : outputs) {
    if (!schedule.empty() && schedule.back().first == o.first) {
      schedule.back().second |= o.second;
    } else {
      schedule.push_back(o);
    }
  }
  if (cfg.t_end == 0.0) initial_kinds |= kOutputFinal;

  double t = 0.0;
  double dt = 0.0;
  try {
    dt = compute_dt(disc, res.state, cfg.courant);
  } catch (const AdmissibilityError& err) {
    record_crash(err, 0.0);
    return res;
  }
  if (callback) callback(0.0, dt, res.state, initial_kinds);

  StateField du;
  StateField k;
  for (const auto& [target, kinds] : schedule) {
    bool crashed = false;
    while (t < target) {
      bool landing = false;
      try {
        dt = compute_dt(disc, res.state, cfg.courant);
        if (t + dt >= target) {
          dt = target - t;
          landing = true;
        }
        lsrk54_step(rhs, res.state, t, dt, du, k);
      } catch (const AdmissibilityError& err) {
        record_crash(err, t);
        crashed = true;
        break;
      }
      t = landing ? target : t + dt;
      ++res.steps;
      res.t = t;
    }
    if (crashed) break;
    if (callback) callback(t, dt, res.state, kinds);
  }
  return res;
}

}  // namespace covswe
