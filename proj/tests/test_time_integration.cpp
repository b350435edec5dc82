#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "covswe/constants.hpp"
#include "covswe/diagnostics.hpp"
#include "covswe/errors.hpp"
#include "covswe/mesh.hpp"
#include "covswe/testcases.hpp"
#include "covswe/time_integration.hpp"
#include "helpers.hpp"

using namespace covswe;
using namespace covswe::test;

namespace {

constexpr double a = kEarthRadius;

StateField scalar(double v) {
  StateField q(1, 0);
  q[0] = State{v, 0.0, 0.0};
  return q;
}

double integrate_scalar(double lambda, double dt, int steps) {
  const RhsFunction f = [lambda](const StateField& q, double, StateField& out) {
    out = StateField(1, 0);
    out[0] = State{lambda * q[0][0], 0.0, 0.0};
  };
  StateField q = scalar(1.0);
  StateField du;
  StateField k;
  for (int s = 0; s < steps; ++s) lsrk54_step(f, q, s * dt, dt, du, k);
  return q[0][0];
}

StateField rest(const Discretization& disc, double h0) {
  StateField q = disc.make_field();
  for (auto& u : q.data()) u = State{h0, 0.0, 0.0};
  return q;
}

}  // namespace

TEST_CASE("coefficients form a consistent low-storage scheme") {
  CHECK(Lsrk54::A[0] == 0.0);
  CHECK(Lsrk54::C[0] == 0.0);
  // c_2 = b_1 for 2N-storage schemes.
  CHECK(Lsrk54::C[1] == Lsrk54::B[0]);
}

TEST_CASE("scalar ODE order") {
  const double lambda = -1.0;
  double err[3];
  const double dts[3] = {0.1, 0.05, 0.025};
  for (int r = 0; r < 3; ++r) {
    const int steps = static_cast<int>(std::lround(1.0 / dts[r]));
    err[r] = std::abs(integrate_scalar(lambda, dts[r], steps) - std::exp(lambda));
  }
  const double p1 = std::log2(err[0] / err[1]);
  const double p2 = std::log2(err[1] / err[2]);
  CHECK(p1 >= 3.9);
  CHECK(p2 >= 3.9);

  // One step matches the degree-4 Taylor polynomial up to O(dt^5).
  for (double dt : {0.1, 0.05}) {
    const double z = lambda * dt;
    const double taylor = 1 + z + z * z / 2 + z * z * z / 6 + z * z * z * z / 24;
    CHECK(std::abs(integrate_scalar(lambda, dt, 1) - taylor) <= 0.01 * std::pow(dt, 5));
  }
}

TEST_CASE("zero right-hand side leaves the state untouched") {
  const RhsFunction zero = [](const StateField& q, double, StateField& out) {
    out = StateField(q.num_elements(), q.degree());
  };
  StateField q(2, 2);
  Rng rng(31);
  for (auto& u : q.data()) u = random_state(rng);
  const StateField out = lsrk54_step(zero, q, 3.0, 0.7);
  for (std::size_t k = 0; k < q.size(); ++k) {
    for (int c = 0; c < 3; ++c) CHECK(out[k][c] == q[k][c]);
  }
}

TEST_CASE("constant right-hand side is autonomous") {
  const RhsFunction constant = [](const StateField& q, double, StateField& out) {
    out = StateField(q.num_elements(), q.degree());
    for (auto& u : out.data()) u = State{1.5, -2.0, 0.25};
  };
  const StateField q = scalar(2.0);
  const StateField a0 = lsrk54_step(constant, q, 0.0, 0.3);
  const StateField a1 = lsrk54_step(constant, q, 1e5, 0.3);
  for (int c = 0; c < 3; ++c) CHECK(a0[0][c] == a1[0][c]);
  CHECK(a0[0][0] == doctest::Approx(2.0 + 1.5 * 0.3).epsilon(1e-14));
}

TEST_CASE("stage index is attached to admissibility errors") {
  int calls = 0;
  const RhsFunction failing = [&calls](const StateField& q, double t, StateField& out) {
    out = StateField(q.num_elements(), q.degree());
    if (++calls == 3) throw AdmissibilityError("boom", 7, 1, 2, t);
  };
  try {
    lsrk54_step(failing, scalar(1.0), 0.0, 1.0);
    FAIL("expected an error");
  } catch (const AdmissibilityError& e) {
    CHECK(e.stage() == 2);
    CHECK(e.element() == 7);
    CHECK(e.time() == doctest::Approx(Lsrk54::C[2]));
  }
}

TEST_CASE("CFL time step") {
  const Discretization disc(build_cubed_sphere(2, a), 3, FluxVariant::ES, {}, {});
  const double h0 = 1000.0;
  const StateField q = rest(disc, h0);
  const double dt1 = compute_dt(disc, q, 0.1);
  const double dt2 = compute_dt(disc, q, 0.2);
  CHECK(dt2 == 2 * dt1);
  double m = 0.0;
  for (std::size_t k = 0; k < disc.num_nodes(); ++k) {
    const auto& g = disc.geometry(k);
    m = std::max(m, std::sqrt(kGravity * h0 * g.Ginv(0, 0)) + std::sqrt(kGravity * h0 * g.Ginv(1, 1)));
  }
  CHECK(dt1 == doctest::Approx(0.1 * 0.5 / m).epsilon(1e-14));

  const Discretization disc4(build_cubed_sphere(2, a), 4, FluxVariant::ES, {}, {});
  CHECK(compute_dt(disc4, rest(disc4, h0), 0.1) < dt1);

  StateField bad = q;
  bad[3][0] = -1.0;
  CHECK_THROWS_AS(compute_dt(disc, bad, 0.1), AdmissibilityError);
}

TEST_CASE("integrator configuration checks") {
  IntegratorConfig cfg;
  cfg.t_end = 10.0;
  CHECK_NOTHROW(validate(cfg));
  cfg.courant = 0.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.courant = 2.5;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.courant = 0.1;
  cfg.t_end = -1.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.t_end = std::nan("");
  CHECK_THROWS_AS(validate(cfg), ConfigError);

  const Discretization disc(build_cubed_sphere(1, a), 2, FluxVariant::ES, {}, {});
  IntegratorConfig bad;
  bad.t_end = 10.0;
  bad.extra_times = {20.0};
  CHECK_THROWS_AS(integrate(disc, rest(disc, 10.0), bad), ConfigError);
}

TEST_CASE("zero-length integration returns the initial state once") {
  const Discretization disc(build_cubed_sphere(1, a), 2, FluxVariant::ES, {}, {});
  const StateField q0 = rest(disc, 10.0);
  IntegratorConfig cfg;
  cfg.t_end = 0.0;
  int calls = 0;
  unsigned kinds = 0;
  const auto res = integrate(disc, q0, cfg, [&](double t, double, const StateField&, unsigned k) {
    ++calls;
    kinds = k;
    CHECK(t == 0.0);
  });
  CHECK(calls == 1);
  CHECK((kinds & kOutputInitial) != 0);
  CHECK((kinds & kOutputFinal) != 0);
  CHECK(res.steps == 0);
  CHECK(res.t == 0.0);
  CHECK(!res.crash);
  for (std::size_t k = 0; k < q0.size(); ++k) CHECK(res.state[k] == q0[k]);
}

TEST_CASE("output times are hit exactly and steps sum to the end time") {
  const CaseSpec spec = case_rotation();
  const Discretization disc = make_discretization(spec, 3, 2, FluxVariant::ES);
  const StateField q0 = initialize(disc, spec);
  IntegratorConfig cfg;
  cfg.t_end = 3600.0;
  cfg.cadence = 900.0;
  cfg.extra_times = {1000.0, 1800.0};
  std::vector<std::pair<double, unsigned>> calls;
  double last_t = 0.0;
  DiagnosticTracker tracker(disc);
  const auto res = integrate(disc, q0, cfg, [&](double t, double, const StateField& q, unsigned k) {
    calls.emplace_back(t, k);
    tracker.record(t, 0.0, q);
    last_t = t;
  });
  REQUIRE(calls.size() == 6);
  CHECK(calls[0].first == 0.0);
  CHECK(calls[1].first == 900.0);
  CHECK(calls[2].first == 1000.0);
  CHECK(calls[2].second == kOutputExtra);
  CHECK(calls[3].first == 1800.0);
  CHECK(calls[3].second == (kOutputCadence | kOutputExtra));
  CHECK(calls[4].first == 2700.0);
  CHECK(calls[5].first == 3600.0);
  CHECK(calls[5].second == kOutputFinal);
  CHECK(res.t == 3600.0);
  CHECK(last_t == 3600.0);
  CHECK(!res.crash);
  // Mass over one hour.
  CHECK(std::abs(tracker.records().back().normalized_mass_change) <= 1e-13);
}

TEST_CASE("integration is deterministic") {
  const CaseSpec spec = case_mountain(20.0);
  const Discretization disc = make_discretization(spec, 2, 2, FluxVariant::ES);
  const StateField q0 = initialize(disc, spec);
  IntegratorConfig cfg;
  cfg.t_end = 7200.0;
  const auto r1 = integrate(disc, q0, cfg);
  const auto r2 = integrate(disc, q0, cfg);
  CHECK(r1.steps == r2.steps);
  for (std::size_t k = 0; k < q0.size(); ++k) {
    for (int c = 0; c < 3; ++c) CHECK(r1.state[k][c] == r2.state[k][c]);
  }
}

TEST_CASE("near-vacuum EC run records a crash") {
  const Discretization disc(build_cubed_sphere(2, a), 3, FluxVariant::EC, {}, {});
  Rng rng(32);
  StateField q0 = disc.make_field();
  for (std::size_t k = 0; k < q0.size(); ++k) {
    const auto& g = disc.geometry(k);
    const double h = 1.0 + 0.9 * uniform(rng, -1, 1);
    Vec3 v{uniform(rng, -300, 300), uniform(rng, -300, 300), uniform(rng, -300, 300)};
    v -= (dot(v, g.x) / dot(g.x, g.x)) * g.x;
    const auto vc = cartesian_to_contravariant(v, g);
    q0[k] = State{h, h * vc[0], h * vc[1]};
  }
  IntegratorConfig cfg;
  cfg.t_end = 10 * kSecondsPerDay;
  cfg.cadence = 3600.0;
  int records = 0;
  const auto res = integrate(disc, q0, cfg, [&](double, double, const StateField&, unsigned) {
    ++records;
  });
  REQUIRE(res.crash);
  CHECK(res.crash->time > 0.0);
  CHECK(res.crash->time < cfg.t_end);
  CHECK(res.crash->element < disc.num_elements());
  CHECK(res.crash->stage >= -1);
  CHECK(!res.crash->message.empty());
  CHECK(res.t < cfg.t_end);
  CHECK(records < 241);
}
