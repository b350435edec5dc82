#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "covswe/constants.hpp"
#include "covswe/diagnostics.hpp"
#include "covswe/discretization.hpp"
#include "covswe/errors.hpp"
#include "covswe/mesh.hpp"
#include "covswe/testcases.hpp"
#include "helpers.hpp"

using namespace covswe;
using namespace covswe::test;

namespace {

constexpr double a = kEarthRadius;

struct RestScales {
  double mass;
  double momentum;
};

RestScales rest_scales(const Discretization& disc, double H) {
  double gmax = 0.0;
  for (std::size_t k = 0; k < disc.num_nodes(); ++k) {
    const auto& g = disc.geometry(k);
    gmax = std::max({gmax, std::sqrt(g.Ginv(0, 0)), std::sqrt(g.Ginv(1, 1))});
  }
  return {std::sqrt(kGravity * H) * H * gmax, kGravity * H * gmax};
}

StateField rest_state(const Discretization& disc, double H) {
  StateField q = disc.make_field();
  for (std::size_t k = 0; k < disc.num_nodes(); ++k) q[k] = State{H - disc.geometry(k).b, 0, 0};
  return q;
}

// Sum over nodes of omega J dh/dt and of its absolute values.
std::pair<double, double> mass_rate(const Discretization& disc, const StateField& dq) {
  double s = 0.0;
  double abs_s = 0.0;
  for (std::size_t k = 0; k < dq.size(); ++k) {
    s += disc.mass_weight(k) * dq[k][0];
    abs_s += disc.mass_weight(k) * std::abs(dq[k][0]);
  }
  return {s, abs_s};
}

ScalarFunction mountain() { return case_mountain(0.0).topography; }

ScalarFunction smooth_topography() {
  return [](const Vec3& x) {
    const Vec3 u = (1.0 / a) * x;
    return 800.0 + 600.0 * std::sin(2 * u.x) * std::cos(3 * u.y) + 300.0 * u.z * u.z;
  };
}

}  // namespace

TEST_CASE("flux variant names") {
  CHECK(parse_flux_variant("ec") == FluxVariant::EC);
  CHECK(parse_flux_variant("es") == FluxVariant::ES);
  CHECK(parse_flux_variant("central") == FluxVariant::CENTRAL);
  CHECK_THROWS_AS(parse_flux_variant("lax"), ConfigError);
  CHECK(to_string(FluxVariant::ES) == "es");
  CHECK(default_source(FluxVariant::CENTRAL) == SourceVariant::NAIVE);
  CHECK(default_source(FluxVariant::EC) == SourceVariant::SPLIT);
}

TEST_CASE("mismatched flux and source variants are rejected") {
  CHECK_THROWS_AS(Discretization(build_cubed_sphere(1, a), 2, FluxVariant::EC,
                                 SourceVariant::NAIVE, {}, {}),
                  ConfigError);
  CHECK_THROWS_AS(Discretization(build_cubed_sphere(1, a), 2, FluxVariant::CENTRAL,
                                 SourceVariant::SPLIT, {}, {}),
                  ConfigError);
  CHECK_THROWS_AS(Discretization(build_cubed_sphere(1, a), 0, FluxVariant::ES, {}, {}),
                  InvalidDegreeError);
}

TEST_CASE("discontinuous topography is rejected") {
  // A pure function of position always agrees at coincident nodes, so use one
  // that alternates between calls to mimic a jump across element faces.
  int calls = 0;
  const ScalarFunction step = [&calls](const Vec3&) { return (calls++ % 2) * 100.0; };
  CHECK_THROWS_AS(Discretization(build_cubed_sphere(2, a), 3, FluxVariant::ES, step, {}),
                  PairingError);
}

TEST_CASE("rest state is preserved by EC and ES") {
  for (FluxVariant flux : {FluxVariant::EC, FluxVariant::ES}) {
    for (const auto& topo : {mountain(), smooth_topography()}) {
      const Discretization disc(build_cubed_sphere(2, a), 3, flux, topo, coriolis_parameter);
      const double H = 5960.0;
      const StateField q = rest_state(disc, H);
      const StateField dq = disc.rhs(q, 0.0);
      const RestScales sc = rest_scales(disc, H);
      CHECK(field_max_abs(dq, 0) <= 1e-12 * sc.mass);
      CHECK(field_max_abs(dq, 1) <= 1e-12 * sc.momentum);
      CHECK(field_max_abs(dq, 2) <= 1e-12 * sc.momentum);
      const StateField ds = disc.rhs_strong(q, 0.0);
      CHECK(field_max_abs(ds, 0) <= 1e-12 * sc.mass);
      CHECK(field_max_abs(ds, 1) <= 1e-12 * sc.momentum);
      CHECK(std::abs(disc.semidiscrete_entropy_rate(q, 0.0)) <=
            1e-12 * kGravity * H * H * 4 * std::numbers::pi * a * a * sc.mass / H);
    }
  }
}

TEST_CASE("CENTRAL baseline: free stream mass balance") {
  const Discretization disc(build_cubed_sphere(2, a), 3, FluxVariant::CENTRAL, {}, {});
  const double H = 5000.0;
  const StateField dq = disc.rhs(rest_state(disc, H), 0.0);
  const RestScales sc = rest_scales(disc, H);
  CHECK(field_max_abs(dq, 0) <= 1e-11 * sc.mass);
  // The standard DG momentum equation is not discretely balanced against the
  // geometric source; the residual is a truncation error, not roundoff.
  const double mom = std::max(field_max_abs(dq, 1), field_max_abs(dq, 2)) / sc.momentum;
  MESSAGE("CENTRAL constant-state momentum residual (relative): " << mom);
  CHECK(mom < 1e-3);
}

TEST_CASE("CENTRAL baseline is not well balanced over a mountain") {
  const Discretization disc(build_cubed_sphere(2, a), 3, FluxVariant::CENTRAL, mountain(),
                            coriolis_parameter);
  const double H = 5960.0;
  const StateField dq = disc.rhs(rest_state(disc, H), 0.0);
  CHECK(field_max_abs(dq, 1) > 1e-9 * rest_scales(disc, H).momentum);
}

TEST_CASE("mass conservation for all variants") {
  Rng rng(21);
  for (FluxVariant flux : {FluxVariant::EC, FluxVariant::ES, FluxVariant::CENTRAL}) {
    const Discretization disc(build_cubed_sphere(2, a), 3, flux, mountain(), coriolis_parameter);
    for (int s = 0; s < 3; ++s) {
      StateField q = smooth_field(disc, rng);
      add_noise(q, rng, 0.01);
      const auto [sum, abs_sum] = mass_rate(disc, disc.rhs(q, 0.0));
      CHECK(std::abs(sum) <= 1e-12 * abs_sum);
    }
  }
}

TEST_CASE("semi-discrete entropy rate") {
  Rng rng(22);
  for (int s = 0; s < 3; ++s) {
    const Discretization ec(build_cubed_sphere(2, a), 3, FluxVariant::EC, mountain(),
                            coriolis_parameter);
    const Discretization es(build_cubed_sphere(2, a), 3, FluxVariant::ES, mountain(),
                            coriolis_parameter);
    const StateField q = smooth_field(ec, rng);
    const double eta = total_entropy(ec, q);
    const double rate_ec = ec.semidiscrete_entropy_rate(q, 0.0);
    CHECK(std::abs(rate_ec) <= 1e-10 * std::abs(eta) / kSecondsPerDay);
    const double rate_es = es.semidiscrete_entropy_rate(q, 0.0);
    CHECK(rate_es <= 1e-12 * std::abs(eta) / kSecondsPerDay);
    CHECK(rate_es < 0.0);

    StateField noisy = q;
    add_noise(noisy, rng, 0.02);
    CHECK(std::abs(ec.semidiscrete_entropy_rate(noisy, 0.0)) <=
          1e-10 * std::abs(total_entropy(ec, noisy)) / kSecondsPerDay);
    CHECK(es.semidiscrete_entropy_rate(noisy, 0.0) < 0.0);
  }
}

TEST_CASE("weak and strong forms agree") {
  Rng rng(23);
  for (FluxVariant flux : {FluxVariant::EC, FluxVariant::ES}) {
    const Discretization disc(build_cubed_sphere(2, a), 3, flux, mountain(), coriolis_parameter);
    StateField q = smooth_field(disc, rng);
    add_noise(q, rng, 0.05);
    const StateField w = disc.rhs(q, 0.0);
    const StateField s = disc.rhs_strong(q, 0.0);
    for (int c = 0; c < 3; ++c) {
      const double scale = field_max_abs(w, c);
      double diff = 0.0;
      for (std::size_t k = 0; k < q.size(); ++k) diff = std::max(diff, std::abs(w[k][c] - s[k][c]));
      CHECK(diff <= 1e-11 * scale);
    }
  }
  const Discretization central(build_cubed_sphere(1, a), 2, FluxVariant::CENTRAL, {}, {});
  CHECK_THROWS_AS(central.rhs_strong(central.make_field(), 0.0), ConfigError);
}

TEST_CASE("inadmissible states report their location") {
  const Discretization disc(build_cubed_sphere(1, a), 2, FluxVariant::ES, {}, {});
  StateField q = rest_state(disc, 100.0);
  q(4, 1, 2)[0] = -1.0;
  try {
    disc.rhs(q, 12.5);
    FAIL("expected an admissibility error");
  } catch (const AdmissibilityError& e) {
    CHECK(e.element() == 4);
    CHECK(e.node_i() == 1);
    CHECK(e.node_j() == 2);
    CHECK(e.time() == 12.5);
  }
  StateField wrong(3, 2);
  CHECK_THROWS_AS(disc.rhs(wrong, 0.0), ConfigError);
}

TEST_CASE("threaded evaluation is bitwise identical") {
  Rng rng(24);
  Discretization disc(build_cubed_sphere(2, a), 3, FluxVariant::ES, mountain(), coriolis_parameter);
  const StateField q = smooth_field(disc, rng);
  const StateField serial = disc.rhs(q, 0.0);
  disc.set_threads(3);
  CHECK(disc.threads() == 3);
  const StateField threaded = disc.rhs(q, 0.0);
  for (std::size_t k = 0; k < q.size(); ++k) {
    for (int c = 0; c < 3; ++c) CHECK(serial[k][c] == threaded[k][c]);
  }
  disc.set_threads(0);
  CHECK(disc.threads() == 1);
}

TEST_CASE("right-hand side is independent of corner labelling") {
  for (FluxVariant flux : {FluxVariant::EC, FluxVariant::ES, FluxVariant::CENTRAL}) {
    const Discretization d0(build_cubed_sphere(2, a, 0), 3, flux, mountain(), coriolis_parameter);
    const Discretization d1(build_cubed_sphere(2, a, 1), 3, flux, mountain(), coriolis_parameter);
    Rng r0(25);
    Rng r1(25);
    const StateField q0 = smooth_field(d0, r0);
    const StateField q1 = smooth_field(d1, r1);
    const StateField f0 = d0.rhs(q0, 0.0);
    const StateField f1 = d1.rhs(q1, 0.0);
    const int n = d0.nodes_per_dim();
    double worst_h = 0.0;
    double worst_m = 0.0;
    double scale_h = field_max_abs(f0, 0);
    double scale_m = 0.0;
    for (std::size_t e = 0; e < d0.num_elements(); ++e) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const std::size_t k0 = d0.index(e, i, j);
          std::size_t k1 = 0;
          double best = 1e300;
          for (int p = 0; p < n; ++p) {
            for (int r = 0; r < n; ++r) {
              const double dist = norm(d1.geometry(e, p, r).x - d0.geometry(k0).x);
              if (dist < best) {
                best = dist;
                k1 = d1.index(e, p, r);
              }
            }
          }
          REQUIRE(best <= 1e-6);
          const Vec3 m0 = contravariant_to_cartesian({f0[k0][1], f0[k0][2]}, d0.geometry(k0));
          const Vec3 m1 = contravariant_to_cartesian({f1[k1][1], f1[k1][2]}, d1.geometry(k1));
          scale_m = std::max(scale_m, norm(m0));
          worst_h = std::max(worst_h, std::abs(f0[k0][0] - f1[k1][0]));
          worst_m = std::max(worst_m, norm(m0 - m1));
        }
      }
    }
    CHECK(worst_h <= 1e-10 * scale_h);
    CHECK(worst_m <= 1e-10 * scale_m);
  }
}

TEST_CASE("topography gradient is the collocation derivative of b") {
  const Discretization disc(build_cubed_sphere(2, a), 4, FluxVariant::CENTRAL, smooth_topography(), {});
  const auto& op = disc.operators();
  const int n = disc.nodes_per_dim();
  for (std::size_t e = 0; e < disc.num_elements(); e += 5) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double d1 = 0.0;
        for (int m = 0; m < n; ++m) d1 += op.D(i, m) * disc.geometry(e, m, j).b;
        CHECK(disc.topography_gradient(disc.index(e, i, j))[0] == doctest::Approx(d1));
      }
    }
  }
}
