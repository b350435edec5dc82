#include "covswe/testcases.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include "covswe/constants.hpp"
#include "covswe/errors.hpp"

namespace covswe {

namespace {

constexpr double kPi = std::numbers::pi;

// Barotropic jet parameters.
constexpr double kJetSpeed = 80.0;
constexpr double kJetTheta0 = kPi / 7.0;
constexpr double kJetTheta1 = kPi / 2.0 - kJetTheta0;
constexpr double kJetHref = 10158.0;

// phi(c, t) with c = (-sin(alpha), cos(alpha), 0).
Vec3 rotation_frame(double t) {
  const double alpha = kPi / 4.0;
  const Vec3 c{-std::sin(alpha), std::cos(alpha), 0.0};
  const Vec3 bx{std::cos(kRotationRate * t), std::sin(kRotationRate * t), 0.0};
  const Vec3 by{-std::sin(kRotationRate * t), std::cos(kRotationRate * t), 0.0};
  return {dot(c, bx), dot(c, by), c.z};
}

double rotation_frame_dot(const Vec3& x, double t) { return dot(rotation_frame(t), x); }

struct BalanceCache {
  std::mutex mutex;
  std::unordered_map<long long, double> values;
};

BalanceCache& balance_cache() {
  static BalanceCache cache;
  return cache;
}

double compute_balanced_height(double lat) {
  const double upper = std::min(lat, kJetTheta1);
  if (upper <= kJetTheta0) return kJetHref;
  auto integrand = [](double th) {
    const double u = barotropic_jet(th);
    return u * (2.0 * kRotationRate * std::sin(th) + u * std::tan(th) / kEarthRadius);
  };
  const double tol = std::sqrt(std::numeric_limits<double>::epsilon());
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, kJetTheta0, upper, 15, tol, &error, &l1);
  if (!std::isfinite(value) || error > tol * std::max(l1, 1e-300) * 10.0) {
    throw InitializationError("balanced-height quadrature did not converge");
  }
  return kJetHref - (kEarthRadius / kGravity) * value;
}

Vec3 spherical_velocity_at(const Vec3& x, double u, double v) {
  const auto [lon, lat] = lonlat(x);
  return spherical_to_cartesian_velocity(u, v, lon, lat);
}

}  // namespace

std::string to_string(CaseId id) {
  switch (id) {
    case CaseId::Rotation: return "rotation";
    case CaseId::Mountain: return "mountain";
    case CaseId::Barotropic: return "barotropic";
    default: return "rossby_haurwitz";
  }
}

CaseId parse_case_id(const std::string& name) {
  if (name == "rotation") return CaseId::Rotation;
  if (name == "mountain") return CaseId::Mountain;
  if (name == "barotropic") return CaseId::Barotropic;
  if (name == "rossby_haurwitz") return CaseId::RossbyHaurwitz;
  throw ConfigError("unknown test case '" + name +
                    "' (expected rotation, mountain, barotropic or rossby_haurwitz)");
}

double coriolis_parameter(const Vec3& x) { return 2.0 * kRotationRate * x.z / kEarthRadius; }

CaseSpec case_rotation() {
  const double V = 2.0 * kPi * kEarthRadius / (12.0 * kSecondsPerDay);
  const double K = 133681.0;
  CaseSpec s;
  s.id = CaseId::Rotation;
  s.parameters = {{"alpha", kPi / 4.0}, {"V", V}, {"K", K}};
  s.coriolis = coriolis_parameter;
  s.topography = [](const Vec3& x) {
    const double wz = kRotationRate * x.z;
    return wz * wz / (2.0 * kGravity);
  };
  s.height = [V, K](const Vec3& x, double t) {
    const double wz = kRotationRate * x.z;
    const double q = wz + V * rotation_frame_dot(x, t) / kEarthRadius;
    return (-0.5 * q * q + 0.5 * wz * wz + K) / kGravity;
  };
  s.velocity = [V](const Vec3& x, double t) {
    return (V / kEarthRadius) * cross(rotation_frame(t), x);
  };
  s.exact_height = s.height;
  s.reference_height = s.height;
  return s;
}

CaseSpec case_mountain(double velocity) {
  if (!(velocity >= 0.0) || !std::isfinite(velocity)) {
    throw ConfigError("mountain velocity must be finite and nonnegative");
  }
  const double V = velocity;
  const double href = 5960.0;
  const double bref = 2000.0;
  const double R = kPi / 9.0;
  CaseSpec s;
  s.id = CaseId::Mountain;
  s.parameters = {{"V", V}, {"h_ref", href}, {"b_ref", bref}, {"R", R},
                  {"lambda0", -kPi / 2.0}, {"theta0", kPi / 6.0}};
  s.coriolis = coriolis_parameter;
  s.topography = [bref, R](const Vec3& x) {
    const auto [lon, lat] = lonlat(x);
    const double dl = lon + kPi / 2.0;
    const double dt = lat - kPi / 6.0;
    return bref * (1.0 - std::sqrt(std::min(R * R, dl * dl + dt * dt)) / R);
  };
  s.height = [V, href](const Vec3& x, double) {
    const double sl = std::sin(lonlat(x).second);
    return href - (kEarthRadius * kRotationRate * V + 0.5 * V * V) * sl * sl / kGravity;
  };
  s.velocity = [V](const Vec3& x, double) {
    return spherical_velocity_at(x, V * std::cos(lonlat(x).second), 0.0);
  };
  if (V == 0.0) {
    const HeightFunction initial = s.height;
    s.reference_height = [initial](const Vec3& x, double) { return initial(x, 0.0); };
  }
  return s;
}

double barotropic_jet(double lat) {
  if (lat <= kJetTheta0 || lat >= kJetTheta1) return 0.0;
  const double en = std::exp(-4.0 / ((kJetTheta1 - kJetTheta0) * (kJetTheta1 - kJetTheta0)));
  return kJetSpeed * std::exp(1.0 / ((lat - kJetTheta0) * (lat - kJetTheta1))) / en;
}

double barotropic_balanced_height(double lat) {
  const long long key = std::llround(lat / 1e-13);
  BalanceCache& cache = balance_cache();
  {
    std::lock_guard<std::mutex> lock(cache.mutex);
    const auto it = cache.values.find(key);
    if (it != cache.values.end()) return it->second;
  }
  const double value = compute_balanced_height(lat);
  std::lock_guard<std::mutex> lock(cache.mutex);
  cache.values.emplace(key, value);
  return value;
}

CaseSpec case_barotropic(double delta_h) {
  if (!(delta_h >= 0.0) || !std::isfinite(delta_h)) {
    throw ConfigError("barotropic perturbation amplitude must be finite and nonnegative");
  }
  const double alpha = 1.0 / 3.0;
  const double beta = 1.0 / 15.0;
  const double theta2 = kPi / 4.0;
  CaseSpec s;
  s.id = CaseId::Barotropic;
  s.parameters = {{"V", kJetSpeed},   {"theta0", kJetTheta0}, {"theta1", kJetTheta1},
                  {"h_ref", kJetHref}, {"delta_h", delta_h},   {"alpha", alpha},
                  {"beta", beta},      {"theta2", theta2}};
  s.coriolis = coriolis_parameter;
  s.topography = [](const Vec3&) { return 0.0; };
  s.height = [=](const Vec3& x, double) {
    const auto [lon, lat] = lonlat(x);
    double h = barotropic_balanced_height(lat);
    if (delta_h != 0.0 && lon > -kPi && lon < kPi) {
      const double a = lon / alpha;
      const double c = (theta2 - lat) / beta;
      h += delta_h * std::cos(lat) * std::exp(-a * a) * std::exp(-c * c);
    }
    return h;
  };
  s.velocity = [](const Vec3& x, double) {
    return spherical_velocity_at(x, barotropic_jet(lonlat(x).second), 0.0);
  };
  if (delta_h == 0.0) {
    const HeightFunction initial = s.height;
    s.reference_height = [initial](const Vec3& x, double) { return initial(x, 0.0); };
  }
  return s;
}

CaseSpec case_rossby_haurwitz() {
  const double w = 7.848e-6;
  const double K = 7.848e-6;
  const double R = 4.0;
  const double href = 8000.0;
  CaseSpec s;
  s.id = CaseId::RossbyHaurwitz;
  s.parameters = {{"omega", w}, {"K", K}, {"R", R}, {"h_ref", href}};
  s.coriolis = coriolis_parameter;
  s.topography = [](const Vec3&) { return 0.0; };
  s.height = [=](const Vec3& x, double) {
    const auto [lon, lat] = lonlat(x);
    const double c = std::cos(lat);
    const double c2 = c * c;
    const double cR = std::pow(c, R);
    const double c2R = cR * cR;
    const double A = 0.5 * w * (2.0 * kRotationRate + w) * c2 +
                     0.25 * K * K * c2R *
                         ((R + 1.0) * c2 + (2.0 * R * R - R - 2.0) - 2.0 * R * R / c2);
    const double B = 2.0 * (kRotationRate + w) * K / ((R + 1.0) * (R + 2.0)) * cR *
                     ((R * R + 2.0 * R + 2.0) - (R + 1.0) * (R + 1.0) * c2);
    const double C = 0.25 * K * K * c2R * ((R + 1.0) * c2 - (R + 2.0));
    return href + (kEarthRadius * kEarthRadius / kGravity) *
                      (A + B * std::cos(R * lon) + C * std::cos(2.0 * R * lon));
  };
  s.velocity = [=](const Vec3& x, double) {
    const auto [lon, lat] = lonlat(x);
    const double c = std::cos(lat);
    const double sn = std::sin(lat);
    const double cR1 = std::pow(c, R - 1.0);
    const double u = kEarthRadius * w * c +
                     kEarthRadius * K * cR1 * (R * sn * sn - c * c) * std::cos(R * lon);
    const double v = -kEarthRadius * K * R * cR1 * sn * std::sin(R * lon);
    return spherical_to_cartesian_velocity(u, v, lon, lat);
  };
  return s;
}

CaseSpec make_case(CaseId id, double velocity, double delta_h) {
  switch (id) {
    case CaseId::Rotation: return case_rotation();
    case CaseId::Mountain: return case_mountain(velocity);
    case CaseId::Barotropic: return case_barotropic(delta_h);
    default: return case_rossby_haurwitz();
  }
}

StateField initialize(const Discretization& disc, const CaseSpec& spec, double t) {
  StateField q = disc.make_field();
  for (std::size_t k = 0; k < disc.num_nodes(); ++k) {
    const NodalGeometry& g = disc.geometry(k);
    const double h = spec.height(g.x, t) - g.b;
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw InitializationError("initial layer depth is not positive (h = " +
                                std::to_string(h) + ")");
    }
    const auto v = cartesian_to_contravariant(spec.velocity(g.x, t), g);
    q[k] = State{h, h * v[0], h * v[1]};
  }
  return q;
}

Discretization make_discretization(const CaseSpec& spec, int degree, int per_face,
                                   FluxVariant flux, int corner_rotation) {
  return Discretization(build_cubed_sphere(per_face, kEarthRadius, corner_rotation), degree,
                        flux, spec.topography, spec.coriolis);
}

}  // namespace covswe
