#pragma once

#include <functional>
#include <map>
#include <string>

#include "covswe/diagnostics.hpp"
#include "covswe/discretization.hpp"

namespace covswe {

enum class CaseId { Rotation, Mountain, Barotropic, RossbyHaurwitz };

std::string to_string(CaseId id);
/// Accepts rotation | mountain | barotropic | rossby_haurwitz; throws ConfigError.
CaseId parse_case_id(const std::string& name);

using VelocityFunction = std::function<Vec3(const Vec3& x, double t)>;

struct CaseSpec {
  CaseId id = CaseId::Rotation;
  std::map<std::string, double> parameters;
  ScalarFunction topography;
  ScalarFunction coriolis;
  HeightFunction height;        ///< surface height H = h + b
  VelocityFunction velocity;    ///< Cartesian velocity (m/s)
  HeightFunction exact_height;  ///< empty unless an exact solution is known
  /// Reference for the normalized L2 height error: the exact solution, or the
  /// initial state for cases that should stay steady; empty otherwise.
  HeightFunction reference_height;
};

/// f = 2 Omega z / a (= 2 Omega sin(theta) on the sphere of radius a).
double coriolis_parameter(const Vec3& x);

CaseSpec case_rotation();
CaseSpec case_mountain(double velocity = 20.0);
/// Throws InitializationError if the balancing integral fails to converge
/// (reported lazily, on first evaluation of the height).
CaseSpec case_barotropic(double delta_h = 120.0);
CaseSpec case_rossby_haurwitz();

/// Case by id with the CLI-level parameters (V for mountain, delta_h for
/// barotropic); other cases ignore them.
CaseSpec make_case(CaseId id, double velocity = 20.0, double delta_h = 120.0);

/// Zonal jet profile of the barotropic case (m/s).
double barotropic_jet(double lat);
/// Balanced height of the unperturbed barotropic case at latitude lat.
double barotropic_balanced_height(double lat);

/// Nodal state from H(x, t), b and the Cartesian velocity. Throws
/// InitializationError if any h <= 0.
StateField initialize(const Discretization& disc, const CaseSpec& spec, double t = 0.0);

/// Discretization for a case with its topography and Coriolis functions.
Discretization make_discretization(const CaseSpec& spec, int degree, int per_face,
                                   FluxVariant flux, int corner_rotation = 0);

}  // namespace covswe
