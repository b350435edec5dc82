#pragma once

#include <array>
#include <utility>

#include "covswe/types.hpp"

namespace covswe {

/// Corners of a spherical quadrilateral bounded by great-circle arcs, ordered
/// x1 (xi=(-1,-1)), x2 (+1,-1), x3 (+1,+1), x4 (-1,+1).
struct ElementCorners {
  std::array<Vec3, 4> x;
};

/// Throws DegenerateElementError unless every corner lies on the sphere of
/// the given radius (to 1e-8 relative) and the corners are pairwise distinct.
void validate_corners(const ElementCorners& corners, double radius);

/// Christoffel symbols of the second kind, gamma[i][j][k] = Gamma^i_jk.
struct Christoffel {
  double gamma[2][2][2] = {};
};

/// Everything the scheme needs at one quadrature node.
struct NodalGeometry {
  Vec3 x;                       ///< position (m)
  std::array<Vec3, 2> a_cov;    ///< covariant basis a_1, a_2
  std::array<Vec3, 2> a_con;    ///< contravariant basis a^1, a^2
  Mat2 G;                       ///< covariant metric G_ij
  Mat2 Ginv;                    ///< contravariant metric G^ij
  double J = 0.0;               ///< sqrt(det G)
  Christoffel Gamma;
  double f = 0.0;               ///< Coriolis parameter (1/s)
  double b = 0.0;               ///< bottom topography (m)
};

/// Great-circle element map a * x_e / |x_e| with x_e the bilinear blend.
Vec3 map_point(const ElementCorners& corners, double xi1, double xi2, double radius);

struct BasisMetric {
  std::array<Vec3, 2> a_cov;
  Mat2 G;
  Mat2 Ginv;
  double J = 0.0;
};

/// Analytic covariant basis and metric of the element map.
BasisMetric basis_and_metric(const ElementCorners& corners, double xi1, double xi2,
                             double radius);

/// Analytic first derivatives of the covariant metric, dG[k](i,j) = d_k G_ij.
std::array<Mat2, 2> metric_derivatives(const ElementCorners& corners, double xi1, double xi2,
                                       double radius);

Christoffel christoffel(const ElementCorners& corners, double xi1, double xi2, double radius);

/// Full nodal geometry at a reference point (f and b left at zero).
NodalGeometry evaluate_geometry(const ElementCorners& corners, double xi1, double xi2,
                                double radius);

/// v^i = a^i . v. Any normal component of v is discarded by the projection.
std::array<double, 2> cartesian_to_contravariant(const Vec3& v, const NodalGeometry& node);

Vec3 contravariant_to_cartesian(const std::array<double, 2>& v, const NodalGeometry& node);

/// Zonal/meridional components at (lon, lat) to Cartesian.
Vec3 spherical_to_cartesian_velocity(double u, double v, double lon, double lat);

/// Projects a Cartesian tangent vector on the local east/north unit vectors.
std::pair<double, double> cartesian_to_spherical_velocity(const Vec3& v, double lon, double lat);

/// A_{R->L}(i,j) = a^i_L . a_{j,R}: maps contravariant components at R into
/// L's coordinates. Throws PairingError if the nodes are more than
/// 1e-9 * radius apart.
Mat2 interface_transform(const NodalGeometry& node_l, const NodalGeometry& node_r);

/// (lambda, theta) with lambda = atan2(y, x) in [-pi, pi] and
/// theta = asin(z / |x|). At the poles lambda = 0.
std::pair<double, double> lonlat(const Vec3& position);

}  // namespace covswe
