#include "covswe/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "covswe/errors.hpp"

namespace covswe {

namespace {

struct MapDerivatives {
  Vec3 u;                 // x_e / |x_e|
  double r = 0.0;         // |x_e|
  std::array<Vec3, 2> e;  // d x_e / d xi_k
  Vec3 e12;               // d^2 x_e / d xi_1 d xi_2
  std::array<Vec3, 2> du; // d u / d xi_k
};

MapDerivatives map_derivatives(const ElementCorners& c, double xi1, double xi2) {
  const Vec3& x1 = c.x[0];
  const Vec3& x2 = c.x[1];
  const Vec3& x3 = c.x[2];
  const Vec3& x4 = c.x[3];
  const Vec3 xe = 0.25 * ((1 - xi1) * (1 - xi2) * x1 + (1 + xi1) * (1 - xi2) * x2 +
                          (1 + xi1) * (1 + xi2) * x3 + (1 - xi1) * (1 + xi2) * x4);
  MapDerivatives d;
  d.r = norm(xe);
  const double scale = std::max({norm(x1), norm(x2), norm(x3), norm(x4)});
  if (!(d.r > 1e-14 * scale)) {
    throw DegenerateElementError("bilinear blend of element corners vanishes");
  }
  d.u = (1.0 / d.r) * xe;
  d.e[0] = 0.25 * (-(1 - xi2) * x1 + (1 - xi2) * x2 + (1 + xi2) * x3 - (1 + xi2) * x4);
  d.e[1] = 0.25 * (-(1 - xi1) * x1 - (1 + xi1) * x2 + (1 + xi1) * x3 + (1 - xi1) * x4);
  d.e12 = 0.25 * (x1 - x2 + x3 - x4);
  for (int k = 0; k < 2; ++k) {
    d.du[k] = (1.0 / d.r) * (d.e[k] - dot(d.u, d.e[k]) * d.u);
  }
  return d;
}

// Second derivatives of the scaled map, X[j][k] = a * d_j d_k u.
std::array<std::array<Vec3, 2>, 2> second_derivatives(const MapDerivatives& d, double radius) {
  std::array<std::array<Vec3, 2>, 2> X;
  for (int j = 0; j < 2; ++j) {
    for (int k = j; k < 2; ++k) {
      const Vec3 ekj = (j != k) ? d.e12 : Vec3{};
      const double ue_j = dot(d.u, d.e[j]);
      const double ue_k = dot(d.u, d.e[k]);
      const Vec3 ddu = (-ue_j / d.r) * d.du[k] +
                       (1.0 / d.r) * (ekj - (dot(d.du[j], d.e[k]) + dot(d.u, ekj)) * d.u -
                                      ue_k * d.du[j]);
      X[j][k] = radius * ddu;
      X[k][j] = X[j][k];
    }
  }
  return X;
}

BasisMetric basis_from(const MapDerivatives& d, double radius) {
  BasisMetric bm;
  bm.a_cov[0] = radius * d.du[0];
  bm.a_cov[1] = radius * d.du[1];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) bm.G(i, j) = dot(bm.a_cov[i], bm.a_cov[j]);
  }
  const double det = bm.G.det();
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw DegenerateMetricError("metric determinant is not positive");
  }
  bm.J = std::sqrt(det);
  bm.Ginv = bm.G.inverse();
  return bm;
}

std::array<Mat2, 2> metric_derivatives_from(const MapDerivatives& d, const BasisMetric& bm,
                                            double radius) {
  const auto X = second_derivatives(d, radius);
  std::array<Mat2, 2> dG;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      for (int l = k; l < 2; ++l) {
        dG[j](k, l) = dot(X[j][k], bm.a_cov[l]) + dot(bm.a_cov[k], X[j][l]);
        dG[j](l, k) = dG[j](k, l);
      }
    }
  }
  return dG;
}

Christoffel christoffel_from(const Mat2& Ginv, const std::array<Mat2, 2>& dG) {
  Christoffel c;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = j; k < 2; ++k) {
        double s = 0.0;
        for (int l = 0; l < 2; ++l) {
          s += Ginv(i, l) * (dG[j](k, l) + dG[k](j, l) - dG[l](j, k));
        }
        c.gamma[i][j][k] = 0.5 * s;
        c.gamma[i][k][j] = 0.5 * s;
      }
    }
  }
  return c;
}

}  // namespace

void validate_corners(const ElementCorners& corners, double radius) {
  if (!(radius > 0.0)) throw DegenerateElementError("sphere radius must be positive");
  for (const Vec3& x : corners.x) {
    if (!(std::abs(norm(x) - radius) <= 1e-8 * radius)) {
      throw DegenerateElementError("element corner does not lie on the sphere");
    }
  }
  for (int p = 0; p < 4; ++p) {
    for (int q = p + 1; q < 4; ++q) {
      if (norm(corners.x[p] - corners.x[q]) <= 1e-12 * radius) {
        throw DegenerateElementError("element corners are not distinct");
      }
    }
  }
}

Vec3 map_point(const ElementCorners& corners, double xi1, double xi2, double radius) {
  const MapDerivatives d = map_derivatives(corners, xi1, xi2);
  return radius * d.u;
}

BasisMetric basis_and_metric(const ElementCorners& corners, double xi1, double xi2,
                             double radius) {
  return basis_from(map_derivatives(corners, xi1, xi2), radius);
}

std::array<Mat2, 2> metric_derivatives(const ElementCorners& corners, double xi1, double xi2,
                                       double radius) {
  const MapDerivatives d = map_derivatives(corners, xi1, xi2);
  return metric_derivatives_from(d, basis_from(d, radius), radius);
}

Christoffel christoffel(const ElementCorners& corners, double xi1, double xi2, double radius) {
  const MapDerivatives d = map_derivatives(corners, xi1, xi2);
  const BasisMetric bm = basis_from(d, radius);
  return christoffel_from(bm.Ginv, metric_derivatives_from(d, bm, radius));
}

NodalGeometry evaluate_geometry(const ElementCorners& corners, double xi1, double xi2,
                                double radius) {
  const MapDerivatives d = map_derivatives(corners, xi1, xi2);
  const BasisMetric bm = basis_from(d, radius);
  NodalGeometry n;
  n.x = radius * d.u;
  n.a_cov = bm.a_cov;
  n.G = bm.G;
  n.Ginv = bm.Ginv;
  n.J = bm.J;
  for (int i = 0; i < 2; ++i) {
    n.a_con[i] = bm.Ginv(i, 0) * bm.a_cov[0] + bm.Ginv(i, 1) * bm.a_cov[1];
  }
  n.Gamma = christoffel_from(bm.Ginv, metric_derivatives_from(d, bm, radius));
  return n;
}

std::array<double, 2> cartesian_to_contravariant(const Vec3& v, const NodalGeometry& node) {
  return {dot(node.a_con[0], v), dot(node.a_con[1], v)};
}

Vec3 contravariant_to_cartesian(const std::array<double, 2>& v, const NodalGeometry& node) {
  return v[0] * node.a_cov[0] + v[1] * node.a_cov[1];
}

Vec3 spherical_to_cartesian_velocity(double u, double v, double lon, double lat) {
  const double sl = std::sin(lon);
  const double cl = std::cos(lon);
  const double st = std::sin(lat);
  const double ct = std::cos(lat);
  return u * Vec3{-sl, cl, 0.0} + v * Vec3{-cl * st, -sl * st, ct};
}

std::pair<double, double> cartesian_to_spherical_velocity(const Vec3& v, double lon, double lat) {
  const double sl = std::sin(lon);
  const double cl = std::cos(lon);
  const double st = std::sin(lat);
  const double ct = std::cos(lat);
  return {dot(v, Vec3{-sl, cl, 0.0}), dot(v, Vec3{-cl * st, -sl * st, ct})};
}

Mat2 interface_transform(const NodalGeometry& node_l, const NodalGeometry& node_r) {
  const double radius = norm(node_l.x);
  if (!(norm(node_l.x - node_r.x) <= 1e-9 * radius)) {
    throw PairingError("interface nodes do not coincide");
  }
  Mat2 A;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) A(i, j) = dot(node_l.a_con[i], node_r.a_cov[j]);
  }
  return A;
}

std::pair<double, double> lonlat(const Vec3& position) {
  const double r = norm(position);
  const double lon = std::atan2(position.y, position.x);
  const double s = r > 0.0 ? std::clamp(position.z / r, -1.0, 1.0) : 0.0;
  return {lon, std::asin(s)};
}

}  // namespace covswe
