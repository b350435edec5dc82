#include "covswe/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>

#include "covswe/errors.hpp"
#include "covswe/sbp.hpp"

namespace covswe {

namespace {

struct FaceFrame {
  Vec3 c;
  Vec3 t1;
  Vec3 t2;
};

// t1 x t2 = c for every cube face.
constexpr std::array<FaceFrame, 6> kCubeFaces{{
    {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
    {{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}},
    {{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}},
    {{0, -1, 0}, {1, 0, 0}, {0, 0, 1}},
    {{0, 0, 1}, {0, 1, 0}, {-1, 0, 0}},
    {{0, 0, -1}, {0, 1, 0}, {1, 0, 0}},
}};

// Face endpoints as corner indices, in parameter order.
constexpr std::array<std::array<int, 2>, 4> kFaceCorners{{{0, 3}, {1, 2}, {0, 1}, {3, 2}}};

Vec3 gnomonic_point(const FaceFrame& f, double alpha, double beta, double radius) {
  const Vec3 p = f.c + std::tan(alpha) * f.t1 + std::tan(beta) * f.t2;
  return (radius / norm(p)) * p;
}

// Assigns a shared id to corner points closer than tol.
std::vector<std::size_t> deduplicate(const std::vector<Vec3>& pts, double tol) {
  std::vector<std::size_t> order(pts.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t p, std::size_t q) { return pts[p].x < pts[q].x; });
  std::vector<std::size_t> id(pts.size(), static_cast<std::size_t>(-1));
  std::size_t next = 0;
  for (std::size_t s = 0; s < order.size(); ++s) {
    const std::size_t p = order[s];
    for (std::size_t r = s; r-- > 0;) {
      const std::size_t q = order[r];
      if (pts[p].x - pts[q].x > tol) break;
      if (norm(pts[p] - pts[q]) <= tol) {
        id[p] = id[q];
        break;
      }
    }
    if (id[p] == static_cast<std::size_t>(-1)) id[p] = next++;
  }
  return id;
}

}  // namespace

MeshTopology build_cubed_sphere(int per_face, double radius, int corner_rotation) {
  if (per_face < 1) {
    throw InvalidMeshError("elements per face must be >= 1, got " + std::to_string(per_face));
  }
  if (!(radius > 0.0)) throw InvalidMeshError("sphere radius must be positive");
  const int M = per_face;
  const int rot = ((corner_rotation % 4) + 4) % 4;

  MeshTopology mesh;
  mesh.per_face = M;
  mesh.radius = radius;
  mesh.elements.reserve(6 * M * M);

  const double h = (std::numbers::pi / 2) / M;
  auto angle = [&](int k) { return -std::numbers::pi / 4 + k * h; };
  for (const FaceFrame& f : kCubeFaces) {
    for (int k = 0; k < M; ++k) {
      for (int l = 0; l < M; ++l) {
        // xi1 runs along beta and xi2 along alpha, so a_1 x a_2 ~ t2 x t1 = -c.
        const std::array<Vec3, 4> x{gnomonic_point(f, angle(k), angle(l), radius),
                                    gnomonic_point(f, angle(k), angle(l + 1), radius),
                                    gnomonic_point(f, angle(k + 1), angle(l + 1), radius),
                                    gnomonic_point(f, angle(k + 1), angle(l), radius)};
        ElementCorners ec;
        for (int c = 0; c < 4; ++c) ec.x[c] = x[(c + rot) % 4];
        mesh.elements.push_back(ec);
      }
    }
  }

  std::vector<Vec3> pts;
  pts.reserve(4 * mesh.elements.size());
  for (const auto& e : mesh.elements) pts.insert(pts.end(), e.x.begin(), e.x.end());
  const auto ids = deduplicate(pts, 1e-9 * radius);
  mesh.vertex_ids.resize(mesh.elements.size());
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    for (int c = 0; c < 4; ++c) mesh.vertex_ids[e][c] = ids[4 * e + c];
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, int>>> edges;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    for (int f = 0; f < kFacesPerElement; ++f) {
      std::size_t v0 = mesh.vertex_ids[e][kFaceCorners[f][0]];
      std::size_t v1 = mesh.vertex_ids[e][kFaceCorners[f][1]];
      if (v0 > v1) std::swap(v0, v1);
      edges[{v0, v1}].emplace_back(e, f);
    }
  }
  mesh.neighbors.resize(mesh.elements.size());
  for (const auto& [key, sides] : edges) {
    if (sides.size() != 2) {
      throw InvalidMeshError("mesh edge shared by " + std::to_string(sides.size()) +
                             " element faces");
    }
    for (int s = 0; s < 2; ++s) {
      const auto [e, f] = sides[s];
      const auto [oe, of] = sides[1 - s];
      const bool reversed =
          mesh.vertex_ids[e][kFaceCorners[f][0]] != mesh.vertex_ids[oe][kFaceCorners[of][0]];
      mesh.neighbors[e][f] = FaceNeighbor{oe, of, reversed};
    }
  }
  return mesh;
}

std::array<int, 2> face_node(int face, int t, int degree) {
  switch (face) {
    case 0: return {0, t};
    case 1: return {degree, t};
    case 2: return {t, 0};
    default: return {t, degree};
  }
}

NodePairing build_node_pairing(const MeshTopology& mesh, int degree) {
  const LglRule rule = lgl_nodes_weights(degree);
  NodePairing pairing;
  pairing.degree = degree;
  const int n = degree + 1;
  pairing.entries.resize(mesh.num_elements() * kFacesPerElement * n);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    for (int f = 0; f < kFacesPerElement; ++f) {
      const FaceNeighbor& nb = mesh.neighbors[e][f];
      for (int t = 0; t < n; ++t) {
        const int tn = nb.reversed ? degree - t : t;
        const auto own = face_node(f, t, degree);
        const auto other = face_node(nb.face, tn, degree);
        const Vec3 p = map_point(mesh.elements[e], rule.nodes[own[0]], rule.nodes[own[1]],
                                 mesh.radius);
        const Vec3 q = map_point(mesh.elements[nb.element], rule.nodes[other[0]],
                                 rule.nodes[other[1]], mesh.radius);
        if (!(norm(p - q) <= 1e-9 * mesh.radius)) {
          throw PairingError("paired interface nodes do not coincide (element " +
                             std::to_string(e) + ", face " + std::to_string(f) + ")");
        }
        pairing.entries[(e * kFacesPerElement + f) * n + t] = {nb.element, other[0], other[1]};
      }
    }
  }
  return pairing;
}

void write_mesh(std::ostream& out, const MeshTopology& mesh) {
  out << std::setprecision(17);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    out << e;
    for (const Vec3& x : mesh.elements[e].x) out << ' ' << x.x << ' ' << x.y << ' ' << x.z;
    out << '\n';
  }
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    for (int f = 0; f < kFacesPerElement; ++f) {
      const FaceNeighbor& nb = mesh.neighbors[e][f];
      out << e << ' ' << f << ' ' << nb.element << ' ' << nb.face << ' '
          << (nb.reversed ? 1 : 0) << '\n';
    }
  }
}

}  // namespace covswe
