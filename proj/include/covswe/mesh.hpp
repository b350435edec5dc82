#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "covswe/geometry.hpp"

namespace covswe {

/// Local face numbering of a reference element:
///   0: xi1 = -1, 1: xi1 = +1, 2: xi2 = -1, 3: xi2 = +1.
/// Along each face the parameter runs in the direction of increasing free
/// reference coordinate.
inline constexpr int kFacesPerElement = 4;

struct FaceNeighbor {
  std::size_t element = 0;
  int face = 0;
  bool reversed = false;  ///< parameter t on this face maps to N - t on the neighbor
};

struct MeshTopology {
  int per_face = 0;
  double radius = 0.0;
  std::vector<ElementCorners> elements;
  std::vector<std::array<std::size_t, 4>> vertex_ids;  ///< deduplicated corner ids
  std::vector<std::array<FaceNeighbor, kFacesPerElement>> neighbors;

  std::size_t num_elements() const { return elements.size(); }
};

/// Cubed sphere with M x M equiangular elements per cube face. Elements are
/// oriented so that a_1 x a_2 points towards the sphere centre. A nonzero
/// corner_rotation cyclically relabels every element's corners
/// (new[k] = old[(k + r) mod 4]), which changes the reference coordinates
/// but not the mesh.
MeshTopology build_cubed_sphere(int per_face, double radius, int corner_rotation = 0);

/// Node index (i, j) on the LGL grid of an element, face f, parameter t.
std::array<int, 2> face_node(int face, int t, int degree);

/// For every (element, face, t) the matching neighbor node. Indexed as
/// [(element * 4 + face) * (N + 1) + t].
struct NodePairing {
  int degree = 0;
  struct Entry {
    std::size_t element;
    int i;
    int j;
  };
  std::vector<Entry> entries;

  const Entry& at(std::size_t element, int face, int t) const {
    return entries[(element * kFacesPerElement + face) * (degree + 1) + t];
  }
};

/// Builds the node pairing for LGL degree N and checks that paired nodes
/// coincide to 1e-9 * radius (PairingError otherwise).
NodePairing build_node_pairing(const MeshTopology& mesh, int degree);

/// Plain-text dump: one line per element (id and 12 corner coordinates),
/// then one line per element face (element, face, neighbor, neighbor face,
/// reversed).
void write_mesh(std::ostream& out, const MeshTopology& mesh);

}  // namespace covswe
