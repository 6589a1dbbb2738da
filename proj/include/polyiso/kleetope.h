#ifndef POLYISO_KLEETOPE_H
#define POLYISO_KLEETOPE_H

#include <chrono>
#include <optional>
#include <vector>

#include "polyiso/mesh.h"

namespace polyiso {

// Combinatorial triangulation of the sphere: consistently oriented faces,
// every edge in exactly two faces, every vertex used, V - E + F = 2.
class AbstractTriangulation {
 public:
  // Throws TopologyError when the invariants fail.
  AbstractTriangulation(int vertex_count, std::vector<Face> faces);
  static AbstractTriangulation FromMesh(const TriangleMesh &m);

  int NumVertices() const { return vertex_count_; }
  int NumFaces() const { return static_cast<int>(faces_.size()); }
  int NumEdges() const { return num_edges_; }
  const std::vector<Face> &faces() const { return faces_; }
  // Sorted neighbor lists.
  const std::vector<std::vector<int>> &Adjacency() const { return adjacency_; }

 private:
  int vertex_count_ = 0;
  int num_edges_ = 0;
  std::vector<Face> faces_;
  std::vector<std::vector<int>> adjacency_;
};

// Adds vertex V + i for face i = (a, b, c) and replaces the face by
// (a, b, V+i), (b, c, V+i), (c, a, V+i) at positions 3i, 3i+1, 3i+2.
AbstractTriangulation CombinatorialKleetope(const AbstractTriangulation &g);

// i-fold Kleetope; i = 0 returns g. Throws PreconditionFailed for i < 0.
AbstractTriangulation IterateKleetope(const AbstractTriangulation &g, int i);

// Largest apex heights for a convex Kleetope, one per face: the apex over the
// barycenter g_f may rise to
//   min over edges e of f of  dist(g_f, e) * tan((pi - dihedral_e) / 2)
// which keeps every original edge strictly convex when all faces stay below
// their limit, and no higher than any other face plane allows.
std::vector<double> ConvexApexHeightLimits(const TriangleMesh &m);

// Pyramid on every face with apex at barycenter + height_factor * limit *
// outward normal, in the face layout of CombinatorialKleetope. The result is
// checked with IsConvex.
// Throws ConvexityRequired for non-convex input, CannotRaiseApex when some
// limit is not positive (flat edges), PreconditionFailed unless
// 0 < height_factor < 1.
TriangleMesh ConvexKleetope(const TriangleMesh &m, double height_factor = 0.5);

struct SpikeResult {
  TriangleMesh mesh;
  double radius = 0.0;
  // Number of doublings of the largest circumradius used by the automatic
  // choice; 0 when the radius was given.
  int doublings = 0;
  // Largest angle between a spike face and its base face, measured inside
  // the base face's plane, and the bound pi - theta / 2 it must stay under.
  double max_spike_angle = 0.0;
  double spike_angle_bound = 0.0;
};

// Apex for face f at circumcenter + sqrt(R^2 - r_f^2) * outward normal, so
// every new face has two sides of length R. Without a radius, R is
// 2^j * max r_f for the smallest j in 1..60 with every spike angle below
// pi - theta / 2, theta the largest dihedral of m. The result is checked for
// self-intersections.
// Throws ConvexityRequired for non-convex input, RadiusTooSmall when
// R <= max r_f, CannotSatisfyVoronoiCondition when no j works, and
// ConstructionInvalid if the result self-intersects.
SpikeResult SpikeKleetope(const TriangleMesh &m,
                          std::optional<double> radius = std::nullopt);

struct CycleResult {
  int length = 0;          // 0 when the graph is acyclic
  std::vector<int> cycle;  // witness, starting at its smallest vertex
  bool exact = false;      // false when the budget ran out first
  long long nodes = 0;     // search nodes expanded
};

// Longest simple cycle by depth-first branch and bound. Cycles are rooted at
// their smallest vertex; a branch is cut when the path length plus a bound on
// the unvisited vertices reachable from its end cannot beat the best cycle.
// Within the reachable set, a greedy independent subset S counts for at most
// one more than the remaining vertices. The witness is the first longest
// cycle met in sorted-adjacency order.
CycleResult LongestSimpleCycle(const std::vector<std::vector<int>> &adjacency,
                               std::chrono::milliseconds budget);
CycleResult LongestSimpleCycle(const AbstractTriangulation &g,
                               std::chrono::milliseconds budget);

}  // namespace polyiso

#endif  // POLYISO_KLEETOPE_H
