#ifndef POLYISO_ANALYSIS_H
#define POLYISO_ANALYSIS_H

#include <chrono>
#include <optional>
#include <vector>

#include "polyiso/mesh.h"

namespace polyiso {

enum class VertexType { kPyramidal, kSemipyramidal, kBasic, kSemibasic, kOther };

const char *ToString(VertexType t);

// (apexes, bases) -> type:
//   a >= 1, b = 0 pyramidal; a >= 1, b = 2 semipyramidal;
//   a = 0, b = 4 basic;      a = 1, b = 4 semibasic; anything else other.
VertexType TypeOf(int apex_count, int base_count);

struct VertexCensus {
  int apex_count = 0;
  int base_count = 0;
  VertexType type = VertexType::kOther;
};

struct VertexTypeReport {
  std::vector<VertexCensus> vertices;
  // Mesh vertex holding the apex angle of each face.
  std::vector<int> face_apex;
  // Faces whose apex was chosen by the search rather than by their shape.
  std::vector<int> equilateral_faces;
  bool equilateral_ambiguity = false;
  bool well_behaved = false;
  bool convex = false;
  bool monohedral = false;

  int Count(VertexType t) const;
  std::vector<int> VerticesOfType(VertexType t) const;
};

// Per-vertex apex/base census from ClassifyShape labels. Equilateral faces
// get the first apex assignment (depth-first over faces, corners in face
// order) that makes every vertex one of the four named types, preferring one
// whose base edges pair up across faces; if none exists each takes its first
// corner. Throws NotIsosceles on a scalene face, TopologyError on an invalid
// mesh.
VertexTypeReport ClassifyVertices(const TriangleMesh &m, double rel_tol = 1e-9);

// Every vertex has an even base count, and every face's base edge is also
// the base edge of the face across it.
bool BaseAngleParity(const TriangleMesh &m, const VertexTypeReport &r);

// No vertex with four or more bases has two or more apexes. Empty when the
// report is not for a convex monohedral mesh.
std::optional<bool> FewBasesCheck(const VertexTypeReport &r);

// acos(cos^2(pi - theta)): angle between the outer sides of two isosceles
// faces with apex angle theta that share a leg and meet at right angles to it.
double TwoApexOuterAngle(double apex_angle);

// Dihedral along the shared leg of the two apex faces at a vertex with
// exactly two apex angles (on faces sharing an edge) and two base angles.
// Only the faces around the vertex are classified. Throws WrongVertexType
// when the census differs or the apex angle is not obtuse.
double SemipyramidalDihedral(const TriangleMesh &m, int vertex, double rel_tol = 1e-9);

bool IsDominatingSet(const std::vector<std::vector<int>> &adjacency,
                     const std::vector<int> &set);

// Pyramidal and semipyramidal vertices, sorted. Throws DominationFailed if
// the set is empty or does not dominate.
std::vector<int> DominatingSetFromPyramidal(const TriangleMesh &m,
                                            const VertexTypeReport &r);

std::vector<int> Eccentricities(const std::vector<std::vector<int>> &adjacency);
// Largest eccentricity; -1 for a disconnected graph.
int GraphDiameter(const std::vector<std::vector<int>> &adjacency);

// BFS layers from every set vertex number at most 3 |set| (that is,
// eccentricity + 1 <= 3 |set|).
bool LayerBoundCheck(const std::vector<std::vector<int>> &adjacency,
                     const std::vector<int> &set);

struct DominatingSetResult {
  std::vector<int> vertices;  // sorted
  bool exact = false;         // false: budget ran out, greedy or best found
};

// Minimum dominating set by branch and bound: branch on the closed
// neighborhood of the undominated vertex with the fewest candidates; bound by
// ceil(undominated / (max degree + 1)).
DominatingSetResult MinDominatingSet(const std::vector<std::vector<int>> &adjacency,
                                     std::chrono::milliseconds budget);

// First face that is scalene at rel_tol.
std::optional<int> ScaleneWitness(const TriangleMesh &m, double rel_tol = 1e-9);

struct AuditOptions {
  double rel_tol = 1e-9;
  std::chrono::milliseconds domination_budget{2000};
};

struct AuditReport {
  int vertices = 0, edges = 0, faces = 0;
  bool convex = false;
  int congruence_classes = 0;
  bool monohedral = false;
  bool isosceles = false;
  std::optional<int> scalene_face;
  double sharpness_min = 0, sharpness_max = 0;
  double total_defect = 0;
  // Largest |arc + dihedral - pi| over edges; convex meshes only.
  std::optional<double> gauss_residual;
  // Planar apex angles of isosceles faces.
  std::optional<double> apex_angle_min, apex_angle_max;
  std::optional<VertexTypeReport> types;
  std::optional<bool> base_angle_parity;
  std::optional<bool> few_bases;
  // Pyramidal and semipyramidal vertices, when they dominate.
  std::optional<std::vector<int>> dominating_set;
  std::optional<std::string> domination_error;
  std::optional<bool> layer_bound;
  int diameter = 0;
  DominatingSetResult min_dominating_set;
};

// Throws TopologyError unless the mesh is closed and valid.
AuditReport Audit(const TriangleMesh &m, const AuditOptions &opt = {});

}  // namespace polyiso

#endif  // POLYISO_ANALYSIS_H
