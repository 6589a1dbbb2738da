#ifndef POLYISO_MESH_H
#define POLYISO_MESH_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyiso/geom3.h"

namespace polyiso {

using Face = std::array<int, 3>;

// Undirected edge v0 < v1 with the faces that use it, in face order.
struct MeshEdge {
  int v0 = 0, v1 = 0;
  std::vector<int> faces;
};

// Embedded triangle mesh. Faces are counterclockwise seen from outside. The
// edge table is derived at construction; closedness and orientation are not
// enforced here (see Validate) so that broken inputs can still be audited.
class TriangleMesh {
 public:
  TriangleMesh() = default;
  // Throws TopologyError for out-of-range indices and DegenerateInput for
  // non-finite coordinates.
  TriangleMesh(std::vector<Point3> vertices, std::vector<Face> faces);

  int NumVertices() const { return static_cast<int>(vertices_.size()); }
  int NumFaces() const { return static_cast<int>(faces_.size()); }
  int NumEdges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Point3> &vertices() const { return vertices_; }
  const std::vector<Face> &faces() const { return faces_; }
  const std::vector<MeshEdge> &edges() const { return edges_; }
  const Point3 &vertex(int v) const { return vertices_[v]; }
  const Face &face(int f) const { return faces_[f]; }
  const MeshEdge &edge(int e) const { return edges_[e]; }

  // Edge index of (a, b) in either direction, or -1.
  int FindEdge(int a, int b) const;
  // Edge indices of face f: k-th entry is edge (face[k], face[k+1]).
  const std::array<int, 3> &FaceEdges(int f) const { return face_edges_[f]; }
  // Sorted neighbor lists.
  const std::vector<std::vector<int>> &Adjacency() const { return adjacency_; }
  const std::vector<int> &VertexFaces(int v) const { return vertex_faces_[v]; }

  PlanarTriangle Triangle(int f) const;
  double BoundingBoxDiagonal() const;

 private:
  std::vector<Point3> vertices_;
  std::vector<Face> faces_;
  std::vector<MeshEdge> edges_;
  std::vector<std::array<int, 3>> face_edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> vertex_faces_;
};

struct ValidationReport {
  std::vector<std::pair<int, int>> boundary_edges;
  std::vector<std::pair<int, int>> nonmanifold_edges;
  std::vector<std::pair<int, int>> orientation_conflicts;
  std::vector<int> repeated_index_faces;
  std::vector<int> unreferenced_vertices;
  std::vector<std::pair<int, int>> duplicate_vertices;
  int euler_characteristic = 0;

  bool ClosedManifold() const {
    return boundary_edges.empty() && nonmanifold_edges.empty() &&
           repeated_index_faces.empty();
  }
  bool Valid() const {
    return ClosedManifold() && orientation_conflicts.empty() &&
           unreferenced_vertices.empty() && duplicate_vertices.empty() &&
           euler_characteristic == 2;
  }
  std::string Summary() const;
};

ValidationReport Validate(const TriangleMesh &m);

// Throws TopologyError with the validation summary unless Validate passes.
void RequireClosedValid(const TriangleMesh &m);

// Interior dihedral at a manifold edge, in (0, 2*pi).
double EdgeDihedral(const TriangleMesh &m, int edge);

enum class ConvexityMode {
  kStrict,  // every dihedral <= pi - tol
  kWeak,    // flat edges allowed: every dihedral <= pi + tol
};

struct ConvexityResult {
  enum class Witness { kNone, kReflexEdge, kVertexOutside };
  bool convex = false;
  Witness witness = Witness::kNone;
  int edge = -1;    // kReflexEdge
  int face = -1;    // kVertexOutside
  int vertex = -1;  // kVertexOutside
  double value = 0.0;  // offending dihedral, or signed distance beyond plane
};

// Angles are checked with tol (radians); halfspace containment with
// tol * bounding-box diagonal. Throws TopologyError on invalid meshes.
ConvexityResult IsConvex(const TriangleMesh &m, double tol = 1e-9,
                         ConvexityMode mode = ConvexityMode::kStrict);

// pi minus the smallest dihedral on the face's three edges.
double Sharpness(const TriangleMesh &m, int face);

struct GaussMap {
  std::vector<UnitVec> normals;  // per face
  std::vector<double> arcs;      // per edge, geodesic distance of normals
};

// Throws ConvexityRequired for non-convex input.
GaussMap ComputeGaussMap(const TriangleMesh &m);

double AngularDefect(const TriangleMesh &m, int vertex);
double TotalAngularDefect(const TriangleMesh &m);

// Faces grouped by sorted side-length triple within rel_tol of the longest
// side. Classes are ordered by first face; faces within a class ascending.
std::vector<std::vector<int>> CongruenceClasses(const TriangleMesh &m,
                                                double rel_tol);

// All face pairs (i < j) that meet anywhere other than along the vertices
// and edges they share. Contact closer than tol * bbox counts as meeting.
std::vector<std::pair<int, int>> SelfIntersections(const TriangleMesh &m,
                                                   double tol = 1e-9);

// Distance between two solid triangles (0 when they intersect).
double TriangleDistance(const std::array<Point3, 3> &t1,
                        const std::array<Point3, 3> &t2);

// OFF: "OFF" header, "V F E" counts, vertex lines, "3 i j k" face lines.
// '#' starts a comment. Throws ParseError with the offending line.
TriangleMesh ReadOff(std::string_view text);
std::string WriteOff(const TriangleMesh &m);
// OBJ export, 1-based "v"/"f" records only.
std::string WriteObj(const TriangleMesh &m);

TriangleMesh ReadOffFile(const std::string &path);
void WriteTextFile(const std::string &path, std::string_view text);

// Shortest decimal string that parses back to exactly x.
std::string FormatDouble(double x);

}  // namespace polyiso

#endif  // POLYISO_MESH_H
