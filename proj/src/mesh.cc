#include "polyiso/mesh.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "polyiso/error.h"

namespace polyiso {

namespace {

constexpr double kPi = std::numbers::pi;

uint64_t EdgeKey(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
         static_cast<uint32_t>(b);
}

}  // namespace

TriangleMesh::TriangleMesh(std::vector<Point3> vertices,
                           std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  const int n = NumVertices();
  for (const Point3 &p : vertices_) {
    if (!IsFinite(p)) {
      throw Error(ErrorCode::kDegenerateInput, "non-finite vertex coordinate");
    }
  }
  for (const Face &f : faces_) {
    for (int v : f) {
      if (v < 0 || v >= n) {
        throw Error(ErrorCode::kTopologyError,
                    "face index " + std::to_string(v) + " out of range");
      }
    }
  }

  // Collect undirected edges, sort for a deterministic edge order.
  std::vector<std::pair<uint64_t, int>> incidences;
  incidences.reserve(faces_.size() * 3);
  for (int f = 0; f < NumFaces(); f++) {
    for (int k = 0; k < 3; k++) {
      const int a = faces_[f][k], b = faces_[f][(k + 1) % 3];
      if (a != b) incidences.emplace_back(EdgeKey(a, b), f);
    }
  }
  std::sort(incidences.begin(), incidences.end());
  std::unordered_map<uint64_t, int> index;
  for (const auto &[key, f] : incidences) {
    auto [it, inserted] = index.try_emplace(key, NumEdges());
    if (inserted) {
      MeshEdge e;
      e.v0 = static_cast<int>(key >> 32);
      e.v1 = static_cast<int>(key & 0xffffffffu);
      edges_.push_back(std::move(e));
    }
    edges_[it->second].faces.push_back(f);
  }

  face_edges_.resize(faces_.size());
  for (int f = 0; f < NumFaces(); f++) {
    for (int k = 0; k < 3; k++) {
      const int a = faces_[f][k], b = faces_[f][(k + 1) % 3];
      face_edges_[f][k] = a == b ? -1 : index.at(EdgeKey(a, b));
    }
  }

  adjacency_.assign(n, {});
  for (const MeshEdge &e : edges_) {
    adjacency_[e.v0].push_back(e.v1);
    adjacency_[e.v1].push_back(e.v0);
  }
  for (auto &nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());

  vertex_faces_.assign(n, {});
  for (int f = 0; f < NumFaces(); f++) {
    for (int k = 0; k < 3; k++) {
      auto &list = vertex_faces_[faces_[f][k]];
      if (list.empty() || list.back() != f) list.push_back(f);
    }
  }
}

int TriangleMesh::FindEdge(int a, int b) const {
  if (a == b || a < 0 || b < 0 || a >= NumVertices() || b >= NumVertices()) {
    return -1;
  }
  if (a > b) std::swap(a, b);
  // Edges are sorted by (v0, v1).
  auto it = std::lower_bound(
      edges_.begin(), edges_.end(), std::make_pair(a, b),
      [](const MeshEdge &e, const std::pair<int, int> &key) {
        return std::make_pair(e.v0, e.v1) < key;
      });
  if (it != edges_.end() && it->v0 == a && it->v1 == b) {
    return static_cast<int>(it - edges_.begin());
  }
  return -1;
}

PlanarTriangle TriangleMesh::Triangle(int f) const {
  const Face &t = faces_[f];
  return PlanarTriangle(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
}

double TriangleMesh::BoundingBoxDiagonal() const {
  if (vertices_.empty()) return 0.0;
  Point3 lo = vertices_[0], hi = vertices_[0];
  for (const Point3 &p : vertices_) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  return Distance(lo, hi);
}

std::string ValidationReport::Summary() const {
  std::ostringstream os;
  os << "euler=" << euler_characteristic
     << " boundary_edges=" << boundary_edges.size()
     << " nonmanifold_edges=" << nonmanifold_edges.size()
     << " orientation_conflicts=" << orientation_conflicts.size()
     << " repeated_index_faces=" << repeated_index_faces.size()
     << " unreferenced_vertices=" << unreferenced_vertices.size()
     << " duplicate_vertices=" << duplicate_vertices.size();
  return os.str();
}

ValidationReport Validate(const TriangleMesh &m) {
  ValidationReport r;
  for (int f = 0; f < m.NumFaces(); f++) {
    const Face &t = m.face(f);
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      r.repeated_index_faces.push_back(f);
    }
  }
  for (const MeshEdge &e : m.edges()) {
    const auto key = std::make_pair(e.v0, e.v1);
    if (e.faces.size() == 1) {
      r.boundary_edges.push_back(key);
    } else if (e.faces.size() > 2) {
      r.nonmanifold_edges.push_back(key);
    } else {
      // Consistent orientation: the two faces traverse the edge in opposite
      // directions.
      auto forward = [&](int f) {
        const Face &t = m.face(f);
        for (int k = 0; k < 3; k++) {
          if (t[k] == e.v0 && t[(k + 1) % 3] == e.v1) return true;
        }
        return false;
      };
      if (forward(e.faces[0]) == forward(e.faces[1])) {
        r.orientation_conflicts.push_back(key);
      }
    }
  }
  for (int v = 0; v < m.NumVertices(); v++) {
    if (m.VertexFaces(v).empty()) r.unreferenced_vertices.push_back(v);
  }
  r.euler_characteristic = m.NumVertices() - m.NumEdges() + m.NumFaces();

  // Duplicate positions: sweep along x.
  const double tol = 1e-12 * m.BoundingBoxDiagonal();
  std::vector<int> order(m.NumVertices());
  for (int i = 0; i < m.NumVertices(); i++) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return m.vertex(a).x < m.vertex(b).x ||
           (m.vertex(a).x == m.vertex(b).x && a < b);
  });
  for (size_t i = 0; i < order.size(); i++) {
    for (size_t j = i + 1; j < order.size(); j++) {
      if (m.vertex(order[j]).x - m.vertex(order[i]).x > tol) break;
      if (Distance(m.vertex(order[i]), m.vertex(order[j])) <= tol) {
        r.duplicate_vertices.emplace_back(std::min(order[i], order[j]),
                                          std::max(order[i], order[j]));
      }
    }
  }
  std::sort(r.duplicate_vertices.begin(), r.duplicate_vertices.end());
  return r;
}

void RequireClosedValid(const TriangleMesh &m) {
  const ValidationReport r = Validate(m);
  if (!r.Valid()) {
    throw Error(ErrorCode::kTopologyError,
                "mesh is not a closed oriented genus-0 surface: " + r.Summary());
  }
}

double EdgeDihedral(const TriangleMesh &m, int edge) {
  const MeshEdge &e = m.edge(edge);
  if (e.faces.size() != 2) {
    throw Error(ErrorCode::kTopologyError, "edge is not manifold");
  }
  return DihedralAngle(m.Triangle(e.faces[0]), m.Triangle(e.faces[1]),
                       {m.vertex(e.v0), m.vertex(e.v1)});
}

ConvexityResult IsConvex(const TriangleMesh &m, double tol,
                         ConvexityMode mode) {
  RequireClosedValid(m);
  ConvexityResult r;
  const double limit = mode == ConvexityMode::kStrict ? kPi - tol : kPi + tol;
  for (int e = 0; e < m.NumEdges(); e++) {
    const double d = EdgeDihedral(m, e);
    if (d > limit) {
      r.witness = ConvexityResult::Witness::kReflexEdge;
      r.edge = e;
      r.value = d;
      return r;
    }
  }
  const double dist_tol = tol * m.BoundingBoxDiagonal();
  for (int f = 0; f < m.NumFaces(); f++) {
    const PlanarTriangle t = m.Triangle(f);
    const Vec3 n = t.Normal().vec();
    const Face &fv = m.face(f);
    for (int v = 0; v < m.NumVertices(); v++) {
      if (v == fv[0] || v == fv[1] || v == fv[2]) continue;
      const double s = Dot(n, m.vertex(v) - t.a());
      if (s > dist_tol) {
        r.witness = ConvexityResult::Witness::kVertexOutside;
        r.face = f;
        r.vertex = v;
        r.value = s;
        return r;
      }
    }
  }
  r.convex = true;
  return r;
}

double Sharpness(const TriangleMesh &m, int face) {
  RequireClosedValid(m);
  double smallest = std::numeric_limits<double>::infinity();
  for (int e : m.FaceEdges(face)) smallest = std::min(smallest, EdgeDihedral(m, e));
  return kPi - smallest;
}

GaussMap ComputeGaussMap(const TriangleMesh &m) {
  if (!IsConvex(m).convex) {
    throw Error(ErrorCode::kConvexityRequired,
                "Gauss map needs a convex mesh");
  }
  GaussMap g;
  g.normals.reserve(m.NumFaces());
  for (int f = 0; f < m.NumFaces(); f++) g.normals.push_back(m.Triangle(f).Normal());
  g.arcs.reserve(m.NumEdges());
  for (const MeshEdge &e : m.edges()) {
    g.arcs.push_back(GeodesicDistance(g.normals[e.faces[0]], g.normals[e.faces[1]]));
  }
  return g;
}

double AngularDefect(const TriangleMesh &m, int vertex) {
  RequireClosedValid(m);
  double sum = 0.0;
  for (int f : m.VertexFaces(vertex)) {
    const Face &t = m.face(f);
    for (int k = 0; k < 3; k++) {
      if (t[k] == vertex) {
        sum += AngleBetween(m.vertex(t[(k + 1) % 3]) - m.vertex(vertex),
                            m.vertex(t[(k + 2) % 3]) - m.vertex(vertex));
      }
    }
  }
  return 2.0 * kPi - sum;
}

double TotalAngularDefect(const TriangleMesh &m) {
  RequireClosedValid(m);
  double total = 0.0;
  for (int v = 0; v < m.NumVertices(); v++) total += AngularDefect(m, v);
  return total;
}

std::vector<std::vector<int>> CongruenceClasses(const TriangleMesh &m,
                                                double rel_tol) {
  std::vector<std::array<double, 3>> sides(m.NumFaces());
  for (int f = 0; f < m.NumFaces(); f++) {
    const Face &t = m.face(f);
    sides[f] = {Distance(m.vertex(t[1]), m.vertex(t[2])),
                Distance(m.vertex(t[2]), m.vertex(t[0])),
                Distance(m.vertex(t[0]), m.vertex(t[1]))};
    std::sort(sides[f].begin(), sides[f].end());
  }
  std::vector<std::vector<int>> classes;
  for (int f = 0; f < m.NumFaces(); f++) {
    bool placed = false;
    for (auto &cls : classes) {
      const auto &rep = sides[cls.front()];
      const double scale = std::max(rep[2], sides[f][2]);
      bool same = true;
      for (int k = 0; k < 3; k++) {
        same = same && std::abs(rep[k] - sides[f][k]) <= rel_tol * scale;
      }
      if (same) {
        cls.push_back(f);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({f});
  }
  return classes;
}

namespace {

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection).
Point3 ClosestPointOnTriangle(const Point3 &p, const Point3 &a,
                              const Point3 &b, const Point3 &c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = Dot(ab, ap), d2 = Dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Vec3 bp = p - b;
  const double d3 = Dot(ab, bp), d4 = Dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + ab * (d1 / (d1 - d3));
  const Vec3 cp = p - c;
  const double d5 = Dot(ab, cp), d6 = Dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + ac * (d2 / (d2 - d6));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double SegmentSegmentDistance(const Point3 &p1, const Point3 &q1,
                              const Point3 &p2, const Point3 &q2) {
  const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  const double a = Dot(d1, d1), e = Dot(d2, d2), f = Dot(d2, r);
  double s = 0.0, t = 0.0;
  if (a <= 0.0 && e <= 0.0) return Distance(p1, p2);
  if (a <= 0.0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = Dot(d1, r);
    if (e <= 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = Dot(d1, d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return Distance(p1 + d1 * s, p2 + d2 * t);
}

double SegmentTriangleDistance(const Point3 &p, const Point3 &q,
                               const std::array<Point3, 3> &t) {
  const Vec3 n = Cross(t[1] - t[0], t[2] - t[0]);
  const double sp = Dot(n, p - t[0]);
  const double sq = Dot(n, q - t[0]);
  if ((sp < 0 && sq > 0) || (sp > 0 && sq < 0)) {
    const Point3 x = p + (q - p) * (sp / (sp - sq));
    // Inside test by edge orientations relative to n.
    const bool inside = Dot(Cross(t[1] - t[0], x - t[0]), n) >= 0 &&
                        Dot(Cross(t[2] - t[1], x - t[1]), n) >= 0 &&
                        Dot(Cross(t[0] - t[2], x - t[2]), n) >= 0;
    if (inside) return 0.0;
  }
  double best = std::min(Distance(p, ClosestPointOnTriangle(p, t[0], t[1], t[2])),
                         Distance(q, ClosestPointOnTriangle(q, t[0], t[1], t[2])));
  for (int k = 0; k < 3; k++) {
    best = std::min(best, SegmentSegmentDistance(p, q, t[k], t[(k + 1) % 3]));
  }
  return best;
}

}  // namespace

double TriangleDistance(const std::array<Point3, 3> &t1,
                        const std::array<Point3, 3> &t2) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; k++) {
    best = std::min(best, SegmentTriangleDistance(t1[k], t1[(k + 1) % 3], t2));
    best = std::min(best, SegmentTriangleDistance(t2[k], t2[(k + 1) % 3], t1));
  }
  return best;
}

std::vector<std::pair<int, int>> SelfIntersections(const TriangleMesh &m,
                                                   double tol) {
  const double eps = tol * m.BoundingBoxDiagonal();
  std::vector<std::pair<int, int>> hits;
  auto tri = [&](int f) {
    const Face &t = m.face(f);
    return std::array<Point3, 3>{m.vertex(t[0]), m.vertex(t[1]), m.vertex(t[2])};
  };
  for (int i = 0; i < m.NumFaces(); i++) {
    const Face &fi = m.face(i);
    const auto ti = tri(i);
    for (int j = i + 1; j < m.NumFaces(); j++) {
      const Face &fj = m.face(j);
      // Positions in each face of shared vertex indices.
      std::vector<std::pair<int, int>> shared;
      for (int a = 0; a < 3; a++) {
        for (int b = 0; b < 3; b++) {
          if (fi[a] == fj[b]) shared.emplace_back(a, b);
        }
      }
      const auto tj = tri(j);
      bool hit = false;
      if (shared.empty()) {
        hit = TriangleDistance(ti, tj) <= eps;
      } else if (shared.size() == 1) {
        // Two triangles sharing one vertex overlap elsewhere iff the edge
        // opposite the shared vertex in one of them reaches the other.
        const int a = shared[0].first, b = shared[0].second;
        hit = SegmentTriangleDistance(ti[(a + 1) % 3], ti[(a + 2) % 3], tj) <= eps ||
              SegmentTriangleDistance(tj[(b + 1) % 3], tj[(b + 2) % 3], ti) <= eps;
      } else if (shared.size() == 2) {
        // Sharing an edge: they overlap only when folded flat onto each other.
        const int oi = 3 - shared[0].first - shared[1].first;
        const int oj = 3 - shared[0].second - shared[1].second;
        const Point3 &p = ti[shared[0].first];
        const Vec3 e = ti[shared[1].first] - p;
        const double ee = Dot(e, e);
        const Vec3 ui = (ti[oi] - p) - e * (Dot(ti[oi] - p, e) / ee);
        const Vec3 uj = (tj[oj] - p) - e * (Dot(tj[oj] - p, e) / ee);
        hit = AngleBetween(ui, uj) <= tol;
      } else {
        hit = true;
      }
      if (hit) hits.emplace_back(i, j);
    }
  }
  return hits;
}

}  // namespace polyiso
