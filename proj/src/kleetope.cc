#include "polyiso/kleetope.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "polyiso/error.h"

namespace polyiso {

namespace {

constexpr double kPi = std::numbers::pi;

Point3 Barycenter(const PlanarTriangle &t) { return (t.a() + t.b() + t.c()) / 3.0; }

double DistanceToLine(const Point3 &p, const Point3 &a, const Point3 &b) {
  const Vec3 d = b - a;
  return Norm(Cross(d, p - a)) / Norm(d);
}

// Angle at edge ab between the half-plane holding c and the one holding q.
double AngleAtEdge(const Point3 &a, const Point3 &b, const Point3 &c,
                   const Point3 &q) {
  const Vec3 d = (b - a) / Norm(b - a);
  const Vec3 uc = (c - a) - d * Dot(c - a, d);
  const Vec3 uq = (q - a) - d * Dot(q - a, d);
  return AngleBetween(uc, uq);
}

TriangleMesh BuildKleetopeMesh(const TriangleMesh &m, const std::vector<Point3> &apexes) {
  std::vector<Point3> v = m.vertices();
  v.insert(v.end(), apexes.begin(), apexes.end());
  const AbstractTriangulation k =
      CombinatorialKleetope(AbstractTriangulation(m.NumVertices(), m.faces()));
  return TriangleMesh(std::move(v), k.faces());
}

void RequireWeaklyConvex(const TriangleMesh &m) {
  if (!IsConvex(m, 1e-9, ConvexityMode::kWeak).convex) {
    throw Error(ErrorCode::kConvexityRequired, "input mesh is not convex");
  }
}

}  // namespace

AbstractTriangulation::AbstractTriangulation(int vertex_count, std::vector<Face> faces)
    : vertex_count_(vertex_count), faces_(std::move(faces)) {
  if (vertex_count_ < 4) {
    throw Error(ErrorCode::kTopologyError, "triangulation needs at least 4 vertices");
  }
  std::map<std::pair<int, int>, int> directed;
  std::vector<char> used(vertex_count_, 0);
  for (const Face &f : faces_) {
    for (int k = 0; k < 3; k++) {
      if (f[k] < 0 || f[k] >= vertex_count_) {
        throw Error(ErrorCode::kTopologyError, "face index out of range");
      }
      used[f[k]] = 1;
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
      throw Error(ErrorCode::kTopologyError, "face repeats a vertex");
    }
    for (int k = 0; k < 3; k++) {
      if (++directed[{f[k], f[(k + 1) % 3]}] > 1) {
        throw Error(ErrorCode::kTopologyError,
                    "directed edge " + std::to_string(f[k]) + "->" +
                        std::to_string(f[(k + 1) % 3]) + " used twice");
      }
    }
  }
  for (const auto &[e, count] : directed) {
    if (!directed.count({e.second, e.first})) {
      throw Error(ErrorCode::kTopologyError,
                  "edge " + std::to_string(e.first) + "-" + std::to_string(e.second) +
                      " is not shared by two faces");
    }
  }
  if (std::find(used.begin(), used.end(), 0) != used.end()) {
    throw Error(ErrorCode::kTopologyError, "unused vertex");
  }
  num_edges_ = static_cast<int>(directed.size() / 2);
  if (vertex_count_ - num_edges_ + NumFaces() != 2) {
    throw Error(ErrorCode::kTopologyError, "Euler characteristic is not 2");
  }
  adjacency_.assign(vertex_count_, {});
  for (const auto &[e, count] : directed) adjacency_[e.first].push_back(e.second);
  for (auto &nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

AbstractTriangulation AbstractTriangulation::FromMesh(const TriangleMesh &m) {
  return AbstractTriangulation(m.NumVertices(), m.faces());
}

AbstractTriangulation CombinatorialKleetope(const AbstractTriangulation &g) {
  const int n = g.NumVertices();
  std::vector<Face> faces;
  faces.reserve(3 * g.faces().size());
  for (int i = 0; i < g.NumFaces(); i++) {
    const Face &f = g.faces()[i];
    const int p = n + i;
    faces.push_back({f[0], f[1], p});
    faces.push_back({f[1], f[2], p});
    faces.push_back({f[2], f[0], p});
  }
  return AbstractTriangulation(n + g.NumFaces(), std::move(faces));
}

AbstractTriangulation IterateKleetope(const AbstractTriangulation &g, int i) {
  if (i < 0) throw Error(ErrorCode::kPreconditionFailed, "iteration count must be >= 0");
  AbstractTriangulation out = g;
  for (int t = 0; t < i; t++) out = CombinatorialKleetope(out);
  return out;
}

std::vector<double> ConvexApexHeightLimits(const TriangleMesh &m) {
  std::vector<double> limits(m.NumFaces());
  std::vector<Vec3> normals(m.NumFaces());
  for (int f = 0; f < m.NumFaces(); f++) normals[f] = m.Triangle(f).Normal().vec();
  for (int f = 0; f < m.NumFaces(); f++) {
    const PlanarTriangle t = m.Triangle(f);
    const Point3 g = Barycenter(t);
    double lim = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; k++) {
      const double ext = kPi - EdgeDihedral(m, m.FaceEdges(f)[k]);
      if (ext <= 0) {
        lim = 0;
        break;
      }
      lim = std::min(lim, DistanceToLine(g, t[k], t[(k + 1) % 3]) * std::tan(ext / 2));
    }
    for (int o = 0; o < m.NumFaces() && lim > 0; o++) {
      const double cosine = Dot(normals[o], normals[f]);
      if (o == f || cosine <= 0) continue;
      const double gap = Dot(normals[o], m.vertex(m.face(o)[0]) - g);
      lim = std::min(lim, std::max(gap, 0.0) / cosine);
    }
    limits[f] = lim;
  }
  return limits;
}

TriangleMesh ConvexKleetope(const TriangleMesh &m, double height_factor) {
  if (!(height_factor > 0 && height_factor < 1)) {
    throw Error(ErrorCode::kPreconditionFailed, "height factor must lie in (0, 1)");
  }
  RequireWeaklyConvex(m);
  const std::vector<double> limits = ConvexApexHeightLimits(m);
  const double floor = 1e-12 * m.BoundingBoxDiagonal();
  std::vector<Point3> apexes;
  for (int f = 0; f < m.NumFaces(); f++) {
    if (!(limits[f] > floor)) {
      throw Error(ErrorCode::kCannotRaiseApex,
                  "face " + std::to_string(f) +
                      " has a flat edge; no apex height keeps the result convex");
    }
    const PlanarTriangle t = m.Triangle(f);
    apexes.push_back(Barycenter(t) + t.Normal().vec() * (height_factor * limits[f]));
  }
  TriangleMesh out = BuildKleetopeMesh(m, apexes);
  if (!IsConvex(out).convex) {
    throw Error(ErrorCode::kConstructionInvalid, "raised pyramids are not convex");
  }
  return out;
}

SpikeResult SpikeKleetope(const TriangleMesh &m, std::optional<double> radius) {
  RequireWeaklyConvex(m);
  double max_r = 0;
  std::vector<Circle3> circles;
  std::vector<Vec3> normals;
  for (int f = 0; f < m.NumFaces(); f++) {
    const PlanarTriangle t = m.Triangle(f);
    circles.push_back(Circumcircle(t));
    normals.push_back(t.Normal().vec());
    max_r = std::max(max_r, circles.back().radius);
  }
  double theta = 0;
  for (int e = 0; e < m.NumEdges(); e++) theta = std::max(theta, EdgeDihedral(m, e));

  auto apexes_for = [&](double r) {
    std::vector<Point3> apexes;
    for (int f = 0; f < m.NumFaces(); f++) {
      const double h = std::sqrt(r * r - circles[f].radius * circles[f].radius);
      apexes.push_back(circles[f].center + normals[f] * h);
    }
    return apexes;
  };
  auto max_angle = [&](const std::vector<Point3> &apexes) {
    double worst = 0;
    for (int f = 0; f < m.NumFaces(); f++) {
      const PlanarTriangle t = m.Triangle(f);
      for (int k = 0; k < 3; k++) {
        worst = std::max(worst, AngleAtEdge(t[k], t[(k + 1) % 3], t[(k + 2) % 3], apexes[f]));
      }
    }
    return worst;
  };

  SpikeResult res;
  res.spike_angle_bound = kPi - theta / 2;
  std::vector<Point3> apexes;
  if (radius) {
    if (!(*radius > max_r)) {
      throw Error(ErrorCode::kRadiusTooSmall,
                  "radius " + FormatDouble(*radius) +
                      " does not exceed the largest face circumradius " + FormatDouble(max_r));
    }
    res.radius = *radius;
    apexes = apexes_for(res.radius);
    res.max_spike_angle = max_angle(apexes);
  } else {
    for (int j = 1; j <= 60 && apexes.empty(); j++) {
      const double r = std::ldexp(max_r, j);
      std::vector<Point3> candidate = apexes_for(r);
      const double worst = max_angle(candidate);
      if (worst < res.spike_angle_bound) {
        res.radius = r;
        res.doublings = j;
        res.max_spike_angle = worst;
        apexes = std::move(candidate);
      }
    }
    if (apexes.empty()) {
      throw Error(ErrorCode::kCannotSatisfyVoronoiCondition,
                  "no radius up to 2^60 times the largest circumradius keeps every "
                  "spike face within pi - theta/2 of its base face");
    }
  }
  res.mesh = BuildKleetopeMesh(m, apexes);
  const auto hits = SelfIntersections(res.mesh);
  if (!hits.empty()) {
    throw Error(ErrorCode::kConstructionInvalid,
                "spike faces " + std::to_string(hits[0].first) + " and " +
                    std::to_string(hits[0].second) + " intersect");
  }
  return res;
}

namespace {

class CycleSearch {
 public:
  CycleSearch(const std::vector<std::vector<int>> &adj, std::chrono::milliseconds budget)
      : adj_(adj),
        n_(static_cast<int>(adj.size())),
        deadline_(std::chrono::steady_clock::now() + budget),
        visited_(n_, 0),
        mark_(n_, 0),
        in_set_(n_, 0),
        rank_(n_) {
    std::vector<int> order(n_);
    for (int v = 0; v < n_; v++) order[v] = v;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return adj_[a].size() < adj_[b].size();
    });
    for (int i = 0; i < n_; i++) rank_[order[i]] = i;
  }

  CycleResult Run() {
    for (int s = 0; s < n_ && !out_of_time_; s++) {
      if (n_ - s <= best_) break;
      start_ = s;
      path_.assign(1, s);
      visited_[s] = 1;
      Extend(s);
      visited_[s] = 0;
    }
    CycleResult r;
    r.length = best_;
    r.cycle = witness_;
    r.exact = !out_of_time_;
    r.nodes = nodes_;
    return r;
  }

 private:
  // Upper bound on how many more vertices a cycle through the current path
  // can pick up: the unvisited vertices above the root reachable from u, where
  // an independent subset S of them counts at most |rest| + 1 because no two
  // S vertices are consecutive on a path. Returns -1 when no reachable vertex
  // (or u itself) neighbors the root.
  int RemainingBound(int u) {
    epoch_++;
    stack_.assign(1, u);
    mark_[u] = epoch_;
    reach_.clear();
    bool closable = false;
    while (!stack_.empty()) {
      const int x = stack_.back();
      stack_.pop_back();
      for (int y : adj_[x]) {
        if (y == start_) closable = true;
        if (y <= start_ || visited_[y] || mark_[y] == epoch_) continue;
        mark_[y] = epoch_;
        reach_.push_back(y);
        stack_.push_back(y);
      }
    }
    if (!closable) return -1;
    const int total = static_cast<int>(reach_.size());
    if (total <= 2) return total;
    // Greedy independent set in ascending degree order.
    std::sort(reach_.begin(), reach_.end(),
              [&](int a, int b) { return rank_[a] < rank_[b]; });
    int in_set = 0;
    for (int x : reach_) {
      bool free = true;
      for (int y : adj_[x]) {
        if (mark_[y] == epoch_ && in_set_[y] == epoch_) {
          free = false;
          break;
        }
      }
      if (free) {
        in_set_[x] = epoch_;
        in_set++;
      }
    }
    const int rest = total - in_set;
    return rest + std::min(in_set, rest + 1);
  }

  void Extend(int u) {
    if (out_of_time_) return;
    if ((++nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) {
      out_of_time_ = true;
      return;
    }
    const int len = static_cast<int>(path_.size());
    const int more = RemainingBound(u);
    if (more < 0 || len + more <= best_) return;
    for (int w : adj_[u]) {
      if (w == start_) {
        if (len >= 3 && len > best_) {
          best_ = len;
          witness_ = path_;
        }
      } else if (w > start_ && !visited_[w]) {
        visited_[w] = 1;
        path_.push_back(w);
        Extend(w);
        path_.pop_back();
        visited_[w] = 0;
      }
    }
  }

  const std::vector<std::vector<int>> &adj_;
  const int n_;
  const std::chrono::steady_clock::time_point deadline_;
  std::vector<char> visited_;
  std::vector<int> mark_;
  std::vector<int> in_set_;
  std::vector<int> rank_;
  std::vector<int> reach_;
  std::vector<int> stack_;
  std::vector<int> path_;
  std::vector<int> witness_;
  int epoch_ = 0;
  int start_ = 0;
  int best_ = 0;
  long long nodes_ = 0;
  bool out_of_time_ = false;
};

}  // namespace

CycleResult LongestSimpleCycle(const std::vector<std::vector<int>> &adjacency,
                               std::chrono::milliseconds budget) {
  std::vector<std::vector<int>> adj = adjacency;
  for (auto &nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return CycleSearch(adj, budget).Run();
}

CycleResult LongestSimpleCycle(const AbstractTriangulation &g,
                               std::chrono::milliseconds budget) {
  return LongestSimpleCycle(g.Adjacency(), budget);
}

}  // namespace polyiso
