#include "polyiso/hull.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>

#include "polyiso/error.h"

namespace polyiso {

std::vector<Face> CanonicalFaces(std::vector<Face> faces) {
  for (Face &f : faces) {
    const int k = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
    std::rotate(f.begin(), f.begin() + k, f.end());
  }
  std::sort(faces.begin(), faces.end());
  return faces;
}

namespace {

uint64_t DirectedKey(int a, int b) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
         static_cast<uint32_t>(b);
}

struct HullFace {
  Face v{};
  Vec3 normal;
  double offset = 0.0;
  bool alive = true;
  std::vector<int> outside;  // points whose conflict face this is
};

class IncrementalHull {
 public:
  IncrementalHull(std::span<const Point3> pts, double eps)
      : pts_(pts), eps_(eps), conflict_(pts.size(), -1) {}

  void Build();
  HullResult Finish() const;

 private:
  double Dist(int face, int p) const {
    const HullFace &f = faces_[face];
    return Dot(f.normal, pts_[p]) - f.offset;
  }
  int AddFace(int a, int b, int c);
  void KillFace(int f);
  // Visible face with the largest distance among candidates, or -1.
  int BestVisible(int p, const std::vector<int> &candidates) const;
  void Insert(int p);

  std::span<const Point3> pts_;
  double eps_;
  std::vector<HullFace> faces_;
  std::unordered_map<uint64_t, int> edge_face_;  // directed edge -> face
  std::vector<int> conflict_;                    // point -> face or -1
  std::vector<bool> inserted_;
};

int IncrementalHull::AddFace(int a, int b, int c) {
  HullFace f;
  f.v = {a, b, c};
  const Vec3 n = Cross(pts_[b] - pts_[a], pts_[c] - pts_[a]);
  f.normal = n / Norm(n);
  f.offset = Dot(f.normal, pts_[a]);
  const int id = static_cast<int>(faces_.size());
  faces_.push_back(std::move(f));
  edge_face_[DirectedKey(a, b)] = id;
  edge_face_[DirectedKey(b, c)] = id;
  edge_face_[DirectedKey(c, a)] = id;
  return id;
}

void IncrementalHull::KillFace(int id) {
  HullFace &f = faces_[id];
  f.alive = false;
  for (int k = 0; k < 3; k++) {
    auto it = edge_face_.find(DirectedKey(f.v[k], f.v[(k + 1) % 3]));
    if (it != edge_face_.end() && it->second == id) edge_face_.erase(it);
  }
}

int IncrementalHull::BestVisible(int p, const std::vector<int> &candidates) const {
  int best = -1;
  double best_d = eps_;
  for (int f : candidates) {
    if (!faces_[f].alive) continue;
    const double d = Dist(f, p);
    if (d > best_d) {
      best_d = d;
      best = f;
    }
  }
  return best;
}

void IncrementalHull::Build() {
  const int n = static_cast<int>(pts_.size());
  inserted_.assign(n, false);

  // Initial simplex: extreme in x, then farthest point, farthest from the
  // line, farthest from the plane. Ties go to the lower index.
  int i0 = 0;
  for (int i = 1; i < n; i++) {
    if (pts_[i].x < pts_[i0].x) i0 = i;
  }
  int i1 = -1;
  double best = 0.0;
  for (int i = 0; i < n; i++) {
    const double d = Distance(pts_[i], pts_[i0]);
    if (d > best) { best = d; i1 = i; }
  }
  if (i1 < 0 || best <= eps_) {
    throw Error(ErrorCode::kDegenerateInput, "all points coincide");
  }
  const Vec3 dir = (pts_[i1] - pts_[i0]) / best;
  int i2 = -1;
  best = 0.0;
  for (int i = 0; i < n; i++) {
    const Vec3 r = pts_[i] - pts_[i0];
    const double d = Norm(r - dir * Dot(r, dir));
    if (d > best) { best = d; i2 = i; }
  }
  if (i2 < 0 || best <= eps_) {
    throw Error(ErrorCode::kDegenerateInput, "all points are collinear");
  }
  const Vec3 pn = Cross(pts_[i1] - pts_[i0], pts_[i2] - pts_[i0]);
  const Vec3 unit_pn = pn / Norm(pn);
  int i3 = -1;
  best = 0.0;
  for (int i = 0; i < n; i++) {
    const double d = std::abs(Dot(unit_pn, pts_[i] - pts_[i0]));
    if (d > best) { best = d; i3 = i; }
  }
  if (i3 < 0 || best <= eps_) {
    throw Error(ErrorCode::kDegenerateInput, "all points are coplanar");
  }

  if (Dot(unit_pn, pts_[i3] - pts_[i0]) > 0) std::swap(i1, i2);
  AddFace(i0, i1, i2);
  AddFace(i0, i3, i1);
  AddFace(i1, i3, i2);
  AddFace(i2, i3, i0);
  for (int i : {i0, i1, i2, i3}) inserted_[i] = true;

  std::vector<int> all = {0, 1, 2, 3};
  for (int p = 0; p < n; p++) {
    if (inserted_[p]) continue;
    const int f = BestVisible(p, all);
    conflict_[p] = f;
    if (f >= 0) faces_[f].outside.push_back(p);
  }

  for (int p = 0; p < n; p++) {
    if (!inserted_[p] && conflict_[p] >= 0) Insert(p);
  }
}

void IncrementalHull::Insert(int p) {
  // Visible region: connected faces around the conflict face.
  std::vector<int> visible = {conflict_[p]};
  std::vector<char> is_visible(faces_.size(), 0);
  is_visible[conflict_[p]] = 1;
  for (size_t i = 0; i < visible.size(); i++) {
    const HullFace &f = faces_[visible[i]];
    for (int k = 0; k < 3; k++) {
      const int twin = edge_face_.at(DirectedKey(f.v[(k + 1) % 3], f.v[k]));
      if (!is_visible[twin] && Dist(twin, p) > eps_) {
        is_visible[twin] = 1;
        visible.push_back(twin);
      }
    }
  }

  std::vector<std::pair<int, int>> horizon;
  for (int id : visible) {
    const HullFace &f = faces_[id];
    for (int k = 0; k < 3; k++) {
      const int a = f.v[k], b = f.v[(k + 1) % 3];
      if (!is_visible[edge_face_.at(DirectedKey(b, a))]) horizon.emplace_back(a, b);
    }
  }

  std::vector<int> orphans;
  for (int id : visible) {
    for (int q : faces_[id].outside) {
      if (q != p) orphans.push_back(q);
    }
    faces_[id].outside.clear();
    KillFace(id);
  }

  std::vector<int> created;
  for (const auto &[a, b] : horizon) created.push_back(AddFace(a, b, p));
  inserted_[p] = true;
  conflict_[p] = -1;

  std::sort(orphans.begin(), orphans.end());
  for (int q : orphans) {
    int f = BestVisible(q, created);
    if (f < 0) {
      std::vector<int> alive;
      for (int i = 0; i < static_cast<int>(faces_.size()); i++) {
        if (faces_[i].alive) alive.push_back(i);
      }
      f = BestVisible(q, alive);
    }
    conflict_[q] = f;
    if (f >= 0) faces_[f].outside.push_back(q);
  }
}

HullResult IncrementalHull::Finish() const {
  const int nf = static_cast<int>(faces_.size());
  std::vector<int> alive;
  for (int i = 0; i < nf; i++) {
    if (faces_[i].alive) alive.push_back(i);
  }

  // Merge coplanar neighbors into patches (union-find).
  std::vector<int> parent(nf);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int id : alive) {
    const HullFace &f = faces_[id];
    for (int k = 0; k < 3; k++) {
      const int a = f.v[k], b = f.v[(k + 1) % 3];
      const int twin = edge_face_.at(DirectedKey(b, a));
      if (twin < id) continue;
      const HullFace &g = faces_[twin];
      const int fo = f.v[(k + 2) % 3];
      int go = -1;
      for (int j = 0; j < 3; j++) {
        if (g.v[j] != a && g.v[j] != b) go = g.v[j];
      }
      if (std::abs(Dist(id, go)) <= eps_ && std::abs(Dist(twin, fo)) <= eps_) {
        parent[find(id)] = find(twin);
      }
    }
  }

  // Boundary loops of each patch, counterclockwise from outside.
  std::unordered_map<int, std::unordered_map<int, int>> next_in_patch;
  std::vector<int> roots;
  for (int id : alive) {
    const int r = find(id);
    const HullFace &f = faces_[id];
    for (int k = 0; k < 3; k++) {
      const int a = f.v[k], b = f.v[(k + 1) % 3];
      if (find(edge_face_.at(DirectedKey(b, a))) != r) {
        if (next_in_patch.find(r) == next_in_patch.end()) roots.push_back(r);
        next_in_patch[r][a] = b;
      }
    }
  }
  std::sort(roots.begin(), roots.end());

  std::vector<std::vector<int>> loops;
  for (int r : roots) {
    const auto &next = next_in_patch.at(r);
    int start = next.begin()->first;
    for (const auto &[a, b] : next) start = std::min(start, a);
    std::vector<int> loop = {start};
    for (int v = next.at(start); v != start; v = next.at(v)) {
      loop.push_back(v);
      if (loop.size() > next.size()) {
        throw Error(ErrorCode::kDegenerateInput, "hull patch boundary is not a simple loop");
      }
    }
    loops.push_back(std::move(loop));
  }

  // A boundary vertex that is collinear with its loop neighbors in every
  // patch it touches sits in the middle of a hull edge: drop it.
  std::vector<int> corner_in(pts_.size(), 0), seen_in(pts_.size(), 0);
  for (const auto &loop : loops) {
    const int m = static_cast<int>(loop.size());
    for (int i = 0; i < m; i++) {
      const Point3 &prev = pts_[loop[(i + m - 1) % m]];
      const Point3 &cur = pts_[loop[i]];
      const Point3 &next = pts_[loop[(i + 1) % m]];
      const Vec3 d = next - prev;
      const double off_line = Norm(Cross(cur - prev, d)) / Norm(d);
      seen_in[loop[i]]++;
      if (off_line > eps_) corner_in[loop[i]]++;
    }
  }

  HullResult result;
  result.vertex_map.assign(pts_.size(), HullResult::kNotAVertex);
  std::vector<Point3> verts;
  for (size_t i = 0; i < pts_.size(); i++) {
    if (seen_in[i] > 0 && corner_in[i] > 0) {
      result.vertex_map[i] = static_cast<int>(verts.size());
      verts.push_back(pts_[i]);
    }
  }

  std::vector<Face> out;
  for (const auto &loop : loops) {
    std::vector<int> poly;
    for (int v : loop) {
      if (result.vertex_map[v] != HullResult::kNotAVertex) poly.push_back(v);
    }
    if (poly.size() < 3) continue;
    const auto lowest = std::min_element(poly.begin(), poly.end());
    std::rotate(poly.begin(), lowest, poly.end());
    for (size_t i = 1; i + 1 < poly.size(); i++) {
      out.push_back({result.vertex_map[poly[0]], result.vertex_map[poly[i]],
                     result.vertex_map[poly[i + 1]]});
    }
  }
  result.mesh = TriangleMesh(std::move(verts), CanonicalFaces(std::move(out)));
  return result;
}

}  // namespace

HullResult ConvexHull3(std::span<const Point3> points, double tol) {
  if (points.size() < 4) {
    throw Error(ErrorCode::kDegenerateInput, "hull needs at least four points");
  }
  for (const Point3 &p : points) {
    if (!IsFinite(p)) throw Error(ErrorCode::kDegenerateInput, "non-finite point");
  }
  Point3 lo = points[0], hi = points[0];
  for (const Point3 &p : points) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const double eps = tol * Distance(lo, hi);
  IncrementalHull hull(points, eps);
  hull.Build();
  return hull.Finish();
}

}  // namespace polyiso
