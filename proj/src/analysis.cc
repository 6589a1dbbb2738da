#include "polyiso/analysis.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

#include "polyiso/error.h"

namespace polyiso {

namespace {

constexpr double kPi = std::numbers::pi;

int IndexIn(const Face &f, int v) {
  return static_cast<int>(std::find(f.begin(), f.end(), v) - f.begin());
}

// A partial census that can still end as one of the four named types.
bool StillPossible(int a, int b) {
  if (b > 4) return false;
  if (a >= 2 && b > 2) return false;
  return true;
}

class ApexSearch {
 public:
  // face_apex holds -1 for the faces to assign. With pair_bases, a face's
  // base edge must also be the base edge of the face across it.
  ApexSearch(const TriangleMesh &m, std::vector<int> faces, std::vector<VertexCensus> base,
             std::vector<int> face_apex, bool pair_bases)
      : m_(m), faces_(std::move(faces)), census_(std::move(base)),
        remaining_(m.NumVertices(), 0), choice_(faces_.size(), 0),
        apex_(std::move(face_apex)), pair_bases_(pair_bases) {
    for (int f : faces_)
      for (int v : m_.face(f)) remaining_[v]++;
  }

  bool Run() { return Assign(0); }
  const std::vector<int> &choice() const { return choice_; }

 private:
  static constexpr long kNodeLimit = 5'000'000;

  bool Assign(size_t i) {
    if (i == faces_.size()) return true;
    if (++nodes_ > kNodeLimit) return false;
    const Face &face = m_.face(faces_[i]);
    for (int v : face) remaining_[v]--;
    for (int c = 0; c < 3; c++) {
      Apply(face, c, +1);
      bool ok = true;
      for (int v : face) {
        const VertexCensus &s = census_[v];
        ok = ok && (remaining_[v] == 0 ? TypeOf(s.apex_count, s.base_count) != VertexType::kOther
                                       : StillPossible(s.apex_count, s.base_count));
      }
      if (ok && pair_bases_) ok = PairsWithNeighbors(faces_[i], c);
      if (ok) {
        choice_[i] = c;
        apex_[faces_[i]] = face[c];
        if (Assign(i + 1)) return true;
        apex_[faces_[i]] = -1;
      }
      Apply(face, c, -1);
    }
    for (int v : face) remaining_[v]++;
    return false;
  }

  bool PairsWithNeighbors(int f, int apex) const {
    for (int k = 0; k < 3; k++) {
      const int e = m_.FaceEdges(f)[k];
      const bool base_here = k == (apex + 1) % 3;
      for (int g : m_.edge(e).faces) {
        if (g == f || apex_[g] < 0) continue;
        const bool base_there = apex_[g] != m_.edge(e).v0 && apex_[g] != m_.edge(e).v1;
        if (base_here != base_there) return false;
      }
    }
    return true;
  }

  void Apply(const Face &face, int apex, int sign) {
    for (int k = 0; k < 3; k++) {
      (k == apex ? census_[face[k]].apex_count : census_[face[k]].base_count) += sign;
    }
  }

  const TriangleMesh &m_;
  std::vector<int> faces_;
  std::vector<VertexCensus> census_;
  std::vector<int> remaining_;
  std::vector<int> choice_;
  std::vector<int> apex_;
  bool pair_bases_;
  long nodes_ = 0;
};

std::vector<int> Bfs(const std::vector<std::vector<int>> &adj, int s) {
  std::vector<int> dist(adj.size(), -1);
  std::deque<int> q = {s};
  dist[s] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    for (int w : adj[u]) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        q.push_back(w);
      }
    }
  }
  return dist;
}

}  // namespace

const char *ToString(VertexType t) {
  switch (t) {
    case VertexType::kPyramidal: return "pyramidal";
    case VertexType::kSemipyramidal: return "semipyramidal";
    case VertexType::kBasic: return "basic";
    case VertexType::kSemibasic: return "semibasic";
    case VertexType::kOther: return "other";
  }
  return "?";
}

VertexType TypeOf(int a, int b) {
  if (a >= 1 && b == 0) return VertexType::kPyramidal;
  if (a >= 1 && b == 2) return VertexType::kSemipyramidal;
  if (a == 0 && b == 4) return VertexType::kBasic;
  if (a == 1 && b == 4) return VertexType::kSemibasic;
  return VertexType::kOther;
}

int VertexTypeReport::Count(VertexType t) const {
  return static_cast<int>(std::count_if(vertices.begin(), vertices.end(),
                                        [t](const VertexCensus &c) { return c.type == t; }));
}

std::vector<int> VertexTypeReport::VerticesOfType(VertexType t) const {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(vertices.size()); v++) {
    if (vertices[v].type == t) out.push_back(v);
  }
  return out;
}

VertexTypeReport ClassifyVertices(const TriangleMesh &m, double rel_tol) {
  RequireClosedValid(m);
  VertexTypeReport r;
  r.vertices.assign(m.NumVertices(), {});
  r.face_apex.assign(m.NumFaces(), -1);
  for (int f = 0; f < m.NumFaces(); f++) {
    const FaceShape s = ClassifyShape(m.Triangle(f), rel_tol);
    if (s.category == ShapeCategory::kScalene) {
      throw Error(ErrorCode::kNotIsosceles, "face " + std::to_string(f) + " is scalene");
    }
    if (s.category == ShapeCategory::kEquilateral) {
      r.equilateral_faces.push_back(f);
      continue;
    }
    const Face &face = m.face(f);
    r.face_apex[f] = face[s.apex_index];
    for (int k = 0; k < 3; k++) {
      (k == s.apex_index ? r.vertices[face[k]].apex_count : r.vertices[face[k]].base_count)++;
    }
  }
  r.equilateral_ambiguity = !r.equilateral_faces.empty();

  // Prefer assignments whose base angles also pair across edges.
  std::vector<int> choice(r.equilateral_faces.size(), 0);
  for (bool pair_bases : {true, false}) {
    ApexSearch search(m, r.equilateral_faces, r.vertices, r.face_apex, pair_bases);
    if (search.Run()) {
      choice = search.choice();
      break;
    }
  }
  for (size_t i = 0; i < r.equilateral_faces.size(); i++) {
    const int f = r.equilateral_faces[i];
    const int c = choice[i];
    const Face &face = m.face(f);
    r.face_apex[f] = face[c];
    for (int k = 0; k < 3; k++) {
      (k == c ? r.vertices[face[k]].apex_count : r.vertices[face[k]].base_count)++;
    }
  }
  r.well_behaved = true;
  for (VertexCensus &c : r.vertices) {
    c.type = TypeOf(c.apex_count, c.base_count);
    r.well_behaved = r.well_behaved && c.type != VertexType::kOther;
  }
  r.convex = IsConvex(m).convex;
  r.monohedral = CongruenceClasses(m, rel_tol).size() == 1;
  return r;
}

bool BaseAngleParity(const TriangleMesh &m, const VertexTypeReport &r) {
  for (const VertexCensus &c : r.vertices) {
    if (c.base_count % 2 != 0) return false;
  }
  for (int f = 0; f < m.NumFaces(); f++) {
    const Face &face = m.face(f);
    const int apex = IndexIn(face, r.face_apex[f]);
    const int e = m.FaceEdges(f)[(apex + 1) % 3];
    for (int g : m.edge(e).faces) {
      if (g == f) continue;
      const int g_apex = r.face_apex[g];
      if (g_apex == m.edge(e).v0 || g_apex == m.edge(e).v1) return false;
    }
  }
  return true;
}

std::optional<bool> FewBasesCheck(const VertexTypeReport &r) {
  if (!r.convex || !r.monohedral) return std::nullopt;
  for (const VertexCensus &c : r.vertices) {
    if (c.base_count >= 4 && c.apex_count >= 2) return false;
  }
  return true;
}

double TwoApexOuterAngle(double apex_angle) {
  const double c = std::cos(kPi - apex_angle);
  return std::acos(c * c);
}

double SemipyramidalDihedral(const TriangleMesh &m, int vertex, double rel_tol) {
  RequireClosedValid(m);
  if (vertex < 0 || vertex >= m.NumVertices()) {
    throw Error(ErrorCode::kWrongVertexType, "vertex " + std::to_string(vertex) + " out of range");
  }
  std::vector<int> apex_faces;
  int bases = 0;
  for (int f : m.VertexFaces(vertex)) {
    const FaceShape s = ClassifyShape(m.Triangle(f), rel_tol);
    if (s.category != ShapeCategory::kIsosceles) {
      throw Error(ErrorCode::kWrongVertexType,
                  "face " + std::to_string(f) + " at the vertex has no unique apex");
    }
    if (m.face(f)[s.apex_index] == vertex) {
      apex_faces.push_back(f);
      if (TriangleAngles(m.Triangle(f))[s.apex_index] <= kPi / 2) {
        throw Error(ErrorCode::kWrongVertexType, "apex angle is not obtuse");
      }
    } else {
      bases++;
    }
  }
  if (apex_faces.size() != 2 || bases != 2) {
    throw Error(ErrorCode::kWrongVertexType,
                "vertex has " + std::to_string(apex_faces.size()) + " apexes and " +
                    std::to_string(bases) + " bases, expected 2 and 2");
  }
  for (int e : m.FaceEdges(apex_faces[0])) {
    const auto &fs = m.edge(e).faces;
    const bool incident = m.edge(e).v0 == vertex || m.edge(e).v1 == vertex;
    if (incident && std::find(fs.begin(), fs.end(), apex_faces[1]) != fs.end()) {
      return EdgeDihedral(m, e);
    }
  }
  throw Error(ErrorCode::kWrongVertexType, "the two apex faces do not share an edge");
}

bool IsDominatingSet(const std::vector<std::vector<int>> &adj, const std::vector<int> &set) {
  std::vector<char> covered(adj.size(), 0);
  for (int s : set) {
    covered[s] = 1;
    for (int w : adj[s]) covered[w] = 1;
  }
  return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

std::vector<int> DominatingSetFromPyramidal(const TriangleMesh &m, const VertexTypeReport &r) {
  std::vector<int> set = r.VerticesOfType(VertexType::kPyramidal);
  const std::vector<int> semi = r.VerticesOfType(VertexType::kSemipyramidal);
  set.insert(set.end(), semi.begin(), semi.end());
  std::sort(set.begin(), set.end());
  if (set.empty()) {
    throw Error(ErrorCode::kDominationFailed, "no pyramidal or semipyramidal vertices");
  }
  if (!IsDominatingSet(m.Adjacency(), set)) {
    throw Error(ErrorCode::kDominationFailed,
                "pyramidal and semipyramidal vertices do not dominate the graph");
  }
  return set;
}

std::vector<int> Eccentricities(const std::vector<std::vector<int>> &adj) {
  std::vector<int> ecc(adj.size(), 0);
  for (size_t s = 0; s < adj.size(); s++) {
    const std::vector<int> d = Bfs(adj, static_cast<int>(s));
    for (int x : d) {
      if (x < 0) {
        ecc[s] = -1;
        break;
      }
      ecc[s] = std::max(ecc[s], x);
    }
  }
  return ecc;
}

int GraphDiameter(const std::vector<std::vector<int>> &adj) {
  int best = 0;
  for (int e : Eccentricities(adj)) {
    if (e < 0) return -1;
    best = std::max(best, e);
  }
  return best;
}

bool LayerBoundCheck(const std::vector<std::vector<int>> &adj, const std::vector<int> &set) {
  if (set.empty()) return false;
  for (int s : set) {
    const std::vector<int> d = Bfs(adj, s);
    if (std::count(d.begin(), d.end(), -1) > 0) return false;
    const int layers = *std::max_element(d.begin(), d.end()) + 1;
    if (layers > 3 * static_cast<int>(set.size())) return false;
  }
  return true;
}

namespace {

class DominationSearch {
 public:
  DominationSearch(const std::vector<std::vector<int>> &adj, std::chrono::milliseconds budget)
      : adj_(adj), n_(static_cast<int>(adj.size())), cover_(n_, 0),
        deadline_(std::chrono::steady_clock::now() + budget) {
    for (const auto &nb : adj_) max_closed_ = std::max(max_closed_, static_cast<int>(nb.size()) + 1);
  }

  DominatingSetResult Run() {
    best_ = Greedy();
    undominated_ = n_;
    Search();
    DominatingSetResult r;
    r.vertices = best_;
    std::sort(r.vertices.begin(), r.vertices.end());
    r.exact = !timed_out_;
    return r;
  }

 private:
  std::vector<int> Greedy() const {
    std::vector<char> covered(n_, 0);
    std::vector<int> out;
    int left = n_;
    while (left > 0) {
      int pick = -1, gain = -1;
      for (int v = 0; v < n_; v++) {
        int g = !covered[v];
        for (int w : adj_[v]) g += !covered[w];
        if (g > gain) gain = g, pick = v;
      }
      out.push_back(pick);
      if (!covered[pick]) covered[pick] = 1, left--;
      for (int w : adj_[pick])
        if (!covered[w]) covered[w] = 1, left--;
    }
    return out;
  }

  void Add(int v, int sign) {
    for (int w : Closed(v)) {
      if (sign > 0 && cover_[w]++ == 0) undominated_--;
      if (sign < 0 && --cover_[w] == 0) undominated_++;
    }
  }

  std::vector<int> Closed(int v) const {
    std::vector<int> c = adj_[v];
    c.push_back(v);
    return c;
  }

  void Search() {
    if (timed_out_) return;
    if ((++nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > deadline_) {
      timed_out_ = true;
      return;
    }
    if (undominated_ == 0) {
      if (current_.size() < best_.size()) best_ = current_;
      return;
    }
    const int lower = (undominated_ + max_closed_ - 1) / max_closed_;
    if (static_cast<int>(current_.size()) + lower >= static_cast<int>(best_.size())) return;
    // Undominated vertex with the fewest ways to be dominated.
    int u = -1;
    size_t fewest = SIZE_MAX;
    for (int v = 0; v < n_; v++) {
      if (cover_[v] == 0 && adj_[v].size() + 1 < fewest) fewest = adj_[v].size() + 1, u = v;
    }
    std::vector<int> options = Closed(u);
    std::vector<std::pair<int, int>> ranked;
    for (int w : options) {
      int gain = 0;
      for (int x : Closed(w)) gain += cover_[x] == 0;
      ranked.push_back({-gain, w});
    }
    std::sort(ranked.begin(), ranked.end());
    for (const auto &[neg_gain, w] : ranked) {
      current_.push_back(w);
      Add(w, +1);
      Search();
      Add(w, -1);
      current_.pop_back();
      if (timed_out_) return;
    }
  }

  const std::vector<std::vector<int>> &adj_;
  int n_;
  std::vector<int> cover_;
  int undominated_ = 0;
  int max_closed_ = 1;
  std::vector<int> current_, best_;
  long nodes_ = 0;
  bool timed_out_ = false;
  std::chrono::steady_clock::time_point deadline_;
};

}  // namespace

DominatingSetResult MinDominatingSet(const std::vector<std::vector<int>> &adj,
                                     std::chrono::milliseconds budget) {
  if (adj.empty()) return {{}, true};
  return DominationSearch(adj, budget).Run();
}

std::optional<int> ScaleneWitness(const TriangleMesh &m, double rel_tol) {
  for (int f = 0; f < m.NumFaces(); f++) {
    if (ClassifyShape(m.Triangle(f), rel_tol).category == ShapeCategory::kScalene) return f;
  }
  return std::nullopt;
}

AuditReport Audit(const TriangleMesh &m, const AuditOptions &opt) {
  RequireClosedValid(m);
  AuditReport r;
  r.vertices = m.NumVertices();
  r.edges = m.NumEdges();
  r.faces = m.NumFaces();
  r.convex = IsConvex(m).convex;
  r.congruence_classes = static_cast<int>(CongruenceClasses(m, opt.rel_tol).size());
  r.monohedral = r.congruence_classes == 1;
  r.scalene_face = ScaleneWitness(m, opt.rel_tol);
  r.isosceles = !r.scalene_face.has_value();

  r.sharpness_min = 1e300;
  r.sharpness_max = -1e300;
  for (int f = 0; f < m.NumFaces(); f++) {
    const double s = Sharpness(m, f);
    r.sharpness_min = std::min(r.sharpness_min, s);
    r.sharpness_max = std::max(r.sharpness_max, s);
  }
  r.total_defect = TotalAngularDefect(m);
  if (r.convex) {
    const GaussMap g = ComputeGaussMap(m);
    double worst = 0;
    for (int e = 0; e < m.NumEdges(); e++) {
      worst = std::max(worst, std::abs(g.arcs[e] + EdgeDihedral(m, e) - kPi));
    }
    r.gauss_residual = worst;
  }
  for (int f = 0; f < m.NumFaces(); f++) {
    const PlanarTriangle t = m.Triangle(f);
    const FaceShape s = ClassifyShape(t, opt.rel_tol);
    if (s.category != ShapeCategory::kIsosceles) continue;
    const double a = TriangleAngles(t)[s.apex_index];
    r.apex_angle_min = std::min(r.apex_angle_min.value_or(a), a);
    r.apex_angle_max = std::max(r.apex_angle_max.value_or(a), a);
  }

  const auto &adj = m.Adjacency();
  if (r.isosceles) {
    r.types = ClassifyVertices(m, opt.rel_tol);
    r.base_angle_parity = BaseAngleParity(m, *r.types);
    r.few_bases = FewBasesCheck(*r.types);
    try {
      r.dominating_set = DominatingSetFromPyramidal(m, *r.types);
      r.layer_bound = LayerBoundCheck(adj, *r.dominating_set);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kDominationFailed) throw;
      r.domination_error = e.what();
    }
  }
  r.diameter = GraphDiameter(adj);
  r.min_dominating_set = MinDominatingSet(adj, opt.domination_budget);
  return r;
}

}  // namespace polyiso
