#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "fixtures.h"
#include "polyiso/error.h"
#include "polyiso/hull.h"
#include "polyiso/mesh.h"

using namespace polyiso;
using namespace fixtures;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode CodeOf(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kPreconditionFailed;
}

// Dihedral from outward normals of the two faces at edge e.
double NormalDihedralOracle(const TriangleMesh &m, int e) {
  const MeshEdge &ed = m.edge(e);
  const Vec3 n1 = m.Triangle(ed.faces[0]).Normal().vec();
  const Vec3 n2 = m.Triangle(ed.faces[1]).Normal().vec();
  return kPi - std::acos(std::clamp(Dot(n1, n2), -1.0, 1.0));
}

}  // namespace

TEST_CASE("validate: reference solids") {
  for (const TriangleMesh &m : {Tetrahedron(), Octahedron(), Cube(), CubeCornerTetrahedron()}) {
    const ValidationReport r = Validate(m);
    CHECK(r.Valid());
    CHECK(r.euler_characteristic == 2);
    CHECK(m.NumVertices() - m.NumEdges() + m.NumFaces() == 2);
  }
  CHECK(Tetrahedron().NumEdges() == 6);
}

TEST_CASE("validate: open tetrahedron") {
  const TriangleMesh t = Tetrahedron();
  std::vector<Face> f = t.faces();
  f.pop_back();
  const ValidationReport r = Validate(TriangleMesh(t.vertices(), f));
  CHECK_FALSE(r.Valid());
  CHECK(r.boundary_edges.size() == 3);
  CHECK_FALSE(r.ClosedManifold());
  CHECK(CodeOf([&] { RequireClosedValid(TriangleMesh(t.vertices(), f)); }) ==
        ErrorCode::kTopologyError);
}

TEST_CASE("validate: octahedron with one flipped face") {
  const TriangleMesh o = Octahedron();
  std::vector<Face> f = o.faces();
  std::swap(f[3][1], f[3][2]);
  const TriangleMesh flipped(o.vertices(), f);
  // Oracle: count edges whose two uses run in the same direction.
  std::map<std::pair<int, int>, int> directed;
  for (const Face &face : f)
    for (int k = 0; k < 3; k++) directed[{face[k], face[(k + 1) % 3]}]++;
  int same_direction = 0;
  for (const auto &[e, n] : directed) if (n > 1) same_direction++;
  CHECK(same_direction == 3);
  const ValidationReport r = Validate(flipped);
  CHECK(r.orientation_conflicts.size() == 3);
  CHECK(r.ClosedManifold());
  CHECK_FALSE(r.Valid());
}

TEST_CASE("validate: other defects") {
  const TriangleMesh t = Tetrahedron();
  std::vector<Point3> v = t.vertices();
  v.push_back({5, 5, 5});
  CHECK(Validate(TriangleMesh(v, t.faces())).unreferenced_vertices == std::vector<int>{4});

  std::vector<Face> f = t.faces();
  f.push_back(f[0]);
  f.push_back({f[0][0], f[0][2], f[0][1]});
  CHECK_FALSE(Validate(TriangleMesh(t.vertices(), f)).nonmanifold_edges.empty());

  std::vector<Face> rep = t.faces();
  rep[0] = {0, 0, 1};
  CHECK(Validate(TriangleMesh(t.vertices(), rep)).repeated_index_faces == std::vector<int>{0});

  std::vector<Point3> dup = t.vertices();
  dup[3] = dup[0];
  CHECK(Validate(TriangleMesh(dup, t.faces())).duplicate_vertices.size() == 1);

  CHECK(CodeOf([&] { TriangleMesh(t.vertices(), {{0, 1, 7}}); }) == ErrorCode::kTopologyError);
  CHECK(CodeOf([&] {
          TriangleMesh({{0, 0, 0}, {1, 0, 0}, {0, std::nan(""), 0}}, {{0, 1, 2}});
        }) == ErrorCode::kDegenerateInput);
}

TEST_CASE("edge table and adjacency") {
  const TriangleMesh o = Octahedron();
  CHECK(o.NumEdges() == 12);
  for (const MeshEdge &e : o.edges()) {
    CHECK(e.v0 < e.v1);
    CHECK(e.faces.size() == 2);
  }
  CHECK(o.FindEdge(0, 1) == -1);
  CHECK(o.FindEdge(0, 2) >= 0);
  CHECK(o.FindEdge(2, 0) == o.FindEdge(0, 2));
  CHECK(o.Adjacency()[4] == std::vector<int>{0, 1, 2, 3});
  for (int f = 0; f < o.NumFaces(); f++) {
    for (int k = 0; k < 3; k++) {
      const MeshEdge &e = o.edge(o.FaceEdges(f)[k]);
      const int a = o.face(f)[k], b = o.face(f)[(k + 1) % 3];
      CHECK(std::min(a, b) == e.v0);
      CHECK(std::max(a, b) == e.v1);
    }
  }
  CHECK(o.VertexFaces(0).size() == 4);
}

TEST_CASE("convexity: examples and witnesses") {
  CHECK(IsConvex(Octahedron()).convex);
  CHECK(IsConvex(Tetrahedron()).convex);
  const ConvexityResult dent = IsConvex(DentedOctahedron(-0.5));
  CHECK_FALSE(dent.convex);
  CHECK(dent.witness == ConvexityResult::Witness::kReflexEdge);
  CHECK(dent.value > kPi);
  // Flat diagonals of the cube are rejected in strict mode only.
  const ConvexityResult strict = IsConvex(Cube());
  CHECK_FALSE(strict.convex);
  CHECK(strict.value == doctest::Approx(kPi));
  CHECK(IsConvex(Cube(), 1e-9, ConvexityMode::kWeak).convex);

  const TriangleMesh t = Tetrahedron();
  std::vector<Face> f = t.faces();
  f.pop_back();
  CHECK(CodeOf([&] { IsConvex(TriangleMesh(t.vertices(), f)); }) == ErrorCode::kTopologyError);
}

TEST_CASE("convexity agrees with the hull oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; trial++) {
    const HullResult h = ConvexHull3(RandomSpherePoints(rng, 30));
    CHECK(IsConvex(h.mesh).convex);
    // Pushing one hull vertex toward the centroid makes a dent; the hull of
    // the dented vertex set no longer matches the mesh.
    std::vector<Point3> v = h.mesh.vertices();
    v[trial % v.size()] *= 0.5;
    const TriangleMesh dented(v, h.mesh.faces());
    if (!Validate(dented).Valid() || !SelfIntersections(dented).empty()) continue;
    const bool convex = IsConvex(dented).convex;
    const HullResult h2 = ConvexHull3(v);
    const bool equals_hull =
        h2.mesh.NumVertices() == dented.NumVertices() &&
        CanonicalFaces(h2.mesh.faces()) == CanonicalFaces(dented.faces());
    CHECK(convex == equals_hull);
  }
  for (double z : {-0.5, 0.5, 1.0, 2.0}) {
    const TriangleMesh m = DentedOctahedron(z);
    const HullResult h = ConvexHull3(m.vertices());
    const bool equals_hull = h.mesh.NumVertices() == m.NumVertices() &&
                             CanonicalFaces(h.mesh.faces()) == CanonicalFaces(m.faces());
    CHECK(IsConvex(m).convex == equals_hull);
    CHECK(IsConvex(m).convex == (z > 0));
  }
}

TEST_CASE("sharpness examples") {
  const TriangleMesh t = Tetrahedron();
  for (int f = 0; f < 4; f++) {
    CHECK(Sharpness(t, f) == doctest::Approx(kPi - std::acos(1.0 / 3)).epsilon(1e-12));
    CHECK(Sharpness(t, f) == doctest::Approx(1.91063).epsilon(1e-5));
  }
  const TriangleMesh o = Octahedron();
  for (int f = 0; f < 8; f++) {
    CHECK(Sharpness(o, f) == doctest::Approx(kPi - std::acos(-1.0 / 3)).epsilon(1e-12));
    CHECK(Sharpness(o, f) == doctest::Approx(1.23096).epsilon(1e-5));
  }
  // Dense sphere samples: every face is almost flat with its neighbors.
  std::mt19937_64 rng(12);
  double prev = kPi;
  for (int n : {50, 500, 4000}) {
    const HullResult h = ConvexHull3(RandomSpherePoints(rng, n));
    std::vector<double> s;
    for (int f = 0; f < h.mesh.NumFaces(); f++) s.push_back(Sharpness(h.mesh, f));
    std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
    const double median_sharpness = s[s.size() / 2];
    CHECK(median_sharpness < prev);
    prev = median_sharpness;
  }
  CHECK(prev < 0.15);
}

TEST_CASE("edge dihedral matches the normal oracle on convex meshes") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; trial++) {
    const HullResult h = ConvexHull3(RandomPoints(rng, 25));
    for (int e = 0; e < h.mesh.NumEdges(); e++) {
      CHECK(EdgeDihedral(h.mesh, e) == doctest::Approx(NormalDihedralOracle(h.mesh, e)).epsilon(1e-9));
    }
  }
}

TEST_CASE("gauss map examples") {
  const GaussMap g = ComputeGaussMap(Octahedron());
  const double s = 1 / std::sqrt(3.0);
  std::set<std::array<int, 3>> signs;
  for (const UnitVec &n : g.normals) {
    CHECK(std::abs(n.x()) == doctest::Approx(s));
    CHECK(std::abs(n.y()) == doctest::Approx(s));
    CHECK(std::abs(n.z()) == doctest::Approx(s));
    signs.insert({n.x() > 0, n.y() > 0, n.z() > 0});
  }
  CHECK(signs.size() == 8);

  const TriangleMesh cc = CubeCornerTetrahedron();
  const GaussMap gc = ComputeGaussMap(cc);
  int equilateral = -1;
  for (int f = 0; f < 4; f++) {
    const Face &face = cc.face(f);
    if (std::find(face.begin(), face.end(), 0) == face.end()) equilateral = f;
  }
  REQUIRE(equilateral >= 0);
  for (int e = 0; e < cc.NumEdges(); e++) {
    const MeshEdge &ed = cc.edge(e);
    const bool touches_equilateral = ed.faces[0] == equilateral || ed.faces[1] == equilateral;
    CHECK(gc.arcs[e] == doctest::Approx(touches_equilateral ? kPi - kPhi : kPi / 2).epsilon(1e-12));
  }
  CHECK(CodeOf([] { ComputeGaussMap(DentedOctahedron(-0.5)); }) == ErrorCode::kConvexityRequired);
}

TEST_CASE("gauss arc plus dihedral equals pi on random convex meshes") {
  std::mt19937_64 rng(14);
  double worst = 0.0;
  for (int trial = 0; trial < 50; trial++) {
    const HullResult h = ConvexHull3(RandomPoints(rng, 40));
    const GaussMap g = ComputeGaussMap(h.mesh);
    for (int f = 0; f < h.mesh.NumFaces(); f++) {
      CHECK(std::abs(Norm(g.normals[f].vec()) - 1) < 1e-12);
    }
    for (int e = 0; e < h.mesh.NumEdges(); e++) {
      worst = std::max(worst, std::abs(g.arcs[e] + EdgeDihedral(h.mesh, e) - kPi));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("angular defect") {
  const TriangleMesh t = Tetrahedron();
  for (int v = 0; v < 4; v++) CHECK(AngularDefect(t, v) == doctest::Approx(kPi));
  CHECK(TotalAngularDefect(t) == doctest::Approx(4 * kPi).epsilon(1e-12));
  const TriangleMesh o = Octahedron();
  for (int v = 0; v < 6; v++) CHECK(AngularDefect(o, v) == doctest::Approx(2 * kPi / 3));
  CHECK(TotalAngularDefect(o) == doctest::Approx(4 * kPi).epsilon(1e-12));
  CHECK(std::abs(TotalAngularDefect(DentedOctahedron(-0.5)) - 4 * kPi) < 1e-9);

  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 100; trial++) {
    const HullResult h = ConvexHull3(RandomPoints(rng, 20));
    CHECK(std::abs(TotalAngularDefect(h.mesh) - 4 * kPi) < 1e-9);
  }
}

TEST_CASE("angular defect can be negative on non-convex meshes") {
  // Star-shaped bumpy sphere: radii alternate so that some vertices become
  // saddles.
  std::mt19937_64 rng(16);
  const HullResult h = ConvexHull3(RandomSpherePoints(rng, 200));
  std::vector<Point3> v = h.mesh.vertices();
  std::uniform_real_distribution<double> u(0.7, 1.3);
  for (Point3 &p : v) p *= u(rng);
  const TriangleMesh bumpy(v, h.mesh.faces());
  double min_defect = 1e9;
  for (int i = 0; i < bumpy.NumVertices(); i++) min_defect = std::min(min_defect, AngularDefect(bumpy, i));
  CHECK(min_defect < 0);
  CHECK(std::abs(TotalAngularDefect(bumpy) - 4 * kPi) < 1e-9);
}

TEST_CASE("congruence classes") {
  const auto cc = CongruenceClasses(CubeCornerTetrahedron(), 1e-9);
  CHECK(cc.size() == 2);
  std::vector<size_t> sizes = {cc[0].size(), cc[1].size()};
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<size_t>{1, 3});
  CHECK(CongruenceClasses(Octahedron(), 1e-9).size() == 1);
  CHECK(CongruenceClasses(Cube(), 1e-9).size() == 1);
  const auto scal = CongruenceClasses(ConvexHull3(std::vector<Point3>{
      {0, 0, 0}, {1, 0, 0}, {0, 2, 0}, {0, 0, 3}}).mesh, 1e-9);
  CHECK(scal.size() == 4);
  CHECK(scal[0] == std::vector<int>{0});
}

TEST_CASE("self intersections") {
  CHECK(SelfIntersections(Octahedron()).empty());
  CHECK(SelfIntersections(Cube()).empty());
  CHECK(SelfIntersections(DentedOctahedron(-0.5)).empty());
  // Inverted but not crossing: the two cones nest.
  CHECK(SelfIntersections(DentedOctahedron(-1.5)).empty());

  // Two overlapping tetrahedra sharing vertex 0.
  {
    const TriangleMesh t = Tetrahedron();
    const Rotation3 r = Rotation3::AboutAxis({0, 0, 1}, 0.3);
    std::vector<Point3> v = t.vertices();
    std::vector<Face> f = t.faces();
    for (int i = 1; i < 4; i++) v.push_back(t.vertex(0) + r.Apply(t.vertex(i) - t.vertex(0)));
    auto remap = [](int i) { return i == 0 ? 0 : i + 3; };
    for (const Face &face : t.faces()) f.push_back({remap(face[0]), remap(face[1]), remap(face[2])});
    CHECK_FALSE(SelfIntersections(TriangleMesh(v, f)).empty());
  }

  // Two interpenetrating tetrahedra in one vertex/face list.
  const TriangleMesh t = Tetrahedron();
  std::vector<Point3> v = t.vertices();
  std::vector<Face> f = t.faces();
  for (const Point3 &p : t.vertices()) v.push_back(p * 0.8 + Point3{0.5, 0.3, 0.1});
  for (const Face &face : t.faces()) f.push_back({face[0] + 4, face[1] + 4, face[2] + 4});
  const auto hits = SelfIntersections(TriangleMesh(v, f));
  CHECK_FALSE(hits.empty());
  for (const auto &[a, b] : hits) {
    CHECK(a < b);
    CHECK(a < 4);
    CHECK(b >= 4);
  }
  CHECK(std::is_sorted(hits.begin(), hits.end()));

  // Disjoint copies do not intersect.
  std::vector<Point3> v2 = t.vertices();
  for (const Point3 &p : t.vertices()) v2.push_back(p + Point3{5, 0, 0});
  CHECK(SelfIntersections(TriangleMesh(v2, f)).empty());
}

TEST_CASE("triangle distance") {
  const std::array<Point3, 3> a = {{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}};
  const std::array<Point3, 3> above = {{{0, 0, 2}, {1, 0, 2}, {0, 1, 2}}};
  CHECK(TriangleDistance(a, above) == doctest::Approx(2.0));
  const std::array<Point3, 3> piercing = {{{0.2, 0.2, -1}, {0.2, 0.2, 1}, {3, 3, 0.5}}};
  CHECK(TriangleDistance(a, piercing) == doctest::Approx(0.0));
  const std::array<Point3, 3> edge_gap = {{{2, 0, 0}, {3, 0, 0}, {2, 1, 0}}};
  CHECK(TriangleDistance(a, edge_gap) == doctest::Approx(1.0));
  // Brute-force oracle on random pairs: sample points of both triangles.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 50; trial++) {
    auto p = RandomPoints(rng, 6, 2.0);
    const std::array<Point3, 3> t1 = {p[0], p[1], p[2]};
    std::array<Point3, 3> t2 = {p[3], p[4], p[5]};
    for (Point3 &q : t2) q += Point3{1.5, 0, 0};
    const double d = TriangleDistance(t1, t2);
    double sampled = 1e9;
    for (int i = 0; i < 4000; i++) {
      double s = u(rng), t = u(rng);
      if (s + t > 1) { s = 1 - s; t = 1 - t; }
      double s2 = u(rng), t2v = u(rng);
      if (s2 + t2v > 1) { s2 = 1 - s2; t2v = 1 - t2v; }
      const Point3 x = t1[0] + (t1[1] - t1[0]) * s + (t1[2] - t1[0]) * t;
      const Point3 y = t2[0] + (t2[1] - t2[0]) * s2 + (t2[2] - t2[0]) * t2v;
      sampled = std::min(sampled, Distance(x, y));
    }
    CHECK(d <= sampled + 1e-12);
  }
}

TEST_CASE("OFF reading") {
  const std::string tetra =
      "OFF\n# a comment\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
      "3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n";
  const TriangleMesh m = ReadOff(tetra);
  CHECK(m.NumVertices() == 4);
  CHECK(m.NumFaces() == 4);
  CHECK(Validate(m).Valid());

  // Counts on the header line, and comments after data.
  const TriangleMesh m2 = ReadOff("OFF 4 4 6\n0 0 0 # origin\n1 0 0\n0 1 0\n0 0 1\n"
                                  "3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n");
  CHECK(m2.faces() == m.faces());

  auto line_of = [](const std::string &text) {
    try {
      ReadOff(text);
    } catch (const ParseError &e) {
      CHECK(e.code() == ErrorCode::kParseError);
      return e.line();
    }
    FAIL("expected ParseError");
    return -1;
  };
  std::string quad = tetra;
  quad.replace(quad.find("3 1 2 3"), 7, "4 0 1 2 3");
  CHECK(line_of(quad) == 11);
  try {
    ReadOff(quad);
  } catch (const ParseError &e) {
    CHECK(std::string(e.what()).find("non-triangular face") != std::string::npos);
  }
  std::string oob = tetra;
  oob.replace(oob.find("3 0 2 1"), 7, "3 0 2 9");
  CHECK(line_of(oob) == 8);
  CHECK(line_of("OFFX\n") == 1);
  CHECK(line_of("") == 1);
  CHECK(line_of("OFF\n4 4\n0 0 0\n1 0 0\n") == 5);
  CHECK(line_of(tetra + "extra\n") == 12);
  CHECK(line_of("OFF\n1 0 0\n0 0 zz\n") == 3);
}

TEST_CASE("OFF and OBJ writing round trip") {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 20; trial++) {
    const HullResult h = ConvexHull3(RandomPoints(rng, 50, 1e3));
    const TriangleMesh back = ReadOff(WriteOff(h.mesh));
    CHECK(back.faces() == h.mesh.faces());
    CHECK(back.vertices() == h.mesh.vertices());
  }
  const std::string off = WriteOff(Tetrahedron());
  CHECK(off.rfind("OFF\n4 4 6\n", 0) == 0);
  const std::string obj = WriteObj(Tetrahedron());
  CHECK(obj.find("v 1 1 1\n") != std::string::npos);
  CHECK(obj.find("f 1 ") != std::string::npos);
  CHECK(obj.find("f 0 ") == std::string::npos);
  for (double x : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(std::stod(FormatDouble(x)) == x);
  }
}
