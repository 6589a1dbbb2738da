#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.h"
#include "polyiso/error.h"
#include "polyiso/hull.h"
#include "polyiso/mesh.h"

using namespace polyiso;
using namespace fixtures;

namespace {

// Largest signed distance of any point beyond any facet plane.
double MaxOutside(const TriangleMesh &m, const std::vector<Point3> &pts) {
  double worst = -1e300;
  for (int f = 0; f < m.NumFaces(); f++) {
    const PlanarTriangle t = m.Triangle(f);
    const Vec3 n = t.Normal().vec();
    for (const Point3 &p : pts) worst = std::max(worst, Dot(n, p - t.a()));
  }
  return worst;
}

std::vector<Point3> Rotated(const Rotation3 &r, const std::vector<Point3> &pts) {
  std::vector<Point3> out;
  for (const Point3 &p : pts) out.push_back(r.Apply(p));
  return out;
}

}  // namespace

TEST_CASE("octahedron hull") {
  const std::vector<Point3> pts = Octahedron().vertices();
  const HullResult h = ConvexHull3(pts);
  CHECK(h.mesh.NumFaces() == 8);
  CHECK(h.mesh.NumVertices() == 6);
  CHECK(Validate(h.mesh).Valid());
  CHECK(IsConvex(h.mesh).convex);
  CHECK(h.mesh.vertices() == pts);
  CHECK(CanonicalFaces(h.mesh.faces()) == CanonicalFaces(Octahedron().faces()));
}

TEST_CASE("icosahedron hull is 20 equilateral faces") {
  const std::vector<Point3> pts = IcosahedronPoints();
  // Oracle: nearest-neighbor distance 2 for these coordinates, five per vertex.
  for (size_t i = 0; i < pts.size(); i++) {
    int close = 0;
    for (size_t j = 0; j < pts.size(); j++) {
      if (i != j && std::abs(Distance(pts[i], pts[j]) - 2) < 1e-12) close++;
    }
    CHECK(close == 5);
  }
  const HullResult h = ConvexHull3(pts);
  CHECK(h.mesh.NumFaces() == 20);
  CHECK(h.mesh.NumEdges() == 30);
  for (int f = 0; f < 20; f++) {
    const PlanarTriangle t = h.mesh.Triangle(f);
    for (int k = 0; k < 3; k++) CHECK(t.Side(k) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ClassifyShape(t, 1e-9).category == ShapeCategory::kEquilateral);
  }
  CHECK(IsConvex(h.mesh).convex);
}

TEST_CASE("cube hull fans each square from its lowest-index corner") {
  const std::vector<Point3> pts = Cube().vertices();
  const HullResult h = ConvexHull3(pts);
  CHECK(h.mesh.NumFaces() == 12);
  CHECK(Validate(h.mesh).Valid());
  CHECK(CanonicalFaces(h.mesh.faces()) == CanonicalFaces(Cube().faces()));
  CHECK(IsConvex(h.mesh, 1e-9, ConvexityMode::kWeak).convex);
  // Same result regardless of how many times we re-run.
  CHECK(ConvexHull3(pts).mesh.faces() == h.mesh.faces());
}

TEST_CASE("canonical faces") {
  const std::vector<Face> in = {{3, 1, 2}, {2, 0, 1}};
  const std::vector<Face> out = CanonicalFaces(in);
  CHECK(out == std::vector<Face>{{0, 1, 2}, {1, 2, 3}});
}

TEST_CASE("vertex map") {
  std::vector<Point3> pts = Octahedron().vertices();
  pts.insert(pts.begin(), Point3{0.1, 0.1, 0.1});  // interior
  pts.push_back({1, 0, 0});                          // duplicate
  pts.push_back({0.5, 0.5, 0});                      // on an edge
  const HullResult h = ConvexHull3(pts);
  REQUIRE(h.vertex_map.size() == pts.size());
  CHECK(h.vertex_map[0] == HullResult::kNotAVertex);
  for (int i = 1; i <= 6; i++) {
    REQUIRE(h.vertex_map[i] >= 0);
    CHECK(h.mesh.vertex(h.vertex_map[i]) == pts[i]);
  }
  CHECK(h.vertex_map[7] == HullResult::kNotAVertex);
  CHECK(h.vertex_map[8] == HullResult::kNotAVertex);
  CHECK(h.mesh.NumFaces() == 8);
}

TEST_CASE("degenerate inputs") {
  auto code = [](const std::vector<Point3> &pts) {
    try {
      ConvexHull3(pts);
    } catch (const Error &e) {
      return e.code();
    }
    FAIL("expected DegenerateInput");
    return ErrorCode::kPreconditionFailed;
  };
  CHECK(code({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}) == ErrorCode::kDegenerateInput);
  CHECK(code({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {2, 3, 0}}) ==
        ErrorCode::kDegenerateInput);
  CHECK(code({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}}) == ErrorCode::kDegenerateInput);
  CHECK(code({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}}) == ErrorCode::kDegenerateInput);
}

TEST_CASE("containment, validity and convexity on random point sets") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; trial++) {
    const int n = 4 + trial * 5;
    const std::vector<Point3> pts =
        trial % 2 ? RandomPoints(rng, n) : RandomSpherePoints(rng, n);
    const HullResult h = ConvexHull3(pts);
    CHECK(Validate(h.mesh).Valid());
    CHECK(IsConvex(h.mesh).convex);
    CHECK(MaxOutside(h.mesh, pts) < 1e-9 * h.mesh.BoundingBoxDiagonal());
    if (trial % 2 == 0) {
      // Every point on a sphere is a corner.
      CHECK(h.mesh.NumVertices() == n);
    }
  }
}

TEST_CASE("idempotence") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 30; trial++) {
    const HullResult h = ConvexHull3(RandomPoints(rng, 60));
    const HullResult again = ConvexHull3(h.mesh.vertices());
    CHECK(again.mesh.vertices() == h.mesh.vertices());
    CHECK(CanonicalFaces(again.mesh.faces()) == CanonicalFaces(h.mesh.faces()));
  }
  // With coplanar patches.
  const HullResult c = ConvexHull3(Cube().vertices());
  CHECK(ConvexHull3(c.mesh.vertices()).mesh.faces() == c.mesh.faces());
}

TEST_CASE("rotation equivariance") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  for (int trial = 0; trial < 30; trial++) {
    const std::vector<Point3> pts = RandomPoints(rng, 40);
    const Rotation3 r = Rotation3::AboutAxis(RandomPoints(rng, 1)[0], ang(rng));
    const HullResult a = ConvexHull3(pts);
    const HullResult b = ConvexHull3(Rotated(r, pts));
    CHECK(a.vertex_map == b.vertex_map);
    CHECK(CanonicalFaces(a.mesh.faces()) == CanonicalFaces(b.mesh.faces()));
    double worst = 0;
    for (int v = 0; v < a.mesh.NumVertices(); v++) {
      worst = std::max(worst, Distance(r.Apply(a.mesh.vertex(v)), b.mesh.vertex(v)));
    }
    CHECK(worst < 1e-9);
  }
  // Symmetric inputs with coplanar patches keep their combinatorics too.
  const Rotation3 r = Rotation3::AboutAxis({0.3, 0.5, 0.9}, 1.1);
  const HullResult a = ConvexHull3(Cube().vertices());
  const HullResult b = ConvexHull3(Rotated(r, Cube().vertices()));
  CHECK(a.mesh.faces() == b.mesh.faces());
}

TEST_CASE("desk-scale input size") {
  std::mt19937_64 rng(24);
  const std::vector<Point3> pts = RandomPoints(rng, 10000);
  const auto start = std::chrono::steady_clock::now();
  const HullResult h = ConvexHull3(pts);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(Validate(h.mesh).Valid());
  CHECK(MaxOutside(h.mesh, pts) < 1e-9 * h.mesh.BoundingBoxDiagonal());
  CHECK(secs < 10.0);
}
