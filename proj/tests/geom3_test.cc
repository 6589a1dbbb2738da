#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "polyiso/error.h"
#include "polyiso/geom3.h"

using namespace polyiso;

namespace {

constexpr double kPi = std::numbers::pi;

Point3 RandomPoint(std::mt19937_64 &rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

// Law of cosines, independent of the atan2 route in TriangleAngles.
double LawOfCosinesAngle(double opposite, double s1, double s2) {
  return std::acos(std::clamp((s1 * s1 + s2 * s2 - opposite * opposite) /
                                  (2 * s1 * s2), -1.0, 1.0));
}

// Great-circle point at arc length `arc` from `from` toward `toward`.
Vec3 Along(const Vec3 &from, const Vec3 &toward, double arc) {
  Vec3 t = toward - from * Dot(from, toward);
  t = t / Norm(t);
  return from * std::cos(arc) + t * std::sin(arc);
}

}  // namespace

TEST_CASE("phi constant") {
  CHECK(kPhi > 0.95);
  CHECK(kPhi < 0.96);
  CHECK(kPhi / kPi == doctest::Approx(0.304).epsilon(1e-3));
}

TEST_CASE("circumcircle examples") {
  const Circle3 c = Circumcircle(PlanarTriangle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}));
  CHECK(c.center.x == doctest::Approx(0.5));
  CHECK(c.center.y == doctest::Approx(0.5));
  CHECK(c.center.z == doctest::Approx(0.0));
  CHECK(c.radius == doctest::Approx(std::sqrt(2.0) / 2));

  // Equilateral of side 1 in a tilted plane.
  const Rotation3 r = Rotation3::AboutAxis({1, 2, 3}, 0.7);
  const PlanarTriangle eq(r.Apply({0, 0, 0}), r.Apply({1, 0, 0}),
                          r.Apply({0.5, std::sqrt(3.0) / 2, 0}));
  CHECK(Circumcircle(eq).radius == doctest::Approx(1 / std::sqrt(3.0)));
}

TEST_CASE("circumcircle equidistance and coplanarity on random triangles") {
  std::mt19937_64 rng(1);
  double worst = 0.0, worst_plane = 0.0;
  for (int i = 0; i < 100000; i++) {
    const Point3 a = RandomPoint(rng), b = RandomPoint(rng), c = RandomPoint(rng);
    if (PlanarTriangle::IsDegenerate(a, b, c)) continue;
    const PlanarTriangle t(a, b, c);
    // Skip slivers where the circumradius explodes relative to the triangle.
    if (t.Area() < 1e-3 * t.LongestSide() * t.LongestSide()) continue;
    const Circle3 cc = Circumcircle(t);
    for (const Point3 &v : {a, b, c}) {
      worst = std::max(worst, std::abs(Distance(cc.center, v) - cc.radius) / cc.radius);
    }
    worst_plane = std::max(worst_plane, std::abs(Dot(t.Normal().vec(), cc.center - a)) / cc.radius);
  }
  CHECK(worst < 1e-9);
  CHECK(worst_plane < 1e-9);
}

TEST_CASE("degenerate triangles are rejected") {
  CHECK_THROWS_AS(PlanarTriangle({0, 0, 0}, {1, 0, 0}, {2, 0, 0}), Error);
  try {
    PlanarTriangle({0, 0, 0}, {1, 1, 1}, {2, 2, 2});
    FAIL("expected throw");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kDegenerateInput);
  }
}

TEST_CASE("triangle angles") {
  const auto eq = TriangleAngles(TriangleFromSides(1, 1, 1));
  for (double a : eq) CHECK(a == doctest::Approx(kPi / 3));
  const auto ri = TriangleAngles(PlanarTriangle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}));
  CHECK(ri[0] == doctest::Approx(kPi / 2));
  CHECK(ri[1] == doctest::Approx(kPi / 4));
  CHECK(ri[2] == doctest::Approx(kPi / 4));

  std::mt19937_64 rng(2);
  for (int i = 0; i < 2000; i++) {
    const Point3 a = RandomPoint(rng), b = RandomPoint(rng), c = RandomPoint(rng);
    if (PlanarTriangle::IsDegenerate(a, b, c)) continue;
    const PlanarTriangle t(a, b, c);
    const auto ang = TriangleAngles(t);
    CHECK(ang[0] + ang[1] + ang[2] == doctest::Approx(kPi).epsilon(1e-12));
    for (int k = 0; k < 3; k++) {
      const double oracle = LawOfCosinesAngle(t.Side(k), t.Side((k + 1) % 3), t.Side((k + 2) % 3));
      CHECK(ang[k] == doctest::Approx(oracle).epsilon(1e-7));
    }
  }
}

TEST_CASE("classify shape examples") {
  const FaceShape obtuse = ClassifyShape(TriangleFromSides(1.5, 1, 1), 1e-9);
  CHECK(obtuse.category == ShapeCategory::kIsosceles);
  CHECK(obtuse.apex_index == 0);
  CHECK(obtuse.angle_class == AngleClass::kObtuse);
  CHECK(obtuse.sorted_side_lengths[2] == doctest::Approx(1.5));
  // cos(largest) = (1 + 1 - 2.25) / 2 < 0
  CHECK(std::acos(-0.125) * 180 / kPi == doctest::Approx(97.18).epsilon(1e-4));

  const FaceShape pyth = ClassifyShape(TriangleFromSides(3, 4, 5), 1e-9);
  CHECK(pyth.category == ShapeCategory::kScalene);
  CHECK(pyth.apex_index == -1);
  CHECK(pyth.angle_class == AngleClass::kRight);

  const FaceShape eq = ClassifyShape(TriangleFromSides(1, 1, 1), 1e-9);
  CHECK(eq.category == ShapeCategory::kEquilateral);
  CHECK(eq.angle_class == AngleClass::kAcute);

  CHECK_THROWS_AS(ClassifyShape(TriangleFromSides(1, 1, 1), 0.5), Error);
}

TEST_CASE("classify shape tie-break picks the closest pair") {
  // Spread 0.0105 exceeds 0.01 * longest, so not equilateral. Pair (s1, s2)
  // differs by 0.0045 and beats pair (s0, s1) at 0.006.
  const FaceShape s = ClassifyShape(TriangleFromSides(1.0, 1.006, 1.0105), 0.01);
  CHECK(s.category == ShapeCategory::kIsosceles);
  CHECK(s.apex_index == 0);
}

TEST_CASE("classify shape is invariant under rigid motion and scaling") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int i = 0; i < 500; i++) {
    const Point3 a = RandomPoint(rng), b = RandomPoint(rng), c = RandomPoint(rng);
    if (PlanarTriangle::IsDegenerate(a, b, c)) continue;
    const PlanarTriangle t(a, b, c);
    const Rotation3 r = Rotation3::AboutAxis(RandomPoint(rng), u(rng));
    const double s = u(rng);
    const Point3 shift = RandomPoint(rng, 10.0);
    const PlanarTriangle moved(r.Apply(a) * s + shift, r.Apply(b) * s + shift,
                               r.Apply(c) * s + shift);
    const FaceShape x = ClassifyShape(t, 1e-6), y = ClassifyShape(moved, 1e-6);
    CHECK(x.category == y.category);
    CHECK(x.apex_index == y.apex_index);
    CHECK(x.angle_class == y.angle_class);
  }
  // Same check on exactly isosceles inputs.
  const PlanarTriangle iso = TriangleFromSides(0.7, 1.3, 1.3);
  const Rotation3 r = Rotation3::AboutAxis({0.3, -1, 2}, 2.1);
  const PlanarTriangle iso2(r.Apply(iso.a()) * 7.0, r.Apply(iso.b()) * 7.0,
                            r.Apply(iso.c()) * 7.0);
  CHECK(ClassifyShape(iso2, 1e-9).category == ShapeCategory::kIsosceles);
  CHECK(ClassifyShape(iso2, 1e-9).apex_index == ClassifyShape(iso, 1e-9).apex_index);
}

TEST_CASE("dihedral angle examples") {
  // Cube corner: faces z=0 and y=0 seen from outside the cube [0,1]^3.
  const PlanarTriangle bottom({0, 0, 0}, {1, 1, 0}, {1, 0, 0});
  const PlanarTriangle front({0, 0, 0}, {1, 0, 0}, {1, 0, 1});
  CHECK(DihedralAngle(bottom, front, {{0, 0, 0}, {1, 0, 0}}) ==
        doctest::Approx(kPi / 2));

  // Cube-corner tetrahedron O, X, Y, Z: right face OXY vs equilateral XYZ.
  const Point3 o{0, 0, 0}, x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1};
  const PlanarTriangle oyx(o, y, x);  // outward normal -z
  const PlanarTriangle xyz(x, y, z);  // outward normal (1,1,1)
  CHECK(DihedralAngle(oyx, xyz, {x, y}) == doctest::Approx(kPhi).epsilon(1e-12));
  CHECK(kPhi / kPi == doctest::Approx(0.304).epsilon(1e-3));

  // Regular tetrahedron: oracle from outward normals, pi - angle(n1, n2).
  const Point3 a{1, 1, 1}, b{1, -1, -1}, c{-1, 1, -1}, d{-1, -1, 1};
  const PlanarTriangle abc(a, b, c), adb(a, d, b);
  // Orient both outward (centroid at origin).
  const PlanarTriangle t1 = Dot(abc.Normal().vec(), a) > 0 ? abc : PlanarTriangle(a, c, b);
  const PlanarTriangle t2 = Dot(adb.Normal().vec(), a) > 0 ? adb : PlanarTriangle(a, b, d);
  const double oracle = kPi - std::acos(Dot(t1.Normal().vec(), t2.Normal().vec()));
  CHECK(oracle == doctest::Approx(std::acos(1.0 / 3)));
  CHECK(DihedralAngle(t1, t2, {a, b}) == doctest::Approx(1.23096).epsilon(1e-5));
  CHECK(DihedralAngle(t1, t2, {a, b}) == doctest::Approx(oracle).epsilon(1e-12));

  // Not sharing the edge.
  CHECK_THROWS_AS(DihedralAngle(t1, t2, {c, d}), Error);
}

TEST_CASE("reflex dihedral is reported above pi") {
  // Shared edge on the x axis; solid above both faces.
  const PlanarTriangle left({0, 0, 0}, {1, 0, 0}, {0.5, -1, 0.3});
  const PlanarTriangle right({1, 0, 0}, {0, 0, 0}, {0.5, 1, 0.3});
  const double convex = DihedralAngle(left, right, {{0, 0, 0}, {1, 0, 0}});
  CHECK(convex < kPi);
  const PlanarTriangle left2({0, 0, 0}, {1, 0, 0}, {0.5, -1, -0.3});
  const PlanarTriangle right2({1, 0, 0}, {0, 0, 0}, {0.5, 1, -0.3});
  const double reflex = DihedralAngle(left2, right2, {{0, 0, 0}, {1, 0, 0}});
  CHECK(reflex > kPi);
  CHECK(convex + reflex == doctest::Approx(2 * kPi));
}

TEST_CASE("dihedral plus normal arc equals pi on convex pairs") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.05, kPi - 0.05);
  for (int i = 0; i < 2000; i++) {
    // Edge on the x axis, two half-planes at angles opening a convex wedge.
    const double open = u(rng);
    const Point3 p{0, 0, 0}, q{1, 0, 0};
    const Point3 o1{0.4, 1, 0};
    const Point3 o2{0.7, std::cos(open), std::sin(open)};
    // Solid lies inside the wedge; orient faces outward.
    PlanarTriangle t1(p, q, o1), t2(q, p, o2);
    const Point3 inside = (o1 + o2) * 0.5;
    if (Dot(t1.Normal().vec(), inside - p) > 0) t1 = PlanarTriangle(q, p, o1);
    if (Dot(t2.Normal().vec(), inside - p) > 0) t2 = PlanarTriangle(p, q, o2);
    const double dih = DihedralAngle(t1, t2, {p, q});
    const double arc = GeodesicDistance(t1.Normal(), t2.Normal());
    CHECK(dih + arc == doctest::Approx(kPi).epsilon(1e-9));
    CHECK(dih == doctest::Approx(open).epsilon(1e-9));
  }
}

TEST_CASE("geodesic distance") {
  const UnitVec x = UnitVec::FromUnit({1, 0, 0});
  const UnitVec y = UnitVec::FromUnit({0, 1, 0});
  const UnitVec mx = UnitVec::FromUnit({-1, 0, 0});
  CHECK(GeodesicDistance(x, x) == 0.0);
  CHECK(GeodesicDistance(x, mx) == doctest::Approx(kPi));
  CHECK(GeodesicDistance(x, y) == doctest::Approx(kPi / 2));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; i++) {
    const UnitVec a = UnitVec::Normalize(RandomPoint(rng));
    const UnitVec b = UnitVec::Normalize(RandomPoint(rng));
    const double d = GeodesicDistance(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= kPi);
    CHECK(d == doctest::Approx(std::acos(std::clamp(Dot(a.vec(), b.vec()), -1.0, 1.0))).epsilon(1e-9));
  }
  CHECK_THROWS_AS(UnitVec::FromUnit({1, 1, 0}), Error);
}

TEST_CASE("spherical isosceles sides: icosahedron") {
  const SphericalSides s = SphericalIsoscelesSides(2 * kPi / 5, 2 * kPi / 5);
  // Oracle: angle subtended by an icosahedron edge, from coordinates.
  const double g = (1 + std::sqrt(5.0)) / 2;
  const UnitVec p = UnitVec::Normalize({0, 1, g}), q = UnitVec::Normalize({0, -1, g});
  const double edge_arc = GeodesicDistance(p, q);
  CHECK(edge_arc == doctest::Approx(std::atan(2.0)).epsilon(1e-12));
  CHECK(s.leg_arc == doctest::Approx(edge_arc).epsilon(1e-12));
  CHECK(s.base_arc == doctest::Approx(edge_arc).epsilon(1e-12));
  CHECK(s.leg_arc == doctest::Approx(1.10715).epsilon(1e-5));
}

TEST_CASE("spherical isosceles sides: order 25") {
  const int k = 25;
  const double apex = 2 * kPi / k, base = (0.5 - 0.5 / k) * kPi;
  const SphericalSides s = SphericalIsoscelesSides(apex, base);
  CHECK(s.leg_arc == doctest::Approx(1.0495).epsilon(1e-4));
  CHECK(s.leg_arc * 180 / kPi == doctest::Approx(60.13).epsilon(1e-4));
  CHECK(apex + 2 * base - kPi == doctest::Approx(kPi / k).epsilon(1e-12));
  // k apexes of 2 pi / k close up around the pole.
  CHECK(k * apex == doctest::Approx(2 * kPi));
}

TEST_CASE("spherical triangle rebuilt from sides has the requested angles") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ua(0.05, kPi - 0.05), ub(0.05, kPi / 2);
  int built = 0;
  for (int i = 0; i < 20000 && built < 2000; i++) {
    const double a = ua(rng), b = ub(rng);
    SphericalSides s;
    try {
      s = SphericalIsoscelesSides(a, b);
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kInvalidSphericalTriangle);
      continue;
    }
    built++;
    const Vec3 apex{0, 0, 1};
    const Vec3 p = Along(apex, {1, 0, 0}, s.leg_arc);
    // Second leg rotated by the apex angle about the pole.
    const Vec3 q = Rotation3::AboutAxis({0, 0, 1}, a).Apply(p);
    const UnitVec A = UnitVec::FromUnit(apex), P = UnitVec::Normalize(p), Q = UnitVec::Normalize(q);
    CHECK(GeodesicDistance(P, Q) == doctest::Approx(s.base_arc).epsilon(1e-9));
    CHECK(SphericalAngle(A, P, Q) == doctest::Approx(a).epsilon(1e-9));
    CHECK(SphericalAngle(P, A, Q) == doctest::Approx(b).epsilon(1e-9));
    CHECK(SphericalAngle(Q, A, P) == doctest::Approx(b).epsilon(1e-9));
  }
  CHECK(built > 500);
}

TEST_CASE("spherical isosceles sides rejects nonpositive excess") {
  try {
    SphericalIsoscelesSides(kPi / 3, kPi / 3);
    FAIL("expected throw");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kInvalidSphericalTriangle);
  }
  CHECK_THROWS_AS(SphericalIsoscelesSides(0.1, 0.2), Error);
}

TEST_CASE("fit cyclic rotation: regular hexagon") {
  std::vector<Point3> hex;
  for (int i = 0; i < 6; i++) {
    hex.push_back({std::cos(i * kPi / 3), std::sin(i * kPi / 3), 0});
  }
  const Rotation3 r = FitCyclicRotation(hex, 1);
  CHECK(r.Angle() == doctest::Approx(kPi / 3));
  const Point3 axis_image = r.Apply({0, 0, 1});
  CHECK(axis_image.z == doctest::Approx(1.0));
  for (int i = 0; i < 6; i++) {
    CHECK(Distance(r.Apply(hex[i]), hex[(i + 1) % 6]) < 1e-12);
  }
  const Rotation3 id = FitCyclicRotation(hex, 0);
  CHECK(id.Trace() == doctest::Approx(3.0));
  // Shift 2 on the planar hexagon is a 2pi/3 turn: trace 0.
  CHECK(FitCyclicRotation(hex, 2).Trace() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fit cyclic rotation rejects asymmetric input") {
  std::vector<Point3> pts = {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -2, 0}};
  try {
    FitCyclicRotation(pts, 1);
    FAIL("expected throw");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kNoSymmetry);
  }
  std::vector<Point3> line = {{1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
  CHECK_THROWS_AS(FitCyclicRotation(line, 1), Error);
}

TEST_CASE("rotation validation") {
  CHECK_THROWS_AS(Rotation3::FromMatrix({{{1, 0, 0}, {0, 1, 0}, {0, 0, -1}}}), Error);
  const Rotation3 r = Rotation3::AboutAxis({1, 1, 1}, 2 * kPi / 3);
  CHECK(r.Trace() == doctest::Approx(0.0).epsilon(1e-12));
  const Point3 p = r.Apply({1, 0, 0});
  CHECK(p.y == doctest::Approx(1.0));
}
