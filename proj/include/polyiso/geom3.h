#ifndef POLYISO_GEOM3_H
#define POLYISO_GEOM3_H

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace polyiso {

// Plain 3-vector used both for positions and displacements.
struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;

  constexpr Point3() = default;
  constexpr Point3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Point3 &operator+=(const Point3 &o) {
    x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Point3 &operator-=(const Point3 &o) {
    x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Point3 &operator*=(double s) {
    x *= s; y *= s; z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Point3 &, const Point3 &) = default;
};

using Vec3 = Point3;

constexpr Point3 operator+(Point3 a, const Point3 &b) { return a += b; }
constexpr Point3 operator-(Point3 a, const Point3 &b) { return a -= b; }
constexpr Point3 operator-(const Point3 &a) { return {-a.x, -a.y, -a.z}; }
constexpr Point3 operator*(Point3 a, double s) { return a *= s; }
constexpr Point3 operator*(double s, Point3 a) { return a *= s; }
constexpr Point3 operator/(Point3 a, double s) { return a *= (1.0 / s); }

constexpr double Dot(const Vec3 &a, const Vec3 &b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
constexpr Vec3 Cross(const Vec3 &a, const Vec3 &b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double Norm(const Vec3 &a) { return std::sqrt(Dot(a, a)); }
inline double Distance(const Point3 &a, const Point3 &b) { return Norm(a - b); }
bool IsFinite(const Point3 &p);

// Signed volume (times 6) of tetrahedron abcd; positive when d is on the
// side of plane abc that (b-a)x(c-a) points toward.
inline double Orient3(const Point3 &a, const Point3 &b, const Point3 &c,
                      const Point3 &d) {
  return Dot(Cross(b - a, c - a), d - a);
}

// Unsigned angle between two vectors, via atan2 so it stays accurate near 0
// and pi.
double AngleBetween(const Vec3 &u, const Vec3 &v);

// A point on the unit sphere. Construction normalizes; FromUnit checks.
class UnitVec {
 public:
  // Normalizes v; throws DegenerateInput for (near) zero or non-finite v.
  static UnitVec Normalize(const Vec3 &v);
  // Accepts v if |v| = 1 within 1e-12, else throws DegenerateInput.
  static UnitVec FromUnit(const Vec3 &v);

  const Vec3 &vec() const { return v_; }
  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }

 private:
  explicit UnitVec(const Vec3 &v) : v_(v) {}
  Vec3 v_;
};

class PlanarTriangle {
 public:
  // Throws DegenerateInput if area < 1e-12 * (longest side)^2 or any
  // coordinate is non-finite.
  PlanarTriangle(const Point3 &a, const Point3 &b, const Point3 &c);

  const Point3 &a() const { return v_[0]; }
  const Point3 &b() const { return v_[1]; }
  const Point3 &c() const { return v_[2]; }
  const Point3 &operator[](int i) const { return v_[i]; }
  const std::array<Point3, 3> &vertices() const { return v_; }

  // Side opposite vertex i.
  double Side(int i) const;
  double LongestSide() const;
  double Area() const;
  // (b-a)x(c-a) normalized; outward when the triangle is counterclockwise
  // seen from outside.
  UnitVec Normal() const;

  static bool IsDegenerate(const Point3 &a, const Point3 &b, const Point3 &c);

 private:
  std::array<Point3, 3> v_;
};

// Triangle with the given side lengths (side i opposite vertex i), placed in
// the z = 0 plane with vertex 0 at the origin and vertex 1 on +x.
PlanarTriangle TriangleFromSides(double s0, double s1, double s2);

class Rotation3 {
 public:
  // Identity.
  Rotation3();
  // Throws DegenerateInput unless m is orthogonal with det +1 (1e-10).
  static Rotation3 FromMatrix(const std::array<std::array<double, 3>, 3> &m);
  static Rotation3 AboutAxis(const Vec3 &axis, double angle);

  Point3 Apply(const Point3 &p) const;
  double Trace() const;
  // Rotation angle in [0, pi].
  double Angle() const;
  double operator()(int r, int c) const { return m_[r][c]; }

 private:
  explicit Rotation3(const std::array<std::array<double, 3>, 3> &m) : m_(m) {}
  std::array<std::array<double, 3>, 3> m_;
};

// Dihedral between a right-triangle face and the equilateral face of the
// cube-corner tetrahedron: (1/2) arccos(-1/3), about 0.304 pi.
inline const double kPhi = 0.5 * std::acos(-1.0 / 3.0);

struct Circle3 {
  Point3 center;
  double radius = 0.0;
};

Circle3 Circumcircle(const PlanarTriangle &t);

// Interior angles at vertices a, b, c.
std::array<double, 3> TriangleAngles(const PlanarTriangle &t);

enum class ShapeCategory { kEquilateral, kIsosceles, kScalene };
enum class AngleClass { kAcute, kRight, kObtuse };

struct FaceShape {
  ShapeCategory category = ShapeCategory::kScalene;
  // Vertex (0..2) between the two equal sides; -1 unless isosceles.
  int apex_index = -1;
  AngleClass angle_class = AngleClass::kAcute;
  std::array<double, 3> sorted_side_lengths{};

  bool IsIsoscelesOrEquilateral() const {
    return category != ShapeCategory::kScalene;
  }
};

// Sides count as equal when they differ by at most rel_tol * (longest side).
// The largest angle is compared against pi/2 with tolerance rel_tol * pi/2.
// rel_tol must lie in (0, 0.1).
FaceShape ClassifyShape(const PlanarTriangle &t, double rel_tol);

const char *ToString(ShapeCategory c);
const char *ToString(AngleClass c);

// Interior dihedral angle, in (0, 2*pi), along the shared edge of two
// triangles that are each counterclockwise seen from outside the solid.
// Values above pi are reflex. Throws TopologyError if the edge is not an edge
// of both triangles.
double DihedralAngle(const PlanarTriangle &t1, const PlanarTriangle &t2,
                     const std::pair<Point3, Point3> &shared_edge);

// Great-circle distance in [0, pi].
double GeodesicDistance(const UnitVec &u, const UnitVec &v);

struct SphericalSides {
  double leg_arc = 0.0;   // the two sides adjacent to the apex
  double base_arc = 0.0;  // side opposite the apex
};

// Side arcs of the spherical isosceles triangle with the given apex angle and
// base angles, by the law of cosines for angles. Throws
// InvalidSphericalTriangle when apex + 2 * base <= pi or no such triangle
// exists.
SphericalSides SphericalIsoscelesSides(double apex_angle, double base_angle);

// Angle of the spherical triangle at vertex a (between arcs ab and ac).
double SphericalAngle(const UnitVec &a, const UnitVec &b, const UnitVec &c);

// Least-squares rotation R about the origin with R * points[i] close to
// points[(i + shift) mod n]. Throws NoSymmetry when the worst displacement
// exceeds 1e-8 * (max point norm), DegenerateInput for fewer than three points
// or collinear input.
Rotation3 FitCyclicRotation(std::span<const Point3> points, int shift);

}  // namespace polyiso

#endif  // POLYISO_GEOM3_H
