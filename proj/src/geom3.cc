#include "polyiso/geom3.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "polyiso/error.h"

namespace polyiso {

namespace {

constexpr double kPi = std::numbers::pi;

// Relative degeneracy guard: area below this times (longest side)^2.
constexpr double kDegenerateAreaRatio = 1e-12;

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kTopologyError: return "TopologyError";
    case ErrorCode::kInvalidSphericalTriangle: return "InvalidSphericalTriangle";
    case ErrorCode::kNoSymmetry: return "NoSymmetry";
    case ErrorCode::kConvexityRequired: return "ConvexityRequired";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kRadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::kCannotSatisfyVoronoiCondition:
      return "CannotSatisfyVoronoiCondition";
    case ErrorCode::kCannotRaiseApex: return "CannotRaiseApex";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kConstructionInvalid: return "ConstructionInvalid";
    case ErrorCode::kHexagonNotFound: return "HexagonNotFound";
    case ErrorCode::kNotIsosceles: return "NotIsosceles";
    case ErrorCode::kWrongVertexType: return "WrongVertexType";
    case ErrorCode::kDominationFailed: return "DominationFailed";
    case ErrorCode::kPreconditionFailed: return "PreconditionFailed";
    case ErrorCode::kSamplerExhausted: return "SamplerExhausted";
  }
  return "Unknown";
}

bool IsFinite(const Point3 &p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

double AngleBetween(const Vec3 &u, const Vec3 &v) {
  return std::atan2(Norm(Cross(u, v)), Dot(u, v));
}

UnitVec UnitVec::Normalize(const Vec3 &v) {
  const double n = Norm(v);
  if (!IsFinite(v) || !(n > 1e-300)) {
    throw Error(ErrorCode::kDegenerateInput, "cannot normalize zero vector");
  }
  return UnitVec(v / n);
}

UnitVec UnitVec::FromUnit(const Vec3 &v) {
  if (!IsFinite(v) || std::abs(Norm(v) - 1.0) > 1e-12) {
    throw Error(ErrorCode::kDegenerateInput, "vector is not unit length");
  }
  return UnitVec(v);
}

PlanarTriangle::PlanarTriangle(const Point3 &a, const Point3 &b,
                               const Point3 &c)
    : v_{a, b, c} {
  if (!IsFinite(a) || !IsFinite(b) || !IsFinite(c)) {
    throw Error(ErrorCode::kDegenerateInput, "non-finite triangle vertex");
  }
  if (IsDegenerate(a, b, c)) {
    throw Error(ErrorCode::kDegenerateInput, "degenerate triangle");
  }
}

bool PlanarTriangle::IsDegenerate(const Point3 &a, const Point3 &b,
                                  const Point3 &c) {
  const double longest =
      std::max({Distance(b, c), Distance(c, a), Distance(a, b)});
  const double area = 0.5 * Norm(Cross(b - a, c - a));
  return !(area >= kDegenerateAreaRatio * longest * longest) || longest == 0.0;
}

double PlanarTriangle::Side(int i) const {
  return Distance(v_[(i + 1) % 3], v_[(i + 2) % 3]);
}

double PlanarTriangle::LongestSide() const {
  return std::max({Side(0), Side(1), Side(2)});
}

double PlanarTriangle::Area() const {
  return 0.5 * Norm(Cross(v_[1] - v_[0], v_[2] - v_[0]));
}

UnitVec PlanarTriangle::Normal() const {
  return UnitVec::Normalize(Cross(v_[1] - v_[0], v_[2] - v_[0]));
}

PlanarTriangle TriangleFromSides(double s0, double s1, double s2) {
  // Vertex 1 sits on +x at distance s2 (side opposite vertex 2).
  if (!(s0 > 0 && s1 > 0 && s2 > 0)) {
    throw Error(ErrorCode::kDegenerateInput, "side lengths must be positive");
  }
  const double x = (s1 * s1 + s2 * s2 - s0 * s0) / (2.0 * s2);
  const double h2 = s1 * s1 - x * x;
  if (!(h2 > 0)) {
    throw Error(ErrorCode::kDegenerateInput, "side lengths violate triangle inequality");
  }
  return PlanarTriangle({0, 0, 0}, {s2, 0, 0}, {x, std::sqrt(h2), 0});
}

Rotation3::Rotation3()
    : m_{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}} {}

Rotation3 Rotation3::FromMatrix(
    const std::array<std::array<double, 3>, 3> &m) {
  double residual = 0.0;
  for (int i = 0; i < 3; i++) {
    for (int j = 0; j < 3; j++) {
      double s = 0.0;
      for (int k = 0; k < 3; k++) s += m[k][i] * m[k][j];
      residual = std::max(residual, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (!(residual < 1e-10) || !(std::abs(det - 1.0) < 1e-10)) {
    throw Error(ErrorCode::kDegenerateInput, "matrix is not a proper rotation");
  }
  return Rotation3(m);
}

Rotation3 Rotation3::AboutAxis(const Vec3 &axis, double angle) {
  const Vec3 k = UnitVec::Normalize(axis).vec();
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  return Rotation3({{{t * k.x * k.x + c, t * k.x * k.y - s * k.z,
                      t * k.x * k.z + s * k.y},
                     {t * k.x * k.y + s * k.z, t * k.y * k.y + c,
                      t * k.y * k.z - s * k.x},
                     {t * k.x * k.z - s * k.y, t * k.y * k.z + s * k.x,
                      t * k.z * k.z + c}}});
}

Point3 Rotation3::Apply(const Point3 &p) const {
  return {m_[0][0] * p.x + m_[0][1] * p.y + m_[0][2] * p.z,
          m_[1][0] * p.x + m_[1][1] * p.y + m_[1][2] * p.z,
          m_[2][0] * p.x + m_[2][1] * p.y + m_[2][2] * p.z};
}

double Rotation3::Trace() const { return m_[0][0] + m_[1][1] + m_[2][2]; }

double Rotation3::Angle() const {
  // sin from the skew part, cos from the trace.
  const double sx = m_[2][1] - m_[1][2];
  const double sy = m_[0][2] - m_[2][0];
  const double sz = m_[1][0] - m_[0][1];
  const double s = 0.5 * std::sqrt(sx * sx + sy * sy + sz * sz);
  const double c = 0.5 * (Trace() - 1.0);
  return std::atan2(s, c);
}

Circle3 Circumcircle(const PlanarTriangle &t) {
  const Vec3 ab = t.b() - t.a();
  const Vec3 ac = t.c() - t.a();
  const Vec3 n = Cross(ab, ac);
  const double n2 = Dot(n, n);
  const Vec3 offset =
      (Cross(n, ab) * Dot(ac, ac) + Cross(ac, n) * Dot(ab, ab)) / (2.0 * n2);
  const Point3 center = t.a() + offset;
  // Average the three distances; they agree to rounding.
  const double r = (Distance(center, t.a()) + Distance(center, t.b()) +
                    Distance(center, t.c())) / 3.0;
  return {center, r};
}

std::array<double, 3> TriangleAngles(const PlanarTriangle &t) {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; i++) {
    const Point3 &p = t[i];
    out[i] = AngleBetween(t[(i + 1) % 3] - p, t[(i + 2) % 3] - p);
  }
  return out;
}

const char *ToString(ShapeCategory c) {
  switch (c) {
    case ShapeCategory::kEquilateral: return "equilateral";
    case ShapeCategory::kIsosceles: return "isosceles";
    case ShapeCategory::kScalene: return "scalene";
  }
  return "?";
}

const char *ToString(AngleClass c) {
  switch (c) {
    case AngleClass::kAcute: return "acute";
    case AngleClass::kRight: return "right";
    case AngleClass::kObtuse: return "obtuse";
  }
  return "?";
}

FaceShape ClassifyShape(const PlanarTriangle &t, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 0.1)) {
    throw Error(ErrorCode::kPreconditionFailed,
                "relative tolerance must lie in (0, 0.1)");
  }
  const std::array<double, 3> side = {t.Side(0), t.Side(1), t.Side(2)};
  const double longest = std::max({side[0], side[1], side[2]});
  const double shortest = std::min({side[0], side[1], side[2]});

  FaceShape shape;
  shape.sorted_side_lengths = side;
  std::sort(shape.sorted_side_lengths.begin(), shape.sorted_side_lengths.end());

  if (longest - shortest <= rel_tol * longest) {
    shape.category = ShapeCategory::kEquilateral;
  } else {
    // Vertex i sits between sides i+1 and i+2.
    int best = -1;
    double best_dev = 0.0;
    for (int i = 0; i < 3; i++) {
      const double dev =
          std::abs(side[(i + 1) % 3] - side[(i + 2) % 3]) / longest;
      if (dev <= rel_tol && (best < 0 || dev < best_dev)) {
        best = i;
        best_dev = dev;
      }
    }
    if (best >= 0) {
      shape.category = ShapeCategory::kIsosceles;
      shape.apex_index = best;
    }
  }

  const std::array<double, 3> angles = TriangleAngles(t);
  const double largest = std::max({angles[0], angles[1], angles[2]});
  const double right_tol = rel_tol * kPi / 2.0;
  if (std::abs(largest - kPi / 2.0) <= right_tol) {
    shape.angle_class = AngleClass::kRight;
  } else if (largest > kPi / 2.0) {
    shape.angle_class = AngleClass::kObtuse;
  } else {
    shape.angle_class = AngleClass::kAcute;
  }
  return shape;
}

namespace {

int MatchVertex(const PlanarTriangle &t, const Point3 &p, double tol) {
  int found = -1;
  double best = tol;
  for (int i = 0; i < 3; i++) {
    const double d = Distance(t[i], p);
    if (d <= best) {
      best = d;
      found = i;
    }
  }
  return found;
}

}  // namespace

double DihedralAngle(const PlanarTriangle &t1, const PlanarTriangle &t2,
                     const std::pair<Point3, Point3> &shared_edge) {
  const double tol =
      1e-12 * std::max(t1.LongestSide(), t2.LongestSide());
  const int i1 = MatchVertex(t1, shared_edge.first, tol);
  const int j1 = MatchVertex(t1, shared_edge.second, tol);
  const int i2 = MatchVertex(t2, shared_edge.first, tol);
  const int j2 = MatchVertex(t2, shared_edge.second, tol);
  if (i1 < 0 || j1 < 0 || i2 < 0 || j2 < 0 || i1 == j1 || i2 == j2) {
    throw Error(ErrorCode::kTopologyError,
                "triangles do not share the given edge");
  }
  const Point3 &p = shared_edge.first;
  const Vec3 e = shared_edge.second - p;
  const Point3 &o1 = t1[3 - i1 - j1];
  const Point3 &o2 = t2[3 - i2 - j2];

  const double ee = Dot(e, e);
  const Vec3 u1 = (o1 - p) - e * (Dot(o1 - p, e) / ee);
  const Vec3 u2 = (o2 - p) - e * (Dot(o2 - p, e) / ee);
  const double open = AngleBetween(u1, u2);

  // o2 above the outward side of t1 means the solid wraps past flat.
  const Vec3 n1 = Cross(t1.b() - t1.a(), t1.c() - t1.a());
  const double side = Dot(n1, o2 - p);
  return side > 0.0 ? 2.0 * kPi - open : open;
}

double GeodesicDistance(const UnitVec &u, const UnitVec &v) {
  return AngleBetween(u.vec(), v.vec());
}

SphericalSides SphericalIsoscelesSides(double apex_angle, double base_angle) {
  if (!(apex_angle > 0.0 && apex_angle < kPi && base_angle > 0.0 &&
        base_angle < kPi)) {
    throw Error(ErrorCode::kInvalidSphericalTriangle,
                "angles must lie in (0, pi)");
  }
  if (!(apex_angle + 2.0 * base_angle > kPi)) {
    throw Error(ErrorCode::kInvalidSphericalTriangle,
                "angular excess must be positive");
  }
  const double ca = std::cos(apex_angle), sa = std::sin(apex_angle);
  const double cb = std::cos(base_angle), sb = std::sin(base_angle);
  const double cos_leg = cb * (1.0 + ca) / (sa * sb);
  const double cos_base = (ca + cb * cb) / (sb * sb);
  if (!(std::abs(cos_leg) < 1.0) || !(std::abs(cos_base) < 1.0)) {
    throw Error(ErrorCode::kInvalidSphericalTriangle,
                "no spherical triangle has these angles");
  }
  return {std::acos(cos_leg), std::acos(cos_base)};
}

double SphericalAngle(const UnitVec &a, const UnitVec &b, const UnitVec &c) {
  const Vec3 &p = a.vec();
  const Vec3 tb = b.vec() - p * Dot(p, b.vec());
  const Vec3 tc = c.vec() - p * Dot(p, c.vec());
  return AngleBetween(tb, tc);
}

Rotation3 FitCyclicRotation(std::span<const Point3> points, int shift) {
  const int n = static_cast<int>(points.size());
  if (n < 3) {
    throw Error(ErrorCode::kDegenerateInput, "need at least three points");
  }
  double scale = 0.0;
  for (const Point3 &p : points) scale = std::max(scale, Norm(p));
  bool spans_plane = false;
  for (int i = 1; i < n && !spans_plane; i++) {
    for (int j = i + 1; j < n && !spans_plane; j++) {
      spans_plane = Norm(Cross(points[i] - points[0], points[j] - points[0])) >
                    1e-12 * scale * scale;
    }
  }
  if (!(scale > 0.0) || !spans_plane) {
    throw Error(ErrorCode::kDegenerateInput, "points are collinear");
  }

  // Kabsch: maximize sum target_i . R source_i.
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (int i = 0; i < n; i++) {
    const Point3 &s = points[i];
    const Point3 &t = points[((i + shift) % n + n) % n];
    const Eigen::Vector3d sv(s.x, s.y, s.z), tv(t.x, t.y, t.z);
    h += sv * tv.transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU |
                                             Eigen::ComputeFullV);
  const double d = (svd.matrixV() * svd.matrixU().transpose()).determinant();
  Eigen::Matrix3d fix = Eigen::Matrix3d::Identity();
  fix(2, 2) = d < 0 ? -1.0 : 1.0;
  const Eigen::Matrix3d r = svd.matrixV() * fix * svd.matrixU().transpose();

  std::array<std::array<double, 3>, 3> m{};
  for (int i = 0; i < 3; i++) {
    for (int j = 0; j < 3; j++) m[i][j] = r(i, j);
  }
  Rotation3 rot = Rotation3::FromMatrix(m);

  double worst = 0.0;
  for (int i = 0; i < n; i++) {
    const Point3 &t = points[((i + shift) % n + n) % n];
    worst = std::max(worst, Distance(rot.Apply(points[i]), t));
  }
  if (!(worst < 1e-8 * scale)) {
    throw Error(ErrorCode::kNoSymmetry,
                "no rotation maps the points cyclically by the requested "
                "shift (residual " + std::to_string(worst / scale) + ")");
  }
  return rot;
}

}  // namespace polyiso
