#include "polyiso/verify.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "polyiso/error.h"
#include "polyiso/kleetope.h"

namespace polyiso {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void Precondition(const std::string &msg) {
  throw Error(ErrorCode::kPreconditionFailed, msg);
}

// F in z = 0 with p0 at the origin, p1 = (1, 0, 0), angles at p0, p1, p2.
std::array<Point3, 3> BaseFromAngles(const std::array<double, 3> &ang) {
  const double b = std::sin(ang[1]) / std::sin(ang[2]);
  return {Point3{0, 0, 0}, Point3{1, 0, 0},
          Point3{b * std::cos(ang[0]), b * std::sin(ang[0]), 0}};
}

// Angle at a between the parts of (b - a) and (c - a) orthogonal to axis.
double AngleAround(const Point3 &a, const Vec3 &axis, const Point3 &b, const Point3 &c) {
  const Vec3 u = UnitVec::Normalize(axis).vec();
  Vec3 x = b - a, y = c - a;
  x = x - u * Dot(x, u);
  y = y - u * Dot(y, u);
  return std::atan2(Norm(Cross(x, y)), Dot(x, y));
}

double AngleAt(const Point3 &v, const Point3 &a, const Point3 &b) {
  return AngleBetween(a - v, b - v);
}

bool RequiresObtuse(TetraCase c) {
  return c != TetraCase::kTwoSharedBases && c != TetraCase::kTwoSharedApexes;
}

// Random rotation about a random axis, then a translation in [-1, 1]^3.
IsoTetra RigidMotion(IsoTetra t, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> turn(0, 2 * kPi), shift(-1, 1);
  Vec3 axis{g(rng), g(rng), g(rng)};
  if (Norm(axis) < 1e-6) axis = {0, 0, 1};
  const Rotation3 r = Rotation3::AboutAxis(axis, turn(rng));
  const Vec3 d{shift(rng), shift(rng), shift(rng)};
  for (Point3 &p : t.p) p = r.Apply(p) + d;
  return t;
}

}  // namespace

const char *ToString(TetraCase c) {
  switch (c) {
    case TetraCase::kTwoBasesOnF: return "two-bases-on-F";
    case TetraCase::kTwoSharedBases: return "two-shared-bases";
    case TetraCase::kLongSide: return "long-side";
    case TetraCase::kTwoSharedApexes: return "two-shared-apexes";
    case TetraCase::kNoneOfAbove: return "none-of-the-above";
  }
  return "?";
}

const char *ToString(NoneSubcase s) {
  return s == NoneSubcase::kShorter ? "shorter" : "longer";
}

std::optional<TetraCase> ClassifyIsoTetra(const std::array<Point3, 4> &p, double rel_tol) {
  double scale = 0;
  for (int i = 0; i < 4; i++)
    for (int j = i + 1; j < 4; j++) scale = std::max(scale, Distance(p[i], p[j]));
  if (std::abs(Orient3(p[0], p[1], p[2], p[3])) <= 1e-12 * scale * scale * scale) {
    return std::nullopt;
  }
  // Side face k lies on F edge (k, k+1). apex[k] is a tetra vertex index, or
  // -1 for an equilateral face whose apex is undefined.
  std::array<int, 3> apex{};
  for (int k = 0; k < 3; k++) {
    const std::array<int, 3> idx = {k, (k + 1) % 3, 3};
    if (PlanarTriangle::IsDegenerate(p[idx[0]], p[idx[1]], p[idx[2]])) return std::nullopt;
    const FaceShape s = ClassifyShape(PlanarTriangle(p[idx[0]], p[idx[1]], p[idx[2]]), rel_tol);
    if (s.category == ShapeCategory::kScalene) return std::nullopt;
    apex[k] = s.category == ShapeCategory::kEquilateral ? -1 : idx[s.apex_index];
  }
  // Base edge of side face k as the pair not containing its apex.
  auto has_base = [&](int k, int u, int v) {
    return apex[k] == -1 || (apex[k] != u && apex[k] != v);
  };

  int on_f = 0;
  for (int k = 0; k < 3; k++) on_f += has_base(k, k, (k + 1) % 3);
  if (on_f >= 2) return TetraCase::kTwoBasesOnF;

  // Side faces k and k+1 share the edge (k+1, tip).
  for (int k = 0; k < 3; k++) {
    const int v = (k + 1) % 3;
    if (has_base(k, v, 3) && has_base(v, v, 3)) return TetraCase::kTwoSharedBases;
  }

  int longest = 0;
  double best = -1;
  for (int k = 0; k < 3; k++) {
    const double len = Distance(p[k], p[(k + 1) % 3]);
    if (len > best) best = len, longest = k;
  }
  if (apex[longest] != 3) return TetraCase::kLongSide;

  for (int k = 0; k < 3; k++) {
    const int v = (k + 1) % 3;
    if (apex[k] == v && apex[v] == v) return TetraCase::kTwoSharedApexes;
  }
  return TetraCase::kNoneOfAbove;
}

void ValidateIsoTetra(const IsoTetra &t) {
  const std::optional<TetraCase> c = ClassifyIsoTetra(t.p, 1e-9);
  if (!c) Precondition("tetrahedron is flat or has a scalene side face");
  if (*c != t.tag) {
    Precondition(std::string("tetrahedron is in case ") + ToString(*c) + ", tagged " +
                 ToString(t.tag));
  }
  if (t.obtuse_base || RequiresObtuse(t.tag)) {
    if (PlanarTriangle::IsDegenerate(t.p[0], t.p[1], t.p[2])) Precondition("base face is degenerate");
    const FaceShape f = ClassifyShape(PlanarTriangle(t.p[0], t.p[1], t.p[2]), 1e-9);
    if (f.angle_class != AngleClass::kObtuse) {
      Precondition(std::string("case ") + ToString(t.tag) + " needs an obtuse base face");
    }
  }
  if (t.tag == TetraCase::kNoneOfAbove) {
    if (!t.subcase) Precondition("none-of-the-above tetrahedron without subcase");
    // Longest F edge (u, v), third vertex w: tip distances (b, b, a) up to
    // swapping u and v, with a = |vw|, b = |wu| after the swap.
    int k = 0;
    for (int j = 1; j < 3; j++) {
      if (Distance(t.p[j], t.p[(j + 1) % 3]) > Distance(t.p[k], t.p[(k + 1) % 3])) k = j;
    }
    const int u = k, v = (k + 1) % 3, w = (k + 2) % 3;
    const double du = Distance(t.p[3], t.p[u]), dv = Distance(t.p[3], t.p[v]),
                 dw = Distance(t.p[3], t.p[w]);
    const double uw = Distance(t.p[u], t.p[w]), vw = Distance(t.p[v], t.p[w]);
    auto eq = [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(x, y); };
    double a = 0, b = 0;
    if (eq(du, dv) && eq(du, uw) && eq(dw, vw)) a = vw, b = uw;
    else if (eq(du, dv) && eq(dv, vw) && eq(dw, uw)) a = uw, b = vw;
    else Precondition("none-of-the-above tetrahedron without the (b, b, a) tip distances");
    const NoneSubcase s = a < b ? NoneSubcase::kShorter : NoneSubcase::kLonger;
    if (s != *t.subcase) Precondition("none-of-the-above subcase does not match the lengths");
  } else if (t.subcase) {
    Precondition("subcase given outside none-of-the-above");
  }
}

std::optional<Point3> Trilaterate(const std::array<Point3, 3> &f, const std::array<double, 3> &d) {
  // Frame with f[0] at the origin, f[1] on the x axis, f[2] in the xy plane.
  const Vec3 ex = UnitVec::Normalize(f[1] - f[0]).vec();
  const Vec3 t = f[2] - f[0];
  const Vec3 ey = UnitVec::Normalize(t - ex * Dot(t, ex)).vec();
  const Vec3 ez = Cross(ex, ey);
  const double c = Norm(f[1] - f[0]);
  const double i = Dot(t, ex), j = Dot(t, ey);
  const double x = (d[0] * d[0] - d[1] * d[1] + c * c) / (2 * c);
  const double y = (d[0] * d[0] - d[2] * d[2] + i * i + j * j - 2 * i * x) / (2 * j);
  const double z2 = d[0] * d[0] - x * x - y * y;
  const double scale = std::max({c, Norm(t), d[0], d[1], d[2]});
  if (!(z2 > 1e-6 * scale * scale)) return std::nullopt;
  return f[0] + ex * x + ey * y + ez * std::sqrt(z2);
}

IsoTetra TwoBasesOnFTetra(const std::array<double, 3> &angles, double height) {
  const auto f = BaseFromAngles(angles);
  // Circumcenter of F in its plane.
  const double bx = f[1].x, cx = f[2].x, cy = f[2].y;
  const double ux = bx / 2;
  const double uy = (cx * cx + cy * cy - bx * cx) / (2 * cy);
  IsoTetra t;
  t.p = {f[0], f[1], f[2], Point3{ux, uy, height}};
  t.tag = TetraCase::kTwoBasesOnF;
  return t;
}

IsoTetra TwoSharedBasesTetra(double apex_angle, int edge, double rotation) {
  const double s = std::sin(apex_angle / 2), c = std::cos(apex_angle / 2);
  IsoTetra t;
  t.p[0] = {0, 0, 0};
  t.p[1] = {2 * s, 0, 0};
  t.p[2] = {s, c, 0};
  if (edge == 0) {
    t.p[3] = Rotation3::AboutAxis({1, 0, 0}, rotation).Apply(t.p[2]);
  } else {
    const Vec3 axis = t.p[2] - t.p[1];
    Point3 q = t.p[1] + Rotation3::AboutAxis(axis, rotation).Apply(t.p[0] - t.p[1]);
    if (q.z < 0) q = t.p[1] + Rotation3::AboutAxis(axis, -rotation).Apply(t.p[0] - t.p[1]);
    t.p[3] = q;
  }
  t.tag = TetraCase::kTwoSharedBases;
  t.obtuse_base = apex_angle > kPi / 2;
  return t;
}

IsoTetra TwoSharedApexesTetra(double apex_angle, double elevation) {
  const double s = std::sin(apex_angle / 2), c = std::cos(apex_angle / 2);
  IsoTetra t;
  t.p[0] = {-s, c, 0};
  t.p[1] = {s, c, 0};
  t.p[2] = {0, 0, 0};
  t.p[3] = {0, std::cos(elevation), std::sin(elevation)};
  t.tag = TetraCase::kTwoSharedApexes;
  t.obtuse_base = apex_angle > kPi / 2;
  return t;
}

std::optional<IsoTetra> LongSideTetra(const std::array<double, 3> &angles, LongSidePattern pat) {
  const auto f = BaseFromAngles(angles);
  const double c = Distance(f[0], f[1]), a = Distance(f[1], f[2]), b = Distance(f[2], f[0]);
  std::array<double, 3> d{};
  switch (pat) {
    case LongSidePattern::kAB: d = {c, a, b}; break;
    case LongSidePattern::kBB: d = {c, b, b}; break;
    case LongSidePattern::kAC: d = {c, a, c}; break;
  }
  const auto tip = Trilaterate(f, d);
  if (!tip) return std::nullopt;
  IsoTetra t;
  t.p = {f[0], f[1], f[2], *tip};
  t.tag = TetraCase::kLongSide;
  return t;
}

std::optional<IsoTetra> NoneOfAboveTetra(const std::array<double, 3> &angles) {
  const auto f = BaseFromAngles(angles);
  const double a = Distance(f[1], f[2]), b = Distance(f[2], f[0]);
  const auto tip = Trilaterate(f, {b, b, a});
  if (!tip) return std::nullopt;
  IsoTetra t;
  t.p = {f[0], f[1], f[2], *tip};
  t.tag = TetraCase::kNoneOfAbove;
  t.subcase = a < b ? NoneSubcase::kShorter : NoneSubcase::kLonger;
  return t;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 SampleStream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(SplitMix64(SplitMix64(seed) ^ index));
}

IsoTetra SampleIsoTetra(std::uint64_t seed, std::uint64_t index, TetraCase c, bool obtuse_base,
                        std::optional<NoneSubcase> subcase, const SamplerOptions &opt) {
  if (RequiresObtuse(c) && !obtuse_base) {
    Precondition(std::string("case ") + ToString(c) + " needs an obtuse base face");
  }
  if ((c == TetraCase::kNoneOfAbove) != subcase.has_value()) {
    Precondition("a subcase is required exactly for none-of-the-above");
  }
  std::mt19937_64 rng = SampleStream(seed, index);
  std::uniform_real_distribution<double> unit(0, 1);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  // Obtuse angles at p2, the other two split between p0 and p1.
  auto obtuse_angles = [&] {
    const double big = uniform(opt.obtuse_min, opt.obtuse_max);
    const double first = (kPi - big) * uniform(0.1, 0.9);
    return std::array<double, 3>{first, kPi - big - first, big};
  };
  auto apex_angle = [&] {
    return obtuse_base ? uniform(opt.obtuse_min, opt.obtuse_max) : uniform(0.1, kPi / 2);
  };

  for (int attempt = 0; attempt < opt.max_rejections; attempt++) {
    std::optional<IsoTetra> t;
    switch (c) {
      case TetraCase::kTwoBasesOnF:
        t = TwoBasesOnFTetra(obtuse_angles(), uniform(0.05, 2.0));
        break;
      case TetraCase::kTwoSharedBases: {
        const double theta = apex_angle();
        const int edge = unit(rng) < 0.5 ? 0 : 1;
        t = TwoSharedBasesTetra(theta, edge, uniform(0.05, kPi - 0.05));
        break;
      }
      case TetraCase::kLongSide: {
        const auto ang = obtuse_angles();
        const int pick = static_cast<int>(unit(rng) * 3);
        t = LongSideTetra(ang, static_cast<LongSidePattern>(std::min(pick, 2)));
        break;
      }
      case TetraCase::kTwoSharedApexes:
        t = TwoSharedApexesTetra(apex_angle(), uniform(0.05, kPi - 0.05));
        break;
      case TetraCase::kNoneOfAbove: {
        auto ang = obtuse_angles();
        // a < b exactly when the angle at p0 is the smaller one.
        const bool shorter = *subcase == NoneSubcase::kShorter;
        if ((ang[0] < ang[1]) != shorter) std::swap(ang[0], ang[1]);
        t = NoneOfAboveTetra(ang);
        break;
      }
    }
    if (!t) continue;
    t->obtuse_base = obtuse_base;
    IsoTetra moved = RigidMotion(*t, rng);
    try {
      ValidateIsoTetra(moved);
      return moved;
    } catch (const Error &) {
    }
  }
  throw Error(ErrorCode::kSamplerExhausted,
              std::string("no valid ") + ToString(c) + " tetrahedron after " +
                  std::to_string(opt.max_rejections) + " draws");
}

std::array<double, 3> BaseDihedrals(const IsoTetra &t) {
  std::array<double, 3> out{};
  for (int k = 0; k < 3; k++) {
    const Point3 &u = t.p[k], &v = t.p[(k + 1) % 3], &w = t.p[(k + 2) % 3];
    out[k] = AngleAround(u, v - u, w, t.p[3]);
  }
  return out;
}

BigDihedralCheck CheckBigDihedral(const IsoTetra &t) {
  ValidateIsoTetra(t);
  const auto d = BaseDihedrals(t);
  BigDihedralCheck r;
  r.max_base_dihedral = *std::max_element(d.begin(), d.end());
  r.pass = r.max_base_dihedral > kPi / 3 - 1e-9;
  return r;
}

TriangleMesh IsoTetraMesh(const IsoTetra &t) {
  std::vector<Point3> v(t.p.begin(), t.p.end());
  std::vector<Face> f = {{0, 1, 2}, {0, 1, 3}, {1, 2, 3}, {2, 0, 3}};
  for (int k = 0; k < 4; k++) {
    const Face &face = f[k];
    // The vertex not on the face must be behind it.
    const int other = 6 - face[0] - face[1] - face[2];
    if (Orient3(v[face[0]], v[face[1]], v[face[2]], v[other]) > 0) std::swap(f[k][1], f[k][2]);
  }
  return TriangleMesh(std::move(v), std::move(f));
}

std::vector<BigDihedralStream> RunBigDihedral(std::uint64_t seed, long samples,
                                              const SamplerOptions &opt) {
  struct Spec {
    TetraCase tag;
    bool obtuse;
    std::optional<NoneSubcase> sub;
  };
  const std::vector<Spec> specs = {
      {TetraCase::kTwoBasesOnF, true, std::nullopt},
      {TetraCase::kTwoSharedBases, true, std::nullopt},
      {TetraCase::kTwoSharedBases, false, std::nullopt},
      {TetraCase::kLongSide, true, std::nullopt},
      {TetraCase::kTwoSharedApexes, true, std::nullopt},
      {TetraCase::kTwoSharedApexes, false, std::nullopt},
      {TetraCase::kNoneOfAbove, true, NoneSubcase::kShorter},
      {TetraCase::kNoneOfAbove, true, NoneSubcase::kLonger},
  };
  std::vector<BigDihedralStream> out;
  for (size_t s = 0; s < specs.size(); s++) {
    const std::uint64_t stream_seed = SplitMix64(seed + s);
    BigDihedralStream r;
    r.tag = specs[s].tag;
    r.obtuse_base = specs[s].obtuse;
    r.subcase = specs[s].sub;
    r.min_max_dihedral = 1e300;
    r.max_max_dihedral = -1e300;
    for (long i = 0; i < samples; i++) {
      const IsoTetra t = SampleIsoTetra(stream_seed, static_cast<std::uint64_t>(i), specs[s].tag,
                                        specs[s].obtuse, specs[s].sub, opt);
      const BigDihedralCheck c = CheckBigDihedral(t);
      r.samples++;
      r.min_max_dihedral = std::min(r.min_max_dihedral, c.max_base_dihedral);
      r.max_max_dihedral = std::max(r.max_max_dihedral, c.max_base_dihedral);
      if (!c.pass) {
        if (r.violations++ == 0) {
          r.first_violation = static_cast<std::uint64_t>(i);
          r.first_counterexample = t;
        }
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

double SharedBasesBoundary(double flatness) {
  const auto d = BaseDihedrals(TwoSharedBasesTetra(kPi - flatness, 0, kPi / 3));
  return *std::max_element(d.begin(), d.end());
}

std::array<Point3, 3> LiftedTriangle(const Point3 &projected, double plane_angle) {
  return {Point3{0, 0, 0}, Point3{1, 0, 0},
          Point3{projected.x, projected.y, projected.y * std::tan(plane_angle)}};
}

ObtuseProjectionReport CheckObtuseProjection(std::uint64_t seed, long samples) {
  ObtuseProjectionReport r;
  r.min_lifted_angle = 1e300;
  // Points seeing the unit edge at >= 2 pi/3 lie within this height.
  const double y_max = 0.5 / std::sqrt(3.0);
  for (long i = 0; i < samples; i++) {
    std::mt19937_64 rng = SampleStream(seed, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> unit(0, 1);
    Point3 q;
    double projected = 0;
    do {
      q = {unit(rng), y_max * unit(rng), 0};
      projected = AngleAt(q, {0, 0, 0}, {1, 0, 0});
    } while (!(q.y > 0 && projected >= 2 * kPi / 3));
    const double plane = kPhi * unit(rng);
    const auto tri = LiftedTriangle(q, plane);
    const double lifted = AngleAt(tri[2], tri[0], tri[1]);
    r.samples++;
    r.min_lifted_angle = std::min(r.min_lifted_angle, lifted);
    if (lifted < kPi / 2 - 1e-9 && !r.counterexample) {
      r.counterexample = ObtuseProjectionSample{static_cast<std::uint64_t>(i), plane, projected,
                                                lifted};
    }
  }
  return r;
}

SharpnessDecayReport SharpnessDecay(const TriangleMesh &seed, int iterations,
                                    double height_factor) {
  if (iterations < 0 || iterations > 3) Precondition("sharpness decay needs 0 <= iterations <= 3");
  SharpnessDecayReport r;
  auto sharpness = [](const TriangleMesh &m) {
    std::vector<double> s(m.NumFaces());
    for (int f = 0; f < m.NumFaces(); f++) s[f] = Sharpness(m, f);
    return s;
  };
  TriangleMesh cur = seed;
  std::vector<double> s = sharpness(cur);
  r.min_sharpness.push_back(*std::min_element(s.begin(), s.end()));
  for (int i = 0; i < iterations; i++) {
    TriangleMesh next = ConvexKleetope(cur, height_factor);
    const std::vector<double> ns = sharpness(next);
    double excess = -1e300;
    for (int f = 0; f < cur.NumFaces(); f++) {
      for (int k = 0; k < 3; k++) excess = std::max(excess, ns[3 * f + k] - 2 * s[f]);
    }
    r.doublesharp_excess.push_back(excess);
    r.doublesharp = r.doublesharp && excess <= 1e-9;
    r.min_sharpness.push_back(*std::min_element(ns.begin(), ns.end()));
    r.non_increasing = r.non_increasing && r.min_sharpness.back() <= r.min_sharpness[i] + 1e-12;
    cur = std::move(next);
    s = ns;
  }
  return r;
}

}  // namespace polyiso
