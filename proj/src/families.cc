#include "polyiso/families.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "polyiso/error.h"
#include "polyiso/hull.h"

namespace polyiso {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void Invalid(const std::string &msg) { throw Error(ErrorCode::kInvalidSpec, msg); }

// Faces turned to point away from the centroid of all vertices.
std::vector<Face> OrientOutward(const std::vector<Point3> &v, std::vector<Face> faces) {
  Point3 c;
  for (const Point3 &p : v) c += p;
  c = c / static_cast<double>(v.size());
  for (Face &f : faces) {
    if (Orient3(v[f[0]], v[f[1]], v[f[2]], c) > 0) std::swap(f[1], f[2]);
  }
  return faces;
}

// Hull whose corners are exactly the input points, in input order.
TriangleMesh HullOfCorners(const std::vector<Point3> &pts, const std::string &what) {
  HullResult h = ConvexHull3(pts);
  if (h.mesh.NumVertices() != static_cast<int>(pts.size())) {
    throw Error(ErrorCode::kConstructionInvalid,
                what + ": only " + std::to_string(h.mesh.NumVertices()) + " of " +
                    std::to_string(pts.size()) + " points are hull corners");
  }
  return std::move(h.mesh);
}

// Vertex positions for the polar layouts: poles, upper ring at height
// z_ring and radius rho, lower ring mirrored and turned by pi/k.
std::vector<Point3> PolarLayout(int k, double z_pole, double z_ring, double rho) {
  std::vector<Point3> v = {{0, 0, z_pole}, {0, 0, -z_pole}};
  for (int i = 0; i < k; i++) {
    const double t = 2 * kPi * i / k;
    v.push_back({rho * std::cos(t), rho * std::sin(t), z_ring});
  }
  for (int i = 0; i < k; i++) {
    const double t = 2 * kPi * i / k + kPi / k;
    v.push_back({rho * std::cos(t), rho * std::sin(t), -z_ring});
  }
  return v;
}

// Face pattern for PolarLayout: pole caps and the antiprism band.
// Compared with the convex hull; where the hull merges coplanar faces (k = 3,
// a cube) the explicit faces must still form a weakly convex surface.
TriangleMesh PolarMesh(int k, std::vector<Point3> v, const std::string &what) {
  std::vector<Face> f;
  for (int i = 0; i < k; i++) {
    const int j = (i + 1) % k;
    const int ui = 2 + i, uj = 2 + j, li = k + 2 + i, lj = k + 2 + j;
    f.push_back({0, ui, uj});
    f.push_back({ui, li, uj});
    f.push_back({li, lj, uj});
    f.push_back({1, li, lj});
  }
  f = OrientOutward(v, std::move(f));
  const TriangleMesh hull = HullOfCorners(v, what);
  if (hull.NumFaces() != 4 * k) {
    throw Error(ErrorCode::kConstructionInvalid,
                what + ": hull has " + std::to_string(hull.NumFaces()) + " faces, expected " +
                    std::to_string(4 * k));
  }
  TriangleMesh m(std::move(v), std::move(f));
  if (CanonicalFaces(hull.faces()) != CanonicalFaces(m.faces()) &&
      !IsConvex(m, 1e-9, ConvexityMode::kWeak).convex) {
    throw Error(ErrorCode::kConstructionInvalid, what + ": faces differ from the convex hull");
  }
  return m;
}

}  // namespace

TriangleMesh Bipyramid(int n, double h) {
  if (n < 3) Invalid("bipyramid needs n >= 3");
  if (!(h > 0) || !std::isfinite(h)) Invalid("bipyramid needs h > 0");
  std::vector<Point3> v;
  for (int i = 0; i < n; i++) {
    v.push_back({std::cos(2 * kPi * i / n), std::sin(2 * kPi * i / n), 0});
  }
  v.push_back({0, 0, h});
  v.push_back({0, 0, -h});
  std::vector<Face> f;
  for (int i = 0; i < n; i++) f.push_back({i, (i + 1) % n, n});
  for (int i = 0; i < n; i++) f.push_back({(i + 1) % n, i, n + 1});
  return TriangleMesh(std::move(v), std::move(f));
}

BiarcPoints BiarcArcs(int x, int y) {
  if (x < 2 || y < 2) Invalid("biarc hull needs x >= 2 and y >= 2");
  BiarcPoints p;
  p.b = 1.0;
  p.a = std::sin(kPi / (2 * y)) / std::sin(kPi / (2 * x));
  for (int i = 0; i <= x; i++) {
    p.x_arc.push_back({p.a * std::cos(i * kPi / x), p.a * std::sin(i * kPi / x), 0});
  }
  for (int j = 0; j <= y; j++) {
    p.y_arc.push_back({0, -p.b * std::sin(j * kPi / y), p.b * std::cos(j * kPi / y)});
  }
  // Exact endpoints keep the x = y = 2 case on the octahedron lattice.
  p.x_arc.back() = {-p.a, 0, 0};
  p.y_arc.back() = {0, 0, -p.b};
  return p;
}

TriangleMesh BiarcHull(int x, int y) {
  const BiarcPoints p = BiarcArcs(x, y);
  std::vector<Point3> v = p.x_arc;
  v.insert(v.end(), p.y_arc.begin(), p.y_arc.end());
  const int y0 = x + 1, yy = x + 1 + y;
  std::vector<Face> f;
  for (int i = 0; i < x; i++) {
    f.push_back({i, i + 1, y0});
    f.push_back({i, i + 1, yy});
  }
  for (int j = 0; j < y; j++) {
    f.push_back({y0 + j, y0 + j + 1, 0});
    f.push_back({y0 + j, y0 + j + 1, x});
  }
  f = OrientOutward(v, std::move(f));
  const TriangleMesh hull = HullOfCorners(v, "biarc hull");
  if (CanonicalFaces(hull.faces()) != CanonicalFaces(f)) {
    throw Error(ErrorCode::kConstructionInvalid,
                "biarc hull: explicit faces differ from the convex hull for x = " +
                    std::to_string(x) + ", y = " + std::to_string(y));
  }
  return TriangleMesh(std::move(v), std::move(f));
}

TriangleMesh GyroelongatedBipyramid(int k) {
  if (k < 3) Invalid("gyroelongated bipyramid needs k >= 3");
  const double leg = SphericalIsoscelesSides(2 * kPi / k, (0.5 - 0.5 / k) * kPi).leg_arc;
  return PolarMesh(k, PolarLayout(k, 1.0, std::cos(leg), std::sin(leg)),
                   "gyroelongated bipyramid");
}

TriangleMesh EquilateralGyroelongatedBipyramid(int k) {
  if (k != 4 && k != 5) Invalid("unit-edge gyroelongated bipyramid exists only for k = 4, 5");
  const double rho = 1 / (2 * std::sin(kPi / k));
  const double chord = 2 * rho * std::sin(kPi / (2 * k));
  const double z_ring = std::sqrt(1 - chord * chord) / 2;
  const double z_pole = z_ring + std::sqrt(1 - rho * rho);
  return PolarMesh(k, PolarLayout(k, z_pole, z_ring, rho), "unit-edge gyroelongated bipyramid");
}

PolarHexagon FindPolarHexagon(const TriangleMesh &m, int k) {
  if (k < 3 || k % 2 == 0) {
    throw Error(ErrorCode::kHexagonNotFound,
                "polar hexagon needs odd k >= 3, got k = " + std::to_string(k));
  }
  const int nv = m.NumVertices();
  int north = 0, south = 0;
  for (int v = 1; v < nv; v++) {
    if (m.vertex(v).z > m.vertex(north).z) north = v;
    if (m.vertex(v).z < m.vertex(south).z) south = v;
  }
  std::vector<int> upper, lower;
  for (int v = 0; v < nv; v++) {
    if (v == north || v == south) continue;
    (m.vertex(v).z > 0 ? upper : lower).push_back(v);
  }
  const auto &adj = m.Adjacency();
  auto adjacent = [&](int a, int b) {
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
  };
  std::vector<UnitVec> unit;
  for (const Point3 &p : m.vertices()) unit.push_back(UnitVec::Normalize(p));
  const double target = (1 - 1.0 / k) * kPi;

  for (int a : upper) {
    if (!adjacent(north, a)) continue;
    for (int b : lower) {
      if (!adjacent(a, b) || !adjacent(b, south)) continue;
      for (int c : lower) {
        if (c == b || !adjacent(south, c)) continue;
        for (int d : upper) {
          if (d == a || !adjacent(c, d) || !adjacent(d, north)) continue;
          const std::array<int, 6> hex = {north, a, b, south, c, d};
          std::set<int> cut;
          for (int i = 0; i < 6; i++) cut.insert(m.FindEdge(hex[i], hex[(i + 1) % 6]));

          // Faces connected across non-hexagon edges.
          std::vector<int> side(m.NumFaces(), -1);
          int components = 0;
          for (int f0 = 0; f0 < m.NumFaces(); f0++) {
            if (side[f0] >= 0) continue;
            std::vector<int> stack = {f0};
            side[f0] = components;
            while (!stack.empty()) {
              const int f = stack.back();
              stack.pop_back();
              for (int e : m.FaceEdges(f)) {
                if (cut.count(e)) continue;
                for (int g : m.edge(e).faces) {
                  if (side[g] < 0) {
                    side[g] = components;
                    stack.push_back(g);
                  }
                }
              }
            }
            components++;
          }
          if (components != 2) continue;
          if (std::count(side.begin(), side.end(), 0) != 2 * k) continue;

          auto pole_count = [&](int pole, int s) {
            int n = 0;
            for (int f : m.VertexFaces(pole)) n += side[f] == s;
            return n;
          };
          const int lo = (k - 1) / 2, hi = (k + 1) / 2;
          int side_a = -1;
          if (pole_count(north, 0) == lo && pole_count(north, 1) == hi) side_a = 0;
          if (pole_count(north, 1) == lo && pole_count(north, 0) == hi) side_a = 1;
          if (side_a < 0) continue;
          const int ns0 = pole_count(south, 0), ns1 = pole_count(south, 1);
          if (!((ns0 == lo && ns1 == hi) || (ns0 == hi && ns1 == lo))) continue;

          PolarHexagon out;
          out.vertices = hex;
          bool angles_ok = true;
          for (int i = 0; i < 6; i++) {
            const int v = hex[i];
            double on_side[2] = {0, 0};
            for (int f : m.VertexFaces(v)) {
              const Face &face = m.face(f);
              const int at = static_cast<int>(std::find(face.begin(), face.end(), v) - face.begin());
              on_side[side[f]] += SphericalAngle(unit[v], unit[face[(at + 1) % 3]],
                                                 unit[face[(at + 2) % 3]]);
            }
            out.angles[i] = std::min(on_side[0], on_side[1]);
            if (std::abs(out.angles[i] - target) > 1e-9) angles_ok = false;
          }
          if (!angles_ok) continue;
          for (int f = 0; f < m.NumFaces(); f++) {
            (side[f] == side_a ? out.side_a : out.side_b).push_back(f);
          }
          return out;
        }
      }
    }
  }
  throw Error(ErrorCode::kHexagonNotFound,
              "no pole-to-pole hexagon splits the faces evenly with equal angles (1 - 1/k) pi");
}

TwistedGyro TwistedGyroelongatedBipyramid(int k) {
  if (k == 3) {
    Invalid("twisted gyroelongated bipyramid with k = 3 is a cube triangulated by square "
            "diagonals, which is not strictly convex; use odd k >= 5");
  }
  if (k < 5 || k % 2 == 0) Invalid("twisted gyroelongated bipyramid needs odd k >= 5");
  const TriangleMesh base = GyroelongatedBipyramid(k);
  TwistedGyro out;
  out.hexagon = FindPolarHexagon(base, k);
  std::vector<Point3> hex_points;
  for (int v : out.hexagon.vertices) hex_points.push_back(base.vertex(v));
  out.twist = FitCyclicRotation(hex_points, 2);
  if (std::abs(out.twist.Trace()) > 1e-8) {
    throw Error(ErrorCode::kNoSymmetry, "hexagon symmetry is not a turn by 2 pi / 3");
  }
  std::set<int> moved;
  for (int f : out.hexagon.side_a)
    for (int v : base.face(f)) moved.insert(v);
  for (int v : out.hexagon.vertices) moved.erase(v);
  out.rotated.assign(moved.begin(), moved.end());
  std::vector<Point3> v = base.vertices();
  for (int i : out.rotated) v[i] = out.twist.Apply(v[i]);
  out.mesh = HullOfCorners(v, "twisted gyroelongated bipyramid");
  if (out.mesh.NumFaces() != 4 * k) {
    throw Error(ErrorCode::kConstructionInvalid,
                "twisted gyroelongated bipyramid: hull has " +
                    std::to_string(out.mesh.NumFaces()) + " faces, expected " +
                    std::to_string(4 * k));
  }
  if (CongruenceClasses(out.mesh, 1e-9).size() != 1) {
    throw Error(ErrorCode::kConstructionInvalid,
                "twisted gyroelongated bipyramid: faces are not congruent");
  }
  if (!IsConvex(out.mesh).convex) {
    throw Error(ErrorCode::kConstructionInvalid,
                "twisted gyroelongated bipyramid: hull is not strictly convex");
  }
  return out;
}

TriangleMesh Construct(const FamilySpec &spec) {
  switch (spec.variant) {
    case FamilyVariant::kBipyramid:
      return Bipyramid(spec.n, spec.h);
    case FamilyVariant::kBiarc:
      return BiarcHull(spec.x, spec.y);
    case FamilyVariant::kGyro:
      return spec.equilateral ? EquilateralGyroelongatedBipyramid(spec.k)
                              : GyroelongatedBipyramid(spec.k);
    case FamilyVariant::kTwistedGyro:
      return TwistedGyroelongatedBipyramid(spec.k).mesh;
  }
  Invalid("unknown family variant");
}

const char *ToString(FamilyVariant v) {
  switch (v) {
    case FamilyVariant::kBipyramid: return "bipyramid";
    case FamilyVariant::kBiarc: return "biarc";
    case FamilyVariant::kGyro: return "gyro";
    case FamilyVariant::kTwistedGyro: return "twisted-gyro";
  }
  return "?";
}

}  // namespace polyiso
