// Reference solids for tests, built from explicit coordinates and face lists
// so that they do not depend on the hull code.
#ifndef POLYISO_TESTS_FIXTURES_H
#define POLYISO_TESTS_FIXTURES_H

#include <cmath>
#include <random>
#include <vector>

#include "polyiso/geom3.h"
#include "polyiso/mesh.h"

namespace fixtures {

using polyiso::Face;
using polyiso::Point3;
using polyiso::TriangleMesh;

// Orients every face away from the vertex centroid. Valid for meshes that
// are star-shaped about their centroid.
inline TriangleMesh OrientedFromCentroid(std::vector<Point3> v, std::vector<Face> f) {
  Point3 c;
  for (const Point3 &p : v) c += p;
  c = c / static_cast<double>(v.size());
  for (Face &face : f) {
    const Point3 &a = v[face[0]], &b = v[face[1]], &d = v[face[2]];
    if (polyiso::Orient3(a, b, d, c) > 0) std::swap(face[1], face[2]);
  }
  return TriangleMesh(std::move(v), std::move(f));
}

inline TriangleMesh Tetrahedron() {
  return OrientedFromCentroid({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}},
                              {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

// Origin plus the three unit points: three right isosceles faces and one
// equilateral face.
inline TriangleMesh CubeCornerTetrahedron() {
  return OrientedFromCentroid({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                              {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

// Vertices +x, -x, +y, -y, +z, -z.
inline TriangleMesh Octahedron() {
  std::vector<Point3> v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                           {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<Face> f;
  for (int x : {0, 1})
    for (int y : {2, 3})
      for (int z : {4, 5}) f.push_back({x, y, z});
  return OrientedFromCentroid(std::move(v), std::move(f));
}

// Octahedron with the +z apex pushed down to z = apex_z (inside when
// apex_z < 0). Non-convex along the four edges at the equator.
inline TriangleMesh DentedOctahedron(double apex_z) {
  const TriangleMesh o = Octahedron();
  std::vector<Point3> v = o.vertices();
  v[4] = {0, 0, apex_z};
  return TriangleMesh(std::move(v), o.faces());
}

// Cube [0,1]^3 with vertex index 4x + 2y + z; each square split along the
// diagonal through its lowest-index corner.
inline TriangleMesh Cube() {
  std::vector<Point3> v;
  for (int i = 0; i < 8; i++) v.push_back({double(i >> 2), double((i >> 1) & 1), double(i & 1)});
  std::vector<Face> f = {
      {0, 1, 3}, {0, 3, 2},  // x = 0
      {4, 5, 7}, {4, 7, 6},  // x = 1
      {0, 1, 5}, {0, 5, 4},  // y = 0
      {2, 3, 7}, {2, 7, 6},  // y = 1
      {0, 2, 6}, {0, 6, 4},  // z = 0
      {1, 3, 7}, {1, 7, 5},  // z = 1
  };
  return OrientedFromCentroid(std::move(v), std::move(f));
}

// Twelve icosahedron vertices (0, +-1, +-g) and cyclic permutations; edge 2.
inline std::vector<Point3> IcosahedronPoints() {
  const double g = (1 + std::sqrt(5.0)) / 2;
  std::vector<Point3> p;
  for (double s : {-1.0, 1.0})
    for (double t : {-g, g}) {
      p.push_back({0, s, t});
      p.push_back({s, t, 0});
      p.push_back({t, 0, s});
    }
  return p;
}

inline std::vector<Point3> RandomPoints(std::mt19937_64 &rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<Point3> p;
  for (int i = 0; i < n; i++) p.push_back({u(rng), u(rng), u(rng)});
  return p;
}

inline std::vector<Point3> RandomSpherePoints(std::mt19937_64 &rng, int n) {
  std::normal_distribution<double> g;
  std::vector<Point3> p;
  while (static_cast<int>(p.size()) < n) {
    const Point3 q{g(rng), g(rng), g(rng)};
    const double r = polyiso::Norm(q);
    if (r > 1e-6) p.push_back(q / r);
  }
  return p;
}

}  // namespace fixtures

#endif  // POLYISO_TESTS_FIXTURES_H
