#ifndef POLYISO_FAMILIES_H
#define POLYISO_FAMILIES_H

#include <array>
#include <string>
#include <vector>

#include "polyiso/geom3.h"
#include "polyiso/mesh.h"

namespace polyiso {

enum class FamilyVariant { kBipyramid, kBiarc, kGyro, kTwistedGyro };

struct FamilySpec {
  FamilyVariant variant = FamilyVariant::kBipyramid;
  int n = 0;          // bipyramid ring size
  double h = 1.0;     // bipyramid apex height
  int x = 0, y = 0;   // biarc point counts
  int k = 0;          // antiprism order
  bool equilateral = false;  // gyro only: unit-edge variant, k in {4, 5}
};

// Ring of n points on the unit circle in z = 0 (indices 0..n-1), then the
// apexes (0, 0, h) and (0, 0, -h). Throws InvalidSpec unless n >= 3, h > 0.
TriangleMesh Bipyramid(int n, double h = 1.0);

struct BiarcPoints {
  double a = 0.0, b = 1.0;
  std::vector<Point3> x_arc;  // X_0..X_x
  std::vector<Point3> y_arc;  // Y_0..Y_y
};

// X_i = (a cos(i pi/x), a sin(i pi/x), 0), Y_j = (0, -b sin(j pi/y), b cos(j pi/y))
// with b = 1 and a = sin(pi/(2y)) / sin(pi/(2x)).
BiarcPoints BiarcArcs(int x, int y);

// Vertices X_0..X_x then Y_0..Y_y. Faces: each X chord with apexes Y_0 and
// Y_y, then each Y chord with apexes X_0 and X_x. Throws InvalidSpec unless
// x, y >= 2, ConstructionInvalid if the faces differ from the convex hull.
TriangleMesh BiarcHull(int x, int y);

// Monohedral gyroelongated bipyramid inscribed in the unit sphere: vertex
// 0 = (0,0,1), 1 = (0,0,-1), 2..k+1 the upper ring at colatitude
// leg(2 pi/k, (1/2 - 1/(2k)) pi) and azimuth 2 pi i/k, k+2..2k+1 the
// mirrored lower ring turned by pi/k. Faces are the pole caps
// (N, u_i, u_i+1), (S, l_i, l_i+1) and the band
// (u_i, l_i, u_i+1), (l_i, l_i+1, u_i+1), checked against the convex hull.
// For k = 3 the points are cube corners and the hull is not simplicial; the
// faces are then only required to be weakly convex.
// Throws InvalidSpec for k < 3, ConstructionInvalid unless the hull has 4k
// faces and agrees with the face pattern.
TriangleMesh GyroelongatedBipyramid(int k);

// Same vertex layout with unit edges: antiprism on a regular k-gon of side 1
// plus unit-edge pyramids. Only k = 4 and k = 5 close up; InvalidSpec
// otherwise.
TriangleMesh EquilateralGyroelongatedBipyramid(int k);

struct PolarHexagon {
  // N, upper, lower, S, lower, upper.
  std::array<int, 6> vertices{};
  // Faces on the side holding (k-1)/2 faces at the north pole, and the rest.
  std::vector<int> side_a, side_b;
  // Smaller of the two spherical angles the hexagon makes at each vertex.
  std::array<double, 6> angles{};
};

// Closed path N -> upper -> lower -> S -> lower -> upper along mesh edges that
// splits the faces 2k / 2k with (k-1)/2 versus (k+1)/2 faces on its two sides
// at each pole and all six spherical angles equal to (1 - 1/k) pi within
// 1e-9. The first such path in vertex-index order is returned. Poles are the
// highest and lowest vertices. Throws HexagonNotFound.
PolarHexagon FindPolarHexagon(const TriangleMesh &m, int k);

struct TwistedGyro {
  TriangleMesh mesh;
  PolarHexagon hexagon;       // on the untwisted polyhedron
  Rotation3 twist;            // hexagon vertex i -> i + 2
  std::vector<int> rotated;   // vertices moved by the twist
};

// Rotates the side-A vertices off the hexagon by the fitted twist and takes
// the convex hull. Throws InvalidSpec for even k or k < 5 (k = 3 gives a
// cube, not strictly convex), NoSymmetry if the twist does not fit,
// ConstructionInvalid unless the hull is a convex monohedral 4k-face mesh.
TwistedGyro TwistedGyroelongatedBipyramid(int k);

// Dispatches on the variant.
TriangleMesh Construct(const FamilySpec &spec);

const char *ToString(FamilyVariant v);

}  // namespace polyiso

#endif  // POLYISO_FAMILIES_H
