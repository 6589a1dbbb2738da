#ifndef POLYISO_VERIFY_H
#define POLYISO_VERIFY_H

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "polyiso/geom3.h"
#include "polyiso/mesh.h"

namespace polyiso {

// How the three isosceles side faces sit against the base face F, in the
// order the cases are tested: a tetrahedron belongs to the first that fits.
enum class TetraCase {
  kTwoBasesOnF,      // two side faces have their base on an edge of F
  kTwoSharedBases,   // two side faces share their base edge
  kLongSide,         // F's longest edge is a leg of the side face on it
  kTwoSharedApexes,  // two side faces have their apex at the same vertex of F
  kNoneOfAbove,
};

// Length orderings within kNoneOfAbove, where the edges satisfy
// |tip - A| = |tip - B| = |CA| and |tip - C| = |BC| for the longest edge AB.
enum class NoneSubcase { kShorter, kLonger };  // |BC| below / above |CA|

const char *ToString(TetraCase c);
const char *ToString(NoneSubcase s);

struct IsoTetra {
  // p[0..2] span the base face F; p[3] is the tip.
  std::array<Point3, 4> p{};
  TetraCase tag = TetraCase::kNoneOfAbove;
  std::optional<NoneSubcase> subcase;
  bool obtuse_base = true;  // F must be obtuse
};

// Case of a tetrahedron whose side faces are all isosceles at rel_tol, or
// empty if some side face is scalene or the tetrahedron is flat.
std::optional<TetraCase> ClassifyIsoTetra(const std::array<Point3, 4> &p, double rel_tol = 1e-9);

// Throws PreconditionFailed unless the side faces are isosceles within 1e-9,
// F is obtuse when required (and always for kTwoBasesOnF, kLongSide,
// kNoneOfAbove), and ClassifyIsoTetra returns the tag.
void ValidateIsoTetra(const IsoTetra &t);

// Deterministic constructions, before any rigid motion. Angles in radians.
// F lies in z = 0 with p0 = origin, p1 = (1, 0, 0) and the tip has z > 0.
// F with the given angles at p0, p1, p2; tip above the circumcenter at the
// given height.
IsoTetra TwoBasesOnFTetra(const std::array<double, 3> &angles, double height);
// Isosceles F with apex p2; a copy of F turned about one of its edges
// (0: the base p0p1, 1: the leg p1p2) by `rotation` supplies the tip.
IsoTetra TwoSharedBasesTetra(double apex_angle, int edge, double rotation);
// Isosceles F with apex p2; tip at leg distance from p2 in F's mirror plane,
// `elevation` above the ray from p2 to the base midpoint.
IsoTetra TwoSharedApexesTetra(double apex_angle, double elevation);
// F with the given angles, the largest at p2, so that c = |p0p1| is the
// longest side; a = |p1p2|, b = |p2p0|. The tip is at distance c from p0 and
// (d1, d2) from p1, p2 as named by the pattern. Empty if no such point lies
// clear of the plane.
enum class LongSidePattern {
  kAB,  // (d1, d2) = (a, b)
  kBB,  // (b, b)
  kAC,  // (a, c)
};
std::optional<IsoTetra> LongSideTetra(const std::array<double, 3> &angles, LongSidePattern pat);
// Same F; tip at distances (b, b, a). Subcase from a < b or a > b.
std::optional<IsoTetra> NoneOfAboveTetra(const std::array<double, 3> &angles);

// Tip at distances d from p0, p1, p2 on the positive side of F; empty if
// the spheres do not meet above the plane by more than a sliver.
std::optional<Point3> Trilaterate(const std::array<Point3, 3> &f, const std::array<double, 3> &d);

// SplitMix64 finalizer.
std::uint64_t SplitMix64(std::uint64_t x);
// Independent stream for sample `index` of run `seed`.
std::mt19937_64 SampleStream(std::uint64_t seed, std::uint64_t index);

struct SamplerOptions {
  // Largest angle of an obtuse base, drawn uniformly from this range.
  double obtuse_min = std::numbers::pi / 2 + 0.01;
  double obtuse_max = std::numbers::pi - 0.05;
  int max_rejections = 10000;
};

// Draws a valid tetrahedron of the requested case from its own stream and
// applies a random rigid motion. obtuse_base selects the variant for the two
// shared cases and must be true for the others. Throws SamplerExhausted after
// max_rejections failed draws, PreconditionFailed for a missing or
// superfluous subcase.
IsoTetra SampleIsoTetra(std::uint64_t seed, std::uint64_t index, TetraCase c, bool obtuse_base,
                        std::optional<NoneSubcase> subcase = std::nullopt,
                        const SamplerOptions &opt = {});

// Interior dihedrals of the tetrahedron on the edges p0p1, p1p2, p2p0 of F.
std::array<double, 3> BaseDihedrals(const IsoTetra &t);

struct BigDihedralCheck {
  double max_base_dihedral = 0;
  bool pass = false;  // max_base_dihedral > pi/3 - 1e-9
};
// Validates first (PreconditionFailed).
BigDihedralCheck CheckBigDihedral(const IsoTetra &t);

// Closed outward-oriented mesh of the tetrahedron.
TriangleMesh IsoTetraMesh(const IsoTetra &t);

struct BigDihedralStream {
  TetraCase tag;
  bool obtuse_base;
  std::optional<NoneSubcase> subcase;
  long samples = 0;
  double min_max_dihedral = 0, max_max_dihedral = 0;
  long violations = 0;
  std::optional<std::uint64_t> first_violation;  // sample index
  std::optional<IsoTetra> first_counterexample;
};

// Every case, with and without the obtuse restriction for the two shared
// cases and each none-of-above subcase: eight streams of `samples` each.
// Stream s uses seed SplitMix64(seed + s).
std::vector<BigDihedralStream> RunBigDihedral(std::uint64_t seed, long samples,
                                              const SamplerOptions &opt = {});

// The shared-bases family at its bound: F isosceles with apex angle
// pi - flatness, turned by pi/3 about its base. The largest base dihedral
// tends to pi/3 from above as flatness -> 0.
double SharedBasesBoundary(double flatness);

// Triangle (0,0,0), (1,0,0), q with q in the plane through the x axis at
// `plane_angle` to z = 0, chosen so that its projection onto z = 0 is
// `projected`.
std::array<Point3, 3> LiftedTriangle(const Point3 &projected, double plane_angle);

struct ObtuseProjectionSample {
  std::uint64_t index = 0;
  double plane_angle = 0;
  double projected_angle = 0;  // at the vertex opposite the x axis edge
  double lifted_angle = 0;     // same vertex of the lifted triangle
};

struct ObtuseProjectionReport {
  long samples = 0;
  double min_lifted_angle = 0;  // smallest lifted angle seen
  std::optional<ObtuseProjectionSample> counterexample;  // first one
};

// Samples plane angles uniformly in [0, kPhi) and projected apexes uniformly
// in the region where the angle opposite the edge is at least 2 pi/3. A
// sample is a counterexample if the lifted angle is below pi/2 - 1e-9.
ObtuseProjectionReport CheckObtuseProjection(std::uint64_t seed, long samples);

struct SharpnessDecayReport {
  // Minimum face sharpness of the seed and each iterate.
  std::vector<double> min_sharpness;
  // Per step: max over child faces of sharpness(child) - 2 sharpness(parent).
  std::vector<double> doublesharp_excess;
  bool non_increasing = true;
  bool doublesharp = true;  // every excess <= 1e-9
};

// Convex Kleetope iterates of a convex seed. Throws PreconditionFailed unless
// 0 <= iterations <= 3; ConvexKleetope errors propagate.
SharpnessDecayReport SharpnessDecay(const TriangleMesh &seed, int iterations,
                                    double height_factor = 0.5);

}  // namespace polyiso

#endif  // POLYISO_VERIFY_H
