#ifndef POLYISO_HULL_H
#define POLYISO_HULL_H

#include <span>
#include <vector>

#include "polyiso/geom3.h"
#include "polyiso/mesh.h"

namespace polyiso {

struct HullResult {
  static constexpr int kNotAVertex = -1;

  TriangleMesh mesh;
  // Input index -> hull vertex index, or kNotAVertex for points strictly
  // inside, duplicated, or lying on the hull without being a corner.
  std::vector<int> vertex_map;
};

// Convex hull by incremental insertion in input order. Points closer than
// tol * (bounding-box diagonal) to a facet plane count as coplanar with it;
// coplanar facet patches are re-triangulated as a fan from their lowest-index
// corner. Hull vertices keep input order, and faces are listed in canonical
// form (smallest index first, lexicographically sorted).
// Throws DegenerateInput for fewer than four points or coplanar input.
HullResult ConvexHull3(std::span<const Point3> points, double tol = 1e-9);

// Faces rotated to start at their smallest index, then sorted. Used to compare
// face sets that may differ only in listing order.
std::vector<Face> CanonicalFaces(std::vector<Face> faces);

}  // namespace polyiso

#endif  // POLYISO_HULL_H
