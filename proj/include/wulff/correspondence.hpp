#pragma once

#include <cstdint>

#include "wulff/crystal.hpp"

namespace wulff {

// One simplex of the per-facet barycentric fan, with its affine image on the
// base shape. In 2-d the simplices are segments (two points used).
struct MapSimplex {
  int facet = -1;
  std::array<Vec, 3> src;  // (facet barycenter, v_k, v_{k+1})
  std::array<Vec, 3> img;
  double div_tau = 0.0;    // trace of the in-plane differential
  bool degenerate = false; // image collapsed in dimension
  double src_measure = 0.0;
  double img_measure = 0.0;
  // In-plane differential, row-major in the shared facet frame.
  std::array<double, 4> diff{1, 0, 0, 1};
};

struct CorrespondenceMap {
  int dim = 3;
  OffsetVector offset;
  std::vector<int> vertex_match;  // offset-shape vertex -> base vertex
  std::vector<MapSimplex> simplices;
  // Shared per-facet frame (t1, t2) orthonormal in the facet plane.
  std::vector<Vec> frame_t1;
  std::vector<Vec> frame_t2;
};

struct DivergenceStats {
  double max_off_T = 0.0;   // max |div - (n-1)| over nondegenerate simplices
  double measure_T = 0.0;   // H^{n-1} of the degenerate set
  double min_on_T = 0.0;    // min divergence over T (n-1 when T empty)
};

// Piecewise-affine boundary map of the offset shape onto the Wulff shape:
// nearest-vertex matching, barycenter to barycenter, facet by facet.
CorrespondenceMap build_correspondence(const CrystalNorm& norm,
                                       const OffsetVector& a);

DivergenceStats divergence_stats(const CorrespondenceMap& map);

// Max over boundary samples of dist(x, cone boundary) over the image's
// distance to the base cone boundary. Distances are to the cones' bounding
// hyperplanes.
double distance_comparison(const CorrespondenceMap& map,
                           const CrystalNorm& norm, int samples_per_facet,
                           std::uint64_t seed = 2024);

// X(x) = map applied to the radial projection of x onto the offset boundary;
// zero-homogeneous, values on the base boundary.
Vec field_X(const CorrespondenceMap& map, const CrystalNorm& norm,
            const Vec& x);

}  // namespace wulff
