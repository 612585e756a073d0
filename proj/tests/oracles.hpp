#pragma once

// Independent oracles for the test suites. Everything here recomputes the
// quantity under test by a route disjoint from the library implementation:
// rejection sampling for volumes, subset enumeration for vertices, grid
// refinement for minimizers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wulff/crystal.hpp"
#include "wulff/geometry.hpp"
#include "wulff/rng.hpp"

namespace oracles {

using namespace wulff;

struct McEstimate {
  double value = 0.0;
  double sigma = 0.0;
};

inline void bounding_box(const ConvexPolytope& p, Vec* lo, Vec* hi) {
  *lo = Vec(1e300, 1e300, 1e300);
  *hi = Vec(-1e300, -1e300, -1e300);
  for (const Vec& v : p.vertices())
    for (int c = 0; c < 3; ++c) {
      (*lo)[c] = std::min((*lo)[c], v[c]);
      (*hi)[c] = std::max((*hi)[c], v[c]);
    }
  if (p.dim() == 2) {
    (*lo)[2] = 0.0;
    (*hi)[2] = 0.0;
  }
}

// Rejection-sampled volume with its standard error.
inline McEstimate mc_volume(const ConvexPolytope& p, long samples,
                            std::uint64_t seed) {
  Vec lo, hi;
  bounding_box(p, &lo, &hi);
  double box = 1.0;
  for (int c = 0; c < p.dim(); ++c) box *= hi[c] - lo[c];
  Rng rng(seed);
  long in = 0;
  for (long s = 0; s < samples; ++s) {
    Vec x(rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1]),
          p.dim() == 3 ? rng.uniform(lo[2], hi[2]) : 0.0);
    if (p.contains(x, 0.0)) ++in;
  }
  double f = static_cast<double>(in) / samples;
  McEstimate e;
  e.value = box * f;
  e.sigma = box * std::sqrt(std::max(f * (1.0 - f), 1e-12) / samples);
  return e;
}

// Per-cone volumes of a cell complex by membership counting: a point inside
// the set belongs to the cone whose scaled linear form attains the max.
inline std::vector<McEstimate> mc_cone_volumes(const CellComplex& e,
                                               const CrystalNorm& norm,
                                               const OffsetVector& a,
                                               long samples,
                                               std::uint64_t seed) {
  Vec lo(1e300, 1e300, 1e300), hi(-1e300, -1e300, -1e300);
  for (const ConvexPolytope& c : e.cells) {
    Vec l, h;
    bounding_box(c, &l, &h);
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], l[k]);
      hi[k] = std::max(hi[k], h[k]);
    }
  }
  double box = 1.0;
  for (int c = 0; c < e.dim; ++c) box *= hi[c] - lo[c];
  Rng rng(seed);
  std::vector<long> counts(norm.count(), 0);
  for (long s = 0; s < samples; ++s) {
    Vec x(rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1]),
          e.dim == 3 ? rng.uniform(lo[2], hi[2]) : 0.0);
    bool inside = false;
    for (const ConvexPolytope& c : e.cells)
      if (c.contains(x, 0.0)) {
        inside = true;
        break;
      }
    if (inside) ++counts[norm.cone_index(a, x)];
  }
  std::vector<McEstimate> out(norm.count());
  for (int i = 0; i < norm.count(); ++i) {
    double f = static_cast<double>(counts[i]) / samples;
    out[i].value = box * f;
    out[i].sigma = box * std::sqrt(std::max(f * (1.0 - f), 1e-12) / samples);
  }
  return out;
}

// Vertex enumeration by n-subset solves: independent of the clipping path.
inline std::vector<Vec> brute_force_vertices(std::span<const Halfspace> hs,
                                             int dim, double tol = 1e-7) {
  std::vector<Vec> out;
  int m = static_cast<int>(hs.size());
  auto feasible = [&](const Vec& x) {
    for (const Halfspace& h : hs)
      if (h.eval(x) > tol * std::max(1.0, norm(x))) return false;
    return true;
  };
  auto push_unique = [&](const Vec& x) {
    for (const Vec& v : out)
      if (distance(v, x) <= 1e-6 * std::max(1.0, norm(x))) return;
    out.push_back(x);
  };
  if (dim == 2) {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const Vec &a = hs[i].normal, &b = hs[j].normal;
        double det = a[0] * b[1] - a[1] * b[0];
        if (std::fabs(det) < 1e-10) continue;
        Vec x((hs[i].offset * b[1] - hs[j].offset * a[1]) / det,
              (a[0] * hs[j].offset - b[0] * hs[i].offset) / det, 0.0);
        if (feasible(x)) push_unique(x);
      }
    return out;
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        const Vec &a = hs[i].normal, &b = hs[j].normal, &c = hs[k].normal;
        Vec r0 = cross(b, c);
        double det = dot(a, r0);
        if (std::fabs(det) < 1e-10) continue;
        Vec x = (hs[i].offset * r0 + hs[j].offset * cross(c, a) +
                 hs[k].offset * cross(a, b)) /
                det;
        if (feasible(x)) push_unique(x);
      }
  return out;
}

// Grid minimization of f_*(x - y) over y in A, refined around the argmin.
inline double k_distance_grid(const CrystalNorm& norm, const Vec& x,
                              const ConvexPolytope& a, int levels = 8,
                              int res = 14) {
  Vec lo, hi;
  bounding_box(a, &lo, &hi);
  Vec center = a.centroid();
  Vec half = 0.5 * (hi - lo);
  double best = std::numeric_limits<double>::max();
  Vec best_y = center;
  for (int level = 0; level < levels; ++level) {
    for (int i = 0; i <= res; ++i)
      for (int j = 0; j <= res; ++j) {
        int kmax = norm.dim() == 3 ? res : 0;
        for (int k = 0; k <= kmax; ++k) {
          Vec y = center;
          y[0] += half[0] * (2.0 * i / res - 1.0);
          y[1] += half[1] * (2.0 * j / res - 1.0);
          if (norm.dim() == 3) y[2] += half[2] * (2.0 * k / res - 1.0);
          if (!a.contains(y, 1e-12)) continue;
          double v = norm.dual(x - y);
          if (v < best) {
            best = v;
            best_y = y;
          }
        }
      }
    center = best_y;
    half = (2.5 / res) * half;
  }
  return best;
}

// Cyclic coordinate grid descent on max_i |phi_i|, the projection oracle.
template <typename PhiFn>
inline OffsetVector coordinate_grid_search(int n, PhiFn&& phi_max,
                                           double span, double resolution,
                                           double floor_resolution) {
  OffsetVector a = OffsetVector::zero(n);
  double best = phi_max(a);
  double res = resolution;
  while (res >= floor_resolution) {
    bool moved = false;
    for (int i = 0; i < n; ++i) {
      OffsetVector best_trial = a;
      double best_val = best;
      int steps = static_cast<int>(std::round(span / res));
      for (int s = -steps; s <= steps; ++s) {
        OffsetVector trial = a;
        trial[i] += s * res;
        double v = phi_max(trial);
        if (v < best_val) {
          best_val = v;
          best_trial = trial;
        }
      }
      if (best_val < best) {
        best = best_val;
        a = best_trial;
        moved = true;
      }
    }
    if (!moved) {
      res *= 0.2;
      span = std::max(span * 0.4, 4 * res);
    }
  }
  return a;
}

}  // namespace oracles
