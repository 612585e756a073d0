#include "wulff/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wulff/rng.hpp"

namespace wulff {

namespace {

void facet_frame(const Vec& n, Vec* t1, Vec* t2) {
  int k = std::fabs(n[0]) <= std::fabs(n[1])
              ? (std::fabs(n[0]) <= std::fabs(n[2]) ? 0 : 2)
              : (std::fabs(n[1]) <= std::fabs(n[2]) ? 1 : 2);
  Vec e(0, 0, 0);
  e[k] = 1.0;
  *t1 = normalized(e - dot(e, n) * n);
  *t2 = cross(n, *t1);
}

// Distance from a point inside the cone to the cone's bounding hyperplanes.
double cone_plane_distance(const std::vector<Halfspace>& cone, const Vec& x) {
  double d = std::numeric_limits<double>::max();
  for (const Halfspace& h : cone) d = std::min(d, -h.eval(x));
  return d;
}

}  // namespace

CorrespondenceMap build_correspondence(const CrystalNorm& norm,
                                       const OffsetVector& a) {
  const ConvexPolytope& k = norm.wulff();
  ConvexPolytope ka = offset_shape(norm, a);
  const int dim = norm.dim();
  double scale = std::max(1.0, k.diameter());

  CorrespondenceMap map;
  map.dim = dim;
  map.offset = a;

  // Nearest-vertex matching, with an explicit failure on ties.
  map.vertex_match.resize(ka.vertices().size());
  for (std::size_t v = 0; v < ka.vertices().size(); ++v) {
    double best = std::numeric_limits<double>::max();
    double second = best;
    int arg = -1;
    for (std::size_t w = 0; w < k.vertices().size(); ++w) {
      double d = distance(ka.vertices()[v], k.vertices()[w]);
      if (d < best) {
        second = best;
        best = d;
        arg = static_cast<int>(w);
      } else if (d < second) {
        second = d;
      }
    }
    if (second - best <= norm.config().geom.eps_geom * scale)
      throw Error(ErrorCode::AmbiguousMatch,
                  "offset vertex " + std::to_string(v) +
                      " is equidistant to two base vertices",
                  static_cast<int>(v));
    map.vertex_match[v] = arg;
  }

  map.frame_t1.resize(norm.count());
  map.frame_t2.resize(norm.count());
  for (int i = 0; i < norm.count(); ++i) {
    const Facet& fa = ka.facets()[i];
    const Facet& fb = k.facets()[i];
    Vec t1, t2;
    if (dim == 3) {
      facet_frame(fb.normal, &t1, &t2);
    } else {
      t1 = perp2(fb.normal);
      t2 = Vec(0, 0, 0);
    }
    map.frame_t1[i] = t1;
    map.frame_t2[i] = t2;

    auto coords = [&](const Vec& p, const Vec& origin) {
      return std::array<double, 2>{dot(t1, p - origin), dot(t2, p - origin)};
    };

    const std::vector<int>& cyc = fa.vertex_indices;
    int m = static_cast<int>(cyc.size());
    for (int e = 0; e < m; ++e) {
      int v0 = cyc[e];
      int v1 = cyc[(e + 1) % m];
      if (dim == 2 && e == 1) break;  // an edge facet yields two segments
      MapSimplex s;
      s.facet = i;
      if (dim == 2) {
        for (int half = 0; half < 2; ++half) {
          MapSimplex seg;
          seg.facet = i;
          int vv = half == 0 ? v0 : v1;
          seg.src = {fa.barycenter, ka.vertices()[vv], Vec()};
          seg.img = {fb.barycenter, k.vertices()[map.vertex_match[vv]], Vec()};
          double sp = dot(t1, seg.src[1] - seg.src[0]);
          double ip = dot(t1, seg.img[1] - seg.img[0]);
          seg.src_measure = std::fabs(sp);
          seg.img_measure = std::fabs(ip);
          seg.degenerate = seg.img_measure <=
                           norm.config().geom.eps_geom * scale;
          double d = sp != 0.0 ? ip / sp : 0.0;
          seg.diff = {d, 0, 0, 0};
          seg.div_tau = d;
          map.simplices.push_back(seg);
        }
        continue;
      }
      s.src = {fa.barycenter, ka.vertices()[v0], ka.vertices()[v1]};
      s.img = {fb.barycenter, k.vertices()[map.vertex_match[v0]],
               k.vertices()[map.vertex_match[v1]]};
      auto p1 = coords(s.src[1], s.src[0]);
      auto p2 = coords(s.src[2], s.src[0]);
      auto q1 = coords(s.img[1], s.img[0]);
      auto q2 = coords(s.img[2], s.img[0]);
      double det = p1[0] * p2[1] - p1[1] * p2[0];
      s.src_measure = 0.5 * std::fabs(det);
      s.img_measure = 0.5 * std::fabs(q1[0] * q2[1] - q1[1] * q2[0]);
      s.degenerate = map.vertex_match[v0] == map.vertex_match[v1];
      // D = [q1 q2] [p1 p2]^{-1}
      double inv00 = p2[1] / det, inv01 = -p2[0] / det;
      double inv10 = -p1[1] / det, inv11 = p1[0] / det;
      s.diff = {q1[0] * inv00 + q2[0] * inv10, q1[0] * inv01 + q2[0] * inv11,
                q1[1] * inv00 + q2[1] * inv10, q1[1] * inv01 + q2[1] * inv11};
      s.div_tau = s.diff[0] + s.diff[3];
      map.simplices.push_back(s);
    }
  }
  return map;
}

DivergenceStats divergence_stats(const CorrespondenceMap& map) {
  DivergenceStats st;
  double target = map.dim - 1;
  st.min_on_T = target;
  bool any_t = false;
  for (const MapSimplex& s : map.simplices) {
    if (s.degenerate) {
      st.measure_T += s.src_measure;
      st.min_on_T = any_t ? std::min(st.min_on_T, s.div_tau) : s.div_tau;
      any_t = true;
    } else {
      st.max_off_T = std::max(st.max_off_T, std::fabs(s.div_tau - target));
    }
  }
  return st;
}

double distance_comparison(const CorrespondenceMap& map,
                           const CrystalNorm& norm, int samples_per_facet,
                           std::uint64_t seed) {
  ConeFan fan_a = cone_fan(norm, map.offset);
  ConeFan fan_0 = cone_fan(norm, OffsetVector::zero(norm.count()));
  double eps = norm.config().geom.eps_geom;

  // Group simplices per facet for area-weighted sampling.
  std::vector<std::vector<const MapSimplex*>> per_facet(norm.count());
  for (const MapSimplex& s : map.simplices) per_facet[s.facet].push_back(&s);

  double worst = 0.0;
  Rng rng(seed);
  for (int i = 0; i < norm.count(); ++i) {
    double total = 0.0;
    for (const MapSimplex* s : per_facet[i]) total += s->src_measure;
    auto test_point = [&](const Vec& x, const Vec& fx) {
      double num = cone_plane_distance(fan_a.cones[i], x);
      double den = cone_plane_distance(fan_0.cones[i], fx);
      if (den > eps) worst = std::max(worst, num / den);
    };
    // The barycenter maps to the barycenter; always include it.
    if (!per_facet[i].empty())
      test_point(per_facet[i][0]->src[0], per_facet[i][0]->img[0]);
    for (int q = 0; q < samples_per_facet; ++q) {
      double pick = rng.uniform() * total;
      const MapSimplex* s = per_facet[i].back();
      for (const MapSimplex* cand : per_facet[i]) {
        if (pick <= cand->src_measure) {
          s = cand;
          break;
        }
        pick -= cand->src_measure;
      }
      Vec x, fx;
      if (map.dim == 2) {
        double t = rng.uniform();
        x = s->src[0] + t * (s->src[1] - s->src[0]);
        fx = s->img[0] + t * (s->img[1] - s->img[0]);
      } else {
        double r1 = std::sqrt(rng.uniform());
        double r2 = rng.uniform();
        double w0 = 1.0 - r1, w1 = r1 * (1.0 - r2), w2 = r1 * r2;
        x = w0 * s->src[0] + w1 * s->src[1] + w2 * s->src[2];
        fx = w0 * s->img[0] + w1 * s->img[1] + w2 * s->img[2];
      }
      test_point(x, fx);
    }
  }
  return worst;
}

Vec field_X(const CorrespondenceMap& map, const CrystalNorm& norm,
            const Vec& x) {
  if (norm2(x) < 1e-28)
    throw Error(ErrorCode::OriginArgument, "the field is undefined at 0");
  double fa = norm.dual_offset(map.offset, x);
  Vec y = x / fa;
  int facet = norm.cone_index(map.offset, x);

  // Locate the most interior fan simplex of this facet containing y.
  const MapSimplex* best = nullptr;
  double best_min = -std::numeric_limits<double>::max();
  double w0 = 0, w1 = 0, w2 = 0;
  for (const MapSimplex& s : map.simplices) {
    if (s.facet != facet) continue;
    if (map.dim == 2) {
      double sp = dot(map.frame_t1[facet], s.src[1] - s.src[0]);
      double t = dot(map.frame_t1[facet], y - s.src[0]) / sp;
      double m = std::min(t, 1.0 - t);
      if (m > best_min) {
        best_min = m;
        best = &s;
        w0 = 1.0 - t;
        w1 = t;
      }
      continue;
    }
    const Vec& t1 = map.frame_t1[facet];
    const Vec& t2 = map.frame_t2[facet];
    std::array<double, 2> p1{dot(t1, s.src[1] - s.src[0]),
                             dot(t2, s.src[1] - s.src[0])};
    std::array<double, 2> p2{dot(t1, s.src[2] - s.src[0]),
                             dot(t2, s.src[2] - s.src[0])};
    std::array<double, 2> py{dot(t1, y - s.src[0]), dot(t2, y - s.src[0])};
    double det = p1[0] * p2[1] - p1[1] * p2[0];
    double u = (py[0] * p2[1] - py[1] * p2[0]) / det;
    double v = (p1[0] * py[1] - p1[1] * py[0]) / det;
    double m = std::min({u, v, 1.0 - u - v});
    if (m > best_min) {
      best_min = m;
      best = &s;
      w0 = 1.0 - u - v;
      w1 = u;
      w2 = v;
    }
  }
  if (!best)
    throw Error(ErrorCode::InvalidInput, "no fan simplex found for the point");
  if (map.dim == 2) return w0 * best->img[0] + w1 * best->img[1];
  return w0 * best->img[0] + w1 * best->img[1] + w2 * best->img[2];
}

}  // namespace wulff
