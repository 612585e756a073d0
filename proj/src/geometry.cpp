#include "wulff/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

namespace wulff {

namespace {

double max_abs_coord(const Vec& v) {
  return std::max({std::fabs(v[0]), std::fabs(v[1]), std::fabs(v[2])});
}

// Per-point classification tolerance, scale-relative.
double point_tol(const Vec& v, double eps) {
  return eps * std::max(1.0, max_abs_coord(v));
}

enum class Side { In, On, Out };

Side classify(double s, double tol) {
  if (s > tol) return Side::Out;
  if (s < -tol) return Side::In;
  return Side::On;
}

// Solve the n x n system normal_k . x = offset_k by Cramer. Returns the
// normalized determinant magnitude through *cond so callers can reject
// ill-conditioned subsets.
bool solve_planes3(const std::array<Vec, 3>& n, const std::array<double, 3>& c,
                   Vec* x, double* cond) {
  Vec r0 = cross(n[1], n[2]);
  double det = dot(n[0], r0);
  *cond = std::fabs(det);
  if (*cond < 1e-9) return false;
  Vec r1 = cross(n[2], n[0]);
  Vec r2 = cross(n[0], n[1]);
  *x = (c[0] * r0 + c[1] * r1 + c[2] * r2) / det;
  return true;
}

bool solve_planes2(const std::array<Vec, 2>& n, const std::array<double, 2>& c,
                   Vec* x, double* cond) {
  double det = n[0][0] * n[1][1] - n[0][1] * n[1][0];
  *cond = std::fabs(det);
  if (*cond < 1e-9) return false;
  (*x)[0] = (c[0] * n[1][1] - c[1] * n[0][1]) / det;
  (*x)[1] = (n[0][0] * c[1] - n[1][0] * c[0]) / det;
  (*x)[2] = 0.0;
  return true;
}

struct BuildFacet {
  Vec normal;    // unit
  double offset = 0.0;
  std::vector<Vec> cycle;            // ordered, outward in 3-d
  std::vector<bool> on_cut;          // per point: lies on the latest cut plane
  int source = -2;                   // input halfspace id; -2 for the seed box
};

// Vector area of a closed 3-d cycle (fan about the first point).
Vec cycle_vector_area(const std::vector<Vec>& pts) {
  Vec a(0, 0, 0);
  for (std::size_t k = 1; k + 1 < pts.size(); ++k)
    a += cross(pts[k] - pts[0], pts[k + 1] - pts[0]);
  return 0.5 * a;
}

}  // namespace

Halfspace::Halfspace(const Vec& n, double c) {
  double len = wulff::norm(n);
  if (!(len > 0.0) || !std::isfinite(len))
    throw Error(ErrorCode::InvalidInput, "halfspace normal must be nonzero");
  normal = n / len;
  offset = c / len;
}

// ---------------------------------------------------------------------------
// Builder: incremental halfspace clipping. 3-d state is a facet soup with
// per-facet vertex copies; 2-d state is a single CCW polygon with per-edge
// plane/source bookkeeping. Global dedup happens once, at finalize time.
// ---------------------------------------------------------------------------

class PolytopeBuilder {
 public:
  enum class ClipStatus { Unchanged, Clipped, Empty };

  PolytopeBuilder(int dim, const GeomConfig& cfg) : dim_(dim), cfg_(cfg) {
    if (dim != 2 && dim != 3)
      throw Error(ErrorCode::InvalidInput, "dimension must be 2 or 3");
  }

  void seed_box(double halfwidth);
  void init_from(const ConvexPolytope& p);

  ClipStatus clip(const Halfspace& h, int source);
  bool empty() const { return empty_; }

  // Cheap volume of the current state, no dedup or polish. Used by the
  // cone-clipping hot path.
  double current_volume() const;

  struct Finalized {
    ConvexPolytope poly;
    std::vector<int> facet_sources;
  };
  Finalized finalize();

 private:
  ClipStatus clip2(const Halfspace& h, int source);
  ClipStatus clip3(const Halfspace& h, int source);
  void polish_vertices(std::vector<Vec>& verts,
                       const std::vector<Halfspace>& planes) const;

  int dim_;
  GeomConfig cfg_;
  bool empty_ = false;

  // 3-d state
  std::vector<BuildFacet> facets_;

  // 2-d state
  std::vector<Vec> poly_;
  std::vector<Halfspace> edge_plane_;
  std::vector<int> edge_src_;
};

void PolytopeBuilder::seed_box(double halfwidth) {
  double b = halfwidth;
  if (dim_ == 2) {
    poly_ = {Vec(-b, -b), Vec(b, -b), Vec(b, b), Vec(-b, b)};
    edge_plane_ = {Halfspace(Vec(0, -1), b), Halfspace(Vec(1, 0), b),
                   Halfspace(Vec(0, 1), b), Halfspace(Vec(-1, 0), b)};
    edge_src_ = {-2, -2, -2, -2};
    return;
  }
  facets_.clear();
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign = -1; sign <= 1; sign += 2) {
      // Pick in-plane axes (u, v) with u x v = sign * e_axis so the cycle
      // below is CCW seen from outside.
      int u = (axis + 1) % 3, v = (axis + 2) % 3;
      if (sign < 0) std::swap(u, v);
      BuildFacet f;
      f.normal = Vec(0, 0, 0);
      f.normal[axis] = sign;
      f.offset = b;
      auto corner = [&](double su, double sv) {
        Vec p(0, 0, 0);
        p[axis] = sign * b;
        p[u] = su * b;
        p[v] = sv * b;
        return p;
      };
      f.cycle = {corner(-1, -1), corner(1, -1), corner(1, 1), corner(-1, 1)};
      f.on_cut.assign(4, false);
      facets_.push_back(std::move(f));
    }
  }
}

void PolytopeBuilder::init_from(const ConvexPolytope& p) {
  if (p.dim() != dim_)
    throw Error(ErrorCode::InvalidInput, "dimension mismatch");
  if (dim_ == 2) {
    // Recover the CCW polygon from the edge facets.
    int m = static_cast<int>(p.facets().size());
    std::vector<int> next(p.vertices().size(), -1);
    std::vector<int> edge_at(p.vertices().size(), -1);
    for (int k = 0; k < m; ++k) {
      const Facet& f = p.facets()[k];
      next[f.vertex_indices[0]] = f.vertex_indices[1];
      edge_at[f.vertex_indices[0]] = k;
    }
    poly_.clear();
    edge_plane_.clear();
    edge_src_.clear();
    int v = p.facets()[0].vertex_indices[0];
    for (int k = 0; k < m; ++k) {
      poly_.push_back(p.vertices()[v]);
      const Facet& f = p.facets()[edge_at[v]];
      edge_plane_.push_back(p.halfspaces()[f.halfspace_index]);
      edge_src_.push_back(f.halfspace_index);
      v = next[v];
    }
    return;
  }
  facets_.clear();
  for (const Facet& f : p.facets()) {
    BuildFacet bf;
    const Halfspace& h = p.halfspaces()[f.halfspace_index];
    bf.normal = h.normal;
    bf.offset = h.offset;
    bf.source = f.halfspace_index;
    for (int vi : f.vertex_indices) bf.cycle.push_back(p.vertices()[vi]);
    bf.on_cut.assign(bf.cycle.size(), false);
    facets_.push_back(std::move(bf));
  }
}

PolytopeBuilder::ClipStatus PolytopeBuilder::clip(const Halfspace& h,
                                                  int source) {
  if (empty_) return ClipStatus::Empty;
  return dim_ == 2 ? clip2(h, source) : clip3(h, source);
}

PolytopeBuilder::ClipStatus PolytopeBuilder::clip2(const Halfspace& h,
                                                   int source) {
  int m = static_cast<int>(poly_.size());
  std::vector<double> s(m);
  std::vector<Side> side(m);
  bool any_out = false, any_in = false;
  for (int k = 0; k < m; ++k) {
    s[k] = h.eval(poly_[k]);
    side[k] = classify(s[k], point_tol(poly_[k], cfg_.eps_geom));
    any_out |= side[k] == Side::Out;
    any_in |= side[k] == Side::In;
  }
  if (!any_out) return ClipStatus::Unchanged;
  if (!any_in) {
    empty_ = true;
    return ClipStatus::Empty;
  }

  std::vector<Vec> np;
  std::vector<Halfspace> nplane;
  std::vector<int> nsrc;
  auto emit = [&](const Vec& p, const Halfspace& pl, int src) {
    np.push_back(p);
    nplane.push_back(pl);
    nsrc.push_back(src);
  };
  for (int k = 0; k < m; ++k) {
    int k1 = (k + 1) % m;
    const Vec& a = poly_[k];
    const Vec& b = poly_[k1];
    Side sa = side[k], sb = side[k1];
    if (sa == Side::In) {
      if (sb == Side::Out) {
        emit(a, edge_plane_[k], edge_src_[k]);
        double t = s[k] / (s[k] - s[k1]);
        emit(a + t * (b - a), h, source);  // exit: bridge starts here
      } else {
        emit(a, edge_plane_[k], edge_src_[k]);
      }
    } else if (sa == Side::On) {
      Vec snapped = a - s[k] * h.normal;
      if (sb == Side::Out)
        emit(snapped, h, source);  // bridge starts at the on-plane vertex
      else
        emit(snapped, edge_plane_[k], edge_src_[k]);
    } else {  // Out
      if (sb == Side::In) {
        double t = s[k] / (s[k] - s[k1]);
        emit(a + t * (b - a), edge_plane_[k], edge_src_[k]);
      }
    }
  }
  poly_ = std::move(np);
  edge_plane_ = std::move(nplane);
  edge_src_ = std::move(nsrc);
  if (poly_.size() < 3) empty_ = true;
  return empty_ ? ClipStatus::Empty : ClipStatus::Clipped;
}

PolytopeBuilder::ClipStatus PolytopeBuilder::clip3(const Halfspace& h,
                                                   int source) {
  bool any_out = false, any_in = false;
  for (const BuildFacet& f : facets_)
    for (const Vec& p : f.cycle) {
      Side sd = classify(h.eval(p), point_tol(p, cfg_.eps_geom));
      any_out |= sd == Side::Out;
      any_in |= sd == Side::In;
    }
  if (!any_out) return ClipStatus::Unchanged;
  if (!any_in) {
    empty_ = true;
    return ClipStatus::Empty;
  }

  std::vector<BuildFacet> kept;
  struct Chord {
    Vec a, b;
  };
  std::vector<Chord> chords;
  for (BuildFacet& f : facets_) {
    int m = static_cast<int>(f.cycle.size());
    std::vector<double> s(m);
    std::vector<Side> side(m);
    for (int k = 0; k < m; ++k) {
      s[k] = h.eval(f.cycle[k]);
      side[k] = classify(s[k], point_tol(f.cycle[k], cfg_.eps_geom));
    }
    std::vector<Vec> np;
    std::vector<bool> non;  // point sits on the cut plane
    for (int k = 0; k < m; ++k) {
      int k1 = (k + 1) % m;
      if (side[k] == Side::In) {
        np.push_back(f.cycle[k]);
        non.push_back(false);
        if (side[k1] == Side::Out) {
          double t = s[k] / (s[k] - s[k1]);
          np.push_back(f.cycle[k] + t * (f.cycle[k1] - f.cycle[k]));
          non.push_back(true);
        }
      } else if (side[k] == Side::On) {
        np.push_back(f.cycle[k] - s[k] * h.normal);
        non.push_back(true);
      } else if (side[k1] == Side::In) {
        double t = s[k] / (s[k] - s[k1]);
        np.push_back(f.cycle[k] + t * (f.cycle[k1] - f.cycle[k]));
        non.push_back(true);
      }
    }
    if (np.size() < 3) continue;  // facet clipped away
    // Chords: consecutive on-plane pairs, in cycle order.
    int nm = static_cast<int>(np.size());
    bool all_on = true;
    for (bool b : non) all_on &= b;
    if (all_on) continue;  // facet coplanar with the cut: superseded by it
    for (int k = 0; k < nm; ++k) {
      int k1 = (k + 1) % nm;
      if (non[k] && non[k1]) chords.push_back({np[k], np[k1]});
    }
    f.cycle = std::move(np);
    f.on_cut.assign(f.cycle.size(), false);
    kept.push_back(std::move(f));
  }

  // Chain the chords into the section polygon (undirected matching; orient
  // afterwards against the cut normal).
  double match_tol = 10 * cfg_.eps_geom * std::max(1.0, cfg_.box_halfwidth);
  for (const Chord& c : chords)
    match_tol = std::max(match_tol, 10 * cfg_.eps_geom *
                                        std::max(max_abs_coord(c.a),
                                                 max_abs_coord(c.b)));
  std::vector<Chord> pool = chords;
  std::vector<Vec> section;
  if (!pool.empty()) {
    section.push_back(pool.back().a);
    section.push_back(pool.back().b);
    pool.pop_back();
    bool progress = true;
    while (!pool.empty() && progress) {
      progress = false;
      Vec tail = section.back();
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (distance(pool[i].a, tail) <= match_tol) {
          section.push_back(pool[i].b);
        } else if (distance(pool[i].b, tail) <= match_tol) {
          section.push_back(pool[i].a);
        } else {
          continue;
        }
        pool[i] = pool.back();
        pool.pop_back();
        progress = true;
        break;
      }
    }
    // Closed cycle: last point should return to the first.
    if (section.size() >= 2 &&
        distance(section.front(), section.back()) <= match_tol)
      section.pop_back();
  }
  if (section.size() >= 3) {
    // Drop exact repeats left by tolerance snapping.
    std::vector<Vec> clean;
    for (const Vec& p : section)
      if (clean.empty() || distance(clean.back(), p) > match_tol)
        clean.push_back(p);
    while (clean.size() >= 2 &&
           distance(clean.front(), clean.back()) <= match_tol)
      clean.pop_back();
    if (clean.size() >= 3) {
      if (dot(cycle_vector_area(clean), h.normal) < 0)
        std::reverse(clean.begin(), clean.end());
      BuildFacet sf;
      sf.normal = h.normal;
      sf.offset = h.offset;
      sf.cycle = std::move(clean);
      sf.on_cut.assign(sf.cycle.size(), false);
      sf.source = source;
      kept.push_back(std::move(sf));
    }
  }
  facets_ = std::move(kept);
  if (facets_.size() < 4) empty_ = true;
  return empty_ ? ClipStatus::Empty : ClipStatus::Clipped;
}

double PolytopeBuilder::current_volume() const {
  if (empty_) return 0.0;
  if (dim_ == 2) {
    double a2 = 0.0;
    int m = static_cast<int>(poly_.size());
    for (int k = 0; k < m; ++k) {
      const Vec& p = poly_[k];
      const Vec& q = poly_[(k + 1) % m];
      a2 += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * a2;
  }
  double v = 0.0;
  for (const BuildFacet& f : facets_)
    v += f.offset * dot(cycle_vector_area(f.cycle), f.normal);
  return v / 3.0;
}

void PolytopeBuilder::polish_vertices(
    std::vector<Vec>& verts, const std::vector<Halfspace>& planes) const {
  const int n = dim_;
  for (Vec& v : verts) {
    double snap = 1e-6 * std::max(1.0, max_abs_coord(v));
    std::vector<int> sup;
    for (std::size_t j = 0; j < planes.size(); ++j)
      if (std::fabs(planes[j].eval(v)) <= snap) sup.push_back(static_cast<int>(j));
    if (static_cast<int>(sup.size()) < n) continue;
    // Most orthogonal n-subset wins.
    double best_cond = 0.0;
    Vec best = v;
    auto consider = [&](const std::vector<int>& idx) {
      Vec x;
      double cond = 0.0;
      bool ok;
      if (n == 3) {
        std::array<Vec, 3> nn{planes[idx[0]].normal, planes[idx[1]].normal,
                              planes[idx[2]].normal};
        std::array<double, 3> cc{planes[idx[0]].offset, planes[idx[1]].offset,
                                 planes[idx[2]].offset};
        ok = solve_planes3(nn, cc, &x, &cond);
      } else {
        std::array<Vec, 2> nn{planes[idx[0]].normal, planes[idx[1]].normal};
        std::array<double, 2> cc{planes[idx[0]].offset, planes[idx[1]].offset};
        ok = solve_planes2(nn, cc, &x, &cond);
      }
      if (ok && cond > best_cond && distance(x, v) <= 2 * snap) {
        best_cond = cond;
        best = x;
      }
    };
    if (n == 2) {
      for (std::size_t a = 0; a < sup.size(); ++a)
        for (std::size_t b = a + 1; b < sup.size(); ++b)
          consider({sup[a], sup[b]});
    } else {
      std::size_t cap = std::min<std::size_t>(sup.size(), 8);
      for (std::size_t a = 0; a < cap; ++a)
        for (std::size_t b = a + 1; b < cap; ++b)
          for (std::size_t c = b + 1; c < cap; ++c)
            consider({sup[a], sup[b], sup[c]});
    }
    if (best_cond > 1e-4) v = best;
  }
}

PolytopeBuilder::Finalized PolytopeBuilder::finalize() {
  if (empty_) throw Error(ErrorCode::EmptyInterior, "empty intersection");

  ConvexPolytope poly;
  poly.dim_ = dim_;
  std::vector<int> sources;

  if (dim_ == 2) {
    // Clean the polygon: merge coincident neighbours, then drop collinear
    // midpoints (their two edges come from numerically identical lines).
    std::vector<Vec> pts;
    std::vector<Halfspace> pls;
    std::vector<int> srcs;
    int m = static_cast<int>(poly_.size());
    for (int k = 0; k < m; ++k) {
      if (!pts.empty() &&
          distance(pts.back(), poly_[k]) <=
              point_tol(poly_[k], 10 * cfg_.eps_geom))
        continue;  // zero edge: keep the first point, drop this edge
      pts.push_back(poly_[k]);
      pls.push_back(edge_plane_[k]);
      srcs.push_back(edge_src_[k]);
    }
    while (pts.size() >= 2 &&
           distance(pts.front(), pts.back()) <=
               point_tol(pts.back(), 10 * cfg_.eps_geom)) {
      pts.pop_back();
      pls.pop_back();
      srcs.pop_back();
    }
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<Vec> p2;
      std::vector<Halfspace> l2;
      std::vector<int> s2;
      int mm = static_cast<int>(pts.size());
      for (int k = 0; k < mm; ++k) {
        const Vec& prev = pts[(k + mm - 1) % mm];
        const Vec& cur = pts[k];
        const Vec& nxt = pts[(k + 1) % mm];
        Vec d = nxt - prev;
        double len = norm(d);
        double off_line =
            len > 0 ? norm(cross(cur - prev, d)) / len : norm(cur - prev);
        if (off_line <= point_tol(cur, 10 * cfg_.eps_geom) && mm > 3) {
          continue;  // collinear: merge the two edges, keep the incoming line
        }
        p2.push_back(cur);
        l2.push_back(pls[k]);
        s2.push_back(srcs[k]);
      }
      pts = p2;
      pls = l2;
      srcs = s2;
    }
    if (pts.size() < 3)
      throw Error(ErrorCode::EmptyInterior, "degenerate polygon");

    polish_vertices(pts, pls);

    poly.vertices_ = pts;
    int mm = static_cast<int>(pts.size());
    for (int k = 0; k < mm; ++k) {
      Facet f;
      f.halfspace_index = k;
      f.vertex_indices = {k, (k + 1) % mm};
      poly.halfspaces_.push_back(pls[k]);
      poly.facets_.push_back(f);
      sources.push_back(srcs[k]);
    }
  } else {
    // Drop degenerate facets before dedup.
    double scale = 1.0;
    for (const BuildFacet& f : facets_)
      for (const Vec& p : f.cycle) scale = std::max(scale, max_abs_coord(p));
    double area_floor = cfg_.degenerate_area > 0
                            ? cfg_.degenerate_area
                            : 1e3 * cfg_.eps_geom * cfg_.eps_geom * scale * scale;
    double merge_tol = 10 * cfg_.eps_geom * scale;

    std::vector<BuildFacet> fs;
    for (const BuildFacet& f : facets_)
      if (f.cycle.size() >= 3 && norm(cycle_vector_area(f.cycle)) > area_floor)
        fs.push_back(f);
    if (fs.size() < 4)
      throw Error(ErrorCode::EmptyInterior, "degenerate intersection");

    // Global vertex dedup.
    std::vector<Vec> verts;
    auto find_or_add = [&](const Vec& p) {
      for (std::size_t i = 0; i < verts.size(); ++i)
        if (distance(verts[i], p) <= merge_tol) return static_cast<int>(i);
      verts.push_back(p);
      return static_cast<int>(verts.size() - 1);
    };
    std::vector<std::vector<int>> cycles(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (const Vec& p : fs[i].cycle) cycles[i].push_back(find_or_add(p));

    std::vector<Halfspace> planes;
    planes.reserve(fs.size());
    for (const BuildFacet& f : fs) {
      Halfspace h;
      h.normal = f.normal;
      h.offset = f.offset;
      planes.push_back(h);
    }
    polish_vertices(verts, planes);

    // Polished points may have converged; merge again and remap.
    std::vector<int> remap(verts.size());
    std::vector<Vec> verts2;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      int found = -1;
      for (std::size_t j = 0; j < verts2.size(); ++j)
        if (distance(verts2[j], verts[i]) <= merge_tol) {
          found = static_cast<int>(j);
          break;
        }
      if (found < 0) {
        verts2.push_back(verts[i]);
        found = static_cast<int>(verts2.size() - 1);
      }
      remap[i] = found;
    }

    std::vector<int> used(verts2.size(), 0);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      std::vector<int> cyc;
      for (int vi : cycles[i]) {
        int w = remap[vi];
        if (cyc.empty() || cyc.back() != w) cyc.push_back(w);
      }
      while (cyc.size() >= 2 && cyc.front() == cyc.back()) cyc.pop_back();
      // Collinear middle points (vertex merged onto an edge interior).
      for (int pass = 0; pass < 2 && cyc.size() > 3; ++pass) {
        std::vector<int> c2;
        int mm = static_cast<int>(cyc.size());
        for (int k = 0; k < mm; ++k) {
          const Vec& prev = verts2[cyc[(k + mm - 1) % mm]];
          const Vec& cur = verts2[cyc[k]];
          const Vec& nxt = verts2[cyc[(k + 1) % mm]];
          Vec d = nxt - prev;
          double len = norm(d);
          double off_line =
              len > 0 ? norm(cross(cur - prev, d)) / len : norm(cur - prev);
          if (off_line <= merge_tol && mm > 3) continue;
          c2.push_back(cyc[k]);
        }
        if (static_cast<int>(c2.size()) >= 3) cyc = c2;
      }
      cycles[i] = cyc;
      if (cyc.size() >= 3)
        for (int vi : cyc) used[vi] = 1;
    }

    // Compact unused vertices.
    std::vector<int> newid(verts2.size(), -1);
    for (std::size_t i = 0; i < verts2.size(); ++i)
      if (used[i]) {
        newid[i] = static_cast<int>(poly.vertices_.size());
        poly.vertices_.push_back(verts2[i]);
      }
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (cycles[i].size() < 3) continue;
      Facet f;
      f.halfspace_index = static_cast<int>(poly.facets_.size());
      for (int vi : cycles[i]) f.vertex_indices.push_back(newid[vi]);
      poly.halfspaces_.push_back(planes[i]);
      poly.facets_.push_back(f);
      sources.push_back(fs[i].source);
    }
    if (poly.facets_.size() < 4)
      throw Error(ErrorCode::EmptyInterior, "degenerate intersection");
  }

  poly.derive(cfg_);
  return {std::move(poly), std::move(sources)};
}

// ---------------------------------------------------------------------------
// ConvexPolytope
// ---------------------------------------------------------------------------

void ConvexPolytope::derive(const GeomConfig& cfg) {
  const int n = dim_;
  double scale = 1.0;
  for (const Vec& v : vertices_) scale = std::max(scale, max_abs_coord(v));

  for (Facet& f : facets_) {
    const Halfspace& h = halfspaces_[f.halfspace_index];
    f.normal = h.normal;
    f.plane_offset = h.offset;
    if (n == 2) {
      Vec a = vertices_[f.vertex_indices[0]];
      Vec b = vertices_[f.vertex_indices[1]];
      // Orient so the edge direction is the CCW tangent of the outward normal.
      if (dot(b - a, perp2(f.normal)) < 0)
        std::swap(f.vertex_indices[0], f.vertex_indices[1]);
      a = vertices_[f.vertex_indices[0]];
      b = vertices_[f.vertex_indices[1]];
      f.area = distance(a, b);
      f.barycenter = 0.5 * (a + b);
    } else {
      std::vector<Vec> pts;
      for (int vi : f.vertex_indices) pts.push_back(vertices_[vi]);
      Vec va = cycle_vector_area(pts);
      if (dot(va, f.normal) < 0) {
        std::reverse(f.vertex_indices.begin(), f.vertex_indices.end());
        std::reverse(pts.begin(), pts.end());
        va = -1.0 * va;
      }
      f.area = dot(va, f.normal);
      // Area-weighted centroid of the fan triangles.
      Vec c(0, 0, 0);
      double asum = 0.0;
      for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        double tri =
            0.5 * dot(cross(pts[k] - pts[0], pts[k + 1] - pts[0]), f.normal);
        c += tri * (1.0 / 3.0) * (pts[0] + pts[k] + pts[k + 1]);
        asum += tri;
      }
      f.barycenter = c / asum;
    }
  }

  volume_ = 0.0;
  for (const Facet& f : facets_) volume_ += f.plane_offset * f.area;
  volume_ /= n;
  double vol_floor = std::pow(100 * cfg.eps_geom * scale, n);
  if (!(volume_ > vol_floor))
    throw Error(ErrorCode::EmptyInterior, "polytope has empty interior");

  // Centroid via signed cones over the origin.
  Vec c(0, 0, 0);
  if (n == 2) {
    double a2 = 0.0;
    for (const Facet& f : facets_) {
      const Vec& p = vertices_[f.vertex_indices[0]];
      const Vec& q = vertices_[f.vertex_indices[1]];
      double w = p[0] * q[1] - q[0] * p[1];
      c += (w / 3.0) * (p + q);
      a2 += w;
    }
    centroid_ = c / a2;
  } else {
    double v6 = 0.0;
    for (const Facet& f : facets_) {
      const std::vector<int>& cyc = f.vertex_indices;
      for (std::size_t k = 1; k + 1 < cyc.size(); ++k) {
        const Vec& a = vertices_[cyc[0]];
        const Vec& b = vertices_[cyc[k]];
        const Vec& d = vertices_[cyc[k + 1]];
        double w = dot(a, cross(b, d));
        c += (w / 4.0) * (a + b + d);
        v6 += w;
      }
    }
    centroid_ = c / v6;
  }

  // Vertex-facet incidence by plane distance (robust to split edges).
  double inc_tol = 1e-7 * scale;
  std::vector<std::vector<int>> on_facet(vertices_.size());
  for (std::size_t j = 0; j < facets_.size(); ++j)
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (std::fabs(halfspaces_[j].eval(vertices_[i])) <= inc_tol)
        on_facet[i].push_back(static_cast<int>(j));

  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (static_cast<int>(on_facet[i].size()) < n)
      throw Error(ErrorCode::InvalidInput,
                  "vertex supported by fewer than dim halfspaces");

  ridges_.clear();
  int nf = static_cast<int>(facets_.size());
  int edge_count = 0;
  for (int i = 0; i < nf; ++i) {
    for (int j = i + 1; j < nf; ++j) {
      std::vector<int> common;
      for (std::size_t v = 0; v < vertices_.size(); ++v) {
        bool in_i = std::find(on_facet[v].begin(), on_facet[v].end(), i) !=
                    on_facet[v].end();
        bool in_j = std::find(on_facet[v].begin(), on_facet[v].end(), j) !=
                    on_facet[v].end();
        if (in_i && in_j) common.push_back(static_cast<int>(v));
      }
      int needed = (n == 3) ? 2 : 1;
      if (static_cast<int>(common.size()) < needed) continue;
      if (n == 2 && common.size() > 1) continue;  // duplicate line, no corner
      ++edge_count;

      Ridge r;
      r.facet_i = i;
      r.facet_j = j;
      double cosang =
          std::clamp(dot(facets_[i].normal, facets_[j].normal), -1.0, 1.0);
      r.dihedral = std::acos(cosang);
      if (n == 3) {
        Vec t = cross(facets_[i].normal, facets_[j].normal);
        double tl = norm(t);
        if (tl < 1e-12) continue;  // parallel planes cannot share a ridge
        t = t / tl;
        double lo = std::numeric_limits<double>::max(), hi = -lo;
        Vec plo, phi;
        for (int v : common) {
          double tc = dot(vertices_[v], t);
          if (tc < lo) {
            lo = tc;
            plo = vertices_[v];
          }
          if (tc > hi) {
            hi = tc;
            phi = vertices_[v];
          }
        }
        r.measure = hi - lo;
        if (r.measure <= inc_tol) continue;  // corner touch
        Vec w = cross(facets_[i].normal, t);
        double side = dot(w, facets_[i].barycenter - plo);
        if (std::fabs(side) < 1e-12 * scale) {
          side = 0.0;
          for (int vi : facets_[i].vertex_indices)
            side += dot(w, vertices_[vi] - plo);
        }
        if (side < 0) w = -1.0 * w;
        Vec proj_origin = facets_[i].plane_offset * facets_[i].normal;
        r.signed_dist = dot(w, proj_origin - plo);
      } else {
        r.measure = 1.0;
        const Vec& vs = vertices_[common[0]];
        Vec w = normalized(facets_[i].barycenter - vs);
        Vec proj_origin = facets_[i].plane_offset * facets_[i].normal;
        r.signed_dist = dot(w, proj_origin - vs);
      }
      ridges_.push_back(r);
    }
  }

  if (n == 3) {
    int V = static_cast<int>(vertices_.size());
    int F = static_cast<int>(facets_.size());
    if (V - edge_count + F != 2)
      throw Error(ErrorCode::InvalidInput, "Euler check failed (V-E+F != 2)");
  }
}

double ConvexPolytope::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      d = std::max(d, distance(vertices_[i], vertices_[j]));
  return d;
}

bool ConvexPolytope::contains(const Vec& p, double tol) const {
  for (const Halfspace& h : halfspaces_)
    if (h.eval(p) > tol) return false;
  return true;
}

ConvexPolytope ConvexPolytope::translated(const Vec& y) const {
  ConvexPolytope p = *this;
  for (Vec& v : p.vertices_) v += y;
  for (Halfspace& h : p.halfspaces_) h.offset += dot(h.normal, y);
  p.derive(GeomConfig{});
  return p;
}

ConvexPolytope ConvexPolytope::scaled(double s) const {
  if (!(s > 0))
    throw Error(ErrorCode::InvalidInput, "scale factor must be positive");
  ConvexPolytope p = *this;
  for (Vec& v : p.vertices_) v *= s;
  for (Halfspace& h : p.halfspaces_) h.offset *= s;
  p.derive(GeomConfig{});
  return p;
}

double ConvexPolytope::ridge_signed_distance(int fi, int fj) const {
  for (const Ridge& r : ridges_) {
    if (r.facet_i == fi && r.facet_j == fj) return r.signed_dist;
    if (r.facet_i == fj && r.facet_j == fi) {
      // Recompute from the other side.
      const Facet& a = facets_[fi];
      if (dim_ == 2) {
        // Shared vertex: the ridge stores it only implicitly; find it.
        for (int va : a.vertex_indices)
          for (int vb : facets_[fj].vertex_indices)
            if (va == vb) {
              Vec w = normalized(a.barycenter - vertices_[va]);
              return dot(w, a.plane_offset * a.normal - vertices_[va]);
            }
        break;
      }
      Vec t = cross(a.normal, facets_[fj].normal);
      double tl = norm(t);
      if (tl < 1e-12) break;
      t = t / tl;
      // Any point on the ridge line works; take a shared vertex.
      for (int va : a.vertex_indices)
        for (int vb : facets_[fj].vertex_indices)
          if (va == vb) {
            Vec p0 = vertices_[va];
            Vec w = cross(a.normal, t);
            double side = dot(w, a.barycenter - p0);
            if (side < 0) w = -1.0 * w;
            return dot(w, a.plane_offset * a.normal - p0);
          }
      break;
    }
  }
  throw Error(ErrorCode::InvalidInput, "facets do not share a ridge");
}

// ---------------------------------------------------------------------------
// Free operations
// ---------------------------------------------------------------------------

IntersectionResult intersect_halfspaces(std::span<const Halfspace> hs, int dim,
                                        const GeomConfig& cfg) {
  auto attempt = [&](double halfwidth) {
    PolytopeBuilder b(dim, cfg);
    b.seed_box(halfwidth);
    for (std::size_t i = 0; i < hs.size(); ++i) {
      if (b.clip(hs[i], static_cast<int>(i)) ==
          PolytopeBuilder::ClipStatus::Empty)
        throw Error(ErrorCode::EmptyInterior, "empty halfspace intersection");
    }
    return b.finalize();
  };

  PolytopeBuilder::Finalized fin = attempt(cfg.box_halfwidth);
  bool box_left = false;
  for (int s : fin.facet_sources) box_left |= (s == -2);
  if (box_left) {
    GeomConfig wide = cfg;
    wide.box_halfwidth = cfg.box_halfwidth * 1e6;
    PolytopeBuilder b(dim, wide);
    b.seed_box(wide.box_halfwidth);
    for (std::size_t i = 0; i < hs.size(); ++i)
      if (b.clip(hs[i], static_cast<int>(i)) ==
          PolytopeBuilder::ClipStatus::Empty)
        throw Error(ErrorCode::EmptyInterior, "empty halfspace intersection");
    fin = b.finalize();
    box_left = false;
    for (int s : fin.facet_sources) box_left |= (s == -2);
    if (box_left)
      throw Error(ErrorCode::Unbounded, "halfspace intersection is unbounded");
  }

  IntersectionResult res;
  res.polytope = std::move(fin.poly);
  res.facet_of_input.assign(hs.size(), -1);
  for (std::size_t f = 0; f < fin.facet_sources.size(); ++f) {
    int s = fin.facet_sources[f];
    if (s >= 0) res.facet_of_input[s] = static_cast<int>(f);
  }
  for (std::size_t i = 0; i < hs.size(); ++i)
    if (res.facet_of_input[i] < 0) res.dropped.push_back(static_cast<int>(i));
  return res;
}

std::optional<ConvexPolytope> clip(const ConvexPolytope& p, const Halfspace& h,
                                   const GeomConfig& cfg) {
  return clip(p, std::span<const Halfspace>(&h, 1), cfg);
}

std::optional<ConvexPolytope> clip(const ConvexPolytope& p,
                                   std::span<const Halfspace> hs,
                                   const GeomConfig& cfg) {
  PolytopeBuilder b(p.dim(), cfg);
  b.init_from(p);
  for (const Halfspace& h : hs)
    if (b.clip(h, -1) == PolytopeBuilder::ClipStatus::Empty)
      return std::nullopt;
  try {
    return b.finalize().poly;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyInterior) return std::nullopt;
    throw;
  }
}

std::optional<ConvexPolytope> intersect(const ConvexPolytope& p,
                                        const ConvexPolytope& q,
                                        const GeomConfig& cfg) {
  return clip(p, std::span<const Halfspace>(q.halfspaces()), cfg);
}

double intersection_volume(const ConvexPolytope& p, const ConvexPolytope& q,
                           const GeomConfig& cfg) {
  PolytopeBuilder b(p.dim(), cfg);
  b.init_from(p);
  for (const Halfspace& h : q.halfspaces())
    if (b.clip(h, -1) == PolytopeBuilder::ClipStatus::Empty) return 0.0;
  return b.current_volume();
}

double clipped_volume(const ConvexPolytope& p, std::span<const Halfspace> hs,
                      const GeomConfig& cfg) {
  PolytopeBuilder b(p.dim(), cfg);
  b.init_from(p);
  for (const Halfspace& h : hs)
    if (b.clip(h, -1) == PolytopeBuilder::ClipStatus::Empty) return 0.0;
  return b.current_volume();
}

double Simplex::volume() const {
  if (dim == 2) {
    Vec u = pts[1] - pts[0], v = pts[2] - pts[0];
    return 0.5 * std::fabs(u[0] * v[1] - u[1] * v[0]);
  }
  return std::fabs(dot(pts[1] - pts[0],
                       cross(pts[2] - pts[0], pts[3] - pts[0]))) /
         6.0;
}

Vec Simplex::centroid() const {
  Vec c(0, 0, 0);
  int m = dim + 1;
  for (int i = 0; i < m; ++i) c += pts[i];
  return c / m;
}

double Simplex::longest_edge(int* a, int* b) const {
  double best = -1.0;
  int m = dim + 1;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double d = distance(pts[i], pts[j]);
      if (d > best) {
        best = d;
        *a = i;
        *b = j;
      }
    }
  return best;
}

std::vector<Simplex> simplex_decompose(const ConvexPolytope& p) {
  std::vector<Simplex> out;
  int n = p.dim();
  if (static_cast<int>(p.vertices().size()) == n + 1) {
    Simplex s;
    s.dim = n;
    for (int i = 0; i <= n; ++i) s.pts[i] = p.vertices()[i];
    out.push_back(s);
    return out;
  }
  if (n == 2) {
    // Fan from the first vertex of the boundary cycle.
    // Rebuild the cycle by walking edges.
    std::vector<int> next(p.vertices().size(), -1);
    for (const Facet& f : p.facets())
      next[f.vertex_indices[0]] = f.vertex_indices[1];
    std::vector<Vec> cyc;
    int v0 = p.facets()[0].vertex_indices[0];
    int v = v0;
    do {
      cyc.push_back(p.vertices()[v]);
      v = next[v];
    } while (v != v0 && cyc.size() <= p.vertices().size());
    for (std::size_t k = 1; k + 1 < cyc.size(); ++k) {
      Simplex s;
      s.dim = 2;
      s.pts[0] = cyc[0];
      s.pts[1] = cyc[k];
      s.pts[2] = cyc[k + 1];
      if (s.volume() > 0) out.push_back(s);
    }
    return out;
  }
  Vec c = p.centroid();
  for (const Facet& f : p.facets()) {
    const std::vector<int>& cyc = f.vertex_indices;
    for (std::size_t k = 1; k + 1 < cyc.size(); ++k) {
      Simplex s;
      s.dim = 3;
      s.pts[0] = c;
      s.pts[1] = p.vertices()[cyc[0]];
      s.pts[2] = p.vertices()[cyc[k]];
      s.pts[3] = p.vertices()[cyc[k + 1]];
      if (s.volume() > 0) out.push_back(s);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CellComplex
// ---------------------------------------------------------------------------

CellComplex::CellComplex(ConvexPolytope cell) : dim(cell.dim()) {
  cells.push_back(std::move(cell));
}

CellComplex::CellComplex(int d, std::vector<ConvexPolytope> cs)
    : dim(d), cells(std::move(cs)) {
  for (const ConvexPolytope& c : cells)
    if (c.dim() != dim)
      throw Error(ErrorCode::InvalidInput, "cell dimension mismatch");
}

double CellComplex::volume() const {
  double v = 0.0;
  for (const ConvexPolytope& c : cells) v += c.volume();
  return v;
}

Vec CellComplex::centroid() const {
  Vec c(0, 0, 0);
  double v = 0.0;
  for (const ConvexPolytope& p : cells) {
    c += p.volume() * p.centroid();
    v += p.volume();
  }
  return c / v;
}

CellComplex CellComplex::translated(const Vec& y) const {
  CellComplex out;
  out.dim = dim;
  for (const ConvexPolytope& c : cells) out.cells.push_back(c.translated(y));
  return out;
}

CellComplex CellComplex::scaled(double s) const {
  CellComplex out;
  out.dim = dim;
  for (const ConvexPolytope& c : cells) out.cells.push_back(c.scaled(s));
  return out;
}

void CellComplex::validate_disjoint(double tol, const GeomConfig& cfg) const {
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      double v = intersection_volume(cells[i], cells[j], cfg);
      if (v > tol)
        throw Error(ErrorCode::InvalidInput,
                    "cells overlap with positive volume");
    }
}

double symmetric_difference_volume(const CellComplex& e,
                                   const ConvexPolytope& q,
                                   const GeomConfig& cfg) {
  double inter = 0.0;
  for (const ConvexPolytope& c : e.cells)
    inter += intersection_volume(c, q, cfg);
  return e.volume() + q.volume() - 2.0 * inter;
}

// ---------------------------------------------------------------------------
// Convex hull by supporting-plane enumeration
// ---------------------------------------------------------------------------

ConvexPolytope convex_hull(std::span<const Vec> points, int dim,
                           const GeomConfig& cfg) {
  std::size_t m = points.size();
  if (m < static_cast<std::size_t>(dim + 1))
    throw Error(ErrorCode::InvalidInput, "too few points for a hull");
  double scale = 1.0;
  for (const Vec& p : points) scale = std::max(scale, max_abs_coord(p));
  double tol = 100 * cfg.eps_geom * scale;

  std::vector<Halfspace> planes;
  auto consider = [&](Vec n, const Vec& base) {
    double len = norm(n);
    if (len <= tol) return;
    n = n / len;
    double c = dot(n, base);
    bool all_in = true, all_out = true;
    for (const Vec& p : points) {
      double s = dot(n, p) - c;
      if (s > tol) all_in = false;
      if (s < -tol) all_out = false;
    }
    if (!all_in && !all_out) return;
    if (all_out && !all_in) {
      n = -1.0 * n;
      c = -c;
    }
    for (const Halfspace& h : planes)
      if (norm(h.normal - n) < 1e-7 && std::fabs(h.offset - c) < tol) return;
    Halfspace h;
    h.normal = n;
    h.offset = c;
    planes.push_back(h);
  };

  if (dim == 2) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        consider(perp2(points[j] - points[i]), points[i]);
  } else {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k)
          consider(cross(points[j] - points[i], points[k] - points[i]),
                   points[i]);
  }
  if (planes.empty())
    throw Error(ErrorCode::InvalidInput, "degenerate point set");
  return intersect_halfspaces(planes, dim, cfg).polytope;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::RedundantSigma: return "RedundantSigma";
    case ErrorCode::VanishingFacet: return "VanishingFacet";
    case ErrorCode::NonManifoldBoundary: return "NonManifoldBoundary";
    case ErrorCode::NotClose: return "NotClose";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::AmbiguousMatch: return "AmbiguousMatch";
    case ErrorCode::OriginArgument: return "OriginArgument";
    case ErrorCode::NoDescent: return "NoDescent";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace wulff
