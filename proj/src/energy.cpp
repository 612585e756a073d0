#include "wulff/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace wulff {

namespace {

// 2-d convex polygon intersection area (Sutherland-Hodgman).
double polygon_overlap_area(std::vector<std::array<double, 2>> subject,
                            const std::vector<std::array<double, 2>>& clip) {
  auto signed_area = [](const std::vector<std::array<double, 2>>& p) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const auto& a = p[k];
      const auto& b = p[(k + 1) % p.size()];
      s += a[0] * b[1] - b[0] * a[1];
    }
    return 0.5 * s;
  };
  std::vector<std::array<double, 2>> clipper = clip;
  if (signed_area(clipper) < 0) std::reverse(clipper.begin(), clipper.end());
  if (signed_area(subject) < 0) std::reverse(subject.begin(), subject.end());
  for (std::size_t e = 0; e < clipper.size() && !subject.empty(); ++e) {
    const auto& p = clipper[e];
    const auto& q = clipper[(e + 1) % clipper.size()];
    double nx = q[1] - p[1], ny = p[0] - q[0];  // inward of CCW edge
    double off = nx * p[0] + ny * p[1];
    std::vector<std::array<double, 2>> out;
    for (std::size_t k = 0; k < subject.size(); ++k) {
      const auto& a = subject[k];
      const auto& b = subject[(k + 1) % subject.size()];
      double sa = nx * a[0] + ny * a[1] - off;
      double sb = nx * b[0] + ny * b[1] - off;
      if (sa >= 0) out.push_back(a);
      if ((sa > 0 && sb < 0) || (sa < 0 && sb > 0)) {
        double t = sa / (sa - sb);
        out.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
      }
    }
    subject = std::move(out);
  }
  if (subject.size() < 3) return 0.0;
  return std::fabs(signed_area(subject));
}

struct BoundaryFacet {
  int cell = -1;
  Vec normal;
  double offset = 0.0;
  std::vector<Vec> pts;
  double area = 0.0;
  double remaining = 0.0;
};

void plane_basis(const Vec& n, Vec* t1, Vec* t2) {
  int k = std::fabs(n[0]) <= std::fabs(n[1])
              ? (std::fabs(n[0]) <= std::fabs(n[2]) ? 0 : 2)
              : (std::fabs(n[1]) <= std::fabs(n[2]) ? 1 : 2);
  Vec e(0, 0, 0);
  e[k] = 1.0;
  *t1 = normalized(e - dot(e, n) * n);
  *t2 = cross(n, *t1);
}

double facet_overlap(const BoundaryFacet& a, const BoundaryFacet& b, int dim) {
  if (dim == 2) {
    Vec t = perp2(a.normal);
    double a0 = dot(t, a.pts[0]), a1 = dot(t, a.pts[1]);
    double b0 = dot(t, b.pts[0]), b1 = dot(t, b.pts[1]);
    if (a0 > a1) std::swap(a0, a1);
    if (b0 > b1) std::swap(b0, b1);
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
  }
  Vec t1, t2;
  plane_basis(a.normal, &t1, &t2);
  auto project = [&](const std::vector<Vec>& pts) {
    std::vector<std::array<double, 2>> out;
    for (const Vec& p : pts) out.push_back({dot(t1, p), dot(t2, p)});
    return out;
  };
  return polygon_overlap_area(project(a.pts), project(b.pts));
}

EnergyReport report_from_polytope(const ConvexPolytope& e,
                                  const CrystalNorm& norm) {
  EnergyReport rep;
  for (std::size_t i = 0; i < e.facets().size(); ++i) {
    const Facet& f = e.facets()[i];
    EnergyReport::Item item;
    item.facet = static_cast<int>(i);
    item.tension = norm.tension(f.normal);
    item.area = f.area;
    item.contribution = item.tension * f.area;
    rep.total += item.contribution;
    rep.per_facet.push_back(item);
  }
  return rep;
}

}  // namespace

EnergyReport surface_energy(const ConvexPolytope& e, const CrystalNorm& norm) {
  if (e.dim() != norm.dim())
    throw Error(ErrorCode::InvalidInput, "dimension mismatch");
  return report_from_polytope(e, norm);
}

EnergyReport surface_energy(const CellComplex& e, const CrystalNorm& norm,
                            const GeomConfig& cfg) {
  if (e.dim != norm.dim())
    throw Error(ErrorCode::InvalidInput, "dimension mismatch");
  if (e.cells.size() == 1) return report_from_polytope(e.cells[0], norm);

  double scale = 1.0;
  std::vector<BoundaryFacet> bfs;
  for (std::size_t c = 0; c < e.cells.size(); ++c) {
    const ConvexPolytope& cell = e.cells[c];
    for (const Facet& f : cell.facets()) {
      BoundaryFacet bf;
      bf.cell = static_cast<int>(c);
      bf.normal = f.normal;
      bf.offset = f.plane_offset;
      for (int vi : f.vertex_indices) {
        bf.pts.push_back(cell.vertices()[vi]);
        scale = std::max({scale, std::fabs(bf.pts.back()[0]),
                          std::fabs(bf.pts.back()[1]),
                          std::fabs(bf.pts.back()[2])});
      }
      bf.area = f.area;
      bf.remaining = f.area;
      bfs.push_back(std::move(bf));
    }
  }

  double plane_tol = 100 * cfg.eps_geom * scale;
  double area_tol = 100 * cfg.eps_geom * scale * scale;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    for (std::size_t j = i + 1; j < bfs.size(); ++j) {
      if (bfs[i].cell == bfs[j].cell) continue;
      bool opposite = norm2(bfs[i].normal + bfs[j].normal) < plane_tol &&
                      std::fabs(bfs[i].offset + bfs[j].offset) < plane_tol;
      bool aligned = norm2(bfs[i].normal - bfs[j].normal) < plane_tol &&
                     std::fabs(bfs[i].offset - bfs[j].offset) < plane_tol;
      if (!opposite && !aligned) continue;
      double ov = facet_overlap(bfs[i], bfs[j], e.dim);
      if (ov <= area_tol) continue;
      if (aligned)
        throw Error(ErrorCode::NonManifoldBoundary,
                    "coincident facets with matching orientation");
      bfs[i].remaining -= ov;
      bfs[j].remaining -= ov;
    }
  }

  EnergyReport rep;
  int id = 0;
  for (const BoundaryFacet& bf : bfs) {
    double rem = bf.remaining;
    if (rem < -area_tol)
      throw Error(ErrorCode::NonManifoldBoundary,
                  "facet cancelled beyond its own area");
    if (rem <= area_tol) continue;
    EnergyReport::Item item;
    item.facet = id++;
    item.tension = norm.tension(bf.normal);
    item.area = rem;
    item.contribution = item.tension * rem;
    rep.total += item.contribution;
    rep.per_facet.push_back(item);
  }
  return rep;
}

double wulff_deficit(const CellComplex& e, const CrystalNorm& norm,
                     const GeomConfig& cfg) {
  double vol = e.volume();
  if (!(vol > 0))
    throw Error(ErrorCode::InvalidInput, "set must have positive volume");
  double n = norm.dim();
  double bound = n * std::pow(norm.wulff().volume(), 1.0 / n) *
                 std::pow(vol, (n - 1.0) / n);
  return surface_energy(e, norm, cfg).total - bound;
}

double wulff_deficit(const ConvexPolytope& e, const CrystalNorm& norm) {
  return wulff_deficit(CellComplex(e), norm);
}

ExpansionReport first_order_energy_delta(const CrystalNorm& norm,
                                         const OffsetVector& a,
                                         const OffsetVector& a_prime) {
  if (a.size() != norm.count() || a_prime.size() != norm.count())
    throw Error(ErrorCode::InvalidInput, "offset vector has wrong length");
  ConvexPolytope base = offset_shape(norm, a);
  offset_shape(norm, a_prime);  // admissibility of the target end

  ExpansionReport rep;
  auto d_at = [&](const OffsetVector& o, int i) {
    return (1.0 + o[i]) / norm.sigma_len(i);
  };
  for (int i = 0; i < norm.count(); ++i)
    rep.predicted_delta_V +=
        (d_at(a_prime, i) - d_at(a, i)) * base.facets()[i].area;

  for (const Ridge& r : base.ridges()) {
    int i = r.facet_i, j = r.facet_j;
    double sin_t = std::sin(r.dihedral);
    double tan_t = std::tan(r.dihedral);
    double d0_i = 1.0 / norm.sigma_len(i);
    double d0_j = 1.0 / norm.sigma_len(j);
    double coef_ij = d0_j / sin_t - d0_i / tan_t;
    double coef_ji = d0_i / sin_t - d0_j / tan_t;
    rep.predicted_delta_F +=
        r.measure * (d_at(a_prime, i) - d_at(a, i)) * coef_ij +
        r.measure * (d_at(a_prime, j) - d_at(a, j)) * coef_ji;
    rep.ridge_terms.push_back({i, j, r.measure, coef_ij});
    rep.ridge_terms.push_back({j, i, r.measure, coef_ji});

    // Base-shape consistency of the ridge data itself.
    double da_i = base.facets()[i].plane_offset;
    double da_j = base.facets()[j].plane_offset;
    rep.geo_residuals.push_back(da_j / sin_t - da_i / tan_t - r.signed_dist);
    rep.geo_residuals.push_back(da_i / sin_t - da_j / tan_t -
                                base.ridge_signed_distance(j, i));
  }
  return rep;
}

double first_order_volume_delta(const CrystalNorm& norm, const OffsetVector& a,
                                const OffsetVector& a_prime) {
  if (a.size() != norm.count() || a_prime.size() != norm.count())
    throw Error(ErrorCode::InvalidInput, "offset vector has wrong length");
  ConvexPolytope base = offset_shape(norm, a);
  offset_shape(norm, a_prime);
  double dv = 0.0;
  for (int i = 0; i < norm.count(); ++i) {
    double step = (a_prime[i] - a[i]) / norm.sigma_len(i);
    dv += step * base.facets()[i].area;
  }
  return dv;
}

std::vector<GeoResidual> geo_identity_residual(const ConvexPolytope& p) {
  if (!p.contains(Vec(0, 0, 0), 1e-12))
    throw Error(ErrorCode::InvalidInput, "origin must lie in the interior");
  std::vector<GeoResidual> out;
  for (const Ridge& r : p.ridges()) {
    double sin_t = std::sin(r.dihedral);
    double tan_t = std::tan(r.dihedral);
    double d_i = p.facets()[r.facet_i].plane_offset;
    double d_j = p.facets()[r.facet_j].plane_offset;
    out.push_back(
        {r.facet_i, r.facet_j, d_j / sin_t - d_i / tan_t - r.signed_dist});
    out.push_back({r.facet_j, r.facet_i,
                   d_i / sin_t - d_j / tan_t -
                       p.ridge_signed_distance(r.facet_j, r.facet_i)});
  }
  return out;
}

std::vector<std::pair<double, double>> smoothness_modulus_probe(
    const CrystalNorm& norm, const OffsetVector& direction,
    const std::vector<double>& t_list) {
  if (direction.size() != norm.count())
    throw Error(ErrorCode::InvalidInput, "direction has wrong length");
  if (direction.euclidean_norm() <= 0)
    throw Error(ErrorCode::InvalidInput, "direction must be nonzero");
  double f_k = surface_energy(norm.wulff(), norm).total;
  std::vector<std::pair<double, double>> out;
  for (double t : t_list) {
    if (t == 0.0) {
      out.emplace_back(0.0, 0.0);
      continue;
    }
    OffsetVector a = renormalize_volume(norm, t * direction);
    double f_a = surface_energy(offset_shape(norm, a), norm).total;
    out.emplace_back(t, std::fabs(f_a - f_k) / a.euclidean_norm());
  }
  return out;
}

}  // namespace wulff
