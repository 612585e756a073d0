#include "wulff/crystal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wulff/linprog.hpp"

namespace wulff {

double OffsetVector::euclidean_norm() const {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double OffsetVector::max_abs() const {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::fabs(v));
  return s;
}

OffsetVector operator+(const OffsetVector& x, const OffsetVector& y) {
  OffsetVector r = x;
  for (int i = 0; i < r.size(); ++i) r[i] += y[i];
  return r;
}

OffsetVector operator-(const OffsetVector& x, const OffsetVector& y) {
  OffsetVector r = x;
  for (int i = 0; i < r.size(); ++i) r[i] -= y[i];
  return r;
}

OffsetVector operator*(double s, const OffsetVector& x) {
  OffsetVector r = x;
  for (int i = 0; i < r.size(); ++i) r[i] *= s;
  return r;
}

namespace {

std::vector<Halfspace> offset_planes(const std::vector<Vec>& sigmas,
                                     const OffsetVector& a) {
  std::vector<Halfspace> hs;
  hs.reserve(sigmas.size());
  for (std::size_t i = 0; i < sigmas.size(); ++i)
    hs.emplace_back(sigmas[i], 1.0 + a[static_cast<int>(i)]);
  return hs;
}

}  // namespace

CrystalNorm::CrystalNorm(int dim, std::vector<Vec> sigmas,
                         std::optional<std::vector<Vec>> vertex_data,
                         const CrystalConfig& cfg)
    : dim_(dim), sigmas_(std::move(sigmas)), xs_(std::move(vertex_data)),
      cfg_(cfg) {
  if (dim_ != 2 && dim_ != 3)
    throw Error(ErrorCode::InvalidInput, "dimension must be 2 or 3");
  if (static_cast<int>(sigmas_.size()) < dim_ + 1)
    throw Error(ErrorCode::InvalidInput, "at least dim+1 directions required");
  for (const Vec& s : sigmas_) {
    if (norm(s) <= 0)
      throw Error(ErrorCode::InvalidInput, "zero sigma vector");
    if (dim_ == 2 && std::fabs(s[2]) > 1e-12)
      throw Error(ErrorCode::InvalidInput, "2-d sigma with a third component");
  }
  // Parallel duplicates never support distinct facets.
  for (std::size_t i = 0; i < sigmas_.size(); ++i)
    for (std::size_t j = i + 1; j < sigmas_.size(); ++j) {
      if (dot(normalized(sigmas_[i]), normalized(sigmas_[j])) > 1.0 - 1e-12) {
        if (cfg_.redundant == RedundantPolicy::Reject)
          throw Error(ErrorCode::RedundantSigma,
                      "parallel sigma directions at indices " +
                          std::to_string(i) + "," + std::to_string(j),
                      static_cast<int>(j));
        // keep the one whose plane is closer to the origin
        if (norm(sigmas_[i]) >= norm(sigmas_[j]))
          sigmas_.erase(sigmas_.begin() + static_cast<long>(j--));
        else {
          sigmas_.erase(sigmas_.begin() + static_cast<long>(i--));
          break;
        }
      }
    }

  for (int round = 0;; ++round) {
    OffsetVector zero = OffsetVector::zero(count());
    auto hs = offset_planes(sigmas_, zero);
    IntersectionResult res;
    try {
      res = intersect_halfspaces(hs, dim_, cfg_.geom);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Unbounded)
        throw Error(ErrorCode::Unbounded,
                    "dual norm is not positive: Wulff shape unbounded");
      throw;
    }
    std::vector<int> redundant = res.dropped;
    for (std::size_t i = 0; i < sigmas_.size(); ++i) {
      int f = res.facet_of_input[i];
      if (f >= 0 && res.polytope.facets()[f].area <= cfg_.facet_vanish_tol)
        redundant.push_back(static_cast<int>(i));
    }
    if (redundant.empty()) {
      wulff_ = std::move(res.polytope);
      break;
    }
    if (cfg_.redundant == RedundantPolicy::Reject)
      throw Error(ErrorCode::RedundantSigma,
                  "sigma " + std::to_string(redundant.front()) +
                      " supports no facet of the Wulff shape",
                  redundant.front());
    std::sort(redundant.begin(), redundant.end());
    for (auto it = redundant.rbegin(); it != redundant.rend(); ++it)
      sigmas_.erase(sigmas_.begin() + *it);
    if (static_cast<int>(sigmas_.size()) < dim_ + 1)
      throw Error(ErrorCode::InvalidInput,
                  "stripping redundant sigmas left too few directions");
  }

  sigma_len_.clear();
  for (const Vec& s : sigmas_) sigma_len_.push_back(norm(s));

  // Facet order must mirror sigma order; everything downstream relies on it.
  for (int i = 0; i < count(); ++i) {
    const Facet& f = wulff_.facets()[i];
    if (dot(f.normal, normalized(sigmas_[i])) < 1.0 - 1e-9)
      throw Error(ErrorCode::InvalidInput, "facet order out of sync");
  }

  if (xs_) {
    for (const Vec& x : *xs_)
      if (dim_ == 2 && std::fabs(x[2]) > 1e-12)
        throw Error(ErrorCode::InvalidInput, "2-d vertex with a third component");
    for (int i = 0; i < count(); ++i) {
      const Vec& nu = wulff_.facets()[i].normal;
      double from_xs = -std::numeric_limits<double>::max();
      for (const Vec& x : *xs_) from_xs = std::max(from_xs, dot(x, nu));
      double from_k = tension(nu);
      if (std::fabs(from_xs - from_k) > 1e-9 * std::max(1.0, std::fabs(from_k)))
        throw Error(ErrorCode::InvalidInput,
                    "vertex data disagrees with the Wulff support function");
    }
  }
}

double CrystalNorm::dual(const Vec& x) const {
  double m = -std::numeric_limits<double>::max();
  for (const Vec& s : sigmas_) m = std::max(m, dot(s, x));
  return m;
}

double CrystalNorm::dual_offset(const OffsetVector& a, const Vec& x) const {
  double m = -std::numeric_limits<double>::max();
  for (int i = 0; i < count(); ++i)
    m = std::max(m, dot(sigmas_[i], x) / (1.0 + a[i]));
  return m;
}

double CrystalNorm::tension(const Vec& nu) const {
  double m = -std::numeric_limits<double>::max();
  for (const Vec& z : wulff_.vertices()) m = std::max(m, dot(nu, z));
  return m;
}

int CrystalNorm::cone_index(const OffsetVector& a, const Vec& x) const {
  int best = 0;
  double bv = -std::numeric_limits<double>::max();
  for (int i = 0; i < count(); ++i) {
    double v = dot(sigmas_[i], x) / (1.0 + a[i]);
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  return best;
}

const ConvexPolytope& wulff_shape(const CrystalNorm& norm) {
  return norm.wulff();
}

double dual_eval(const CrystalNorm& norm, const Vec& x) { return norm.dual(x); }

double support_eval(const CrystalNorm& norm, const Vec& nu) {
  return norm.tension(nu);
}

ConvexPolytope offset_shape(const CrystalNorm& norm, const OffsetVector& a) {
  if (a.size() != norm.count())
    throw Error(ErrorCode::InvalidInput, "offset vector has wrong length");
  if (!(a.euclidean_norm() < 1.0))
    throw Error(ErrorCode::InvalidInput, "offset vector norm must be < 1");
  auto hs = offset_planes(norm.sigmas(), a);
  IntersectionResult res =
      intersect_halfspaces(hs, norm.dim(), norm.config().geom);
  if (!res.dropped.empty())
    throw Error(ErrorCode::VanishingFacet,
                "facet " + std::to_string(res.dropped.front()) +
                    " vanished from the offset shape",
                res.dropped.front());
  for (int i = 0; i < norm.count(); ++i) {
    const Facet& f = res.polytope.facets()[res.facet_of_input[i]];
    if (f.area <= norm.config().facet_vanish_tol)
      throw Error(ErrorCode::VanishingFacet,
                  "facet " + std::to_string(i) + " area below tolerance", i);
  }
  return std::move(res.polytope);
}

OffsetVector renormalize_volume(const CrystalNorm& norm,
                                const OffsetVector& a) {
  ConvexPolytope ka = offset_shape(norm, a);
  double s = std::pow(norm.wulff().volume() / ka.volume(),
                      1.0 / norm.dim());
  OffsetVector out = a;
  for (int i = 0; i < out.size(); ++i) out[i] = s * (1.0 + a[i]) - 1.0;
  if (!(out.euclidean_norm() < 1.0))
    throw Error(ErrorCode::InvalidInput,
                "renormalized offset left the |a| < 1 chart");
  return out;
}

ConeFan cone_fan(const CrystalNorm& norm, const OffsetVector& a) {
  if (a.size() != norm.count())
    throw Error(ErrorCode::InvalidInput, "offset vector has wrong length");
  ConeFan fan;
  fan.dim = norm.dim();
  fan.offsets = a;
  fan.cones.resize(norm.count());
  for (int i = 0; i < norm.count(); ++i) {
    Vec si = norm.sigmas()[i] / (1.0 + a[i]);
    for (int j = 0; j < norm.count(); ++j) {
      if (j == i) continue;
      Vec d = norm.sigmas()[j] / (1.0 + a[j]) - si;
      if (norm2(d) < 1e-24) continue;
      fan.cones[i].emplace_back(d, 0.0);
    }
  }
  return fan;
}

std::vector<double> cone_volumes(const CellComplex& e, const ConeFan& fan,
                                 const GeomConfig& cfg) {
  std::vector<double> v(fan.cones.size(), 0.0);
  for (const ConvexPolytope& cell : e.cells)
    for (std::size_t i = 0; i < fan.cones.size(); ++i)
      v[i] += clipped_volume(cell, fan.cones[i], cfg);
  return v;
}

double k_distance(const CrystalNorm& norm, const Vec& x,
                  std::span<const Halfspace> a_halfspaces) {
  int n = norm.dim();
  // Variables z = (y, t); minimize t subject to
  //   sigma_i . (x - y) <= t   and   y in A.
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  std::vector<std::vector<double>> G;
  std::vector<double> h;
  for (const Vec& s : norm.sigmas()) {
    std::vector<double> row(n + 1, 0.0);
    for (int k = 0; k < n; ++k) row[k] = -s[k];
    row[n] = -1.0;
    G.push_back(row);
    h.push_back(-dot(s, x));
  }
  for (const Halfspace& hs : a_halfspaces) {
    std::vector<double> row(n + 1, 0.0);
    for (int k = 0; k < n; ++k) row[k] = hs.normal[k];
    G.push_back(row);
    h.push_back(hs.offset);
  }
  auto sol = solve_lp(c, G, h);
  if (!sol)
    throw Error(ErrorCode::InvalidInput, "K-distance LP infeasible (A empty?)");
  return std::max(0.0, sol->value);
}

double k_distance(const CrystalNorm& norm, const Vec& x,
                  const ConvexPolytope& a) {
  return k_distance(norm, x, std::span<const Halfspace>(a.halfspaces()));
}

bool neighborhood_contains(const CrystalNorm& norm, double r,
                           const ConvexPolytope& a, const CellComplex& g) {
  Vec inner = a.centroid();
  double tol = 1e-9 * std::max(1.0, r);
  for (const ConvexPolytope& cell : g.cells)
    for (const Vec& v : cell.vertices()) {
      if (norm.dual(v - inner) <= r + tol) continue;  // cheap upper bound
      if (k_distance(norm, v, a) > r + tol) return false;
    }
  return true;
}

bool sandwich_check(const CellComplex& e, const ConvexPolytope& k, double eta,
                    const GeomConfig& cfg) {
  if (!(eta > 0.0 && eta < 1.0))
    throw Error(ErrorCode::InvalidInput, "eta must lie in (0,1)");
  // Outer: every cell vertex satisfies the (1+eta)-scaled halfspaces.
  double tol = 1e-9;
  for (const ConvexPolytope& cell : e.cells)
    for (const Vec& v : cell.vertices())
      for (const Halfspace& h : k.halfspaces())
        if (dot(h.normal, v) > (1.0 + eta) * h.offset + tol) return false;
  // Inner: |(1-eta)K \ E| below tolerance, by clipped volumes.
  ConvexPolytope inner = k.scaled(1.0 - eta);
  double covered = 0.0;
  for (const ConvexPolytope& cell : e.cells)
    covered += intersection_volume(inner, cell, cfg);
  return inner.volume() - covered <= 1e-9 * k.volume();
}

}  // namespace wulff
