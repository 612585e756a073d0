#include "wulff/projection.hpp"

#include <algorithm>
#include <cmath>

namespace wulff {

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

std::vector<double> volume_mismatch(const CrystalNorm& norm,
                                    const CellComplex& e,
                                    const OffsetVector& a) {
  ConvexPolytope ka = offset_shape(norm, a);  // throws VanishingFacet
  ConeFan fan = cone_fan(norm, a);
  std::vector<double> e_vols = cone_volumes(e, fan, norm.config().geom);
  CellComplex ka_complex(ka);
  std::vector<double> k_vols = cone_volumes(ka_complex, fan, norm.config().geom);
  std::vector<double> phi(norm.count());
  for (int i = 0; i < norm.count(); ++i) phi[i] = k_vols[i] - e_vols[i];
  return phi;
}

std::vector<double> diagonal_jacobian(const CrystalNorm& norm,
                                      const OffsetVector& a) {
  ConvexPolytope ka = offset_shape(norm, a);
  std::vector<double> v(norm.count());
  for (int i = 0; i < norm.count(); ++i)
    v[i] = ka.facets()[i].area / (norm.dim() * norm.sigma_len(i));
  return v;
}

ProjectionResult project_to_family(const ProjectionProblem& p) {
  if (!p.norm) throw Error(ErrorCode::InvalidInput, "problem has no norm");
  const CrystalNorm& norm = *p.norm;
  const ConvexPolytope& k = norm.wulff();
  double vol_k = k.volume();
  double tol = p.tol > 0 ? p.tol : 1e-10 * vol_k;

  if (std::fabs(p.set.volume() - vol_k) > 1e-9 * vol_k)
    throw Error(ErrorCode::NotClose, "set volume differs from |K|");
  if (!sandwich_check(p.set, k, p.eta, norm.config().geom))
    throw Error(ErrorCode::NotClose, "set violates the sandwich hypothesis");

  OffsetVector a = p.start ? *p.start : OffsetVector::zero(norm.count());
  std::vector<double> phi = volume_mismatch(norm, p.set, a);
  double res = max_abs(phi);
  int iter = 1;
  const double lambda_floor = 1e-6;

  while (res > tol) {
    if (iter >= p.max_iter)
      throw Error(ErrorCode::NoConvergence,
                  "projection stalled after " + std::to_string(iter) +
                      " iterations, residual " + std::to_string(res));
    std::vector<double> v = diagonal_jacobian(norm, a);
    double lambda = 1.0;
    bool stepped = false;
    bool vanished = false;
    while (lambda >= lambda_floor) {
      OffsetVector trial = a;
      for (int i = 0; i < norm.count(); ++i)
        trial[i] -= lambda * phi[i] / v[i];
      if (!(trial.euclidean_norm() < 0.999)) {
        lambda *= 0.5;
        continue;
      }
      std::vector<double> phi_trial;
      try {
        phi_trial = volume_mismatch(norm, p.set, trial);
        vanished = false;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::VanishingFacet) throw;
        vanished = true;
        lambda *= 0.5;
        continue;
      }
      double res_trial = max_abs(phi_trial);
      if (res_trial < res) {
        a = trial;
        phi = std::move(phi_trial);
        res = res_trial;
        stepped = true;
        break;
      }
      lambda *= 0.5;
    }
    ++iter;
    if (!stepped) {
      if (vanished)
        throw Error(ErrorCode::VanishingFacet,
                    "every damped step left the admissible region");
      throw Error(ErrorCode::NoConvergence,
                  "residual would not decrease under step halving");
    }
  }

  // Volume polish: the constraint |E| = |K| makes sum(phi) = |K^a| - |E|, so
  // at convergence the renormalization is a numerical correction only.
  ProjectionResult out;
  out.volume_renormalized = false;
  for (int round = 0; round < 3; ++round) {
    OffsetVector polished = renormalize_volume(norm, a);
    std::vector<double> phi_p = volume_mismatch(norm, p.set, polished);
    double res_p = max_abs(phi_p);
    if (res_p <= tol) {
      a = polished;
      phi = std::move(phi_p);
      res = res_p;
      out.volume_renormalized = true;
      break;
    }
    // Take one more Newton pass at the polished point, then retry.
    std::vector<double> v = diagonal_jacobian(norm, polished);
    for (int i = 0; i < norm.count(); ++i) polished[i] -= phi_p[i] / v[i];
    try {
      phi_p = volume_mismatch(norm, p.set, polished);
    } catch (const Error&) {
      break;
    }
    if (max_abs(phi_p) < res) {
      a = polished;
      phi = std::move(phi_p);
      res = max_abs(phi);
    }
  }

  out.a = a;
  out.residual = phi;
  out.iterations = iter;
  double sym_k = symmetric_difference_volume(p.set, k, norm.config().geom);
  out.ratio_report = sym_k > 0 ? a.euclidean_norm() / sym_k : 0.0;
  return out;
}

bool uniqueness_probe(const ProjectionProblem& p,
                      const std::vector<OffsetVector>& starts,
                      double agree_tol) {
  std::vector<OffsetVector> results;
  for (const OffsetVector& s : starts) {
    ProjectionProblem q = p;
    q.start = s;
    results.push_back(project_to_family(q).a);
  }
  for (std::size_t i = 0; i < results.size(); ++i)
    for (std::size_t j = i + 1; j < results.size(); ++j)
      if ((results[i] - results[j]).max_abs() > agree_tol) return false;
  return true;
}

}  // namespace wulff
