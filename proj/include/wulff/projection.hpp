#pragma once

#include <optional>

#include "wulff/crystal.hpp"

namespace wulff {

struct ProjectionProblem {
  const CrystalNorm* norm = nullptr;
  CellComplex set;
  double eta = 0.1;
  double tol = -1.0;  // residual tolerance; < 0 means 1e-10 * |K|
  int max_iter = 50;
  std::optional<OffsetVector> start;
};

struct ProjectionResult {
  OffsetVector a;
  std::vector<double> residual;
  int iterations = 0;
  double ratio_report = 0.0;  // |a| / |E delta K|
  bool volume_renormalized = false;
};

// phi_i(a) = |K^a ∩ V_i^a| - |E ∩ V_i^a|, by cone clipping.
std::vector<double> volume_mismatch(const CrystalNorm& norm,
                                    const CellComplex& e,
                                    const OffsetVector& a);

// v_i = (1/n) H^{n-1}(facet i of K^a) / |sigma_i|; the dominant diagonal of
// the mismatch map's differential.
std::vector<double> diagonal_jacobian(const CrystalNorm& norm,
                                      const OffsetVector& a);

// Damped diagonal Newton on the cone-volume matching map.
ProjectionResult project_to_family(const ProjectionProblem& p);

bool uniqueness_probe(const ProjectionProblem& p,
                      const std::vector<OffsetVector>& starts,
                      double agree_tol = 1e-7);

}  // namespace wulff
