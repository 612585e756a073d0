#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "wulff/energy.hpp"
#include "wulff/projection.hpp"
#include "wulff/rng.hpp"

namespace wulff {

enum class PerturbationKind {
  FacetOffset,      // stays inside the face-parallel family
  VertexJitter,     // hull of jittered vertices
  CornerTruncation, // one extra random halfspace near a vertex
  SlabCut,          // one facet plane pushed inward, then dilate back
};

const char* perturbation_kind_name(PerturbationKind k);
std::optional<PerturbationKind> perturbation_kind_from_name(
    const std::string& name);

struct PerturbationFamily {
  PerturbationKind kind = PerturbationKind::VertexJitter;
  double magnitude = 0.1;
  std::uint64_t seed = 12345;
};

// Volume-matched, recentred sample; |E| = |K| to 1e-9 relative.
CellComplex generate_perturbation(const CrystalNorm& norm,
                                  PerturbationKind kind, double magnitude,
                                  Rng& rng);

struct StabilityRecord {
  int index = 0;
  OffsetVector a;
  double delta_f = 0.0;
  double sym_diff = 0.0;
  double ratio = 0.0;
  std::string status;  // ok | excluded | skipped:<code>
};

struct SweepResult {
  double gamma_hat = 0.0;
  int included = 0;
  int excluded = 0;
  int skipped = 0;
  std::vector<StabilityRecord> records;
};

struct SweepConfig {
  double eta = -1.0;  // < 0: derived from the magnitude
  double tol = -1.0;
  int max_iter = 50;
};

SweepResult stability_sweep(const CrystalNorm& norm,
                            const PerturbationFamily& family, int samples,
                            const SweepConfig& cfg = {});

struct FalsifyReport {
  bool counterexample_found = false;
  int checked = 0;
  int skipped_neighborhood = 0;
  int skipped_error = 0;
  double min_slack = 0.0;
  // populated when a violation was found and re-verified
  int witness_index = -1;
  std::string witness_kind;
  double witness_energy = 0.0;
  double witness_sym_diff = 0.0;
  double witness_slack = 0.0;
};

// Samples equal-volume competitors inside the K-distance R-neighborhood and
// tests the epsilon-minimality inequality against each.
FalsifyReport epsilon_minimality_falsifier(const CrystalNorm& norm,
                                           const ConvexPolytope& s, double eps,
                                           double r, int competitors,
                                           std::uint64_t seed,
                                           double magnitude = 0.1);

struct Potential {
  std::string name;
  std::function<double(const Vec&)> g;

  static Potential quadratic();                  // |x|^2
  static Potential euclidean();                  // |x|
  static Potential shifted_linear(double h, int dim);  // max(x_n + h, 0)
};

double integrate_potential(const Potential& g, const ConvexPolytope& p,
                           double rel_tol = 1e-8);

struct MinimizeConfig {
  double m_max_fraction = 0.25;  // of |K|
  double y_step = 0.1;
  double a_step = 0.05;
  double step_floor = 1e-7;
  int max_rounds = 200;
};

struct MinimizeResult {
  int dim = 3;
  OffsetVector a;
  Vec y;
  double value = 0.0;
  double surface_term = 0.0;
  double potential_term = 0.0;
  int rounds = 0;
  int evaluations = 0;
};

// Finite-dimensional search licensed by the small-mass rigidity statement:
// pattern search on the translation, coordinate descent on the face offsets,
// volume renormalized after every offset move.
MinimizeResult minimize_with_potential(const CrystalNorm& norm,
                                       const Potential& g, double mass,
                                       const MinimizeConfig& cfg = {});

}  // namespace wulff
