#pragma once

// Shared generators for the suites: random crystalline norms and random
// polytopal test sets.

#include "wulff/crystal.hpp"
#include "wulff/harness.hpp"
#include "wulff/rng.hpp"

namespace testsupport {

using namespace wulff;

// A random minimal crystalline norm with plane distances in [0.7, 1.3].
// Redundant directions are stripped; resamples until bounded.
inline CrystalNorm random_norm(int dim, Rng& rng, int directions = 0) {
  if (directions == 0) directions = dim == 3 ? 10 : 7;
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Vec> sigmas;
    for (int i = 0; i < directions; ++i) {
      Vec u = rng.unit_vector(dim);
      double r = rng.uniform(0.7, 1.3);
      sigmas.push_back(u / r);
    }
    CrystalConfig cfg;
    cfg.redundant = RedundantPolicy::Strip;
    try {
      return CrystalNorm(dim, std::move(sigmas), std::nullopt, cfg);
    } catch (const Error&) {
      continue;  // unbounded or too few survivors; resample
    }
  }
  throw Error(ErrorCode::InvalidInput, "random norm generation failed");
}

inline OffsetVector random_offsets(int n, double magnitude, Rng& rng) {
  OffsetVector a = OffsetVector::zero(n);
  for (int i = 0; i < n; ++i) a[i] = magnitude * rng.uniform(-1.0, 1.0);
  return a;
}

}  // namespace testsupport
