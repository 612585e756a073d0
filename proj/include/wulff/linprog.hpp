#pragma once

#include <optional>
#include <vector>

namespace wulff {

// Dense two-phase simplex for the tiny LPs of the K-distance evaluation:
//   minimize c.z  subject to  G z <= h,  z free.
// Bland's rule throughout; sizes here are a handful of variables and a few
// dozen rows, so no factorization machinery is warranted.
struct LpSolution {
  double value = 0.0;
  std::vector<double> z;
};

std::optional<LpSolution> solve_lp(const std::vector<double>& c,
                                   const std::vector<std::vector<double>>& G,
                                   const std::vector<double>& h);

}  // namespace wulff
