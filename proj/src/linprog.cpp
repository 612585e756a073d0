#include "wulff/linprog.hpp"

#include <cmath>
#include <limits>

namespace wulff {

namespace {

constexpr double kEps = 1e-9;

// Tableau simplex, minimization, Bland's rule. Entering columns range over
// [0, active_cols); the rhs lives at column rhs_col. Returns false on
// unboundedness.
bool run_simplex(std::vector<std::vector<double>>& T, std::vector<int>& basis,
                 int active_cols, int rhs_col) {
  int m = static_cast<int>(T.size()) - 1;  // last row is the objective
  for (;;) {
    int enter = -1;
    for (int j = 0; j < active_cols; ++j)
      if (T[m][j] < -kEps) {
        enter = j;
        break;
      }
    if (enter < 0) return true;
    int leave = -1;
    double best = std::numeric_limits<double>::max();
    for (int i = 0; i < m; ++i) {
      if (T[i][enter] > kEps) {
        double ratio = T[i][rhs_col] / T[i][enter];
        if (ratio < best - kEps ||
            (ratio < best + kEps && (leave < 0 || basis[i] < basis[leave]))) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return false;
    double piv = T[leave][enter];
    for (int j = 0; j <= rhs_col; ++j) T[leave][j] /= piv;
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = T[i][enter];
      if (f == 0.0) continue;
      for (int j = 0; j <= rhs_col; ++j) T[i][j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
}

}  // namespace

std::optional<LpSolution> solve_lp(const std::vector<double>& c,
                                   const std::vector<std::vector<double>>& G,
                                   const std::vector<double>& h) {
  int nz = static_cast<int>(c.size());
  int m = static_cast<int>(G.size());

  // Free z -> z = u - w with u, w >= 0; slack per row; artificials where the
  // normalized rhs forces them.
  int nuw = 2 * nz;
  int nslack = m;
  std::vector<int> art_of_row(m, -1);
  int nart = 0;
  for (int i = 0; i < m; ++i)
    if (h[i] < 0) art_of_row[i] = nart++;
  int ncols = nuw + nslack + nart;

  std::vector<std::vector<double>> T(m + 1, std::vector<double>(ncols + 1, 0.0));
  std::vector<int> basis(m, -1);
  for (int i = 0; i < m; ++i) {
    double sgn = h[i] < 0 ? -1.0 : 1.0;
    for (int j = 0; j < nz; ++j) {
      T[i][j] = sgn * G[i][j];
      T[i][nz + j] = -sgn * G[i][j];
    }
    T[i][nuw + i] = sgn;  // slack
    if (art_of_row[i] >= 0) T[i][nuw + nslack + art_of_row[i]] = 1.0;
    T[i][ncols] = sgn * h[i];
    basis[i] = art_of_row[i] >= 0 ? nuw + nslack + art_of_row[i] : nuw + i;
  }

  if (nart > 0) {
    // Phase 1: minimize the artificial sum.
    for (int j = 0; j <= ncols; ++j) T[m][j] = 0.0;
    for (int i = 0; i < m; ++i)
      if (art_of_row[i] >= 0)
        for (int j = 0; j <= ncols; ++j) T[m][j] -= T[i][j];
    for (int i = 0; i < m; ++i)
      if (art_of_row[i] >= 0) T[m][basis[i]] = 0.0;
    if (!run_simplex(T, basis, ncols, ncols)) return std::nullopt;
    if (T[m][ncols] < -1e-7) return std::nullopt;  // infeasible
    // Kick lingering artificials out of the basis when possible.
    for (int i = 0; i < m; ++i) {
      if (basis[i] < nuw + nslack) continue;
      int enter = -1;
      for (int j = 0; j < nuw + nslack; ++j)
        if (std::fabs(T[i][j]) > kEps) {
          enter = j;
          break;
        }
      if (enter < 0) continue;  // redundant row
      double piv = T[i][enter];
      for (int j = 0; j <= ncols; ++j) T[i][j] /= piv;
      for (int k = 0; k <= m; ++k) {
        if (k == i) continue;
        double f = T[k][enter];
        if (f == 0.0) continue;
        for (int j = 0; j <= ncols; ++j) T[k][j] -= f * T[i][j];
      }
      basis[i] = enter;
    }
  }

  // Phase 2 objective: c over u - w, expressed through the basis.
  int ncols2 = nuw + nslack;  // artificials frozen out
  for (int j = 0; j <= ncols; ++j) T[m][j] = 0.0;
  for (int j = 0; j < nz; ++j) {
    T[m][j] = c[j];
    T[m][nz + j] = -c[j];
  }
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= ncols2) continue;
    double f = T[m][basis[i]];
    if (f == 0.0) continue;
    for (int j = 0; j <= ncols; ++j) T[m][j] -= f * T[i][j];
  }
  if (!run_simplex(T, basis, ncols2, ncols)) return std::nullopt;

  LpSolution sol;
  sol.z.assign(nz, 0.0);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < nz)
      sol.z[basis[i]] += T[i][ncols];
    else if (basis[i] < nuw)
      sol.z[basis[i] - nz] -= T[i][ncols];
  }
  sol.value = 0.0;
  for (int j = 0; j < nz; ++j) sol.value += c[j] * sol.z[j];
  return sol;
}

}  // namespace wulff
