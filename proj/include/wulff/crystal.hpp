#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wulff/geometry.hpp"

namespace wulff {

// Facet-plane offsets parameterizing the face-parallel family around the
// Wulff shape: plane i sits at distance (1+a_i)/|sigma_i|.
struct OffsetVector {
  std::vector<double> a;

  OffsetVector() = default;
  explicit OffsetVector(std::vector<double> v) : a(std::move(v)) {}
  static OffsetVector zero(int n) { return OffsetVector(std::vector<double>(n, 0.0)); }

  int size() const { return static_cast<int>(a.size()); }
  double operator[](int i) const { return a[i]; }
  double& operator[](int i) { return a[i]; }

  double euclidean_norm() const;
  double max_abs() const;
};

OffsetVector operator+(const OffsetVector& x, const OffsetVector& y);
OffsetVector operator-(const OffsetVector& x, const OffsetVector& y);
OffsetVector operator*(double s, const OffsetVector& x);

enum class RedundantPolicy { Reject, Strip };

struct CrystalConfig {
  GeomConfig geom;
  double facet_vanish_tol = 1e-8;  // H^{n-1} below this counts as vanished
  RedundantPolicy redundant = RedundantPolicy::Reject;
};

// The dual-norm data {sigma_i} defining the crystalline tension. The Wulff
// shape is built at construction; facet i of every member of the family is
// supported by sigma_i, in input order.
class CrystalNorm {
 public:
  CrystalNorm(int dim, std::vector<Vec> sigmas,
              std::optional<std::vector<Vec>> vertex_data = std::nullopt,
              const CrystalConfig& cfg = {});

  int dim() const { return dim_; }
  int count() const { return static_cast<int>(sigmas_.size()); }
  const std::vector<Vec>& sigmas() const { return sigmas_; }
  const std::optional<std::vector<Vec>>& vertex_data() const { return xs_; }
  const ConvexPolytope& wulff() const { return wulff_; }
  const CrystalConfig& config() const { return cfg_; }
  double sigma_len(int i) const { return sigma_len_[i]; }

  // f_*(x) = max_i sigma_i . x
  double dual(const Vec& x) const;
  // f_*^a with the plane offsets applied
  double dual_offset(const OffsetVector& a, const Vec& x) const;
  // f(nu) = support function of the Wulff shape
  double tension(const Vec& nu) const;
  // index attaining the (offset) dual max
  int cone_index(const OffsetVector& a, const Vec& x) const;

 private:
  int dim_;
  std::vector<Vec> sigmas_;
  std::vector<double> sigma_len_;
  std::optional<std::vector<Vec>> xs_;
  CrystalConfig cfg_;
  ConvexPolytope wulff_;
};

struct ConeFan {
  int dim = 3;
  OffsetVector offsets;
  std::vector<std::vector<Halfspace>> cones;  // homogeneous halfspaces per index
};

const ConvexPolytope& wulff_shape(const CrystalNorm& norm);
double dual_eval(const CrystalNorm& norm, const Vec& x);
double support_eval(const CrystalNorm& norm, const Vec& nu);

// K^a; throws VanishingFacet(i) when plane i stops supporting a facet of
// area above the configured tolerance.
ConvexPolytope offset_shape(const CrystalNorm& norm, const OffsetVector& a);

// Uniform dilation back to |K|: (1 + a'_i) = s (1 + a_i). Exact, no solve.
OffsetVector renormalize_volume(const CrystalNorm& norm, const OffsetVector& a);

ConeFan cone_fan(const CrystalNorm& norm, const OffsetVector& a);
std::vector<double> cone_volumes(const CellComplex& e, const ConeFan& fan,
                                 const GeomConfig& cfg = {});

// dist_K(x, A) = inf_{y in A} f_*(x - y), via a small LP over (y, t).
double k_distance(const CrystalNorm& norm, const Vec& x,
                  std::span<const Halfspace> a_halfspaces);
double k_distance(const CrystalNorm& norm, const Vec& x,
                  const ConvexPolytope& a);

// Every vertex of every cell of g within K-distance R of a (closed).
bool neighborhood_contains(const CrystalNorm& norm, double r,
                           const ConvexPolytope& a, const CellComplex& g);

// (1-eta) K subset E subset (1+eta) K
bool sandwich_check(const CellComplex& e, const ConvexPolytope& k, double eta,
                    const GeomConfig& cfg = {});

}  // namespace wulff
