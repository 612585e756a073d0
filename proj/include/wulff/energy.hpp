#pragma once

#include <vector>

#include "wulff/crystal.hpp"

namespace wulff {

struct EnergyReport {
  double total = 0.0;
  struct Item {
    int facet = -1;
    double tension = 0.0;  // f(nu)
    double area = 0.0;
    double contribution = 0.0;
  };
  std::vector<Item> per_facet;
};

struct ExpansionReport {
  double predicted_delta_F = 0.0;
  double predicted_delta_V = 0.0;
  struct RidgeTerm {
    int i = -1;
    int j = -1;
    double b = 0.0;            // ridge measure on the base shape
    double coefficient = 0.0;  // d_j / sin(theta) - d_i / tan(theta)
  };
  std::vector<RidgeTerm> ridge_terms;     // ordered pairs (i, j)
  std::vector<double> geo_residuals;      // base-shape identity residuals
};

EnergyReport surface_energy(const ConvexPolytope& e, const CrystalNorm& norm);

// Reduced boundary of a cell complex: internal shared facets cancel; facets
// that only partially coincide are split (area-wise) before cancelling.
EnergyReport surface_energy(const CellComplex& e, const CrystalNorm& norm,
                            const GeomConfig& cfg = {});

double wulff_deficit(const CellComplex& e, const CrystalNorm& norm,
                     const GeomConfig& cfg = {});
double wulff_deficit(const ConvexPolytope& e, const CrystalNorm& norm);

// Leading term of the face-offset expansion of the surface energy between
// K^a and K^a'; the quadratic remainder is the caller's to bound.
ExpansionReport first_order_energy_delta(const CrystalNorm& norm,
                                         const OffsetVector& a,
                                         const OffsetVector& a_prime);

double first_order_volume_delta(const CrystalNorm& norm, const OffsetVector& a,
                                const OffsetVector& a_prime);

// Residual of d_j/sin(theta) - d_i/tan(theta) = signed in-plane distance,
// one entry per ordered adjacent facet pair.
struct GeoResidual {
  int i = -1;
  int j = -1;
  double residual = 0.0;
};
std::vector<GeoResidual> geo_identity_residual(const ConvexPolytope& p);

// Energy-to-offset ratio along the volume-preserving ray through t*u.
std::vector<std::pair<double, double>> smoothness_modulus_probe(
    const CrystalNorm& norm, const OffsetVector& direction,
    const std::vector<double>& t_list);

}  // namespace wulff
