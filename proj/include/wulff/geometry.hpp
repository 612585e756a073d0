#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wulff/error.hpp"
#include "wulff/vec.hpp"

namespace wulff {

// Tolerances for the floating-point kernel. eps_geom drives vertex dedup,
// coplanarity and activity tests; no exact arithmetic anywhere.
struct GeomConfig {
  double eps_geom = 1e-9;
  double box_halfwidth = 1e3;   // seed box for halfspace intersection
  double degenerate_area = 0.0; // 0 -> derived from eps_geom and scale
};

// {x : normal.x <= offset}; canonicalized to unit normal on construction.
struct Halfspace {
  Vec normal;
  double offset = 0.0;

  Halfspace() = default;
  Halfspace(const Vec& n, double c);

  double eval(const Vec& p) const { return dot(normal, p) - offset; }
};

struct Facet {
  int halfspace_index = -1;
  std::vector<int> vertex_indices;  // ordered; outward cycle in 3-d
  Vec normal;                       // unit outward
  double area = 0.0;                // H^{n-1}: length in 2-d
  Vec barycenter;
  double plane_offset = 0.0;        // signed distance origin -> facet plane
};

struct Ridge {
  int facet_i = -1;
  int facet_j = -1;
  double measure = 0.0;      // H^{n-2}: length in 3-d, 1 per ridge in 2-d
  double dihedral = 0.0;     // theta in (0, pi), cos(theta) = nu_i . nu_j
  double signed_dist = 0.0;  // in-plane signed distance, seen from facet_i
};

struct Simplex {
  int dim = 3;
  std::array<Vec, 4> pts;  // dim+1 entries used
  double volume() const;
  Vec centroid() const;
  double longest_edge(int* a, int* b) const;
};

class ConvexPolytope {
 public:
  int dim() const { return dim_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<Ridge>& ridges() const { return ridges_; }

  double volume() const { return volume_; }
  Vec centroid() const { return centroid_; }
  double diameter() const;

  bool contains(const Vec& p, double tol) const;

  ConvexPolytope translated(const Vec& y) const;
  ConvexPolytope scaled(double s) const;  // about the origin, s > 0

  // Signed in-plane distance of facet fi's plane-projected origin from the
  // ridge line shared with facet fj; positive on the facet's side.
  double ridge_signed_distance(int fi, int fj) const;

  ConvexPolytope() = default;  // invalid until populated by a builder

 private:
  friend class PolytopeBuilder;
  void derive(const GeomConfig& cfg);  // areas, ridges, volume, checks

  int dim_ = 3;
  std::vector<Halfspace> halfspaces_;
  std::vector<Vec> vertices_;
  std::vector<Facet> facets_;
  std::vector<Ridge> ridges_;
  double volume_ = 0.0;
  Vec centroid_;
};

struct IntersectionResult {
  ConvexPolytope polytope;
  std::vector<int> dropped;         // input halfspaces without a facet
  std::vector<int> facet_of_input;  // input index -> facet index, -1 if dropped
};

// Incremental clipping of a large seed box; throws Unbounded / EmptyInterior.
IntersectionResult intersect_halfspaces(std::span<const Halfspace> hs, int dim,
                                        const GeomConfig& cfg = {});

// Empty is a value, not an error.
std::optional<ConvexPolytope> clip(const ConvexPolytope& p, const Halfspace& h,
                                   const GeomConfig& cfg = {});
std::optional<ConvexPolytope> clip(const ConvexPolytope& p,
                                   std::span<const Halfspace> hs,
                                   const GeomConfig& cfg = {});
std::optional<ConvexPolytope> intersect(const ConvexPolytope& p,
                                        const ConvexPolytope& q,
                                        const GeomConfig& cfg = {});

double intersection_volume(const ConvexPolytope& p, const ConvexPolytope& q,
                           const GeomConfig& cfg = {});

// Volume of p clipped by extra halfspaces, skipping the full facet/ridge
// rebuild. Hot path for cone-volume accounting.
double clipped_volume(const ConvexPolytope& p, std::span<const Halfspace> hs,
                      const GeomConfig& cfg = {});

std::vector<Simplex> simplex_decompose(const ConvexPolytope& p);

// Finite union of convex cells with pairwise disjoint interiors.
struct CellComplex {
  int dim = 3;
  std::vector<ConvexPolytope> cells;

  CellComplex() = default;
  explicit CellComplex(ConvexPolytope cell);
  CellComplex(int d, std::vector<ConvexPolytope> cs);

  double volume() const;
  Vec centroid() const;
  CellComplex translated(const Vec& y) const;
  CellComplex scaled(double s) const;

  // |P ∩ Q| <= tol for all cell pairs; throws InvalidInput on overlap.
  void validate_disjoint(double tol, const GeomConfig& cfg = {}) const;
};

double symmetric_difference_volume(const CellComplex& e,
                                   const ConvexPolytope& q,
                                   const GeomConfig& cfg = {});

// Convex hull of a point set via supporting-plane enumeration. Cubic-ish in
// the input size; meant for the small jittered-vertex sets of the harness.
ConvexPolytope convex_hull(std::span<const Vec> points, int dim,
                           const GeomConfig& cfg = {});

}  // namespace wulff
