#include "wulff/io.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace wulff {

Json vec_to_json(const Vec& v, int dim) {
  Json j = Json::array();
  for (int i = 0; i < dim; ++i) j.push_back(v[i]);
  return j;
}

Vec vec_from_json(const Json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw Error(ErrorCode::InvalidInput, "vector entry of wrong length");
  Vec v(0, 0, 0);
  for (int i = 0; i < dim; ++i) v[i] = j[i].get<double>();
  return v;
}

Json norm_to_json(const CrystalNorm& norm) {
  Json j;
  j["dim"] = norm.dim();
  Json sig = Json::array();
  for (const Vec& s : norm.sigmas()) sig.push_back(vec_to_json(s, norm.dim()));
  j["sigmas"] = sig;
  if (norm.vertex_data()) {
    Json xs = Json::array();
    for (const Vec& x : *norm.vertex_data())
      xs.push_back(vec_to_json(x, norm.dim()));
    j["xs"] = xs;
  }
  return j;
}

CrystalNorm norm_from_json(const Json& j, const CrystalConfig& cfg) {
  if (!j.contains("dim") || !j.contains("sigmas"))
    throw Error(ErrorCode::InvalidInput, "norm JSON needs dim and sigmas");
  int dim = j["dim"].get<int>();
  std::vector<Vec> sigmas;
  for (const Json& s : j["sigmas"]) sigmas.push_back(vec_from_json(s, dim));
  std::optional<std::vector<Vec>> xs;
  if (j.contains("xs")) {
    xs.emplace();
    for (const Json& x : j["xs"]) xs->push_back(vec_from_json(x, dim));
  }
  return CrystalNorm(dim, std::move(sigmas), std::move(xs), cfg);
}

Json polytope_to_json(const ConvexPolytope& p) {
  Json j;
  j["dim"] = p.dim();
  Json hs = Json::array();
  for (const Halfspace& h : p.halfspaces()) {
    Json e;
    e["normal"] = vec_to_json(h.normal, p.dim());
    e["offset"] = h.offset;
    hs.push_back(e);
  }
  j["halfspaces"] = hs;
  Json vs = Json::array();
  for (const Vec& v : p.vertices()) vs.push_back(vec_to_json(v, p.dim()));
  j["vertices"] = vs;
  return j;
}

ConvexPolytope polytope_from_json(const Json& j, const GeomConfig& cfg) {
  if (!j.contains("dim") || !j.contains("halfspaces"))
    throw Error(ErrorCode::InvalidInput,
                "polytope JSON needs dim and halfspaces");
  int dim = j["dim"].get<int>();
  std::vector<Halfspace> hs;
  for (const Json& e : j["halfspaces"])
    hs.emplace_back(vec_from_json(e["normal"], dim), e["offset"].get<double>());
  ConvexPolytope p = intersect_halfspaces(hs, dim, cfg).polytope;
  if (j.contains("vertices")) {
    double scale = std::max(1.0, p.diameter());
    for (const Json& vj : j["vertices"]) {
      Vec v = vec_from_json(vj, dim);
      bool found = false;
      for (const Vec& w : p.vertices())
        if (distance(v, w) <= 1e-6 * scale) {
          found = true;
          break;
        }
      if (!found)
        throw Error(ErrorCode::InvalidInput,
                    "stored vertices disagree with the halfspace data");
    }
  }
  return p;
}

Json cell_complex_to_json(const CellComplex& e) {
  Json j;
  j["dim"] = e.dim;
  Json cells = Json::array();
  for (const ConvexPolytope& c : e.cells) cells.push_back(polytope_to_json(c));
  j["cells"] = cells;
  return j;
}

CellComplex cell_complex_from_json(const Json& j, const GeomConfig& cfg) {
  if (j.contains("cells")) {
    int dim = j["dim"].get<int>();
    std::vector<ConvexPolytope> cells;
    for (const Json& c : j["cells"]) cells.push_back(polytope_from_json(c, cfg));
    CellComplex e(dim, std::move(cells));
    e.validate_disjoint(1e-9 * std::max(1.0, e.volume()), cfg);
    return e;
  }
  // A bare polytope object is accepted as a one-cell complex.
  return CellComplex(polytope_from_json(j, cfg));
}

Json offsets_to_json(const OffsetVector& a) {
  Json j = Json::array();
  for (double v : a.a) j.push_back(v);
  return j;
}

OffsetVector offsets_from_json(const Json& j) {
  if (!j.is_array())
    throw Error(ErrorCode::InvalidInput, "offset vector must be a JSON array");
  std::vector<double> v;
  for (const Json& e : j) v.push_back(e.get<double>());
  return OffsetVector(std::move(v));
}

Json energy_report_to_json(const EnergyReport& r) {
  Json j;
  j["total"] = r.total;
  Json items = Json::array();
  for (const auto& it : r.per_facet) {
    Json e;
    e["facet"] = it.facet;
    e["tension"] = it.tension;
    e["area"] = it.area;
    e["contribution"] = it.contribution;
    items.push_back(e);
  }
  j["per_facet"] = items;
  return j;
}

Json expansion_report_to_json(const ExpansionReport& r) {
  Json j;
  j["predicted_delta_F"] = r.predicted_delta_F;
  j["predicted_delta_V"] = r.predicted_delta_V;
  Json terms = Json::array();
  for (const auto& t : r.ridge_terms) {
    Json e;
    e["i"] = t.i;
    e["j"] = t.j;
    e["b"] = t.b;
    e["coefficient"] = t.coefficient;
    terms.push_back(e);
  }
  j["ridge_terms"] = terms;
  j["geo_residuals"] = r.geo_residuals;
  return j;
}

Json projection_result_to_json(const ProjectionResult& r) {
  Json j;
  j["a"] = offsets_to_json(r.a);
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["ratio_report"] = r.ratio_report;
  j["volume_renormalized"] = r.volume_renormalized;
  return j;
}

Json stability_record_to_json(const StabilityRecord& r) {
  Json j;
  j["index"] = r.index;
  j["status"] = r.status;
  j["a"] = offsets_to_json(r.a);
  j["delta_F"] = r.delta_f;
  j["sym_diff"] = r.sym_diff;
  j["ratio"] = r.ratio;
  return j;
}

Json sweep_summary_to_json(const SweepResult& r) {
  Json j;
  j["gamma_hat"] = r.gamma_hat;
  j["included"] = r.included;
  j["excluded"] = r.excluded;
  j["skipped"] = r.skipped;
  j["samples"] = static_cast<int>(r.records.size());
  return j;
}

Json falsify_report_to_json(const FalsifyReport& r) {
  Json j;
  j["counterexample_found"] = r.counterexample_found;
  j["checked"] = r.checked;
  j["skipped_neighborhood"] = r.skipped_neighborhood;
  j["skipped_error"] = r.skipped_error;
  j["min_slack"] = r.min_slack;
  if (r.counterexample_found) {
    Json w;
    w["index"] = r.witness_index;
    w["kind"] = r.witness_kind;
    w["energy"] = r.witness_energy;
    w["sym_diff"] = r.witness_sym_diff;
    w["slack"] = r.witness_slack;
    j["counterexample"] = w;
  }
  return j;
}

Json minimize_result_to_json(const MinimizeResult& r) {
  Json j;
  j["a"] = offsets_to_json(r.a);
  j["y"] = vec_to_json(r.y, r.dim);
  j["value"] = r.value;
  j["surface_term"] = r.surface_term;
  j["potential_term"] = r.potential_term;
  j["rounds"] = r.rounds;
  j["evaluations"] = r.evaluations;
  return j;
}

Json divergence_stats_to_json(const DivergenceStats& s) {
  Json j;
  j["max_off_T"] = s.max_off_T;
  j["measure_T"] = s.measure_T;
  j["min_on_T"] = s.min_on_T;
  return j;
}

void write_off(std::ostream& os, const ConvexPolytope& p) {
  if (p.dim() != 3)
    throw Error(ErrorCode::InvalidInput, "OFF export is 3-d only");
  os << "OFF\n";
  os << p.vertices().size() << ' ' << p.facets().size() << ' '
     << p.ridges().size() << '\n';
  os.precision(17);
  for (const Vec& v : p.vertices())
    os << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const Facet& f : p.facets()) {
    os << f.vertex_indices.size();
    for (int vi : f.vertex_indices) os << ' ' << vi;
    os << '\n';
  }
}

void write_off_colored(std::ostream& os, const CorrespondenceMap& map) {
  if (map.dim != 3)
    throw Error(ErrorCode::InvalidInput, "OFF export is 3-d only");
  os << "OFF\n";
  os << 3 * map.simplices.size() << ' ' << map.simplices.size() << " 0\n";
  os.precision(17);
  for (const MapSimplex& s : map.simplices)
    for (int i = 0; i < 3; ++i)
      os << s.src[i][0] << ' ' << s.src[i][1] << ' ' << s.src[i][2] << '\n';
  int base = 0;
  for (const MapSimplex& s : map.simplices) {
    os << "3 " << base << ' ' << base + 1 << ' ' << base + 2;
    if (s.degenerate)
      os << " 220 40 40\n";
    else
      os << " 200 200 200\n";
    base += 3;
  }
}

void write_ratio_csv(std::ostream& os, const SweepResult& r, int bins) {
  os.precision(17);
  os << "index,status,ratio\n";
  double lo = 0.0, hi = 0.0;
  for (const StabilityRecord& rec : r.records) {
    os << rec.index << ',' << rec.status << ',' << rec.ratio << '\n';
    if (rec.status == "ok") hi = std::max(hi, rec.ratio);
  }
  os << "\nbin_lo,bin_hi,count\n";
  if (hi <= lo) hi = lo + 1.0;
  std::vector<int> counts(bins, 0);
  for (const StabilityRecord& rec : r.records)
    if (rec.status == "ok") {
      int b = std::min(bins - 1,
                       static_cast<int>(bins * (rec.ratio - lo) / (hi - lo)));
      if (b >= 0) ++counts[b];
    }
  for (int b = 0; b < bins; ++b)
    os << lo + (hi - lo) * b / bins << ',' << lo + (hi - lo) * (b + 1) / bins
       << ',' << counts[b] << '\n';
}

}  // namespace wulff
