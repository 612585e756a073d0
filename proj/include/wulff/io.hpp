#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "wulff/correspondence.hpp"
#include "wulff/energy.hpp"
#include "wulff/harness.hpp"
#include "wulff/projection.hpp"

namespace wulff {

using Json = nlohmann::ordered_json;

Json vec_to_json(const Vec& v, int dim);
Vec vec_from_json(const Json& j, int dim);

Json norm_to_json(const CrystalNorm& norm);
CrystalNorm norm_from_json(const Json& j, const CrystalConfig& cfg = {});

Json polytope_to_json(const ConvexPolytope& p);
// Rebuilds from the stored halfspaces and verifies the stored vertices are
// reproduced; read-after-write is the identity on the value level.
ConvexPolytope polytope_from_json(const Json& j, const GeomConfig& cfg = {});

Json cell_complex_to_json(const CellComplex& e);
CellComplex cell_complex_from_json(const Json& j, const GeomConfig& cfg = {});

Json offsets_to_json(const OffsetVector& a);
OffsetVector offsets_from_json(const Json& j);

Json energy_report_to_json(const EnergyReport& r);
Json expansion_report_to_json(const ExpansionReport& r);
Json projection_result_to_json(const ProjectionResult& r);
Json stability_record_to_json(const StabilityRecord& r);
Json sweep_summary_to_json(const SweepResult& r);
Json falsify_report_to_json(const FalsifyReport& r);
Json minimize_result_to_json(const MinimizeResult& r);
Json divergence_stats_to_json(const DivergenceStats& s);

void write_off(std::ostream& os, const ConvexPolytope& p);
// Fan triangles of a correspondence map, degenerate-set simplices flagged by
// color.
void write_off_colored(std::ostream& os, const CorrespondenceMap& map);

void write_ratio_csv(std::ostream& os, const SweepResult& r, int bins = 20);

}  // namespace wulff
