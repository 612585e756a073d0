#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wulff/io.hpp"
#include "wulff/presets.hpp"

namespace {

using wulff::Json;

struct CliError {
  int exit_code;
  Json diagnostic;
};

Json error_json(const wulff::Error& e) {
  Json j;
  j["error"] = e.code_name();
  j["message"] = e.what();
  if (e.index() >= 0) j["index"] = e.index();
  return j;
}

// Computational failures exit 2; malformed inputs exit 1.
int exit_code_for(const wulff::Error& e) {
  switch (e.code()) {
    case wulff::ErrorCode::VanishingFacet:
    case wulff::ErrorCode::NoConvergence:
    case wulff::ErrorCode::NotClose:
    case wulff::ErrorCode::AmbiguousMatch:
    case wulff::ErrorCode::NoDescent:
    case wulff::ErrorCode::NonManifoldBoundary:
    case wulff::ErrorCode::EmptyInterior:
      return 2;
    default:
      return 1;
  }
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw CliError{1, Json{{"error", "InvalidInput"},
                           {"message", "cannot open " + path}}};
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CliError{1, Json{{"error", "InvalidInput"},
                           {"message", std::string("bad JSON: ") + e.what()}}};
  }
  return j;
}

wulff::CrystalNorm load_norm(const std::string& spec, bool strip_redundant) {
  wulff::CrystalConfig cfg;
  cfg.redundant = strip_redundant ? wulff::RedundantPolicy::Strip
                                  : wulff::RedundantPolicy::Reject;
  if (spec.rfind("preset:", 0) == 0) {
    auto p = wulff::preset_by_name(spec.substr(7));
    if (!p)
      throw CliError{1, Json{{"error", "InvalidInput"},
                             {"message", "unknown preset " + spec.substr(7)}}};
    return *p;
  }
  return wulff::norm_from_json(load_json(spec), cfg);
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& body) {
  std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw CliError{1, Json{{"error", "InvalidInput"},
                           {"message", "cannot write " + path}}};
  out << body;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Crystalline Wulff-shape toolkit: offset families, cone-volume "
      "projection, surface-energy expansion, stability experiments"};
  app.require_subcommand(1);

  std::string norm_path, set_path, offset_path, offset2_path, out_dir;
  const char* env_out = std::getenv("WULFF_OUT_DIR");
  out_dir = env_out ? env_out : ".";
  bool strip_redundant = false;
  bool renormalize = false;
  double eta = 0.1, tol = -1.0, eps = 0.0, radius = 4.0;
  double magnitude = 0.1, mass = 0.1, shift = 2.0;
  int samples = 500, competitors = 1000, max_iter = 50;
  std::uint64_t seed = 12345;
  std::string family = "vertex-jitter", potential = "quadratic";

  app.add_option("--out-dir", out_dir, "output directory");
  app.add_flag("--strip-redundant", strip_redundant,
               "strip redundant sigma directions instead of rejecting");

  auto* cmd_build = app.add_subcommand("build", "construct the Wulff shape");
  cmd_build->add_option("--norm", norm_path)->required();

  auto* cmd_offset = app.add_subcommand("offset", "construct an offset shape");
  cmd_offset->add_option("--norm", norm_path)->required();
  cmd_offset->add_option("--offset", offset_path)->required();
  cmd_offset->add_flag("--renormalize", renormalize,
                       "dilate back to the Wulff volume first");

  auto* cmd_energy = app.add_subcommand("energy", "surface energy of a set");
  cmd_energy->add_option("--norm", norm_path)->required();
  cmd_energy->add_option("--set", set_path);
  cmd_energy->add_option("--offset", offset_path);

  auto* cmd_expand = app.add_subcommand(
      "expand", "first-order energy/volume deltas between offsets");
  cmd_expand->add_option("--norm", norm_path)->required();
  cmd_expand->add_option("--offset", offset_path)->required();
  cmd_expand->add_option("--offset2", offset2_path)->required();

  auto* cmd_project =
      app.add_subcommand("project", "cone-volume projection onto the family");
  cmd_project->add_option("--norm", norm_path)->required();
  cmd_project->add_option("--set", set_path)->required();
  cmd_project->add_option("--eta", eta);
  cmd_project->add_option("--tol", tol);
  cmd_project->add_option("--max-iter", max_iter);

  auto* cmd_corr = app.add_subcommand(
      "correspondence", "boundary map diagnostics for an offset shape");
  cmd_corr->add_option("--norm", norm_path)->required();
  cmd_corr->add_option("--offset", offset_path)->required();
  cmd_corr->add_option("--samples", samples);

  auto* cmd_sweep =
      app.add_subcommand("sweep", "stability ratios over a perturbation family");
  cmd_sweep->add_option("--norm", norm_path)->required();
  cmd_sweep->add_option("--family", family,
                        "facet-offset | vertex-jitter | corner-truncation | "
                        "slab-cut");
  cmd_sweep->add_option("--magnitude", magnitude);
  cmd_sweep->add_option("--samples", samples);
  cmd_sweep->add_option("--seed", seed);
  cmd_sweep->add_option("--eta", eta);

  auto* cmd_falsify = app.add_subcommand(
      "falsify", "search for epsilon-minimality counterexamples");
  cmd_falsify->add_option("--norm", norm_path)->required();
  cmd_falsify->add_option("--set", set_path);
  cmd_falsify->add_option("--offset", offset_path,
                          "use the offset shape as the tested set");
  cmd_falsify->add_option("--eps", eps);
  cmd_falsify->add_option("--R", radius);
  cmd_falsify->add_option("--competitors", competitors);
  cmd_falsify->add_option("--seed", seed);
  cmd_falsify->add_option("--magnitude", magnitude);

  auto* cmd_min = app.add_subcommand(
      "minimize", "surface plus potential energy over the offset family");
  cmd_min->add_option("--norm", norm_path)->required();
  cmd_min->add_option("--potential", potential,
                      "quadratic | euclidean | gravity");
  cmd_min->add_option("--h", shift, "shift of the gravity potential");
  cmd_min->add_option("--mass", mass);

  CLI11_PARSE(app, argc, argv);

  try {
    wulff::CrystalNorm norm = load_norm(norm_path, strip_redundant);

    auto load_set = [&]() -> wulff::CellComplex {
      if (!offset_path.empty() && set_path.empty()) {
        wulff::OffsetVector a =
            wulff::offsets_from_json(load_json(offset_path));
        return wulff::CellComplex(wulff::offset_shape(norm, a));
      }
      if (set_path.rfind("preset:", 0) == 0) {
        auto p = wulff::preset_by_name(set_path.substr(7));
        if (!p)
          throw CliError{1, Json{{"error", "InvalidInput"},
                                 {"message", "unknown preset"}}};
        return wulff::CellComplex(p->wulff());
      }
      return wulff::cell_complex_from_json(load_json(set_path));
    };

    if (*cmd_build) {
      const wulff::ConvexPolytope& k = norm.wulff();
      write_file(out_dir, "wulff.json", dump(wulff::polytope_to_json(k)));
      if (norm.dim() == 3) {
        std::ostringstream os;
        wulff::write_off(os, k);
        write_file(out_dir, "wulff.off", os.str());
      }
      Json j;
      j["volume"] = k.volume();
      j["vertices"] = k.vertices().size();
      j["facets"] = k.facets().size();
      j["energy"] = wulff::surface_energy(k, norm).total;
      std::cout << dump(j);
    } else if (*cmd_offset) {
      wulff::OffsetVector a = wulff::offsets_from_json(load_json(offset_path));
      if (renormalize) a = wulff::renormalize_volume(norm, a);
      wulff::ConvexPolytope ka = wulff::offset_shape(norm, a);
      write_file(out_dir, "offset.json", dump(wulff::polytope_to_json(ka)));
      if (norm.dim() == 3) {
        std::ostringstream os;
        wulff::write_off(os, ka);
        write_file(out_dir, "offset.off", os.str());
      }
      Json j;
      j["volume"] = ka.volume();
      j["a"] = wulff::offsets_to_json(a);
      std::cout << dump(j);
    } else if (*cmd_energy) {
      wulff::CellComplex e = load_set();
      wulff::EnergyReport rep = wulff::surface_energy(e, norm);
      write_file(out_dir, "energy.json", dump(wulff::energy_report_to_json(rep)));
      Json j;
      j["total"] = rep.total;
      j["wulff_deficit"] = wulff::wulff_deficit(e, norm);
      std::cout << dump(j);
    } else if (*cmd_expand) {
      wulff::OffsetVector a = wulff::offsets_from_json(load_json(offset_path));
      wulff::OffsetVector a2 =
          wulff::offsets_from_json(load_json(offset2_path));
      wulff::ExpansionReport rep = wulff::first_order_energy_delta(norm, a, a2);
      write_file(out_dir, "expansion.json",
                 dump(wulff::expansion_report_to_json(rep)));
      std::cout << dump(wulff::expansion_report_to_json(rep));
    } else if (*cmd_project) {
      wulff::ProjectionProblem prob;
      prob.norm = &norm;
      prob.set = load_set();
      prob.eta = eta;
      prob.tol = tol;
      prob.max_iter = max_iter;
      wulff::ProjectionResult res = wulff::project_to_family(prob);
      write_file(out_dir, "projection.json",
                 dump(wulff::projection_result_to_json(res)));
      std::cout << dump(wulff::projection_result_to_json(res));
    } else if (*cmd_corr) {
      wulff::OffsetVector a = wulff::offsets_from_json(load_json(offset_path));
      wulff::CorrespondenceMap map = wulff::build_correspondence(norm, a);
      wulff::DivergenceStats st = wulff::divergence_stats(map);
      Json j = wulff::divergence_stats_to_json(st);
      j["distance_ratio"] =
          wulff::distance_comparison(map, norm, samples, seed);
      j["simplices"] = map.simplices.size();
      write_file(out_dir, "correspondence.json", dump(j));
      if (norm.dim() == 3) {
        std::ostringstream os;
        wulff::write_off_colored(os, map);
        write_file(out_dir, "correspondence.off", os.str());
      }
      std::cout << dump(j);
    } else if (*cmd_sweep) {
      auto kind = wulff::perturbation_kind_from_name(family);
      if (!kind)
        throw CliError{1, Json{{"error", "InvalidInput"},
                               {"message", "unknown family " + family}}};
      wulff::PerturbationFamily fam;
      fam.kind = *kind;
      fam.magnitude = magnitude;
      fam.seed = seed;
      wulff::SweepConfig scfg;
      if (cmd_sweep->count("--eta")) scfg.eta = eta;
      wulff::SweepResult res = wulff::stability_sweep(norm, fam, samples, scfg);
      std::ostringstream records;
      for (const auto& rec : res.records)
        records << wulff::stability_record_to_json(rec).dump() << '\n';
      write_file(out_dir, "sweep_records.jsonl", records.str());
      Json summary = wulff::sweep_summary_to_json(res);
      summary["family"] = family;
      summary["magnitude"] = magnitude;
      summary["seed"] = seed;
      write_file(out_dir, "sweep_summary.json", dump(summary));
      std::ostringstream csv;
      wulff::write_ratio_csv(csv, res);
      write_file(out_dir, "sweep_hist.csv", csv.str());
      std::cout << dump(summary);
    } else if (*cmd_falsify) {
      wulff::CellComplex s_set = load_set();
      if (s_set.cells.size() != 1)
        throw CliError{1, Json{{"error", "InvalidInput"},
                               {"message", "tested set must be convex"}}};
      wulff::FalsifyReport rep = wulff::epsilon_minimality_falsifier(
          norm, s_set.cells[0], eps, radius, competitors, seed, magnitude);
      Json j = wulff::falsify_report_to_json(rep);
      j["eps"] = eps;
      j["R"] = radius;
      j["seed"] = seed;
      write_file(out_dir, "falsify.json", dump(j));
      std::cout << dump(j);
    } else if (*cmd_min) {
      wulff::Potential g;
      if (potential == "quadratic")
        g = wulff::Potential::quadratic();
      else if (potential == "euclidean")
        g = wulff::Potential::euclidean();
      else if (potential == "gravity")
        g = wulff::Potential::shifted_linear(shift, norm.dim());
      else
        throw CliError{1, Json{{"error", "InvalidInput"},
                               {"message", "unknown potential " + potential}}};
      wulff::MinimizeResult res =
          wulff::minimize_with_potential(norm, g, mass);
      write_file(out_dir, "minimize.json",
                 dump(wulff::minimize_result_to_json(res)));
      std::cout << dump(wulff::minimize_result_to_json(res));
    }
  } catch (const CliError& e) {
    std::cerr << dump(e.diagnostic);
    return e.exit_code;
  } catch (const wulff::Error& e) {
    std::cerr << dump(error_json(e));
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << dump(Json{{"error", "InvalidInput"}, {"message", e.what()}});
    return 1;
  }
  return 0;
}
