#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "reeb321/orbits.hpp"
#include "reeb321_cli/app.hpp"

namespace {

using reeb::cli::json;

struct Globals {
  std::string config_path;
  std::string preset;
  double epsilon = 0.0;
  bool has_epsilon = false;
  std::string out;
  std::string format = "json";
  long long seed = -1;
};

reeb::Config make_config(const Globals& g) {
  json j = json::object();
  if (!g.config_path.empty()) {
    std::ifstream in(g.config_path);
    if (!in) throw reeb::Error(reeb::ErrorCode::ConfigError, "cannot open " + g.config_path);
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw reeb::Error(reeb::ErrorCode::ConfigError, e.what());
    }
  }
  if (!g.preset.empty()) j["preset"] = g.preset;
  if (g.has_epsilon) j["epsilon"] = g.epsilon;
  if (g.seed >= 0) j["seed"] = static_cast<std::uint64_t>(g.seed);
  return reeb::cli::config_from_json(j);
}

void emit(const Globals& g, const std::string& name, const std::string& body) {
  if (g.out.empty()) {
    std::cout << body;
    return;
  }
  std::filesystem::create_directories(g.out);
  const std::filesystem::path f = std::filesystem::path(g.out) / name;
  std::ofstream(f, std::ios::binary) << body;
  std::cerr << "wrote " << f.string() << "\n";
}

void emit_json(const Globals& g, const std::string& stem, const json& j) { emit(g, stem + ".json", j.dump(2) + "\n"); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reeb dynamics, indices, linking and leaves on a convex energy surface in R4"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON configuration file");
  app.add_option("--preset", g.preset, "validated | paper-figure")->check(CLI::IsMember({"validated", "paper-figure"}));
  app.add_option_function<double>("--epsilon", [&](double e) { g.epsilon = e; g.has_epsilon = true; }, "epsilon");
  app.add_option("--out", g.out, "output directory (stdout when omitted)");
  app.add_option("--format", g.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", g.seed, "seed for pole sampling");

  auto* validate = app.add_subcommand("validate", "check the hypotheses and write a report");
  auto* orbits = app.add_subcommand("orbits", "critical points and the three special orbits");

  auto* cz = app.add_subcommand("cz", "Conley-Zehnder indices by three methods");
  std::string cz_orbit = "all";
  int cz_iterate = 1;
  cz->add_option("--orbit", cz_orbit, "P1 | P2 | P3 | all");
  cz->add_option("--iterate", cz_iterate, "iterate k")->check(CLI::Range(1, 8));

  auto* spec = app.add_subcommand("spectrum", "spectrum of the asymptotic operator");
  std::string sp_orbit = "P2";
  int sp_nodes = 256, sp_iterate = 1;
  spec->add_option("--orbit", sp_orbit, "P1 | P2 | P3");
  spec->add_option("--nodes", sp_nodes, "even node count >= 128");
  spec->add_option("--iterate", sp_iterate, "iterate k")->check(CLI::Range(1, 8));

  auto* link = app.add_subcommand("link", "linking and self-linking numbers");
  std::string pair, self;
  auto* o_pair = link->add_option("--pair", pair, "two orbits, e.g. P1,P3");
  auto* o_self = link->add_option("--self", self, "orbit for self-linking");
  o_pair->excludes(o_self);

  auto* leaf = app.add_subcommand("leaf", "explicit leaf profile and diagnostics");
  std::string which = "plane_to_P3", emit_kind;
  leaf->add_option("--which", which, "disk_to_P2 | cyl_P2_P1 | cyl_P3_P1 | plane_to_P3");
  leaf->add_option("--emit", emit_kind, "csv | json");

  auto* atlas = app.add_subcommand("atlas", "foliation atlas (JSON and SVG)");

  auto* scan = app.add_subcommand("scan", "resonant product orbit scan");
  double bound = 0.0;
  int levels = 64;
  scan->add_option("--bound", bound, "action bound (default T3)");
  scan->add_option("--levels", levels, "number of levels");

  auto* homo = app.add_subcommand("homoclinic", "separatrix loops and homoclinic orbits");
  double horizon = 50.0;
  homo->add_option("--horizon", horizon, "Reeb-time horizon");

  auto* plot = app.add_subcommand("plot", "deterministic SVG plots");
  std::vector<std::string> targets;
  plot->add_option("--targets", targets, "levels, atlas, separatrix, orbit3d-projection")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    const reeb::Config c = make_config(g);
    const bool csv = g.format == "csv";
    if (*validate) {
      emit_json(g, "validate", reeb::cli::run_validate(c).to_json(c));
    } else if (*orbits) {
      emit_json(g, "orbits", reeb::cli::orbits_report(c));
    } else if (*cz) {
      emit_json(g, "cz", reeb::cli::cz_report(c, cz_orbit, cz_iterate));
    } else if (*spec) {
      if (csv) emit(g, "spectrum.csv", reeb::cli::spectrum_csv(c, sp_orbit, sp_nodes, sp_iterate));
      else emit_json(g, "spectrum", reeb::cli::spectrum_report(c, sp_orbit, sp_nodes, sp_iterate));
    } else if (*link) {
      if (!pair.empty()) {
        const auto comma = pair.find(',');
        if (comma == std::string::npos) throw reeb::Error(reeb::ErrorCode::ConfigError, "--pair needs A,B");
        emit_json(g, "link", reeb::cli::link_pair_report(c, pair.substr(0, comma), pair.substr(comma + 1)));
      } else if (!self.empty()) {
        emit_json(g, "link", reeb::cli::link_self_report(c, self));
      } else {
        throw reeb::Error(reeb::ErrorCode::ConfigError, "link needs --pair or --self");
      }
    } else if (*leaf) {
      const std::string kind = emit_kind.empty() ? g.format : emit_kind;
      if (kind == "csv") emit(g, "leaf_" + which + ".csv", reeb::cli::leaf_csv(c, which));
      else emit_json(g, "leaf_" + which, reeb::cli::leaf_report(c, which));
    } else if (*atlas) {
      emit_json(g, "atlas", reeb::cli::atlas_report(c));
      if (!g.out.empty()) reeb::cli::render_plots(c, {"atlas"}, g.out);
    } else if (*scan) {
      if (bound <= 0.0) bound = reeb::special_orbits_unchecked(c.params, c.tol).P3.reeb_period;
      emit_json(g, "scan", reeb::cli::scan_report(c, bound, levels));
    } else if (*homo) {
      if (csv) emit(g, "homoclinic.csv", reeb::cli::homoclinic_csv(c, horizon));
      else emit_json(g, "homoclinic", reeb::cli::homoclinic_report(c, horizon));
    } else if (*plot) {
      std::set<std::string> t(targets.begin(), targets.end());
      if (t.empty()) t = {"levels", "atlas", "separatrix", "orbit3d-projection"};
      const auto files = reeb::cli::render_plots(c, t, g.out.empty() ? std::string(".") : g.out);
      for (const auto& f : files) std::cerr << "wrote " << f.string() << "\n";
    }
  } catch (const reeb::Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", reeb::error_name(e.code()), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
