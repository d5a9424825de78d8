#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "reeb321_cli/app.hpp"
#include "support.hpp"

using namespace reeb;
using namespace reeb::cli;

TEST_CASE("config parsing and round trip") {
  const json j = {{"preset", "validated"},
                  {"epsilon", 0.4},
                  {"params", {{"c", 1.25}}},
                  {"tolerances", {{"integrator", 1e-11}, {"curve_samples", 512}}},
                  {"seed", 17}};
  const Config c = config_from_json(j);
  CHECK(c.params.epsilon == 0.4);
  CHECK(c.params.c == 1.25);
  CHECK(c.params.d == -0.125);
  CHECK(c.tol.integrator == 1e-11);
  CHECK(c.tol.curve_samples == 512);
  CHECK(c.seed == 17);
  const Config back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));

  CHECK_THROWS_CODE(config_from_json({{"tolerances", {{"nonsense", 1.0}}}}), ErrorCode::ConfigError);
  CHECK_THROWS_CODE(config_from_json({{"preset", "other"}}), ErrorCode::ConfigError);
  CHECK_THROWS_CODE(config_from_json({{"epsilon", "half"}}), ErrorCode::ConfigError);
  CHECK_THROWS_CODE(load_config("/nonexistent/config.json"), ErrorCode::ConfigError);
  CHECK(config_from_json({{"preset", "paper-figure"}}).params.d == 0.125);
}

TEST_CASE("validate under the validated preset") {
  Config c;
  c.params = preset("validated");
  const ValidationReport r = run_validate(c);
  std::map<std::string, int> seen;
  for (const ValidationItem& it : r.items) ++seen[it.id];
  for (const char* id : {"chain", "index_pattern", "unlink", "scan_empty", "leaf_existence", "sphere_obstruction"})
    CHECK(seen[id] == 1);
  CHECK(seen.size() == r.items.size());
  for (const ValidationItem& it : r.items) {
    CAPTURE(it.id);
    if (it.id == "sphere_obstruction")
      CHECK(it.status == Status::not_checkable);
    else
      CHECK(it.status == Status::pass);
  }
  CHECK_THROWS(r.item("nope"));
  CHECK(r.to_json(c).dump() == run_validate(c).to_json(c).dump());
}

TEST_CASE("validate under the paper-figure preset") {
  Config c;
  c.params = preset("paper-figure");
  const ValidationReport r = run_validate(c);
  const ValidationItem& ip = r.item("index_pattern");
  CHECK(ip.status == Status::fail);
  const std::string ev = ip.evidence.dump();
  CHECK(ev.find("elliptic") != std::string::npos);
}

TEST_CASE("reports") {
  Config c;
  c.params = preset("validated");
  const json o = orbits_report(c);
  CHECK(o.dump().find("P3") != std::string::npos);
  const json cz = cz_report(c, "P2", 2);
  CHECK(cz.dump().find("4") != std::string::npos);
  CHECK_THROWS_CODE(cz_report(c, "P4", 1), ErrorCode::ConfigError);
  const json lp = link_pair_report(c, "P1", "P3");
  CHECK(lp.at("rounded").get<int>() == 0);
  const json ls = link_self_report(c, "P2");
  CHECK(ls.at("rounded").get<int>() == -1);
  const std::string csv = leaf_csv(c, "plane_to_P3");
  CHECK(csv.substr(0, 1) == "s");
  const json sc = scan_report(c, 3.6651914292, 8);
  CHECK(sc.dump().find("candidates") != std::string::npos);
}

TEST_CASE("plots are deterministic") {
  Config c;
  c.params = preset("validated");
  for (const char* t : {"levels", "atlas", "separatrix", "orbit3d-projection"}) {
    CAPTURE(t);
    const std::string a = render_svg(c, t);
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a == render_svg(c, t));
  }
  const auto dir = std::filesystem::temp_directory_path() / "reeb321_plot_test";
  std::filesystem::remove_all(dir);
  const auto files = render_plots(c, {"levels", "atlas"}, dir);
  CHECK(files.size() == 2);
  for (const auto& f : files) CHECK(std::filesystem::file_size(f) > 100);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_CODE(render_svg(c, "histogram"), ErrorCode::ConfigError);
}
