#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "reeb321/config.hpp"

namespace reeb::cli {

using json = nlohmann::json;

// Keys: preset, epsilon, params {a,b,c,d}, tolerances {name: value}, seed.
Config config_from_json(const json& j);
Config load_config(const std::filesystem::path& path);
json config_to_json(const Config& c);

enum class Status { pass, fail, not_checkable };
const char* status_name(Status s);

struct ValidationItem {
  std::string id;
  std::string title;
  Status status = Status::not_checkable;
  json evidence;
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  json to_json(const Config& c) const;
  const ValidationItem& item(const std::string& id) const;
};

ValidationReport run_validate(const Config& c);

json orbits_report(const Config& c);
json cz_report(const Config& c, const std::string& orbit, int iterate);
json spectrum_report(const Config& c, const std::string& orbit, int nodes, int iterate);
std::string spectrum_csv(const Config& c, const std::string& orbit, int nodes, int iterate);
json link_pair_report(const Config& c, const std::string& a, const std::string& b);
json link_self_report(const Config& c, const std::string& orbit);
json leaf_report(const Config& c, const std::string& which);
std::string leaf_csv(const Config& c, const std::string& which);
json atlas_report(const Config& c);
json scan_report(const Config& c, double bound, int levels);
json homoclinic_report(const Config& c, double horizon);
std::string homoclinic_csv(const Config& c, double horizon);

// Targets: levels, atlas, separatrix, orbit3d-projection. Returns the files written.
std::vector<std::filesystem::path> render_plots(const Config& c, const std::set<std::string>& targets,
                                                const std::filesystem::path& out_dir);
std::string render_svg(const Config& c, const std::string& target);

}  // namespace reeb::cli
