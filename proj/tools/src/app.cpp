#include "reeb321_cli/app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "reeb321/index.hpp"
#include "reeb321/knots.hpp"
#include "reeb321/leaves.hpp"
#include "reeb321/orbits.hpp"
#include "reeb321/spectrum.hpp"

namespace reeb::cli {

namespace {

struct TolEntry {
  const char* name;
  double Tolerances::*d = nullptr;
  int Tolerances::*i = nullptr;
  long Tolerances::*l = nullptr;
};

#define TD(n) TolEntry{#n, &Tolerances::n, nullptr, nullptr}
#define TI(n) TolEntry{#n, nullptr, &Tolerances::n, nullptr}
const TolEntry kTolTable[] = {
    TD(surface), TD(path), TD(frame), TD(capture_radius), TI(max_newton), TD(integrator), TD(min_step),
    TolEntry{"max_steps", nullptr, nullptr, &Tolerances::max_steps}, TD(orbit), TD(crit), TD(merge), TD(level),
    TD(resonance), TI(max_m2), TD(launch_offset), TD(no_return_horizon), TD(claim), TD(degen), TD(eig),
    TD(lie_step), TI(n_directions), TD(gap), TD(fd), TD(jacobi), TD(asymmetry), TI(curve_samples), TD(sep),
    TD(pole), TD(rounding_guard), TD(pushoff_offset), TD(asym), TD(endpoint_stop), TD(s_span), TD(pairing),
    TD(wind_floor), TD(root)};
#undef TD
#undef TI

OrbitLabel parse_orbit(const std::string& s) {
  if (s == "P1") return OrbitLabel::P1;
  if (s == "P2") return OrbitLabel::P2;
  if (s == "P3") return OrbitLabel::P3;
  throw Error(ErrorCode::ConfigError, "unknown orbit '" + s + "' (P1, P2 or P3)");
}

json vec(const Vec2& v) { return json::array({v[0], v[1]}); }

json error_json(const Error& e) { return {{"error", error_name(e.code())}, {"message", e.what()}}; }

json interval_json(const WindingInterval& w) {
  return {{"lo", w.lo}, {"hi", w.hi}, {"contains_integer", w.contains_integer},
          {"degenerate_margin", w.degenerate_margin}};
}

struct OrbitIndex {
  int correction = 0;
  WindingInterval interval;
  json methods = json::object();
  std::map<std::string, int> mu;
};

int spectral_mu(const HamiltonianParams& p, const ReebOrbit& o, const SymplecticPath& path, int corr, int k,
                int nodes, const Tolerances& tol, SpectrumReport* out = nullptr) {
  (void)p;
  (void)o;
  const SymplecticPath it = k == 1 ? path : iterate_path_resampled(path, k);
  const SpectrumReport r = discretize_and_solve(build_S(it, tol), nodes, tol);
  if (out) *out = r;
  return generalized_cz(r, k * corr).mu_global;
}

OrbitIndex orbit_index(const HamiltonianParams& p, const SpecialOrbits& so, OrbitLabel L, int k, int nodes,
                       const Tolerances& tol) {
  OrbitIndex oi;
  const ReebOrbit& o = so.orbit(L);
  oi.correction = special_frame_correction(p, o, 256, tol);
  const SymplecticPath num = restrict_linearized_to_xi(p, o, FrameKind::rho_orbit_frame, nodes, tol);
  oi.interval = winding_interval_unchecked(k == 1 ? num : iterate_path(num, k), tol.n_directions);
  auto attempt = [&](const char* name, auto&& fn) {
    try {
      const int mu = fn();
      oi.mu[name] = mu;
      oi.methods[name] = {{"mu", mu}};
    } catch (const Error& e) {
      oi.methods[name] = error_json(e);
    }
  };
  attempt("winding_interval", [&] { return iterate_index(num, k, oi.correction, tol).mu_global; });
  attempt("analytic_oracle", [&] {
    const SymplecticPath ana = analytic_monodromy_oracle(p, L, nodes);
    return iterate_index(ana, k, oi.correction, tol).mu_global;
  });
  attempt("spectral", [&] { return spectral_mu(p, o, num, oi.correction, k, nodes, tol); });
  return oi;
}

json critical_json(const CriticalPoint& c) {
  return {{"location", vec(c.location)}, {"h2", c.h2_value}, {"signature", signature_name(c.signature)},
          {"flow_type", flow_type_name(c.flow_type)}, {"k1", c.k1}, {"k2", c.k2}, {"on_axis", c.on_axis}};
}

json orbit_json(const ReebOrbit& o) {
  return {{"label", orbit_label_name(o.label)}, {"r", o.r}, {"z2", vec(o.z2_datum)}, {"period", o.reeb_period},
          {"action", orbit_action(special_orbit_loop(o, 1024))}};
}

json chain_json(const SpecialOrbits& so) {
  json a = json::array();
  for (const InequalityCheck& c : so.chain) a.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  return a;
}

json diagnostics_json(const LeafDiagnostics& d) {
  json j = {{"cr_residual_max", d.cr_residual_max},
            {"hofer_energy", d.hofer_energy},
            {"mass_neg_end", d.mass_neg_end},
            {"dlambda_area", d.dlambda_area},
            {"wind_infty_pos", d.wind_infty_pos},
            {"section_pairing_sign", d.section_pairing_sign},
            {"section_verdict", section_verdict_name(d.section_verdict)},
            {"transversality_min", d.transversality_min},
            {"level_error", d.level_error},
            {"hausdorff_pos", d.hausdorff_pos},
            {"g_monotone", d.g_monotone},
            {"a_increasing", d.a_increasing}};
  if (d.wind_infty_neg) j["wind_infty_neg"] = *d.wind_infty_neg;
  if (d.hausdorff_neg) j["hausdorff_neg"] = *d.hausdorff_neg;
  return j;
}

json profile_json(const LeafProfile& pr) {
  const IntervalData& iv = pr.interval;
  return {{"interval", leaf_interval_name(iv.which)},
          {"range", json::array({iv.lo, iv.hi})},
          {"role", iv.role},
          {"neg_end", end_label_name(iv.neg)},
          {"pos_end", end_label_name(iv.pos)},
          {"nodes", pr.size()},
          {"s_range", json::array({pr.s.front(), pr.s.back()})},
          {"neg_gap", pr.neg_gap},
          {"pos_gap", pr.pos_gap},
          {"ds", pr.ds}};
}

constexpr double kLeafDs = 1.0 / 64.0;
constexpr int kLeafNt = 128;

}  // namespace

Config config_from_json(const json& j) {
  Config c;
  try {
    const std::string pre = j.value("preset", std::string("validated"));
    c.params = preset(pre, j.value("epsilon", 0.5));
    if (j.contains("params")) {
      const json& p = j.at("params");
      c.params.a = p.value("a", c.params.a);
      c.params.b = p.value("b", c.params.b);
      c.params.c = p.value("c", c.params.c);
      c.params.d = p.value("d", c.params.d);
    }
    if (j.contains("tolerances")) {
      for (const auto& [key, val] : j.at("tolerances").items()) {
        const TolEntry* hit = nullptr;
        for (const TolEntry& e : kTolTable)
          if (key == e.name) hit = &e;
        if (!hit) throw Error(ErrorCode::ConfigError, "unknown tolerance '" + key + "'");
        if (hit->d) c.tol.*(hit->d) = val.get<double>();
        if (hit->i) c.tol.*(hit->i) = val.get<int>();
        if (hit->l) c.tol.*(hit->l) = val.get<long>();
      }
    }
    c.seed = j.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return config_from_json(j);
}

json config_to_json(const Config& c) {
  json t = json::object();
  for (const TolEntry& e : kTolTable) {
    if (e.d) t[e.name] = c.tol.*(e.d);
    if (e.i) t[e.name] = c.tol.*(e.i);
    if (e.l) t[e.name] = c.tol.*(e.l);
  }
  return {{"preset", c.params.preset_name},
          {"epsilon", c.params.epsilon},
          {"params", {{"a", c.params.a}, {"b", c.params.b}, {"c", c.params.c}, {"d", c.params.d}}},
          {"tolerances", t},
          {"seed", c.seed}};
}

const char* status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::not_checkable: return "not-checkable";
  }
  return "?";
}

json ValidationReport::to_json(const Config& c) const {
  json items_j = json::array();
  for (const ValidationItem& it : items)
    items_j.push_back({{"id", it.id}, {"title", it.title}, {"status", status_name(it.status)}, {"evidence", it.evidence}});
  return {{"config", config_to_json(c)}, {"items", items_j}};
}

const ValidationItem& ValidationReport::item(const std::string& id) const {
  for (const ValidationItem& it : items)
    if (it.id == id) return it;
  throw Error(ErrorCode::PreconditionViolation, "no validation item '" + id + "'");
}

ValidationReport run_validate(const Config& c) {
  const HamiltonianParams& p = c.params;
  const Tolerances& tol = c.tol;
  ValidationReport rep;

  const CriticalPointReport crit = find_critical_points(p, tol);
  json crit_j = json::array();
  for (const CriticalPoint& cp : crit.points) crit_j.push_back(critical_json(cp));

  std::optional<SpecialOrbits> so;
  {
    ValidationItem it{"chain", "period chain T1 < T2 < T3 < 2 T1", Status::fail, json::object()};
    it.evidence["critical_points"] = crit_j;
    it.evidence["structure_ok"] = crit.structure_ok;
    if (!crit.structure_ok) it.evidence["structure_mismatch"] = crit.mismatch;
    try {
      so = special_orbits_unchecked(p, tol);
      it.evidence["periods"] = {so->P1.reeb_period, so->P2.reeb_period, so->P3.reeb_period};
      it.evidence["inequalities"] = chain_json(*so);
      it.status = so->chain_ok ? Status::pass : Status::fail;
    } catch (const Error& e) {
      it.evidence["error"] = error_json(e);
    }
    rep.items.push_back(std::move(it));
  }

  {
    ValidationItem it{"index_pattern", "Conley-Zehnder indices (1, 2, 3) with hyperbolic P2", Status::fail,
                      json::object()};
    if (so) {
      bool ok = so->pattern_ok;
      const int expect[3] = {1, 2, 3};
      int idx = 0;
      for (OrbitLabel L : {OrbitLabel::P1, OrbitLabel::P2, OrbitLabel::P3}) {
        const CriticalPoint& cp = so->point(L);
        json o = {{"k1", cp.k1}, {"k2", cp.k2}, {"k1k2", cp.k1 * cp.k2}, {"flow_type", flow_type_name(cp.flow_type)}};
        try {
          const OrbitIndex oi = orbit_index(p, *so, L, 1, 128, tol);
          o["frame_correction"] = oi.correction;
          o["winding_interval"] = interval_json(oi.interval);
          o["methods"] = oi.methods;
          if (oi.mu.size() != 3) ok = false;
          for (const auto& [name, mu] : oi.mu)
            if (mu != expect[idx]) ok = false;
        } catch (const Error& e) {
          o["error"] = error_json(e);
          ok = false;
        }
        it.evidence[orbit_label_name(L)] = o;
        ++idx;
      }
      it.evidence["k_sign_pattern_ok"] = so->pattern_ok;
      it.evidence["origin_flow_type"] = flow_type_name(so->c2.flow_type);
      it.status = ok ? Status::pass : Status::fail;
    } else {
      it.evidence["error"] = "special orbits unavailable";
    }
    rep.items.push_back(std::move(it));
  }

  {
    ValidationItem it{"unlink", "pairwise linking numbers vanish", Status::fail, json::object()};
    if (so) {
      bool ok = true;
      const std::pair<OrbitLabel, OrbitLabel> pairs[3] = {
          {OrbitLabel::P1, OrbitLabel::P2}, {OrbitLabel::P1, OrbitLabel::P3}, {OrbitLabel::P2, OrbitLabel::P3}};
      for (const auto& [a, b] : pairs) {
        const std::string key = std::string(orbit_label_name(a)) + "-" + orbit_label_name(b);
        try {
          const LinkingResult r = linking_number(orbit_curve(so->orbit(a), tol.curve_samples),
                                                 orbit_curve(so->orbit(b), tol.curve_samples), tol, c.seed);
          it.evidence[key] = {{"raw", r.raw}, {"lk", r.lk}, {"guard", r.guard}};
          if (r.lk != 0) ok = false;
        } catch (const Error& e) {
          it.evidence[key] = error_json(e);
          ok = false;
        }
      }
      it.status = ok ? Status::pass : Status::fail;
    }
    rep.items.push_back(std::move(it));
  }

  {
    ValidationItem it{"scan_empty", "no resonant product orbit with action <= T3", Status::fail, json::object()};
    if (so) {
      try {
        const double bound = so->P3.reeb_period;
        const ScanResult sr = resonant_orbit_scan(p, bound, default_level_grid(p, 64), tol);
        double min_tau = INFINITY, min_prod = INFINITY, min_action = INFINITY;
        bool claims = true;
        for (const ScanLoop& l : sr.loops) {
          min_tau = std::min(min_tau, l.tau);
          min_prod = std::min(min_prod, l.claim.product);
          min_action = std::min(min_action, l.best_action);
          claims = claims && l.claim.pass;
        }
        it.evidence = {{"bound", bound},          {"levels", 64},
                       {"loops", sr.loops.size()}, {"candidates", sr.candidates.size()},
                       {"excluded", sr.excluded.size()}, {"min_tau", min_tau},
                       {"min_claim_product", min_prod}, {"min_action", min_action},
                       {"claim_all_pass", claims}};
        it.status = sr.candidates.empty() && claims && !sr.loops.empty() ? Status::pass : Status::fail;
      } catch (const Error& e) {
        it.evidence["error"] = error_json(e);
      }
    }
    rep.items.push_back(std::move(it));
  }

  {
    ValidationItem it{"leaf_existence", "explicit plane to P3 and cylinder P3 to P1", Status::fail, json::object()};
    bool ok = so.has_value();
    for (LeafInterval w : {LeafInterval::plane_to_P3, LeafInterval::cyl_P3_P1}) {
      if (!so) break;
      try {
        const LeafMap L = assemble_leaf(p, integrate_profile(p, w, tol, kLeafDs), kLeafNt);
        const LeafDiagnostics d = leaf_diagnostics(p, L, tol);
        it.evidence[leaf_interval_name(w)] = {{"profile", profile_json(L.profile)}, {"diagnostics", diagnostics_json(d)}};
        const double T_neg = L.profile.interval.neg == EndLabel::removable ? 0.0 : so->P1.reeb_period;
        ok = ok && d.g_monotone && d.a_increasing && std::abs(d.hofer_energy - so->P3.reeb_period) <= 1e-6 &&
             std::abs(d.mass_neg_end - T_neg) <= 1e-6 && d.section_verdict == SectionVerdict::strong;
      } catch (const Error& e) {
        it.evidence[leaf_interval_name(w)] = error_json(e);
        ok = false;
      }
    }
    it.status = ok ? Status::pass : Status::fail;
    rep.items.push_back(std::move(it));
  }

  {
    ValidationItem it{"sphere_obstruction", "no strongly transverse sphere through P2", Status::not_checkable,
                      json::object()};
    it.evidence["reason"] = "nonexistence statement; not decidable numerically";
    it.evidence["pointer"] = "quadrant classification of winding-1 sections on P2";
    if (so) {
      try {
        for (const auto& [name, phi0, amp] : {std::tuple{"negative_test_section", 0.0, 0.3},
                                              std::tuple{"positive_test_section", kPi / 2.0, 0.03}}) {
          const QuadrantReport q =
              eigenframe_and_quadrants(p, so->P2, rho_test_section(p, so->P2, phi0, amp, tol.frame), 64, tol);
          std::map<std::string, int> count;
          for (Quadrant qq : q.quadrants) ++count[quadrant_name(qq)];
          it.evidence[name] = {{"pairing_sign", pairing_sign_name(q.pairing_sign)}, {"quadrants", count}};
        }
      } catch (const Error& e) {
        it.evidence["quadrant_error"] = error_json(e);
      }
    }
    rep.items.push_back(std::move(it));
  }
  return rep;
}

json orbits_report(const Config& c) {
  const HamiltonianParams& p = c.params;
  const CriticalPointReport crit = find_critical_points(p, c.tol);
  json j;
  j["config"] = config_to_json(c);
  j["critical_points"] = json::array();
  for (const CriticalPoint& cp : crit.points) j["critical_points"].push_back(critical_json(cp));
  j["structure_ok"] = crit.structure_ok;
  if (!crit.structure_ok) j["structure_mismatch"] = crit.mismatch;
  const SpecialOrbits so = special_orbits_unchecked(p, c.tol);
  j["orbits"] = json::array({orbit_json(so.P1), orbit_json(so.P2), orbit_json(so.P3)});
  j["chain"] = chain_json(so);
  j["chain_ok"] = so.chain_ok;
  j["pattern_ok"] = so.pattern_ok;
  if (p.preset_name == "validated") {
    const double e4 = std::pow(p.epsilon, 4);
    j["closed_form_periods"] = {kPi * (1.0 - 7.0 * e4 / 48.0), kPi, kPi * (1.0 + 8.0 * e4 / 3.0)};
  }
  return j;
}

json cz_report(const Config& c, const std::string& orbit, int iterate) {
  const SpecialOrbits so = special_orbits_unchecked(c.params, c.tol);
  json j;
  j["config"] = config_to_json(c);
  j["iterate"] = iterate;
  std::vector<OrbitLabel> which;
  if (orbit.empty() || orbit == "all") which = {OrbitLabel::P1, OrbitLabel::P2, OrbitLabel::P3};
  else which = {parse_orbit(orbit)};
  for (OrbitLabel L : which) {
    const OrbitIndex oi = orbit_index(c.params, so, L, iterate, 128, c.tol);
    j["orbits"][orbit_label_name(L)] = {{"frame_correction", oi.correction},
                                        {"winding_interval_rho", interval_json(oi.interval)},
                                        {"methods", oi.methods}};
  }
  return j;
}

json spectrum_report(const Config& c, const std::string& orbit, int nodes, int iterate) {
  const SpecialOrbits so = special_orbits_unchecked(c.params, c.tol);
  const ReebOrbit& o = so.orbit(parse_orbit(orbit));
  const int corr = special_frame_correction(c.params, o, 256, c.tol);
  const SymplecticPath path = restrict_linearized_to_xi(c.params, o, FrameKind::rho_orbit_frame, nodes, c.tol);
  SpectrumReport r;
  const int mu = spectral_mu(c.params, o, path, corr, iterate, nodes, c.tol, &r);
  json band = json::array();
  for (std::size_t k = 0; k < r.eigenvalues.size(); ++k)
    band.push_back({{"eigenvalue", r.eigenvalues[k]}, {"winding", r.windings[k]}});
  json j = {{"config", config_to_json(c)},
            {"orbit", orbit},
            {"nodes", nodes},
            {"iterate", iterate},
            {"frame", "rho"},
            {"frame_correction", iterate * corr},
            {"trusted_band", band},
            {"excluded", r.excluded},
            {"gap", r.gap},
            {"nu_neg", r.nu_neg},
            {"nu_pos", r.nu_pos},
            {"wind_neg", r.wind_neg},
            {"wind_pos", r.wind_pos},
            {"p", r.p},
            {"mu_tilde_frame", r.mu_tilde},
            {"mu", mu}};
  try {
    const SpectrumAudit a = spectrum_property_audit(r);
    j["audit"] = {{"monotone", a.monotone}, {"pairs", a.pairs}, {"independence", a.independence},
                  {"min_det", a.min_det}, {"violations", a.violations}};
  } catch (const Error& e) {
    j["audit"] = error_json(e);
  }
  return j;
}

std::string spectrum_csv(const Config& c, const std::string& orbit, int nodes, int iterate) {
  const json j = spectrum_report(c, orbit, nodes, iterate);
  std::ostringstream os;
  os << "eigenvalue,winding\n";
  char buf[64];
  for (const json& e : j["trusted_band"]) {
    std::snprintf(buf, sizeof buf, "%.12g,%d\n", e["eigenvalue"].get<double>(), e["winding"].get<int>());
    os << buf;
  }
  return os.str();
}

json link_pair_report(const Config& c, const std::string& a, const std::string& b) {
  const SpecialOrbits so = special_orbits_unchecked(c.params, c.tol);
  const LinkingResult r = linking_number(orbit_curve(so.orbit(parse_orbit(a)), c.tol.curve_samples),
                                         orbit_curve(so.orbit(parse_orbit(b)), c.tol.curve_samples), c.tol, c.seed);
  return {{"config", config_to_json(c)}, {"pair", json::array({a, b})}, {"raw", r.raw}, {"rounded", r.lk}, {"guard", r.guard},
          {"pole_distance", r.pole_distance}, {"seed", c.seed}};
}

json link_self_report(const Config& c, const std::string& orbit) {
  const SpecialOrbits so = special_orbits_unchecked(c.params, c.tol);
  const SelfLinkResult r = self_linking(c.params, so.orbit(parse_orbit(orbit)), c.tol, PushoffFrame::xbar1, c.seed);
  return {{"config", config_to_json(c)}, {"self", orbit},         {"frame", "Xbar1"},          {"raw", r.link.raw},
          {"rounded", r.link.lk},  {"guard", r.link.guard},     {"offset", r.offset},
          {"min_separation", r.min_separation}, {"seed", c.seed}};
}

json leaf_report(const Config& c, const std::string& which) {
  const LeafMap L = assemble_leaf(c.params, integrate_profile(c.params, parse_leaf_interval(which), c.tol, kLeafDs), kLeafNt);
  const LeafDiagnostics d = leaf_diagnostics(c.params, L, c.tol);
  json j = {{"config", config_to_json(c)}, {"profile", profile_json(L.profile)}, {"diagnostics", diagnostics_json(d)}};
  if (L.profile.interval.neg != EndLabel::removable) {
    const SectionCheck sc = strong_section_check(c.params, L, LeafEnd::neg, c.tol);
    j["neg_end_section"] = {{"verdict", section_verdict_name(sc.verdict)}, {"sign", sc.sign}, {"margin", sc.margin}};
  }
  return j;
}

std::string leaf_csv(const Config& c, const std::string& which) {
  const LeafProfile pr = integrate_profile(c.params, parse_leaf_interval(which), c.tol, kLeafDs);
  std::ostringstream os;
  os << "s,g,f,a\n";
  char buf[128];
  for (std::size_t i = 0; i < pr.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g,%.15g,%.15g,%.15g\n", pr.s[i], pr.g[i], pr.f[i], pr.a[i]);
    os << buf;
  }
  return os.str();
}

json atlas_report(const Config& c) {
  const FoliationAtlas at = foliation_atlas(c.params, c.tol, kLeafDs, kLeafNt);
  json leaves = json::array();
  for (const AtlasLeaf& L : at.leaves) {
    const FredholmData& f = L.fredholm;
    leaves.push_back({{"role", L.role},
                      {"profile", profile_json(L.leaf.profile)},
                      {"diagnostics", diagnostics_json(L.diagnostics)},
                      {"fredholm",
                       {{"mu_pos", f.mu_pos}, {"mu_neg", f.mu_neg}, {"euler", f.euler}, {"punctures", f.punctures},
                        {"index", f.index}, {"wind_infty", f.wind_infty}, {"wind_pi", f.wind_pi}}}});
  }
  json binding = json::array();
  for (const ReebOrbit& o : at.binding) binding.push_back(orbit_json(o));
  return {{"config", config_to_json(c)},
          {"leaves", leaves},
          {"binding", binding},
          {"xbar", {{"plus", at.xbar.plus}, {"minus", at.xbar.minus}}},
          {"not_constructed",
           {{"cylinders", at.not_constructed},
            {"shadow", "separatrix loop projection onto (x2, y2)"},
            {"status", "conjectural"}}}};
}

json scan_report(const Config& c, double bound, int levels) {
  const ScanResult sr = resonant_orbit_scan(c.params, bound, default_level_grid(c.params, levels), c.tol);
  json loops = json::array(), cands = json::array(), excl = json::array();
  for (const ScanLoop& l : sr.loops)
    loops.push_back({{"C", l.C}, {"component", l.component}, {"tau", l.tau}, {"area", l.area},
                     {"level_error", l.level_error}, {"best_m1", l.best_m1}, {"best_m2", l.best_m2},
                     {"best_action", l.best_action}, {"claim_product", l.claim.product}, {"claim_pass", l.claim.pass}});
  for (const ScanCandidate& k : sr.candidates)
    cands.push_back({{"C", k.C}, {"component", k.component}, {"m1", k.m1}, {"m2", k.m2}, {"action", k.action}});
  for (const ScanExclusion& e : sr.excluded) excl.push_back({{"C", e.C}, {"seed", vec(e.seed)}, {"reason", e.reason}});
  return {{"config", config_to_json(c)}, {"bound", bound}, {"levels", levels},
          {"loops", loops}, {"candidates", cands}, {"excluded", excl}};
}

json homoclinic_report(const Config& c, double horizon) {
  const SeparatrixResult r = separatrix_and_homoclinics(c.params, c.tol.launch_offset, horizon, c.tol);
  auto branch = [](const SeparatrixBranch& b) {
    return json{{"id", b.branch_id}, {"axis_crossing", b.axis_crossing}, {"enclosed_area", b.enclosed_area},
                {"duration", b.duration}, {"level_error", b.level_error}, {"launch_vector", vec(b.launch_vector)}};
  };
  json j = {{"config", config_to_json(c)},
            {"horizon", horizon},
            {"gamma1", branch(r.gamma1)},
            {"gamma2", branch(r.gamma2)},
            {"end_distance_forward", r.end_distance_forward},
            {"end_distance_backward", r.end_distance_backward},
            {"planar_rate", r.planar_rate},
            {"unstable", vec(r.unstable)},
            {"stable", vec(r.stable)}};
  if (c.params.preset_name == "validated") {
    const double e = c.params.epsilon;
    j["closed_form_crossings"] = {(5.0 - std::sqrt(7.0)) * e / 3.0, (5.0 + std::sqrt(7.0)) * e / 3.0};
  }
  return j;
}

std::string homoclinic_csv(const Config& c, double horizon) {
  const SeparatrixResult r = separatrix_and_homoclinics(c.params, c.tol.launch_offset, horizon, c.tol);
  std::ostringstream os;
  write_trajectory_csv(c.params, r.homoclinic.front(), os);
  return os.str();
}

}  // namespace reeb::cli
