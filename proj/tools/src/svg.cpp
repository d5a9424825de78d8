#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "reeb321/knots.hpp"
#include "reeb321/leaves.hpp"
#include "reeb321/orbits.hpp"
#include "reeb321_cli/app.hpp"

namespace reeb::cli {

namespace {

constexpr double kSize = 800.0;
constexpr double kMargin = 40.0;

struct Window {
  double x0, x1, y0, y1;
  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kSize - 2 * kMargin); }
  double py(double y) const { return kSize - kMargin - (y - y0) / (y1 - y0) * (kSize - 2 * kMargin); }
};

std::string fmt(const char* f, double a) {
  char b[48];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

std::string pt(const Window& w, double x, double y) { return fmt("%.2f", w.px(x)) + " " + fmt("%.2f", w.py(y)); }

class Svg {
 public:
  explicit Svg(const std::string& title) {
    os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 800\" width=\"800\" height=\"800\">\n";
    os_ << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n";
    os_ << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" << title
        << "</text>\n";
  }
  void path(const std::string& d, const std::string& stroke, double width, const std::string& extra = "") {
    if (d.empty()) return;
    os_ << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt("%.2f", width)
        << "\"" << extra << "/>\n";
  }
  void circle(double x, double y, double r, const std::string& fill) {
    os_ << "<circle cx=\"" << fmt("%.2f", x) << "\" cy=\"" << fmt("%.2f", y) << "\" r=\"" << fmt("%.1f", r)
        << "\" fill=\"" << fill << "\"/>\n";
  }
  void text(double x, double y, const std::string& s, const std::string& fill = "black") {
    os_ << "<text x=\"" << fmt("%.2f", x) << "\" y=\"" << fmt("%.2f", y)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << fill << "\">" << s << "</text>\n";
  }
  std::string str() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  std::ostringstream os_;
};

std::string polyline(const Window& w, const std::vector<Vec2>& pts, bool close) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) d += (i ? " L " : "M ") + pt(w, pts[i][0], pts[i][1]);
  if (close && !d.empty()) d += " Z";
  return d;
}

// Square window around {H2 <= 1/2}.
Window cap_window(const HamiltonianParams& p) {
  double x0 = 1e9, x1 = -1e9, y0 = 1e9, y1 = -1e9;
  const int n = 241;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = -3.0 + 6.0 * i / (n - 1), y = -3.0 + 6.0 * j / (n - 1);
      if (h2(p, x, y) <= 0.5) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  const double half = 0.55 * std::max(x1 - x0, y1 - y0);
  return {cx - half, cx + half, cy - half, cy + half};
}

// Marching squares on a uniform grid; one segment list per level.
std::string level_path(const HamiltonianParams& p, const Window& w, double level, int n = 200) {
  std::vector<double> v((n + 1) * (n + 1));
  auto X = [&](int i) { return w.x0 + (w.x1 - w.x0) * i / n; };
  auto Y = [&](int j) { return w.y0 + (w.y1 - w.y0) * j / n; };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) v[i * (n + 1) + j] = h2(p, X(i), Y(j)) - level;
  auto val = [&](int i, int j) { return v[i * (n + 1) + j]; };
  std::string d;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double c[4] = {val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)};
      const double cx[4] = {X(i), X(i + 1), X(i + 1), X(i)};
      const double cy[4] = {Y(j), Y(j), Y(j + 1), Y(j + 1)};
      std::vector<Vec2> cross;
      for (int e = 0; e < 4; ++e) {
        const int f = (e + 1) % 4;
        if ((c[e] < 0.0) != (c[f] < 0.0)) {
          const double s = c[e] / (c[e] - c[f]);
          cross.emplace_back(cx[e] + s * (cx[f] - cx[e]), cy[e] + s * (cy[f] - cy[e]));
        }
      }
      for (std::size_t k = 0; k + 1 < cross.size(); k += 2)
        d += "M " + pt(w, cross[k][0], cross[k][1]) + " L " + pt(w, cross[k + 1][0], cross[k + 1][1]) + " ";
    }
  if (!d.empty()) d.pop_back();
  return d;
}

std::vector<double> plot_levels(const HamiltonianParams& p, const Tolerances& tol) {
  const CriticalPointReport cr = find_critical_points(p, tol);
  std::vector<double> lv;
  double lo = 0.0;
  for (const CriticalPoint& c : cr.points) {
    lv.push_back(c.h2_value);
    lo = std::min(lo, c.h2_value);
  }
  for (int k = 1; k <= 8; ++k) lv.push_back(lo + (0.5 - lo) * k / 8.0);
  std::sort(lv.begin(), lv.end());
  lv.erase(std::unique(lv.begin(), lv.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }), lv.end());
  return lv;
}

void axes(Svg& s, const Window& w) {
  s.path("M " + pt(w, w.x0, 0.0) + " L " + pt(w, w.x1, 0.0), "#999999", 0.8);
  s.path("M " + pt(w, 0.0, w.y0) + " L " + pt(w, 0.0, w.y1), "#999999", 0.8);
  s.text(kSize - kMargin - 20, w.py(0.0) - 6, "x2", "#666666");
  s.text(w.px(0.0) + 6, kMargin + 12, "y2", "#666666");
}

void levels_layer(Svg& s, const Config& c, const Window& w) {
  const std::vector<double> lv = plot_levels(c.params, c.tol);
  for (std::size_t k = 0; k < lv.size(); ++k) {
    const double t = lv.size() > 1 ? static_cast<double>(k) / (lv.size() - 1) : 0.0;
    char col[16];
    std::snprintf(col, sizeof col, "#%02x%02x%02x", static_cast<int>(40 + 180 * t), 80, static_cast<int>(220 - 180 * t));
    s.path(level_path(c.params, w, lv[k]), col, 1.0);
  }
}

void binding_layer(Svg& s, const Config& c, const Window& w) {
  const SpecialOrbits so = special_orbits_unchecked(c.params, c.tol);
  for (OrbitLabel L : {OrbitLabel::P1, OrbitLabel::P2, OrbitLabel::P3}) {
    const Vec2 z = so.point(L).location;
    s.circle(w.px(z[0]), w.py(z[1]), 5.0, "black");
    s.text(w.px(z[0]) + 6, w.py(z[1]) - 8, orbit_label_name(L));
  }
}

void separatrix_layer(Svg& s, const Config& c, const Window& w, const std::string& extra) {
  const SeparatrixResult r = separatrix_and_homoclinics(c.params, c.tol.launch_offset, 50.0, c.tol);
  s.path(polyline(w, r.gamma1.samples, false), "#d62728", 1.6, extra);
  s.path(polyline(w, r.gamma2.samples, false), "#ff7f0e", 1.6, extra);
}

void legend(Svg& s, const std::vector<std::pair<std::string, std::string>>& entries) {
  double y = kSize - 16.0 * entries.size() - 10.0;
  for (const auto& [color, label] : entries) {
    s.path("M " + fmt("%.2f", 50.0) + " " + fmt("%.2f", y - 4) + " L " + fmt("%.2f", 70.0) + " " + fmt("%.2f", y - 4),
           color, 3.0);
    s.text(76, y, label);
    y += 16.0;
  }
}

std::string levels_svg(const Config& c) {
  const Window w = cap_window(c.params);
  Svg s("energy levels of H2 (" + c.params.preset_name + ", eps " + fmt("%.3g", c.params.epsilon) + ")");
  axes(s, w);
  levels_layer(s, c, w);
  const CriticalPointReport cr = find_critical_points(c.params, c.tol);
  for (const CriticalPoint& p : cr.points)
    s.circle(w.px(p.location[0]), w.py(p.location[1]), 4.0,
             p.flow_type == FlowType::hyperbolic ? "#d62728" : "#1f77b4");
  legend(s, {{"#d62728", "hyperbolic critical point"}, {"#1f77b4", "elliptic critical point"}});
  return s.str();
}

std::string atlas_svg(const Config& c) {
  const Window w = cap_window(c.params);
  Svg s("foliation atlas projected to (x2, y2)");
  axes(s, w);
  levels_layer(s, c, w);
  const std::pair<LeafInterval, const char*> roles[4] = {{LeafInterval::disk_to_P2, "#2ca02c"},
                                                         {LeafInterval::cyl_P2_P1, "#9467bd"},
                                                         {LeafInterval::cyl_P3_P1, "#8c564b"},
                                                         {LeafInterval::plane_to_P3, "#17becf"}};
  for (const auto& [which, color] : roles) {
    const IntervalData iv = interval_data(c.params, which, c.tol);
    s.path("M " + pt(w, iv.lo, 0.0) + " L " + pt(w, iv.hi, 0.0), color, 5.0);
  }
  separatrix_layer(s, c, w, " stroke-dasharray=\"6 4\"");
  binding_layer(s, c, w);
  legend(s, {{"#2ca02c", "D: disk_to_P2"},
             {"#9467bd", "V: cyl_P2_P1"},
             {"#8c564b", "C_tau: cyl_P3_P1"},
             {"#17becf", "F_tau: plane_to_P3"},
             {"#d62728", "U1 shadow (conjectural)"},
             {"#ff7f0e", "U2 shadow (conjectural)"}});
  return s.str();
}

std::string separatrix_svg(const Config& c) {
  const Window w = cap_window(c.params);
  Svg s("separatrix loops through P2");
  axes(s, w);
  s.path(level_path(c.params, w, 0.0), "#bbbbbb", 0.8);
  separatrix_layer(s, c, w, "");
  binding_layer(s, c, w);
  legend(s, {{"#d62728", "gamma1"}, {"#ff7f0e", "gamma2"}});
  return s.str();
}

std::string orbit3d_svg(const Config& c) {
  const SpecialOrbits so = special_orbits_unchecked(c.params, c.tol);
  const SeparatrixResult r = separatrix_and_homoclinics(c.params, c.tol.launch_offset, 50.0, c.tol);
  std::vector<ClosedCurve> curves;
  for (OrbitLabel L : {OrbitLabel::P1, OrbitLabel::P2, OrbitLabel::P3})
    curves.push_back(orbit_curve(so.orbit(L), 256));
  for (const Trajectory& t : r.homoclinic) {
    ClosedCurve cc;
    for (std::size_t k = 0; k < t.states.size(); k += std::max<std::size_t>(1, t.states.size() / 2000))
      cc.samples.push_back(t.states[k]);
    curves.push_back(cc);
  }
  const Projection pr = stereographic_project(std::vector<ClosedCurve>(curves.begin(), curves.begin() + 3), c.tol, c.seed);
  const Projection all = stereographic_project_from(curves, pr.pole);
  double lim = 0.0;
  for (const auto& cv : all.curves)
    for (const Vec3& v : cv) lim = std::max({lim, std::abs(v[0]), std::abs(v[1])});
  lim = std::min(lim * 1.05, 20.0);
  const Window w{-lim, lim, -lim, lim};
  Svg s("orbits in S3, stereographic projection (first two axes), seed " + std::to_string(c.seed));
  const char* colors[5] = {"#1f77b4", "#2ca02c", "#9467bd", "#d62728", "#ff7f0e"};
  // homoclinics below, binding orbits on top
  for (std::size_t step = 0; step < all.curves.size(); ++step) {
    const std::size_t k = (step + 3) % all.curves.size();
    std::vector<Vec2> pts;
    for (const Vec3& v : all.curves[k])
      if (std::abs(v[0]) <= lim && std::abs(v[1]) <= lim) pts.emplace_back(v[0], v[1]);
    s.path(polyline(w, pts, k < 3), colors[std::min<std::size_t>(k, 4)], k < 3 ? 2.0 : 0.8);
  }
  legend(s, {{colors[0], "P1"}, {colors[1], "P2"}, {colors[2], "P3"}, {colors[3], "homoclinic 1"},
             {colors[4], "homoclinic 2"}});
  return s.str();
}

}  // namespace

std::string render_svg(const Config& c, const std::string& target) {
  if (target == "levels") return levels_svg(c);
  if (target == "atlas") return atlas_svg(c);
  if (target == "separatrix") return separatrix_svg(c);
  if (target == "orbit3d-projection") return orbit3d_svg(c);
  throw Error(ErrorCode::ConfigError, "unknown plot target '" + target + "'");
}

std::vector<std::filesystem::path> render_plots(const Config& c, const std::set<std::string>& targets,
                                                const std::filesystem::path& out_dir) {
  if (targets.empty()) throw Error(ErrorCode::PreconditionViolation, "no plot targets");
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> out;
  for (const std::string& t : targets) {
    const std::string svg = render_svg(c, t);
    const std::filesystem::path f = out_dir / (t + ".svg");
    std::ofstream(f, std::ios::binary) << svg;
    out.push_back(f);
  }
  return out;
}

}  // namespace reeb::cli
