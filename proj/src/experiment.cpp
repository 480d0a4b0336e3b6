#include "pscgeom/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "pscgeom/cones.hpp"
#include "pscgeom/error.hpp"
#include "pscgeom/oracle.hpp"
#include "pscgeom/submersion.hpp"
#include "pscgeom/torpedo_boot.hpp"

namespace pscgeom {

namespace fs = std::filesystem;

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "cone",   "attach", "fibre-model", "torpedo", "boot",    "boot-search",
      "oneill", "tau-bar", "lift",       "validate", "profile", "warped",
      "oracle"};
  return names;
}

namespace {

const std::map<std::string, std::set<std::string>>& allowed_params() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"cone", {"link", "samples"}},
      {"attach", {"link", "eps0", "eps1", "samples"}},
      {"fibre-model", {"link", "eps0", "eps1", "cyl_len", "samples"}},
      {"torpedo", {"n", "delta", "lambda", "variant", "lambda2", "bound", "samples"}},
      {"boot", {"n", "delta", "Lambda", "l1", "l4", "distance_from", "samples"}},
      {"boot-search", {"n", "delta", "l1", "l4"}},
      {"oneill", {"fields", "hopf", "s_h", "A_sq", "fibre", "tau", "samples"}},
      {"tau-bar", {"fields", "hopf", "s_h", "A_sq", "fibre"}},
      {"lift", {"fields", "hopf", "fibre", "tau0", "tau_target", "t_samples", "samples"}},
      {"validate", {"fixture", "h", "corrupt"}},
      {"profile", {"builder", "eps0", "eps1", "delta", "lambda", "tau0", "tau", "b", "probes"}},
      {"warped", {"metric", "link", "profile", "tip", "base_s", "sphere_dim", "arc", "sphere",
                  "theta_len", "compare_product_from", "crosscheck_uform", "samples"}},
      {"oracle", {"chart", "tau", "point", "h"}},
  };
  return keys;
}

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  fail(ErrorKind::ConfigError, "field '" + field + "': " + what);
}

void reject_unknown(const Json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!obj.is_object()) config_error(where, "must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) config_error(where + "." + key, "unknown key");
}

// Typed access to the params object with field-named diagnostics.
class Params {
 public:
  explicit Params(const Json& j) : j_(j) {}

  bool has(const std::string& key) const { return j_.contains(key); }

  double real(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      config_error("params." + key, "required");
    }
    if (!j_.at(key).is_number()) config_error("params." + key, "must be a number");
    const double v = j_.at(key).get<double>();
    if (!std::isfinite(v)) config_error("params." + key, "must be finite");
    return v;
  }

  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      config_error("params." + key, "required");
    }
    if (!j_.at(key).is_number_integer()) config_error("params." + key, "must be an integer");
    return j_.at(key).get<int>();
  }

  bool flag(const std::string& key, bool fallback = false) const {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) config_error("params." + key, "must be true or false");
    return j_.at(key).get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!j_.at(key).is_string()) config_error("params." + key, "must be a string");
    return j_.at(key).get<std::string>();
  }

  std::vector<double> reals(const std::string& key) const {
    if (!j_.at(key).is_array()) config_error("params." + key, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : j_.at(key)) {
      if (!v.is_number()) config_error("params." + key, "must be an array of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

  Link link(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return link_from_name(fallback);
    const Json& v = j_.at(key);
    if (v.is_string()) return link_from_name(v.get<std::string>());
    if (v.is_object()) {
      reject_unknown(v, {"dim", "s", "name"}, "params." + key);
      if (!v.contains("dim") || !v.at("dim").is_number_integer())
        config_error("params." + key + ".dim", "required integer");
      const double s = v.value("s", 0.0);
      return make_link(v.at("dim").get<int>(), s, v.value("name", std::string("custom")));
    }
    config_error("params." + key, "must be a link name or {dim, s, name}");
  }

 private:
  const Json& j_;
};

Json link_json(const Link& l) { return {{"name", l.name}, {"dim", l.dim}, {"s", l.s}}; }

struct Fields {
  std::vector<std::vector<double>> base_s;
  std::vector<std::vector<double>> a_sq;
  std::vector<double> u;
  std::string source;
};

Fields load_fields(const Params& p, const ExperimentConfig& cfg) {
  const int sources = int(p.has("fields")) + int(p.flag("hopf")) + int(p.has("s_h"));
  if (sources != 1)
    config_error("params", "give exactly one of fields (CSV path), hopf, or s_h/A_sq");
  Fields f;
  if (p.flag("hopf")) {
    const SubmersionSpec h = hopf_fixture();
    f.base_s = {h.base_s};
    f.a_sq = {h.a_norm_sq};
    f.source = "hopf";
  } else if (p.has("fields")) {
    const fs::path path = cfg.base_dir / p.text("fields", "");
    const FieldTable t = read_field_csv_file(path.string());
    f.base_s = t.base_s;
    f.a_sq = t.a_norm_sq;
    if (t.u.size() > 1) f.u = t.u;
    f.source = p.text("fields", "");
  } else {
    if (!p.has("A_sq")) config_error("params.A_sq", "required with s_h");
    f.base_s = {p.reals("s_h")};
    f.a_sq = {p.reals("A_sq")};
    f.source = "inline";
  }
  return f;
}

std::string report_csv(const CurvatureReport& r) { return to_csv(r); }

ExperimentResult run_cone(const ExperimentConfig& cfg, const Params& p) {
  const ConeMetric cone = build_cone(p.link("link", "S3"));
  const CurvatureReport r = cone_report(cone, cfg.grid1, cfg.tolerances);
  ExperimentResult out;
  out.passed = r.verdict.kind == VerdictKind::Flat;
  out.report["link"] = link_json(cone.link);
  out.report["c_L"] = cone.c_L;
  out.report["euclidean"] = cone.euclidean;
  if (cone.as_warped) out.report["profile"] = profile_to_json(cone.as_warped->profile);
  out.report["curvature"] = to_json(r, p.flag("samples"));
  out.csv = report_csv(r);
  return out;
}

ExperimentResult run_attach(const ExperimentConfig& cfg, const Params& p) {
  const NormalizedLink norm = normalize_link(p.link("link", "S1"));
  const TransitionFunction a = make_transition(p.real("eps0", 0.1), p.real("eps1", 0.1));
  const WarpedMetric w = build_attaching(norm.link, a);
  const CurvatureReport r = scalar_single_warped(w, cfg.grid1, cfg.tolerances);
  const DerivativeBounds b = derivative_bounds(a.profile, cfg.grid1.points);
  ExperimentResult out;
  out.passed = r.non_negative();
  out.report["link"] = link_json(norm.link);
  out.report["link_metric_scale"] = norm.metric_scale;
  out.report["transition"] = {{"eps0", a.eps0},
                              {"eps1", a.eps1},
                              {"linear_end", a.linear_end},
                              {"plateau_start", a.plateau_start},
                              {"d1_range", {b.d1_min, b.d1_max}},
                              {"d2_max", b.d2_max}};
  out.report["profile"] = profile_to_json(w.profile);
  out.report["curvature"] = to_json(r, p.flag("samples"));
  out.csv = report_csv(r);
  return out;
}

ExperimentResult run_fibre_model(const ExperimentConfig& cfg, const Params& p) {
  const TransitionFunction a = make_transition(p.real("eps0", 0.1), p.real("eps1", 0.1));
  const GluedFibreModel m = build_glued_fibre(p.link("link", "S1"), a, p.real("cyl_len", 1.0));
  const GluedReport r = glued_report(m, cfg.grid1, cfg.tolerances);
  ExperimentResult out;
  out.passed = r.whole.non_negative() && r.cone.verdict.kind == VerdictKind::Flat &&
               m.junction_residual <= 1e-10;
  out.report["link"] = link_json(m.link);
  out.report["link_metric_scale"] = m.link_scale;
  out.report["junction_residual"] = m.junction_residual;
  out.report["spans"] = {{"cone", {m.cone_span.lo, m.cone_span.hi}},
                         {"attaching", {m.attach_span.lo, m.attach_span.hi}},
                         {"cylinder", {m.cylinder_span.lo, m.cylinder_span.hi}}};
  out.report["profile"] = profile_to_json(m.profile);
  out.report["curvature"] = {{"cone", to_json(r.cone)},
                             {"attaching", to_json(r.attaching)},
                             {"cylinder", to_json(r.cylinder)},
                             {"whole", to_json(r.whole, p.flag("samples"))}};

  std::string csv = "t,phi,dphi,ddphi,s\n";
  for (const auto& s : r.whole.samples) {
    const double t = s.coords[0];
    const Jet j = m.profile.eval(t);
    csv += format_double(t) + "," + format_double(j.value) + "," + format_double(j.d1) + "," +
           format_double(j.d2) + "," + format_double(s.s) + "\n";
  }
  out.csv = std::move(csv);
  return out;
}

ExperimentResult run_torpedo(const ExperimentConfig& cfg, const Params& p) {
  const int n = p.integer("n");
  const double lambda = p.real("lambda", 1.0);
  const std::string variant = p.text("variant", "full");
  if (variant != "full" && variant != "half" && variant != "stretched")
    config_error("params.variant", "must be full, half or stretched");

  ExperimentResult out;
  double delta = p.real("delta", 1.0);
  std::optional<double> bound;
  if (p.has("bound")) {
    bound = p.real("bound");
    delta = delta_for_bound(n, *bound, lambda, cfg.grid1.points);
    out.report["delta_for_bound"] = delta;
  }

  CurvatureReport r;
  if (variant == "stretched") {
    const StretchedTorpedo st = build_stretched(n, delta, lambda, p.real("lambda2", 1.0));
    const StretchedReport sr = stretched_report(st, cfg.grid1.points, cfg.tolerances);
    out.report["parts"] = {{"cap", to_json(sr.cap)}, {"column", to_json(sr.column)}};
    out.report["column_neck_value"] = torpedo_neck_value(n - 1, delta);
    r = sr.whole;
  } else {
    // The half torpedo is a restriction of the full one: same curvature field.
    const TorpedoMetric t = build_torpedo(n, delta, lambda);
    r = torpedo_report(t, cfg.grid1.points, cfg.tolerances);
    double cap_lo = std::numeric_limits<double>::infinity(), cap_hi = -cap_lo;
    double neck_lo = cap_lo, neck_hi = -cap_lo;
    for (const auto& s : r.samples) {
      if (s.coords[0] <= t.profile.bend_end) {
        cap_lo = std::min(cap_lo, s.s);
        cap_hi = std::max(cap_hi, s.s);
      } else if (s.coords[0] >= t.profile.neck_start) {
        neck_lo = std::min(neck_lo, s.s);
        neck_hi = std::max(neck_hi, s.s);
      }
    }
    out.report["cap_s_range"] = {cap_lo, cap_hi};
    if (neck_lo <= neck_hi) out.report["neck_s_range"] = {neck_lo, neck_hi};
    out.report["profile"] = profile_to_json(t.profile.profile);
  }
  out.report["variant"] = variant;
  out.report["n"] = n;
  out.report["delta"] = delta;
  out.report["lambda"] = lambda;
  out.report["cap_value"] = torpedo_cap_value(n, delta);
  out.report["neck_value"] = torpedo_neck_value(n, delta);
  out.report["curvature"] = to_json(r, p.flag("samples"));
  out.passed = r.verdict.kind == VerdictKind::Positive && (!bound || r.bounded_below(*bound));
  if (bound) out.report["bounded_below"] = {{"b", *bound}, {"holds", r.bounded_below(*bound)}};
  out.csv = report_csv(r);
  return out;
}

Json boot_json(const BootMetric& b) {
  return {{"n", b.n},   {"delta", b.delta}, {"Lambda", b.Lambda},
          {"l_bar", {b.l1, b.l2, b.l3, b.l4}},
          {"l2_l3_note", "l2, l3 are the arc lengths induced by this intrinsic bend model"}};
}

ExperimentResult run_boot(const ExperimentConfig& cfg, const Params& p) {
  const BootMetric b = build_boot(p.integer("n"), p.real("delta", 1.0), p.real("Lambda"),
                                  p.real("l1", 1.0), p.real("l4", 1.0));
  const CurvatureReport r = boot_report(b, cfg.grid2, cfg.tolerances);
  const double margin = boot_margin(b.n, b.delta);
  ExperimentResult out;
  out.passed = r.s_min >= margin;
  out.report["boot"] = boot_json(b);
  out.report["psc_margin"] = margin;
  const double from = p.real("distance_from", 0.0);
  const double sup = boot_product_distance(b, cfg.grid2.x_points, from);
  out.report["product_distance"] = {{"from", from}, {"sup", sup}, {"fitted_C", sup * b.Lambda}};
  out.report["curvature"] = to_json(r, p.flag("samples"));
  out.csv = report_csv(r);
  return out;
}

ExperimentResult run_boot_search(const ExperimentConfig& cfg, const Params& p) {
  const int n = p.integer("n");
  const double delta = p.real("delta", 1.0);
  const double l1 = p.real("l1", 1.0);
  const double l4 = p.real("l4", 1.0);
  const BootSearch s = lambda_for_psc(n, delta, l1, l4, cfg.grid2);
  const double margin = boot_margin(n, delta);
  const BootMetric b = build_boot(n, delta, s.Lambda, l1, l4);
  const CurvatureReport verify = boot_report(b, cfg.grid2, cfg.tolerances);
  const double half_s_min =
      boot_report(build_boot(n, delta, 0.5 * s.Lambda, l1, l4), cfg.grid2).s_min;
  const bool tight = s.hit_floor || half_s_min < margin;

  ExperimentResult out;
  out.passed = verify.s_min >= margin && tight;
  out.report["Lambda_star"] = s.Lambda;
  out.report["hit_floor"] = s.hit_floor;
  out.report["evaluations"] = s.evaluations;
  out.report["psc_margin"] = margin;
  out.report["half_Lambda_s_min"] = half_s_min;
  out.report["tight"] = tight;
  out.report["boot"] = boot_json(b);
  out.report["curvature"] = to_json(verify);
  out.csv = report_csv(verify);
  return out;
}

ExperimentResult run_oneill(const ExperimentConfig& cfg, const Params& p) {
  const Fields f = load_fields(p, cfg);
  if (f.base_s.size() != 1) config_error("params.fields", "oneill takes a single field");
  const SubmersionSpec spec{f.base_s[0], p.link("fibre", "S1"), f.a_sq[0], p.real("tau", 1.0)};
  const CurvatureReport r = oneill_scalar(spec, cfg.tolerances);
  ExperimentResult out;
  out.passed = r.verdict.kind == VerdictKind::Positive;
  out.report["fields"] = f.source;
  out.report["fibre"] = link_json(spec.fibre);
  out.report["tau"] = spec.tau;
  out.report["curvature"] = to_json(r, p.flag("samples"));
  out.csv = report_csv(r);
  return out;
}

ExperimentResult run_tau_bar(const ExperimentConfig& cfg, const Params& p) {
  const Fields f = load_fields(p, cfg);
  const Link fibre = p.link("fibre", "S1");
  const double tb = tau_bar_min({f.base_s, f.a_sq, fibre});
  double m = std::numeric_limits<double>::infinity();
  for (const auto& base : f.base_s) m = std::min(m, *std::min_element(base.begin(), base.end()));

  ExperimentResult out;
  out.passed = true;
  Json members = Json::array();
  std::vector<CurvatureReport> reports;
  for (const auto& base : f.base_s) {
    for (const auto& a : f.a_sq) {
      const double mb = *std::min_element(base.begin(), base.end());
      const CurvatureReport r = oneill_scalar({base, fibre, a, tb}, cfg.tolerances);
      const bool ok = r.s_min >= mb / 2.0 - 1e-12;
      out.passed = out.passed && ok && r.verdict.kind == VerdictKind::Positive;
      members.push_back({{"tau_bar", tau_bar(base, a)}, {"s_min_at_tau_bar_min", r.s_min},
                         {"m_half", mb / 2.0}, {"holds", ok}});
      reports.push_back(r);
    }
  }
  out.report["fields"] = f.source;
  out.report["fibre"] = link_json(fibre);
  out.report["tau_bar_min"] = tb;
  out.report["m"] = m;
  out.report["members"] = std::move(members);
  out.report["curvature"] = to_json(reports.front());
  out.csv = report_csv(reports.front());
  return out;
}

ExperimentResult run_lift(const ExperimentConfig& cfg, const Params& p) {
  const Fields f = load_fields(p, cfg);
  LiftOptions opt;
  opt.t_samples = p.integer("t_samples", 64);
  opt.tolerances = cfg.tolerances;
  const LiftResult lr = lift_over_bordism({f.base_s, f.a_sq, f.u}, p.link("fibre", "S1"),
                                          p.real("tau0", 1.0), p.real("tau_target"), opt);
  ExperimentResult out;
  out.passed = lr.report.verdict.kind == VerdictKind::Positive;
  out.report["fields"] = f.source;
  out.report["b"] = lr.b;
  out.report["doublings"] = lr.doublings;
  out.report["tau_bar_min"] =
      std::isinf(lr.tau_bar_min) ? Json(nullptr) : Json(lr.tau_bar_min);
  out.report["tau_effective"] = lr.tau_effective;
  out.report["clamped"] = lr.clamped;
  out.report["curve"] = profile_to_json(lr.curve.profile);
  out.report["curvature"] = to_json(lr.report, p.flag("samples"));
  out.csv = report_csv(lr.report);
  return out;
}

ExperimentResult run_validate(const ExperimentConfig&, const Params& p) {
  ValidationOptions opt;
  opt.h = p.real("h", opt.h);
  opt.corrupt_engine = p.flag("corrupt");
  std::vector<ValidationReport> reports;
  if (p.has("fixture")) {
    reports.push_back(validate_engine(p.text("fixture", ""), opt));
  } else {
    reports = validate_all(opt);
  }
  ExperimentResult out;
  out.passed = true;
  Json list = Json::array();
  std::string csv = "fixture,points,max_diff,min_richardson_ratio,richardson_exact,passed\n";
  for (const auto& r : reports) {
    out.passed = out.passed && r.passed();
    const Json ratio =
        std::isinf(r.min_richardson_ratio) ? Json(nullptr) : Json(r.min_richardson_ratio);
    list.push_back({{"fixture", r.id},
                    {"description", r.description},
                    {"points", r.points},
                    {"max_diff", r.max_diff},
                    {"min_richardson_ratio", ratio},
                    {"richardson_exact", r.richardson_exact},
                    {"passed", r.passed()}});
    csv += r.id + "," + std::to_string(r.points) + "," + format_double(r.max_diff) + "," +
           (std::isinf(r.min_richardson_ratio) ? std::string("")
                                               : format_double(r.min_richardson_ratio)) +
           "," + std::to_string(r.richardson_exact) + "," + (r.passed() ? "true" : "false") +
           "\n";
  }
  out.report["tolerance"] = opt.tolerance;
  out.report["h"] = opt.h;
  out.report["corrupt_engine"] = opt.corrupt_engine;
  out.report["fixtures"] = std::move(list);
  out.csv = std::move(csv);
  return out;
}

}  // namespace

Profile profile_from_spec(const Json& j, const std::string& field) {
  if (!j.is_object()) config_error(field, "must be an object");
  Profile out;
  if (j.contains("pieces")) {
    reject_unknown(j, {"kind", "domain", "pieces", "power"}, field);
    out = profile_from_json(j);
  } else {
    reject_unknown(j, {"builder", "eps0", "eps1", "delta", "lambda", "tau0", "tau", "b", "power"},
                   field);
    const Params q(j);
    const std::string builder = q.text("builder", "");
    if (builder == "transition") {
      out = make_transition(q.real("eps0", 0.1), q.real("eps1", 0.1)).profile;
    } else if (builder == "torpedo") {
      out = make_torpedo_profile(q.real("delta", 1.0), q.real("lambda", 0.0)).profile;
    } else if (builder == "rescale") {
      out = make_rescale_curve(q.real("tau0"), q.real("tau"), q.real("b")).profile;
    } else {
      config_error(field + ".builder", "must be transition, torpedo or rescale (or give pieces)");
    }
  }
  if (j.contains("power")) {
    if (!j.at("power").is_number()) config_error(field + ".power", "must be a number");
    out = out.powered(j.at("power").get<double>());
  }
  return out;
}

namespace {

Json jet_json(double t, const Jet& j) {
  return {{"t", t}, {"value", j.value}, {"d1", j.d1}, {"d2", j.d2}};
}

ExperimentResult run_profile(const ExperimentConfig& cfg, const Params& p) {
  const std::string builder = p.text("builder", "");
  Json spec = cfg.params;
  spec.erase("probes");
  const Profile prof = profile_from_spec(spec, "params");
  const DerivativeBounds b = derivative_bounds(prof, cfg.grid1.points);
  const double tol = 1e-12;

  ExperimentResult out;
  Json checks;
  if (builder == "transition") {
    const Jet a0 = prof.eval(prof.domain().lo);
    const Jet a1 = prof.eval(prof.domain().hi);
    checks["endpoints"] = a0.value == 0.5 && a1.value == 1.0;
    checks["slope_in_unit_interval"] = b.d1_min >= -tol && b.d1_max <= 1.0 + tol;
    checks["concave"] = b.d2_max <= tol;
  } else if (builder == "torpedo") {
    const double delta = p.real("delta", 1.0);
    const Jet f0 = prof.eval(0.0);
    checks["tip"] = f0.value == 0.0 && std::abs(f0.d1 - 1.0) <= tol;
    checks["ends_at_delta"] = prof(prof.domain().hi) == delta;
    checks["concave"] = b.d2_max <= tol;
  } else {
    const bool down = p.real("tau") < p.real("tau0");
    checks["monotone"] = down ? b.d1_max <= tol : b.d1_min >= -tol;
  }
  out.passed = true;
  for (const auto& [_, v] : checks.items()) out.passed = out.passed && v.get<bool>();

  Json probes = Json::array();
  if (p.has("probes"))
    for (double t : p.reals("probes")) probes.push_back(jet_json(t, prof.eval(t)));
  out.report["builder"] = builder;
  out.report["profile"] = profile_to_json(prof);
  out.report["probes"] = std::move(probes);
  out.report["derivative_bounds"] = {
      {"d1", {b.d1_min, b.d1_max}}, {"d2", {b.d2_min, b.d2_max}}, {"points", cfg.grid1.points}};
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (double t : linspace(prof.domain().lo, prof.domain().hi, cfg.grid1.points)) {
    vmin = std::min(vmin, prof(t));
    vmax = std::max(vmax, prof(t));
  }
  out.report["value_range"] = {vmin, vmax};
  out.report["max_junction_residual"] = prof.max_junction_residual();
  out.report["checks"] = std::move(checks);
  out.csv = sample_csv(prof, cfg.grid1.points);
  return out;
}

ExperimentResult run_warped(const ExperimentConfig& cfg, const Params& p) {
  const std::string metric = p.text("metric", "single");
  ExperimentResult out;
  CurvatureReport r;
  if (metric == "single" || metric == "multiply") {
    if (!p.has("profile")) config_error("params.profile", "required");
    const Link link = p.link("link", "S1");
    const Profile prof = profile_from_spec(cfg.params.at("profile"), "params.profile");
    if (metric == "single") {
      r = scalar_single_warped({link, prof, p.flag("tip")}, cfg.grid1, cfg.tolerances);
      if (p.flag("crosscheck_uform")) {
        double worst = 0.0;
        for (const auto& s : r.samples) {
          const Jet j = prof.eval(s.coords[0]);
          const double diff =
              std::abs(warped_scalar(link, j) - warped_scalar_uform(link, j));
          worst = std::max(worst, diff / std::max(1.0, warped_term_magnitude(link, j)));
        }
        out.report["uform_max_relative_diff"] = worst;
      }
    } else {
      if (!p.has("base_s")) config_error("params.base_s", "required for multiply");
      r = scalar_multiply_warped({p.reals("base_s"), link, prof}, cfg.grid1, cfg.tolerances);
    }
    out.report["link"] = link_json(link);
    out.report["profile"] = profile_to_json(prof);
  } else if (metric == "doubly") {
    if (!p.has("arc") || !p.has("sphere")) config_error("params", "doubly needs arc and sphere");
    DoublyWarpedMetric w;
    w.sphere_dim = p.integer("sphere_dim");
    w.arc = profile_from_spec(cfg.params.at("arc"), "params.arc");
    w.sphere = profile_from_spec(cfg.params.at("sphere"), "params.sphere");
    w.theta_len = p.real("theta_len", 1.0);
    w.tip = p.flag("tip");
    r = scalar_doubly_warped(w, cfg.grid2, cfg.tolerances);
    if (p.has("compare_product_from")) {
      // Distance to the A = const field with the same sphere factor.
      const double from = p.real("compare_product_from");
      double dist = 0.0;
      for (const auto& s : r.samples) {
        const double x = s.coords[0];
        if (x < from) continue;
        const double straight = doubly_warped_scalar(w.sphere_dim, {1.0, 0.0, 0.0}, w.sphere.eval(x));
        dist = std::max(dist, std::abs(s.s - straight));
      }
      out.report["product_distance"] = {{"from", from}, {"sup", dist}};
    }
    out.report["arc"] = profile_to_json(w.arc);
    out.report["sphere"] = profile_to_json(w.sphere);
  } else {
    config_error("params.metric", "must be single, doubly or multiply");
  }
  out.passed = r.verdict.kind != VerdictKind::Indefinite;
  out.report["metric"] = metric;
  out.report["curvature"] = to_json(r, p.flag("samples"));
  out.csv = report_csv(r);
  return out;
}

ExperimentResult run_oracle(const ExperimentConfig&, const Params& p) {
  const std::string chart_name = p.text("chart", "");
  const ChartMetric chart = named_chart(chart_name, p.real("tau", 1.0));
  if (!p.has("point")) config_error("params.point", "required");
  const Point x = p.reals("point");
  if (static_cast<int>(x.size()) != chart.dim)
    config_error("params.point", "needs " + std::to_string(chart.dim) + " coordinates");
  const FdCurvature fd = fd_scalar_curvature(chart, x, p.real("h", 1e-3));
  ExperimentResult out;
  out.passed = std::isfinite(fd.richardson);
  out.report["chart"] = chart_name;
  out.report["point"] = x;
  out.report["s"] = fd.richardson;
  out.report["s_h"] = fd.s_h;
  out.report["s_h2"] = fd.s_h2;
  out.csv = "s,s_h,s_h2\n" + format_double(fd.richardson) + "," + format_double(fd.s_h) + "," +
            format_double(fd.s_h2) + "\n";
  return out;
}

}  // namespace

ExperimentConfig parse_config(const Json& j, const fs::path& base_dir) {
  reject_unknown(j, {"experiment", "params", "output", "grid", "tolerance", "expect"}, "config");
  ExperimentConfig c;
  c.base_dir = base_dir;
  if (!j.contains("experiment") || !j.at("experiment").is_string())
    config_error("experiment", "required string");
  c.experiment = j.at("experiment").get<std::string>();
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end())
    config_error("experiment", "unknown experiment '" + c.experiment + "'");

  if (j.contains("params")) c.params = j.at("params");
  reject_unknown(c.params, allowed_params().at(c.experiment), "params");

  if (j.contains("output")) {
    const Json& o = j.at("output");
    reject_unknown(o, {"path", "format"}, "output");
    if (o.contains("path")) {
      if (!o.at("path").is_string()) config_error("output.path", "must be a string");
      c.output_path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      if (!o.at("format").is_string()) config_error("output.format", "must be a string");
      c.format = o.at("format").get<std::string>();
    }
    if (c.format != "json" && c.format != "csv")
      config_error("output.format", "must be json or csv");
  }

  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    reject_unknown(g, {"points", "x_points", "theta_points"}, "grid");
    auto count = [&](const char* key, int& dst, int min) {
      if (!g.contains(key)) return;
      if (!g.at(key).is_number_integer() || g.at(key).get<int>() < min)
        config_error(std::string("grid.") + key, "must be an integer >= " + std::to_string(min));
      dst = g.at(key).get<int>();
    };
    count("points", c.grid1.points, 2);
    count("x_points", c.grid2.x_points, 2);
    count("theta_points", c.grid2.theta_points, 2);
  }

  if (j.contains("tolerance")) {
    const Json& t = j.at("tolerance");
    reject_unknown(t, {"flat", "non_negative"}, "tolerance");
    auto tol = [&](const char* key, double& dst) {
      if (!t.contains(key)) return;
      if (!t.at(key).is_number() || !(t.at(key).get<double>() >= 0.0))
        config_error(std::string("tolerance.") + key, "must be a number >= 0");
      dst = t.at(key).get<double>();
    };
    tol("flat", c.tolerances.flat);
    tol("non_negative", c.tolerances.non_negative);
  }

  if (j.contains("expect")) {
    const Json& e = j.at("expect");
    reject_unknown(e, {"verdict", "s_min", "s_max", "values", "max", "min", "tol"}, "expect");
    for (const char* key : {"values", "max", "min"}) {
      if (!e.contains(key)) continue;
      const std::string field = std::string("expect.") + key;
      if (!e.at(key).is_object()) config_error(field, "must be an object of JSON pointers");
      for (const auto& [ptr, v] : e.at(key).items()) {
        try {
          (void)Json::json_pointer(ptr);
        } catch (const nlohmann::json::exception&) {
          config_error(field, "'" + ptr + "' is not a JSON pointer");
        }
        if (std::string(key) != "values" && !v.is_number())
          config_error(field + "." + ptr, "bound must be a number");
      }
    }
    if (e.contains("tol") && !(e.at("tol").is_number() && e.at("tol").get<double>() >= 0.0))
      config_error("expect.tol", "must be a number >= 0");
    c.expect = e;
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open config '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::ConfigError, path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const Params p(cfg.params);
  ExperimentResult r;
  const std::string& e = cfg.experiment;
  if (e == "cone") r = run_cone(cfg, p);
  else if (e == "attach") r = run_attach(cfg, p);
  else if (e == "fibre-model") r = run_fibre_model(cfg, p);
  else if (e == "torpedo") r = run_torpedo(cfg, p);
  else if (e == "boot") r = run_boot(cfg, p);
  else if (e == "boot-search") r = run_boot_search(cfg, p);
  else if (e == "oneill") r = run_oneill(cfg, p);
  else if (e == "tau-bar") r = run_tau_bar(cfg, p);
  else if (e == "lift") r = run_lift(cfg, p);
  else if (e == "validate") r = run_validate(cfg, p);
  else if (e == "profile") r = run_profile(cfg, p);
  else if (e == "warped") r = run_warped(cfg, p);
  else if (e == "oracle") r = run_oracle(cfg, p);
  else config_error("experiment", "unknown experiment '" + e + "'");

  Json checks = Json::array();
  bool passed = r.passed;
  if (!cfg.expect.is_null()) {
    passed = true;
    const Json& e = cfg.expect;
    const double tol = e.value("tol", 1e-9);
    auto check = [&](const std::string& kind, const std::string& ptr, const Json& want) {
      const Json::json_pointer jp(ptr);
      Json got;
      bool ok = false;
      if (r.report.contains(jp)) {
        got = r.report.at(jp);
        if (kind == "equal") {
          if (want.is_number() && got.is_number()) {
            const double w = want.get<double>();
            ok = std::abs(got.get<double>() - w) <= tol * std::max(1.0, std::abs(w));
          } else {
            ok = got == want;
          }
        } else if (got.is_number()) {
          const double g = got.get<double>(), w = want.get<double>();
          ok = kind == "max" ? g <= w : g >= w;
        }
      }
      passed = passed && ok;
      checks.push_back({{"check", kind}, {"pointer", ptr}, {"expected", want},
                        {"actual", got}, {"ok", ok}});
    };
    if (e.contains("verdict")) check("equal", "/curvature/verdict", e.at("verdict"));
    if (e.contains("s_min")) check("equal", "/curvature/s_min", e.at("s_min"));
    if (e.contains("s_max")) check("equal", "/curvature/s_max", e.at("s_max"));
    if (e.contains("values"))
      for (const auto& [ptr, v] : e.at("values").items()) check("equal", ptr, v);
    if (e.contains("max"))
      for (const auto& [ptr, v] : e.at("max").items()) check("max", ptr, v);
    if (e.contains("min"))
      for (const auto& [ptr, v] : e.at("min").items()) check("min", ptr, v);
  }

  Json wrapped;
  wrapped["tool"] = "pscgeom";
  wrapped["version"] = kVersion;
  wrapped["experiment"] = e;
  wrapped["params"] = cfg.params;
  wrapped["passed"] = passed;
  if (!cfg.expect.is_null()) {
    wrapped["verdict_passed"] = r.passed;
    wrapped["expectations"] = std::move(checks);
  }
  wrapped["result"] = std::move(r.report);
  r.report = std::move(wrapped);
  r.passed = passed;
  return r;
}

std::string render(const ExperimentResult& result, const std::string& format) {
  if (format == "csv") return result.csv;
  return result.report.dump(2) + "\n";
}

namespace {

int exit_code_for(const Error& e) {
  return e.kind() == ErrorKind::SearchFailure ? kExitVerdict : kExitUsage;
}

int finish(const ExperimentConfig& cfg, const std::string& label,
           const std::optional<fs::path>& target, std::ostream& out, std::ostream& err) {
  const ExperimentResult result = run_experiment(cfg);
  const std::string text = render(result, cfg.format);
  if (target) {
    if (target->has_parent_path()) fs::create_directories(target->parent_path());
    std::ofstream f(*target, std::ios::binary);
    if (!f) fail(ErrorKind::ConfigError, "cannot write '" + target->string() + "'");
    f << text;
  } else {
    out << text;
  }
  err << label << ": " << cfg.experiment << " " << (result.passed ? "PASS" : "FAIL") << "\n";
  return result.passed ? kExitPass : kExitVerdict;
}

template <class F>
int guarded(const std::string& label, std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << label << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const nlohmann::json::exception& e) {
    err << label << ": ConfigError: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << label << ": ConfigError: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_one(const fs::path& config_path, const std::optional<fs::path>& out_dir,
            std::ostream& out, std::ostream& err) {
  return guarded(config_path.string(), err, [&] {
    const ExperimentConfig cfg = load_config(config_path);
    std::optional<fs::path> target;
    if (out_dir) {
      target = *out_dir / (config_path.stem().string() + "." + cfg.format);
    } else if (cfg.output_path) {
      target = cfg.base_dir / *cfg.output_path;
    }
    return finish(cfg, config_path.string(), target, out, err);
  });
}

}  // namespace

int run_json(const Json& config, const fs::path& base_dir, const std::string& label,
             std::ostream& out, std::ostream& err) {
  return guarded(label, err, [&] {
    const ExperimentConfig cfg = parse_config(config, base_dir);
    std::optional<fs::path> target;
    if (cfg.output_path) target = cfg.base_dir / *cfg.output_path;
    return finish(cfg, label, target, out, err);
  });
}

int run_path(const fs::path& path, const std::optional<fs::path>& out_dir, std::ostream& out,
             std::ostream& err) {
  if (!fs::is_directory(path)) return run_one(path, out_dir, out, err);
  std::vector<fs::path> configs;
  for (const auto& entry : fs::directory_iterator(path))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      configs.push_back(entry.path());
  std::sort(configs.begin(), configs.end());
  if (configs.empty()) {
    err << path.string() << ": no *.json configs\n";
    return kExitUsage;
  }
  int worst = kExitPass;
  for (const auto& c : configs) {
    const int code = run_one(c, out_dir, out, err);
    if (code == kExitUsage || worst == kExitUsage) worst = kExitUsage;
    else worst = std::max(worst, code);
  }
  return worst;
}

}  // namespace pscgeom
