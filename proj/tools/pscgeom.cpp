// Command-line front end.  `run` executes JSON configs; the per-experiment
// subcommands build the same config from flags.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "pscgeom/error.hpp"
#include "pscgeom/experiment.hpp"
#include "pscgeom/oracle.hpp"
#include "pscgeom/report_io.hpp"

namespace fs = std::filesystem;
using pscgeom::Json;

namespace {

// Flags shared by the experiment subcommands.
struct Common {
  int grid = 0;
  bool csv = false;
  bool samples = false;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--grid", c.grid, "Grid points (x points for 2-D experiments)")
      ->check(CLI::Range(2, 1 << 24));
  sub->add_flag("--csv", c.csv, "Emit CSV instead of JSON");
  sub->add_flag("--samples", c.samples, "Include every sample in the JSON report");
  sub->add_option("--out", c.out, "Write the report to this file");
}

Json make_config(const std::string& experiment, Json params, const Common& c) {
  Json cfg;
  cfg["experiment"] = experiment;
  if (c.samples) params["samples"] = true;
  cfg["params"] = std::move(params);
  if (c.grid > 0) cfg["grid"] = {{"points", c.grid}, {"x_points", c.grid}};
  Json output = Json::object();
  if (c.csv) output["format"] = "csv";
  if (!c.out.empty()) output["path"] = c.out;
  if (!output.empty()) cfg["output"] = std::move(output);
  return cfg;
}

// Only explicitly given flags reach the config, so library defaults apply.
template <class T>
void put(Json& params, const char* key, const CLI::Option* opt, const T& value) {
  if (opt->count() > 0) params[key] = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructs psc metric families and verifies their scalar curvature"};
  app.set_version_flag("--version", std::string(pscgeom::kVersion));
  app.require_subcommand(1);

  // run
  std::string run_target;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run a JSON config, or every *.json in a directory");
  run->add_option("config", run_target, "Config file or directory")->required();
  run->add_option("--out-dir", out_dir, "Write each report to <dir>/<config stem>.<format>");

  // sample
  std::string profile_path;
  int sample_points = 101;
  auto* sample = app.add_subcommand("sample", "Sample a profile as CSV t,phi,dphi,ddphi");
  sample->add_option("profile", profile_path, "Profile JSON (pieces or builder spec)")
      ->required()
      ->check(CLI::ExistingFile);
  sample->add_option("--points", sample_points, "Sample count")->check(CLI::Range(2, 1 << 24));

  // validate
  std::string fixture;
  double fd_h = 1e-3;
  bool corrupt = false;
  Common vc;
  auto* validate = app.add_subcommand("validate", "Check engines against the finite-difference oracle");
  auto* o_fixture = validate->add_option("--fixture", fixture, "Single fixture id");
  auto* o_h = validate->add_option("--step", fd_h, "Finite-difference step h");
  validate->add_flag("--corrupt", corrupt, "Flip an engine sign (negative control)");
  validate->add_flag("--list", "List fixture ids and exit");
  add_common(validate, vc);

  // experiment subcommands
  std::string link = "S3", fibre = "S1", variant = "full", fields;
  int n = 4, t_samples = 64;
  double delta = 1.0, lambda = 1.0, Lambda = 1.0, l1 = 1.0, l4 = 1.0, lambda2 = 1.0, bound = 0.0;
  double eps0 = 0.1, eps1 = 0.1, cyl_len = 1.0, tau = 1.0, tau0 = 1.0, tau_target = 1.0;
  bool hopf = false;
  Common ec;

  auto* cone = app.add_subcommand("cone", "Scalar-flat cone over a link");
  auto* o_cone_link = cone->add_option("--link", link, "S<k>, points, HP-like");
  add_common(cone, ec);

  auto* attach = app.add_subcommand("attach", "Attaching metric for a normalized link");
  auto* o_att_link = attach->add_option("--link", link, "S<k>, points, HP-like");
  auto* o_att_e0 = attach->add_option("--eps0", eps0);
  auto* o_att_e1 = attach->add_option("--eps1", eps1);
  add_common(attach, ec);

  auto* fibre_model = app.add_subcommand("fibre-model", "Cone + attaching + cylinder glued model");
  auto* o_fm_link = fibre_model->add_option("--link", link, "S<k>, points, HP-like");
  auto* o_fm_e0 = fibre_model->add_option("--eps0", eps0);
  auto* o_fm_e1 = fibre_model->add_option("--eps1", eps1);
  auto* o_fm_cyl = fibre_model->add_option("--cyl-len", cyl_len);
  add_common(fibre_model, ec);

  auto* torpedo = app.add_subcommand("torpedo", "Torpedo metric (full, half or stretched)");
  torpedo->add_option("--n", n, "Dimension")->required();
  auto* o_t_delta = torpedo->add_option("--delta", delta);
  auto* o_t_lambda = torpedo->add_option("--lambda", lambda);
  auto* o_t_variant = torpedo->add_option("--variant", variant)
                          ->check(CLI::IsMember({"full", "half", "stretched"}));
  auto* o_t_l2 = torpedo->add_option("--lambda2", lambda2);
  auto* o_t_bound = torpedo->add_option("--bound", bound, "Search delta so that s_min >= bound");
  add_common(torpedo, ec);

  auto* boot = app.add_subcommand("boot", "Boot metric at a given bending radius");
  boot->add_option("--n", n, "Dimension")->required();
  auto* o_b_delta = boot->add_option("--delta", delta);
  boot->add_option("--Lambda", Lambda, "Bending radius")->required();
  auto* o_b_l1 = boot->add_option("--l1", l1);
  auto* o_b_l4 = boot->add_option("--l4", l4);
  add_common(boot, ec);

  auto* boot_search = app.add_subcommand("boot-search", "Smallest psc bending radius");
  boot_search->add_option("--n", n, "Dimension")->required();
  auto* o_bs_delta = boot_search->add_option("--delta", delta);
  auto* o_bs_l1 = boot_search->add_option("--l1", l1);
  auto* o_bs_l4 = boot_search->add_option("--l4", l4);
  add_common(boot_search, ec);

  auto field_source = [&](CLI::App* sub) {
    auto* f = sub->add_option("--fields", fields, "CSV with point_id,s_h,A_sq[,u]");
    auto* h = sub->add_flag("--hopf", hopf, "Use the Hopf fibration fields");
    f->excludes(h);
    return f;
  };
  auto* oneill = app.add_subcommand("oneill", "O'Neill scalar curvature of a submersion");
  field_source(oneill);
  auto* o_on_fibre = oneill->add_option("--fibre", fibre);
  auto* o_on_tau = oneill->add_option("--tau", tau);
  add_common(oneill, ec);

  auto* tau_bar = app.add_subcommand("tau-bar", "Safe fibre scale of a family");
  field_source(tau_bar);
  auto* o_tb_fibre = tau_bar->add_option("--fibre", fibre);
  add_common(tau_bar, ec);

  auto* lift = app.add_subcommand("lift", "Lift a psc path via a fibre-rescaling collar");
  field_source(lift);
  auto* o_l_fibre = lift->add_option("--fibre", fibre);
  auto* o_l_tau0 = lift->add_option("--tau0", tau0);
  lift->add_option("--tau-target", tau_target)->required();
  auto* o_l_ts = lift->add_option("--t-samples", t_samples);
  add_common(lift, ec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; every other parse error is a usage error.
    return app.exit(e) == 0 ? pscgeom::kExitPass : pscgeom::kExitUsage;
  }

  std::ostream& out = std::cout;
  std::ostream& err = std::cerr;
  const fs::path cwd = fs::current_path();

  if (run->parsed()) {
    std::optional<fs::path> dir;
    if (!out_dir.empty()) dir = out_dir;
    return pscgeom::run_path(run_target, dir, out, err);
  }

  if (sample->parsed()) {
    try {
      std::ifstream in(profile_path);
      const Json j = Json::parse(in);
      out << pscgeom::sample_csv(pscgeom::profile_from_spec(j), sample_points);
      return pscgeom::kExitPass;
    } catch (const pscgeom::Error& e) {
      err << profile_path << ": " << e.what() << "\n";
    } catch (const nlohmann::json::exception& e) {
      err << profile_path << ": ConfigError: " << e.what() << "\n";
    }
    return pscgeom::kExitUsage;
  }

  if (validate->parsed()) {
    if (validate->count("--list") > 0) {
      for (const auto& id : pscgeom::fixture_ids()) out << id << "\n";
      return pscgeom::kExitPass;
    }
    Json params = Json::object();
    put(params, "fixture", o_fixture, fixture);
    put(params, "h", o_h, fd_h);
    if (corrupt) params["corrupt"] = true;
    return pscgeom::run_json(make_config("validate", params, vc), cwd, "validate", out, err);
  }

  Json params = Json::object();
  std::string name;
  if (cone->parsed()) {
    name = "cone";
    put(params, "link", o_cone_link, link);
  } else if (attach->parsed()) {
    name = "attach";
    put(params, "link", o_att_link, link);
    put(params, "eps0", o_att_e0, eps0);
    put(params, "eps1", o_att_e1, eps1);
  } else if (fibre_model->parsed()) {
    name = "fibre-model";
    put(params, "link", o_fm_link, link);
    put(params, "eps0", o_fm_e0, eps0);
    put(params, "eps1", o_fm_e1, eps1);
    put(params, "cyl_len", o_fm_cyl, cyl_len);
  } else if (torpedo->parsed()) {
    name = "torpedo";
    params["n"] = n;
    put(params, "delta", o_t_delta, delta);
    put(params, "lambda", o_t_lambda, lambda);
    put(params, "variant", o_t_variant, variant);
    put(params, "lambda2", o_t_l2, lambda2);
    put(params, "bound", o_t_bound, bound);
  } else if (boot->parsed()) {
    name = "boot";
    params["n"] = n;
    params["Lambda"] = Lambda;
    put(params, "delta", o_b_delta, delta);
    put(params, "l1", o_b_l1, l1);
    put(params, "l4", o_b_l4, l4);
  } else if (boot_search->parsed()) {
    name = "boot-search";
    params["n"] = n;
    put(params, "delta", o_bs_delta, delta);
    put(params, "l1", o_bs_l1, l1);
    put(params, "l4", o_bs_l4, l4);
  } else {
    CLI::App* sub = oneill->parsed() ? oneill : tau_bar->parsed() ? tau_bar : lift;
    name = sub->get_name();
    if (hopf) params["hopf"] = true;
    if (!fields.empty()) params["fields"] = fs::absolute(fields).string();
    if (oneill->parsed()) {
      put(params, "fibre", o_on_fibre, fibre);
      put(params, "tau", o_on_tau, tau);
    } else if (tau_bar->parsed()) {
      put(params, "fibre", o_tb_fibre, fibre);
    } else {
      put(params, "fibre", o_l_fibre, fibre);
      put(params, "tau0", o_l_tau0, tau0);
      params["tau_target"] = tau_target;
      put(params, "t_samples", o_l_ts, t_samples);
    }
  }
  return pscgeom::run_json(make_config(name, params, ec), cwd, name, out, err);
}
