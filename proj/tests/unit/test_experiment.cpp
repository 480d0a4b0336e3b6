#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pscgeom/error.hpp"
#include "pscgeom/experiment.hpp"

using namespace pscgeom;
namespace fs = std::filesystem;

namespace {

std::string config_error_text(const Json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    return e.what();
  }
  FAIL("config accepted");
  return {};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pscgeom_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const Json& j) { std::ofstream(p) << j.dump(2); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Json kCone = {{"experiment", "cone"}, {"params", {{"link", "S3"}}}};

}  // namespace

TEST_CASE("every experiment name is known to the parser") {
  for (const auto& name : experiment_names())
    CHECK_NOTHROW(parse_config({{"experiment", name}}));
  CHECK(experiment_names().size() >= 10);
}

TEST_CASE("unknown keys are rejected with the field named") {
  CHECK(config_error_text({{"experiment", "cone"}, {"colour", 1}}).find("config.colour") !=
        std::string::npos);
  CHECK(config_error_text({{"experiment", "cone"}, {"params", {{"radius", 1}}}})
            .find("params.radius") != std::string::npos);
  CHECK(config_error_text({{"experiment", "cone"}, {"output", {{"dir", "x"}}}})
            .find("output.dir") != std::string::npos);
  CHECK(config_error_text({{"experiment", "cone"}, {"grid", {{"points", 1}}}})
            .find("grid.points") != std::string::npos);
  CHECK(config_error_text({{"experiment", "cone"}, {"output", {{"format", "xml"}}}})
            .find("output.format") != std::string::npos);
  CHECK(config_error_text({{"experiment", "warp-drive"}}).find("experiment") != std::string::npos);
  CHECK(config_error_text(Json::object()).find("experiment") != std::string::npos);
  CHECK(config_error_text({{"experiment", "cone"}, {"expect", {{"max", {{"/x", "big"}}}}}})
            .find("expect.max") != std::string::npos);
  CHECK(config_error_text({{"experiment", "cone"}, {"expect", {{"values", {{"no-slash", 1}}}}}})
            .find("expect.values") != std::string::npos);
}

TEST_CASE("expectations decide pass or fail") {
  ExperimentConfig c = parse_config(kCone);
  CHECK(run_experiment(c).passed);

  Json good = kCone;
  good["expect"] = {{"verdict", "Flat"}, {"values", {{"/c_L", 1.0}}}};
  CHECK(run_experiment(parse_config(good)).passed);

  Json bad = kCone;
  bad["expect"] = {{"verdict", "Positive"}};
  const ExperimentResult r = run_experiment(parse_config(bad));
  CHECK_FALSE(r.passed);
  CHECK(r.report["passed"] == false);

  Json bound = kCone;
  bound["expect"] = {{"max", {{"/curvature/s_max", 1e-8}}}, {"min", {{"/curvature/s_min", -1e-8}}}};
  CHECK(run_experiment(parse_config(bound)).passed);

  Json missing = kCone;
  missing["expect"] = {{"values", {{"/no/such/value", 1}}}};
  CHECK_FALSE(run_experiment(parse_config(missing)).passed);
}

TEST_CASE("report envelope") {
  const ExperimentResult r = run_experiment(parse_config(kCone));
  CHECK(r.report["tool"] == "pscgeom");
  CHECK(r.report["experiment"] == "cone");
  CHECK(r.report.contains("params"));
  CHECK(r.report.contains("result"));
  const std::string text = render(r, "json");
  CHECK(text.back() == '\n');
  CHECK(Json::parse(text) == r.report);
}

TEST_CASE("run_path exit codes") {
  const fs::path dir = fresh_dir("exit_codes");
  write(dir / "pass.json", kCone);
  Json fail_verdict = kCone;
  fail_verdict["expect"] = {{"verdict", "Positive"}};
  write(dir / "verdict.json", fail_verdict);
  write(dir / "usage.json", {{"experiment", "torpedo"}, {"params", {{"n", 2}, {"delta", 1}}}});

  std::ostringstream out, err;
  CHECK(run_path(dir / "pass.json", std::nullopt, out, err) == kExitPass);
  CHECK(Json::parse(out.str())["experiment"] == "cone");
  CHECK(run_path(dir / "verdict.json", std::nullopt, out, err) == kExitVerdict);
  CHECK(run_path(dir / "usage.json", std::nullopt, out, err) == kExitUsage);
  CHECK(err.str().find("DimensionError") != std::string::npos);
  CHECK(run_path(dir, dir / "out", out, err) == kExitUsage);
  CHECK(fs::exists(dir / "out" / "pass.json"));
  CHECK(fs::exists(dir / "out" / "verdict.json"));

  fs::remove(dir / "usage.json");
  CHECK(run_path(dir, dir / "out", out, err) == kExitVerdict);
  CHECK(run_path(dir / "missing.json", std::nullopt, out, err) == kExitUsage);
}

TEST_CASE("output.path resolves against the config file") {
  const fs::path dir = fresh_dir("output_path");
  fs::create_directories(dir / "sub");
  Json c = kCone;
  c["output"] = {{"path", "cone_report.json"}};
  write(dir / "sub" / "cone.json", c);
  std::ostringstream out, err;
  CHECK(run_path(dir / "sub" / "cone.json", std::nullopt, out, err) == kExitPass);
  CHECK(out.str().empty());
  CHECK(fs::exists(dir / "sub" / "cone_report.json"));
}

TEST_CASE("csv output format") {
  Json c = kCone;
  c["output"] = {{"format", "csv"}};
  const ExperimentResult r = run_experiment(parse_config(c));
  const std::string text = render(r, "csv");
  CHECK(text.rfind("t,s\n", 0) == 0);
}

TEST_CASE("batch runs over the fixture corpus are byte-identical") {
  const fs::path a = fresh_dir("batch_a"), b = fresh_dir("batch_b");
  std::ostringstream out, err;
  CHECK(run_path(PSCGEOM_FIXTURES, a, out, err) == kExitPass);
  CHECK(run_path(PSCGEOM_FIXTURES, b, out, err) == kExitPass);
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  }
  CHECK(files >= 50);
}

TEST_CASE("profile_from_spec accepts builders and serialized profiles") {
  const Profile t = profile_from_spec({{"builder", "transition"}, {"eps0", 0.1}, {"eps1", 0.2}});
  CHECK(t(0.0) == 0.5);
  const Profile p =
      profile_from_spec({{"builder", "torpedo"}, {"delta", 1.0}, {"lambda", 0.0}, {"power", 2.0}});
  CHECK(p(p.domain().hi) == doctest::Approx(1.0));
  const Profile q = profile_from_spec(profile_to_json(t));
  CHECK(q(0.4) == t(0.4));
  CHECK_THROWS_AS(profile_from_spec({{"builder", "spiral"}}), Error);
  CHECK_THROWS_AS(profile_from_spec({{"builder", "transition"}, {"radius", 1.0}}), Error);
}

TEST_CASE("command-line tool") {
  const std::string cli = PSCGEOM_CLI;
  const fs::path dir = fresh_dir("cli");
  auto run = [&](const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > \"" + (dir / "stdout").string() +
                            "\" 2> \"" + (dir / "stderr").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  CHECK(run("cone --link S3") == 0);
  CHECK(Json::parse(slurp(dir / "stdout"))["result"]["curvature"]["verdict"] == "Flat");
  CHECK(run("torpedo --n 2 --delta 1") == 1);
  CHECK(slurp(dir / "stderr").find("DimensionError") != std::string::npos);
  CHECK(run("run \"" + std::string(PSCGEOM_FIXTURES) + "/cli_cone_s3.json\"") == 0);
  CHECK(run("validate --list") == 0);
  CHECK(run("validate --fixture doubly_m2 --corrupt") == 2);
  CHECK(run("no-such-command") == 1);
}
