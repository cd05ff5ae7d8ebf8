#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "microgrid/io.hpp"
#include "microgrid/synthetic.hpp"
#include "test_helpers.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace microgrid;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("microgrid_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MICROGRID_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

SpecConfig tiny_config() {
  SpecConfig config;
  config.spec = default_spec(1);
  config.spec.days = 200;
  config.budget = 250000.0;
  config.solver.tolerance = 1e-4;
  return config;
}

}  // namespace

TEST_CASE("ISO-8601 parsing and formatting round trip") {
  CHECK(parse_iso8601("1970-01-01T00:00:00") == 0);
  CHECK(parse_iso8601("1970-01-01 01:00:00") == 3600);
  CHECK(parse_iso8601("2012-09-01T00:00:00") == 1346457600);
  CHECK(format_iso8601(1346457600) == "2012-09-01T00:00:00");
  for (std::int64_t t : {0LL, 1346457600LL, 1700000000LL}) {
    CHECK(parse_iso8601(format_iso8601(t)) == t);
  }
  CHECK_THROWS_AS(parse_iso8601("2012/09/01 00:00"), Error);
  CHECK_THROWS_AS(parse_iso8601("2012-13-01T00:00:00"), Error);
  CHECK_THROWS_AS(parse_iso8601("garbage"), Error);
}

TEST_CASE("meteo CSV round trip and header check") {
  auto dir = fresh_dir("meteo");
  SyntheticDataset data = generate_dataset(3);
  write_meteo_csv(dir / "w.csv", data.wind_night);
  MeteoSeries back = read_meteo_csv(dir / "w.csv", MeteoKind::WindSpeed, "TCN");
  CHECK(back.days() == 3);
  CHECK((back.values - data.wind_night.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.timestamps == data.wind_night.timestamps);

  std::ofstream(dir / "bad.csv") << "time,val\n2012-09-01T00:00:00,1\n";
  CHECK_THROWS_AS(read_meteo_csv(dir / "bad.csv", MeteoKind::WindSpeed), Error);
}

TEST_CASE("profile CSV round trip") {
  auto dir = fresh_dir("profiles");
  std::mt19937_64 rng(1);
  std::vector<RenewableProfile> days;
  for (int d = 0; d < 4; ++d) days.push_back({testutil::random_vec(rng, 24, 0.0, 1.0)});
  write_profiles_csv(dir / "p.csv", days);
  auto back = read_profiles_csv(dir / "p.csv");
  REQUIRE(back.size() == 4);
  for (int d = 0; d < 4; ++d) {
    CHECK((back[d].hours - days[d].hours).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("scenario JSON round trip preserves the set exactly") {
  std::mt19937_64 rng(2);
  ScenarioSet set;
  for (int w = 0; w < 5; ++w) {
    Scenario s = testutil::random_scenario(rng, 24);
    s.probability = 0.2;
    set.scenarios.push_back(std::move(s));
  }
  ScenarioSet back = scenario_set_from_json(scenario_set_to_json(set));
  REQUIRE(back.size() == set.size());
  for (int w = 0; w < set.size(); ++w) {
    CHECK(back[w].probability == set[w].probability);
    CHECK((back[w].solar - set[w].solar).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back[w].wind - set[w].wind).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(scenario_set_from_json("{}"), Error);
}

TEST_CASE("spec config parsing applies defaults and validates") {
  SpecConfig config = tiny_config();
  const std::string text = spec_config_to_json(config);
  SpecConfig back = spec_config_from_json(text);
  CHECK(back.spec.horizon == 24);
  CHECK(back.spec.days == 200);
  CHECK(back.budget == 250000.0);
  CHECK(back.costs.solar == 12480.0);

  // section defaults from the published case study
  const std::string minimal = R"({
    "inelastic_load": [1, 1],
    "horizon": 2,
    "users": [{"load_min": [0, 0], "load_max": [4, 4], "preferred": [1, 2]}]
  })";
  SpecConfig m = spec_config_from_json(minimal);
  CHECK(m.spec.operator_coeff == 0.005);
  CHECK(m.spec.users[0].discomfort_coeff == 0.5);
  CHECK(m.spec.users[0].total_demand == 3.0);
  CHECK(m.costs.wind == 7800.0);
  CHECK(m.spec.days == 3650);

  // invariant violations surface as infeasibility errors
  const std::string bad = R"({
    "inelastic_load": [1, 1],
    "horizon": 2,
    "users": [{"load_min": [5, 5], "load_max": [4, 4], "preferred": [1, 2]}]
  })";
  CHECK_THROWS_AS(spec_config_from_json(bad), InfeasibleError);
}

TEST_CASE("emitted reports carry the schema version and loaders enforce it") {
  std::mt19937_64 rng(3);
  MicrogridSpec spec = testutil::random_spec(rng, 1, 4);
  Portfolio pf;
  pf.solar_kw = 2;
  pf.budget = 1e9;
  Scenario sc = testutil::random_scenario(rng, 4);
  auto sol = solve_central(spec, pf, sc, SolverConfig{});

  const std::string text = dispatch_to_json(sol);
  CHECK_NOTHROW(require_report_version(text));
  CHECK_THROWS_AS(require_report_version("{\"version\": 999}"), Error);
  CHECK_THROWS_AS(require_report_version("{}"), Error);
  CHECK_THROWS_AS(require_report_version("not json"), Error);
}

TEST_CASE("trace CSV carries only iteration aggregates") {
  auto dir = fresh_dir("trace");
  std::vector<IterationRecord> trace{{1, 0.5, 10.0}, {2, 0.25, 9.5}};
  write_trace_csv(dir / "trace.csv", trace);
  const std::string text = slurp(dir / "trace.csv");
  std::istringstream lines(text);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "k,price_delta,objective");
  // nothing user-specific ever lands in the trace
  CHECK(text.find("beta") == std::string::npos);
  CHECK(text.find("load_min") == std::string::npos);
  std::string row;
  int rows = 0;
  while (std::getline(lines, row)) {
    if (!row.empty()) ++rows;
    CHECK(std::count(row.begin(), row.end(), ',') == 2);
  }
  CHECK(rows == 2);
}

TEST_CASE("cli pipeline: ingest, build, reduce, dispatch") {
  auto dir = fresh_dir("cli");
  SyntheticDataset data = generate_dataset(6);
  write_meteo_csv(dir / "solar.csv", data.solar);
  write_meteo_csv(dir / "wind.csv", data.wind_day);
  std::ofstream(dir / "spec.json") << spec_config_to_json(tiny_config());

  const std::string d = dir.string();
  CHECK(run_cli("ingest --input " + d + "/solar.csv --type solar --output " + d +
                "/solar_profiles.csv") == 0);
  CHECK(run_cli("ingest --input " + d + "/wind.csv --type wind --output " + d +
                "/wind_profiles.csv") == 0);
  CHECK(run_cli("scenarios build --solar " + d + "/solar_profiles.csv --wind " + d +
                "/wind_profiles.csv -o " + d + "/set.json") == 0);
  CHECK(run_cli("scenarios reduce --input " + d + "/set.json --keep 3 -o " + d +
                "/reduced.json") == 0);
  auto reduced = read_scenario_set(dir / "reduced.json");
  CHECK(reduced.size() == 3);

  CHECK(run_cli("dispatch --spec " + d + "/spec.json --scenario " + d +
                "/reduced.json --index 0 --wind-kw 60 --storage-kwh 40 -o " + d +
                "/disp") == 0);
  CHECK(fs::exists(dir / "disp" / "dispatch.json"));
  CHECK(fs::exists(dir / "disp" / "trace.csv"));
  CHECK_NOTHROW(require_report_version(slurp(dir / "disp" / "dispatch.json")));

  CHECK(run_cli("dispatch --spec " + d + "/spec.json --scenario " + d +
                "/reduced.json --mode decentralized --wind-kw 60 --storage-kwh 40 -o " +
                d + "/disp2") == 0);
  const std::string trace = slurp(dir / "disp2" / "trace.csv");
  CHECK(trace.rfind("k,price_delta,objective\n", 0) == 0);
  CHECK(trace.size() > std::string("k,price_delta,objective\n").size());
}

TEST_CASE("cli reports infeasible models with exit code 2") {
  auto dir = fresh_dir("cli_infeasible");
  SyntheticDataset data = generate_dataset(2);
  write_meteo_csv(dir / "solar.csv", data.solar);
  write_meteo_csv(dir / "wind.csv", data.wind_night);

  SpecConfig config = tiny_config();
  config.spec.users[0].total_demand = config.spec.users[0].load_max.sum() * 2.0;
  // write without validation: hand-edit the JSON
  SpecConfig valid = tiny_config();
  std::string text = spec_config_to_json(valid);
  auto pos = text.find("\"total_demand\"");
  REQUIRE(pos != std::string::npos);
  auto end = text.find('\n', pos);
  text.replace(pos, end - pos, "\"total_demand\": 1e9");
  std::ofstream(dir / "spec.json") << text;

  const std::string d = dir.string();
  REQUIRE(run_cli("ingest --input " + d + "/solar.csv --type solar --output " + d +
                  "/sp.csv") == 0);
  REQUIRE(run_cli("ingest --input " + d + "/wind.csv --type wind --output " + d +
                  "/wp.csv") == 0);
  REQUIRE(run_cli("scenarios build --solar " + d + "/sp.csv --wind " + d + "/wp.csv -o " +
                  d + "/set.json") == 0);
  CHECK(run_cli("dispatch --spec " + d + "/spec.json --scenario " + d + "/set.json -o " +
                d + "/out") == 2);
}

TEST_CASE("cli flags non-convergence with exit code 3") {
  auto dir = fresh_dir("cli_nonconv");
  SyntheticDataset data = generate_dataset(2);
  write_meteo_csv(dir / "wind.csv", data.wind_night);
  write_meteo_csv(dir / "solar.csv", data.solar);

  SpecConfig config = tiny_config();
  // the stopping rule compares consecutive prices, so it can never fire
  // within a single iteration
  config.solver.max_iterations = 1;
  std::ofstream(dir / "spec.json") << spec_config_to_json(config);

  const std::string d = dir.string();
  REQUIRE(run_cli("ingest --input " + d + "/solar.csv --type solar --output " + d +
                  "/sp.csv") == 0);
  REQUIRE(run_cli("ingest --input " + d + "/wind.csv --type wind --output " + d +
                  "/wp.csv") == 0);
  REQUIRE(run_cli("scenarios build --solar " + d + "/sp.csv --wind " + d + "/wp.csv -o " +
                  d + "/set.json") == 0);
  CHECK(run_cli("dispatch --spec " + d + "/spec.json --scenario " + d +
                "/set.json --mode decentralized --wind-kw 20 -o " + d + "/out") == 3);
}

TEST_CASE("identical configs give byte-identical outputs") {
  auto dir = fresh_dir("determinism");
  SyntheticDataset data = generate_dataset(4);
  write_meteo_csv(dir / "solar.csv", data.solar);
  write_meteo_csv(dir / "wind.csv", data.wind_day);
  SpecConfig config = tiny_config();
  std::ofstream(dir / "spec.json") << spec_config_to_json(config);

  const std::string d = dir.string();
  REQUIRE(run_cli("ingest --input " + d + "/solar.csv --type solar --output " + d +
                  "/sp.csv") == 0);
  REQUIRE(run_cli("ingest --input " + d + "/wind.csv --type wind --output " + d +
                  "/wp.csv") == 0);
  REQUIRE(run_cli("scenarios build --solar " + d + "/sp.csv --wind " + d + "/wp.csv -o " +
                  d + "/set.json") == 0);
  REQUIRE(run_cli("scenarios reduce --input " + d + "/set.json --keep 2 -o " + d +
                  "/red.json") == 0);
  for (const std::string out : {"a", "b"}) {
    REQUIRE(run_cli("invest --spec " + d + "/spec.json --scenarios " + d +
                    "/red.json --sweep-points 2 -o " + d + "/" + out) == 0);
  }
  CHECK(slurp(dir / "a" / "investment.json") == slurp(dir / "b" / "investment.json"));
  CHECK(slurp(dir / "a" / "budget_sweep.csv") == slurp(dir / "b" / "budget_sweep.csv"));
}
