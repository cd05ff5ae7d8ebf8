// Regenerates the bundled synthetic dataset under data/: one solar and
// two wind stations (60 days, fixed seed), the default microgrid config,
// and a pipeline run config. Usage: make_dataset [output-dir]

#include "microgrid/io.hpp"
#include "microgrid/synthetic.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace microgrid;
namespace fs = std::filesystem;

int main(int argc, char** argv) {
  const fs::path outdir = argc > 1 ? argv[1] : "data";
  fs::create_directories(outdir);

  SyntheticDataset data = generate_dataset();
  write_meteo_csv(outdir / "solar_kps.csv", data.solar);
  write_meteo_csv(outdir / "wind_tcn.csv", data.wind_night);
  write_meteo_csv(outdir / "wind_skd.csv", data.wind_day);

  SpecConfig config;
  config.spec = default_spec();
  config.budget = 6e6;
  std::ofstream(outdir / "microgrid.json") << spec_config_to_json(config);

  std::ofstream(outdir / "run_config.json") << R"({
  "solar_csv": "solar_kps.csv",
  "wind_csv": "wind_tcn.csv",
  "spec": "microgrid.json",
  "keep": 10,
  "budget_sweep_points": 5,
  "error_sweep_pcts": [0, 5, 10, 15, 20],
  "output": "../report_out"
}
)";

  std::cout << "wrote dataset to " << outdir.string() << "\n";
  return 0;
}
