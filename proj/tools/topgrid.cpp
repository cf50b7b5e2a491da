// Copyright 2026 The topgrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "topgrid/app.hpp"
#include "topgrid/io/config.hpp"
#include "topgrid/io/netpbm.hpp"

namespace {

std::string joined_names() {
  std::string s;
  for (const auto& n : topgrid::synth::scenario_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  using namespace topgrid;

  CLI::App cli{"topgrid: multi-camera pedestrian top-view pipeline"};
  cli.require_subcommand(1);

  std::string config_path;
  auto* run = cli.add_subcommand("run", "Run the pipeline over a configured sequence");
  run->add_option("--config", config_path, "Run configuration (INI)")->required();

  std::string scenario;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  auto* synth = cli.add_subcommand("synth", "Render a synthetic scenario to disk");
  synth->add_option("scenario", scenario, "Scenario name or scenario JSON file")->required();
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--seed", seed, "Override the scenario seed");

  int warmup = 10;
  int measure = 50;
  auto* bench = cli.add_subcommand("bench", "Measure pipeline throughput against a decode-only loop");
  bench->add_option("--config", config_path, "Run configuration (INI)")->required();
  bench->add_option("--warmup", warmup, "Frames processed before timing starts");
  bench->add_option("--measure", measure, "Frames timed per repeat");

  CLI11_PARSE(cli, argc, argv);

  try {
    if (run->parsed()) {
      app::run(io::load_config(config_path), &std::cerr);
    } else if (synth->parsed()) {
      std::optional<synth::Scenario> s = synth::find_scenario(scenario);
      if (!s) {
        if (!fs::is_regular_file(scenario)) {
          std::cerr << "topgrid: unknown scenario '" << scenario
                    << "'; valid names: " << joined_names() << "\n";
          return 2;
        }
        s = synth::scenario_from_json(io::read_file(scenario));
      }
      if (seed) s->seed = *seed;
      app::synth(*s, out_dir);
    } else if (bench->parsed()) {
      std::cout << app::format_bench(app::bench(io::load_config(config_path), warmup, measure));
    }
  } catch (const std::exception& e) {
    std::cerr << "topgrid: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
