// SPDX-License-Identifier: Apache-2.0
//
// ceui simulate|reconstruct|run|compare|doppler-sweep

#include "ceui/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return nlohmann::json::parse(in);
}

void print_images(const nlohmann::json& manifest) {
  for (const auto& [label, image] : manifest["images"].items()) {
    std::cout << label << '\n';
    for (const auto& [k, v] : image["metrics"].items())
      std::cout << "  " << k << " = " << (v.is_number() ? std::to_string(v.get<double>()) : std::string("nan")) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous emission ultrasound imaging simulator and reconstruction"};
  app.require_subcommand(1);

  ceui::RunOptions options;
  std::optional<std::uint64_t> seed;
  std::optional<ceui::Index> decimate;
  std::string out_dir;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "base seed for medium, emission and noise");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--decimate-decode", decimate, "decode every N-th window")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", options.threads, "worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
  };

  std::string config_path;
  std::string rf_path;
  std::string manifest_a;
  std::string manifest_b;
  std::optional<std::string> label_a;
  std::optional<std::string> label_b;

  auto* sim = app.add_subcommand("simulate", "synthesise the RF signals only");
  sim->add_option("config", config_path, "scenario configuration")->required()->check(CLI::ExistingFile);
  add_common(sim);

  auto* rec = app.add_subcommand("reconstruct", "decode a stored received signal into M-mode images");
  rec->add_option("config", config_path, "scenario configuration")->required()->check(CLI::ExistingFile);
  rec->add_option("rf", rf_path, "received signal (.f32 with .hdr sidecar)")->required()->check(CLI::ExistingFile);
  add_common(rec);

  auto* run = app.add_subcommand("run", "simulate, decode, image and evaluate");
  run->add_option("config", config_path, "scenario configuration")->required()->check(CLI::ExistingFile);
  add_common(run);

  auto* cmp = app.add_subcommand("compare", "metric deltas between two runs");
  cmp->add_option("manifest_a", manifest_a)->required()->check(CLI::ExistingFile);
  cmp->add_option("manifest_b", manifest_b)->required()->check(CLI::ExistingFile);
  cmp->add_option("--image-a", label_a, "image label in the first manifest");
  cmp->add_option("--image-b", label_b, "image label in the second manifest");

  auto* dop = app.add_subcommand("doppler-sweep", "Doppler shift versus scatterer velocity");
  dop->add_option("config", config_path, "scenario configuration")->required()->check(CLI::ExistingFile);
  add_common(dop);

  CLI11_PARSE(app, argc, argv);

  try {
    options.seed = seed;
    options.decimate = decimate;
    if (!out_dir.empty()) options.out_dir = out_dir;

    if (cmp->parsed()) {
      std::cout << ceui::format_compare(ceui::compare_runs(read_json(manifest_a), read_json(manifest_b), label_a, label_b));
      return 0;
    }
    const ceui::ScenarioConfig config = ceui::load_config(config_path);
    if (sim->parsed()) {
      const auto m = ceui::simulate(config, options);
      std::cout << "wrote " << m["files"].size() << " files\n";
    } else if (rec->parsed()) {
      print_images(ceui::reconstruct(config, rf_path, options));
    } else if (run->parsed()) {
      print_images(ceui::run_scenario(config, options));
    } else if (dop->parsed()) {
      std::printf("%12s %14s %14s %10s\n", "v_m_s", "expected_hz", "measured_hz", "rel_error");
      for (const auto& p : ceui::doppler_sweep(config, options))
        std::printf("%12.3f %14.3f %14.3f %10.4f\n", p.velocity, p.expected, p.measured, p.relative_error);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
