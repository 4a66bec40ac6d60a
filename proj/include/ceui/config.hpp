// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration: flat sectioned `key = value` text (INI). Sections
//
//   [probe]       fc fs bw_frac c emit_x recv_x
//   [medium]      preset seed attenuation alpha cyst_amplitude cyst_frequency
//   [scatterer.N] motion z0 f_osc peak_to_peak v t_start t_stop knots centre strain frequency
//                 echo amplitude blinks scale seed
//   [emission]    mode sigma seed duration cycles_per_chip pe_baseline
//   [windows]     n_e step r_max
//   [decode]      filters mainlobe_halfwidth loading decimate
//   [mmode]       upsample z_min z_max dz compounding db_range envelope
//   [metrics]     depths peak_window noise_band blink_depth blink_threshold islr_margin islr_mainlobe
//   [noise]       snr_db seed
//   [output]      dir png signals
//   [doppler]     velocities z0 duration
//
// Lists are comma separated; knots are `t:z` pairs and blinks `t_on:t_off:amplitude`
// triples separated by `;`. Unknown keys and sections are rejected.

#pragma once

#include "ceui/decode.hpp"
#include "ceui/medium.hpp"
#include "ceui/mmode.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ceui {

enum class EmissionMode { ceui, pe };

std::string_view to_string(EmissionMode mode);

/// Parse or validation failure; the message names the file, line or field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  ProbeConfig probe;

  std::string preset;  ///< empty when the scatterers are listed explicitly
  std::uint64_t medium_seed = 1;
  std::vector<ScattererTrajectory> scatterers;
  AttenuationModel attenuation;
  PresetOptions preset_options;

  EmissionMode mode = EmissionMode::ceui;
  bool pe_baseline = true;  ///< ceui mode also runs the Barker-13 pulse-echo baseline
  double sigma = 1.0;
  std::uint64_t emission_seed = 7;
  double duration = 500e-6;
  int cycles_per_chip = 1;

  Index n_e = 251;
  Index step = 21;
  double r_max = 0.04;

  std::vector<FilterKind> filters{FilterKind::matched, FilterKind::mismatched_islr};
  std::optional<Index> mainlobe_halfwidth;  ///< default: default_mainlobe_halfwidth(probe)
  double loading = 1e-2;
  Index decimate = 1;  ///< decode every decimate-th window

  int upsample = 4;
  std::optional<double> z_min;
  std::optional<double> z_max;
  std::optional<double> dz;  ///< default lambda / 8
  int compounding = 0;
  double db_range = 40.0;
  EnvelopeOrder envelope = EnvelopeOrder::analytic;

  std::vector<double> depths;          ///< PSNR depths; default: the static scatterer depths
  std::optional<double> peak_window;   ///< default lambda
  double noise_band = 5e-3;
  double blink_depth = 0.03;
  double blink_threshold = 0.3;
  std::optional<double> islr_margin;    ///< region beyond the true depth sweep, default lambda
  std::optional<double> islr_mainlobe;  ///< mainlobe half-width in depth, default lambda / 4

  double snr_db = 10.0;  ///< +inf disables the noise
  std::uint64_t noise_seed = 11;

  std::filesystem::path out_dir = "out";
  bool write_png = true;
  bool write_signals = true;

  std::vector<double> doppler_velocities{0.5, 1.0, 2.0, 3.0, 4.0};
  double doppler_z0 = 0.03;
  double doppler_duration = 1e-3;

  /// Every seed derived from one base seed (medium, emission, noise).
  void reseed(std::uint64_t base);

  Index effective_mainlobe_halfwidth() const;
  double effective_peak_window() const;
  double effective_islr_margin() const;
  double effective_islr_mainlobe() const;
  Index echo_samples() const;
};

/// Defaults for a preset name: duration, compounding, r_max, n_e.
ScenarioConfig preset_defaults(std::string_view preset);

ScenarioConfig parse_config(const std::string& text, const std::string& origin = "<string>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Cross-field checks; throws ConfigError naming the violated rule.
void validate(const ScenarioConfig& config);

/// Scatterers of the configured medium (preset or explicit list).
Medium build_medium(const ScenarioConfig& config);

/// Flat key/value view of the resolved configuration, section.key ordered.
std::vector<std::pair<std::string, std::string>> describe(const ScenarioConfig& config);

}  // namespace ceui
