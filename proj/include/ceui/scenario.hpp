// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration: emission, medium, RF synthesis, windowed decoding,
// M-mode assembly and metrics for the continuous emission (matched and ISLR
// mismatched filters) and the Barker-13 pulse-echo baseline, plus the artifacts
// and manifest of a run.
//
// Output directory layout of `run`:
//   signals/<mode>_x.f32(.hdr)   transmitted signal x = e * i
//   signals/<mode>_y.f32(.hdr)   received signal
//   images/<label>.csv|.png      M-mode images, label in {ceui_mf, ceui_mmf, pe}
//   metrics/<label>.txt          key = value report per image
//   metrics.csv                  label,metric,value table
//   manifest.json                resolved configuration, seeds, inventory, timings

#pragma once

#include "ceui/config.hpp"
#include "ceui/metrics.hpp"
#include "ceui/rfsim.hpp"
#include "ceui/waveform.hpp"
#include "ceui/window.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ceui {

/// Command-line overrides; `threads` never changes a result.
struct RunOptions {
  int threads = 1;
  std::optional<Index> decimate;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
};

/// Thrown by the runner; the message starts with the failing stage.
class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

ScenarioConfig apply_options(ScenarioConfig config, const RunOptions& options);

struct CeuiSignals {
  RfRecord x;     ///< transmitted e * i
  RfRecord x_pe;  ///< reference x * i
  RfRecord y;     ///< received, noise included
};

struct PeSignals {
  PulseTrain train;
  RfRecord x;
  RfRecord x_pe;
  RfRecord y;
};

Index acquisition_samples(const ScenarioConfig& config);

/// Regenerates the transmitted signal and reference of a configuration.
CeuiSignals ceui_emission(const ScenarioConfig& config);
PeSignals pe_emission(const ScenarioConfig& config);

CeuiSignals simulate_ceui(const ScenarioConfig& config, const Medium& medium, int threads);
PeSignals simulate_pe(const ScenarioConfig& config, const Medium& medium, int threads);

/// Depth grid of the configuration for compressed lines of n_lags samples.
DepthGrid resolve_grid(const ScenarioConfig& config, Index n_lags);

/// Windowed decoding of every decimate-th window with one filter kind.
MModeImage reconstruct_ceui(const RfRecord& x_pe, const RfRecord& y, const ScenarioConfig& config,
                            FilterKind kind, int threads);

/// One matched-filter line per emitted pulse. The reference spans the pulse plus
/// twice the transducer kernel half-width on each side; lag 0 is an echo starting
/// with the reference.
MModeImage reconstruct_pe(const PeSignals& pe, const ScenarioConfig& config);

/// Depth interval swept by the echogenic scatterers of interest (background
/// speckle excluded), over the acquisition.
std::pair<double, double> truth_sweep(const Medium& medium, const ScenarioConfig& config);

/// Depths used for PSNR when the configuration lists none: the static scatterer depths.
std::vector<double> default_psnr_depths(const Medium& medium, const ScenarioConfig& config);

/// Runs of a blink row closer than half the reference duration count as one event:
/// every column already integrates T_E of slow time.
double blink_merge_gap(const ScenarioConfig& config);

/// Named scalar metrics of one image; metrics that cannot be evaluated are NaN.
std::map<std::string, double> evaluate_image(const MModeImage& image, const Medium& medium,
                                             const ScenarioConfig& config);

/// Full pipeline; writes the artifacts and returns the manifest.
nlohmann::json run_scenario(const ScenarioConfig& config, const RunOptions& options);

/// RF only: signals and manifest.
nlohmann::json simulate(const ScenarioConfig& config, const RunOptions& options);

/// Decodes a stored received signal; the reference is regenerated from the configuration.
nlohmann::json reconstruct(const ScenarioConfig& config, const std::filesystem::path& rf_path,
                           const RunOptions& options);

struct CompareRow {
  std::string label_a;
  std::string label_b;
  std::string metric;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;  ///< a - b
  double ratio = 0.0;  ///< a / b
};

/// Metric deltas between images of two manifests. Without labels, every label
/// present in both is paired with itself. Throws std::invalid_argument when the
/// depth grids of a pair differ.
std::vector<CompareRow> compare_runs(const nlohmann::json& manifest_a, const nlohmann::json& manifest_b,
                                     const std::optional<std::string>& label_a = std::nullopt,
                                     const std::optional<std::string>& label_b = std::nullopt);

std::string format_compare(const std::vector<CompareRow>& rows);

struct DopplerPoint {
  double velocity = 0.0;  ///< rate of decrease of the emitter-scatterer-receiver path (m/s)
  double expected = 0.0;  ///< fc v / c
  double measured = 0.0;
  double relative_error = 0.0;
};

/// Scatterer whose bistatic path shortens at `velocity` from depth z0, as
/// piecewise-linear knots every `knot_step` seconds.
ScattererTrajectory path_rate_trajectory(double z0, double velocity, double duration, const ProbeConfig& probe,
                                         double knot_step = 1e-6);

/// Tone at fc reflected by a path_rate_trajectory scatterer; shift estimated on
/// the part of the record after the echo has arrived.
DopplerPoint doppler_point(const ScenarioConfig& config, double velocity, int threads);

std::vector<DopplerPoint> doppler_sweep(const ScenarioConfig& config, const RunOptions& options);

}  // namespace ceui
