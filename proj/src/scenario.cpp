// SPDX-License-Identifier: Apache-2.0

#include "ceui/scenario.hpp"

#include "ceui/io.hpp"
#include "ceui/parallel.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace ceui {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

// Samples [start, start + length) of r, zero outside its support.
VectorXd segment_padded(const RfRecord& r, Index start, Index length) {
  VectorXd out = VectorXd::Zero(length);
  const Index lo = std::max<Index>(start, 0);
  const Index hi = std::min<Index>(start + length, r.size());
  if (hi > lo) out.segment(lo - start, hi - lo) = r.samples.segment(lo, hi - lo);
  return out;
}

std::string mm_key(const std::string& prefix, double z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%.2fmm", prefix.c_str(), z * 1e3);
  return buf;
}

bool is_background(const ScattererTrajectory& t) {
  return std::holds_alternative<echo::RayleighRandom>(t.echogenicity);
}

std::string image_label(FilterKind kind) { return "ceui_" + std::string(to_string(kind)); }

json grid_json(const MModeImage& image) {
  const auto& z = image.depth_grid;
  const auto& t = image.time_grid;
  return {{"depth", {{"z_min", z.size() ? z(0) : 0.0},
                     {"dz", z.size() > 1 ? z(1) - z(0) : 0.0},
                     {"n", z.size()}}},
          {"time", {{"t_first", t.size() ? t(0) : 0.0},
                    {"dt", t.size() > 1 ? t(1) - t(0) : 0.0},
                    {"n", t.size()}}}};
}

json seeds_json(const ScenarioConfig& c) {
  return {{"medium", c.medium_seed}, {"emission", c.emission_seed}, {"noise", c.noise_seed}};
}

json config_json(const ScenarioConfig& c) {
  json out = json::object();
  for (const auto& [k, v] : describe(c)) out[k] = v;
  return out;
}

// Inventory of every file under dir except the manifest itself, sorted by path.
json inventory(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().filename() != "manifest.json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  json out = json::array();
  for (const auto& f : files)
    out.push_back({{"path", fs::relative(f, dir).generic_string()},
                   {"sha256", io::sha256_file(f)},
                   {"bytes", fs::file_size(f)}});
  return out;
}

void write_manifest(const json& manifest, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failure on manifest.json");
}

json base_manifest(const std::string& command, const ScenarioConfig& c, const RunOptions& options) {
  return {{"version", CEUI_VERSION},
          {"command", command},
          {"config", config_json(c)},
          {"seeds", seeds_json(c)},
          {"threads", options.threads},
          {"images", json::object()},
          {"timings_s", json::object()}};
}

void write_image_outputs(const std::string& label, const MModeImage& image,
                         const std::map<std::string, double>& metrics, const ScenarioConfig& c, json& manifest) {
  io::write_mmode_csv(image, c.out_dir / "images" / (label + ".csv"));
  if (c.write_png) io::write_mmode_png(image, c.out_dir / "images" / (label + ".png"), c.db_range);
  io::write_report(metrics, c.out_dir / "metrics" / (label + ".txt"));
  json m = json::object();
  for (const auto& [k, v] : metrics) m[k] = v;
  manifest["images"][label] = {{"grid", grid_json(image)}, {"metrics", m}};
}

void write_metrics_table(const std::map<std::string, std::map<std::string, double>>& all, const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << "label,metric,value\n";
  char buf[64];
  for (const auto& [label, metrics] : all)
    for (const auto& [k, v] : metrics) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << label << ',' << k << ',' << buf << '\n';
    }
  if (!out) throw std::runtime_error("write failure on " + path.string());
}

}  // namespace

double blink_merge_gap(const ScenarioConfig& c) { return 0.5 * static_cast<double>(c.n_e) / c.probe.fs; }

ScenarioConfig apply_options(ScenarioConfig config, const RunOptions& options) {
  if (options.seed) {
    config.reseed(*options.seed);
    if (!config.preset.empty()) config.preset_options.duration = config.duration;
  }
  if (options.decimate) config.decimate = *options.decimate;
  if (options.out_dir) config.out_dir = *options.out_dir;
  if (options.threads < 1) throw std::invalid_argument("threads must be >= 1");
  validate(config);
  return config;
}

Index acquisition_samples(const ScenarioConfig& config) {
  return static_cast<Index>(std::llround(config.duration * config.probe.fs));
}

CeuiSignals ceui_emission(const ScenarioConfig& c) {
  CeuiSignals s;
  const auto e = gen_noise_excitation(acquisition_samples(c), c.probe, c.sigma, c.emission_seed);
  s.x = apply_transducer(e.samples, c.probe);
  s.x_pe = apply_transducer(s.x, c.probe);
  return s;
}

PeSignals pe_emission(const ScenarioConfig& c) {
  PeSignals s;
  const auto pulse = gen_barker13_pulse(c.probe, c.cycles_per_chip);
  s.train = gen_pe_emission_train(pulse, c.r_max, c.duration, c.probe);
  s.x = apply_transducer(s.train.samples, c.probe);
  s.x_pe = apply_transducer(s.x, c.probe);
  return s;
}

CeuiSignals simulate_ceui(const ScenarioConfig& c, const Medium& medium, int threads) {
  CeuiSignals s = ceui_emission(c);
  const RfRecord clean = synthesize_rf(medium.scatterers, s.x, c.probe, medium.attenuation, s.x.size(), threads);
  s.y = add_band_limited_noise(clean, c.snr_db, c.probe, s.x, c.noise_seed);
  return s;
}

PeSignals simulate_pe(const ScenarioConfig& c, const Medium& medium, int threads) {
  PeSignals s = pe_emission(c);
  const RfRecord clean = synthesize_rf(medium.scatterers, s.x, c.probe, medium.attenuation, s.x.size(), threads);
  s.y = add_band_limited_noise(clean, c.snr_db, c.probe, s.x, c.noise_seed + 1);
  return s;
}

DepthGrid resolve_grid(const ScenarioConfig& c, Index n_lags) {
  const double deepest = std::min(c.r_max, max_mapped_depth(n_lags, c.probe));
  DepthGrid g;
  g.dz = c.dz.value_or(c.probe.wavelength() / 8.0);
  g.z_min = c.z_min.value_or(0.0);
  const double z_max = c.z_max.value_or(deepest);
  if (z_max > deepest * (1.0 + 1e-12))
    throw std::out_of_range("depth grid up to " + std::to_string(z_max) + " m exceeds the deepest mapped depth " +
                            std::to_string(deepest) + " m");
  g.z_max = g.z_min + std::floor((z_max - g.z_min) / g.dz + 1e-9) * g.dz;
  return g;
}

MModeImage reconstruct_ceui(const RfRecord& x_pe, const RfRecord& y, const ScenarioConfig& c, FilterKind kind,
                            int threads) {
  WindowPlan plan = fit_plan(c.n_e, c.step, c.r_max, x_pe, y, c.probe);
  if (plan.n_windows == 0)
    throw std::out_of_range("no window of " + std::to_string(c.echo_samples()) + " samples fits the signals");
  const auto centers = window_centers(plan, c.probe);
  std::vector<double> times;
  for (std::size_t w = 0; w < centers.size(); w += static_cast<std::size_t>(c.decimate)) times.push_back(centers[w]);

  std::vector<VectorXd> lines(times.size());
  const Index halfwidth = c.effective_mainlobe_halfwidth();
  parallel_for(static_cast<std::ptrdiff_t>(times.size()), threads, [&](std::ptrdiff_t i) {
    const double t = times[static_cast<std::size_t>(i)];
    const RfRecord x_w = reference_window(x_pe, t, c.n_e);
    const RfRecord y_w = echo_window(y, t, c.n_e, c.r_max, c.probe);
    const DecodingFilter h = design_filter(kind, x_w.samples, halfwidth, c.loading);
    lines[static_cast<std::size_t>(i)] = compress(y_w, h).samples;
  });

  MModeOptions opt;
  opt.upsample = c.upsample;
  opt.grid = resolve_grid(c, lines.front().size());
  opt.compounding_halfwidth = c.compounding;
  opt.envelope = c.envelope;
  ImageMeta meta;
  meta.n_e = c.n_e;
  meta.step = c.step * c.decimate;
  meta.r_max = c.r_max;
  meta.label = image_label(kind);
  return assemble_mmode(lines, times, c.probe, opt, meta);
}

MModeImage reconstruct_pe(const PeSignals& pe, const ScenarioConfig& c) {
  if (pe.train.starts.empty()) throw std::out_of_range("no complete pulse in the acquisition");
  const Index half = (impulse_response(c.probe).size() - 1) / 2;
  const Index n_ref = pe.train.pulse_length + 4 * half;
  const Index n_echo = echo_length(n_ref, c.r_max, c.probe);
  std::vector<VectorXd> lines;
  std::vector<double> times;
  for (Index start : pe.train.starts) {
    const Index ref_start = start - 2 * half;
    // A pulse whose listening window runs past the record would image truncated echoes.
    if (ref_start + n_echo > pe.y.size()) continue;
    const DecodingFilter h = matched_filter(segment_padded(pe.x_pe, ref_start, n_ref));
    lines.push_back(correlate_valid(segment_padded(pe.y, ref_start, n_echo), h.taps));
    times.push_back((static_cast<double>(start) + 0.5 * static_cast<double>(pe.train.pulse_length - 1)) / c.probe.fs);
  }
  if (lines.empty())
    throw std::out_of_range("no pulse has a complete listening window of " + std::to_string(n_echo) +
                            " samples inside the acquisition");
  MModeOptions opt;
  opt.upsample = c.upsample;
  opt.grid = resolve_grid(c, lines.front().size());
  opt.envelope = c.envelope;
  ImageMeta meta;
  meta.n_e = n_ref;
  meta.r_max = c.r_max;
  meta.label = "pe";
  return assemble_mmode(lines, times, c.probe, opt, meta);
}

std::pair<double, double> truth_sweep(const Medium& medium, const ScenarioConfig& c) {
  bool any_foreground = false;
  for (const auto& s : medium.scatterers) any_foreground = any_foreground || !is_background(s);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : medium.scatterers) {
    if (any_foreground && is_background(s)) continue;
    const auto [a, b] = depth_extent(s, 0.0, c.duration, 1e-6);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  return {lo, hi};
}

std::vector<double> default_psnr_depths(const Medium& medium, const ScenarioConfig& c) {
  std::vector<double> out;
  for (const auto& s : medium.scatterers)
    if (const auto* m = std::get_if<motion::Static>(&s.motion); m && !is_background(s)) out.push_back(m->z0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty() && !medium.scatterers.empty()) {
    const auto [lo, hi] = truth_sweep(medium, c);
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

std::map<std::string, double> evaluate_image(const MModeImage& image, const Medium& medium,
                                             const ScenarioConfig& c) {
  std::map<std::string, double> m;
  const double lambda = c.probe.wavelength();
  const VectorXd& z = image.depth_grid;
  const double z_first = z(0);
  const double z_last = z(z.size() - 1);
  const double dz = z.size() > 1 ? z(1) - z(0) : lambda / 8.0;
  m["columns"] = static_cast<double>(image.cols());
  m["slow_time_rate_hz"] = image.cols() > 1 ? 1.0 / (image.time_grid(1) - image.time_grid(0)) : kNaN;

  auto guarded = [&](const std::string& key, auto&& fn) {
    try {
      m[key] = fn();
    } catch (const std::exception&) {
      m[key] = kNaN;
    }
  };

  if (!medium.scatterers.empty()) {
    const auto [sweep_lo, sweep_hi] = truth_sweep(medium, c);
    const double lo = std::max(z_first, sweep_lo - c.effective_islr_margin());
    const double hi = std::min(z_last, sweep_hi + c.effective_islr_margin());
    guarded("islr_mean", [&] { return region_islr(image, lo, hi, c.effective_islr_mainlobe()).mean(); });
    m["islr_mean_db"] = std::isnan(m["islr_mean"]) ? kNaN : to_db_power(m["islr_mean"]);
    guarded("mlw_mean_lambda", [&] {
      Index r_lo = 0;
      while (r_lo < z.size() && z(r_lo) < lo) ++r_lo;
      Index r_hi = z.size() - 1;
      while (r_hi > 0 && z(r_hi) > hi) --r_hi;
      double sum = 0.0;
      for (Index w = 0; w < image.cols(); ++w)
        sum += mainlobe_width_halfpower(image.values.col(w), r_lo, r_hi, dz, lambda);
      return sum / static_cast<double>(image.cols());
    });
    VectorXd trace;
    guarded("peak_depth_mean", [&] {
      trace = peak_depth_trace(image, lo, hi);
      return trace.mean();
    });
    m["peak_depth_span"] = trace.size() ? trace.maxCoeff() - trace.minCoeff() : kNaN;
    // Components slower than one cycle per record are not resolved.
    guarded("dominant_frequency_hz", [&] {
      const double rate = m["slow_time_rate_hz"];
      return image.cols() > 2 ? dominant_frequency(trace, rate, rate / static_cast<double>(image.cols())) : kNaN;
    });
  }

  if (c.blink_depth >= z_first && c.blink_depth <= z_last)
    m["blinks"] = static_cast<double>(count_blinks(image, c.blink_depth, c.blink_threshold, blink_merge_gap(c)).count);

  PsnrOptions popt;
  popt.peak_window = c.effective_peak_window();
  popt.noise_band = c.noise_band;
  const auto depths = c.depths.empty() ? default_psnr_depths(medium, c) : c.depths;
  for (double d : depths) guarded(mm_key("psnr_db", d), [&] { return psnr_at_depth(image, d, popt); });
  return m;
}

nlohmann::json run_scenario(const ScenarioConfig& config_in, const RunOptions& options) {
  const ScenarioConfig c = stage("config", [&] { return apply_options(config_in, options); });
  json manifest = base_manifest("run", c, options);
  Stopwatch clock;
  const Medium medium = stage("medium", [&] { return build_medium(c); });
  manifest["timings_s"]["medium"] = clock.lap();

  std::map<std::string, MModeImage> images;
  if (c.mode == EmissionMode::ceui) {
    const CeuiSignals s = stage("simulate", [&] { return simulate_ceui(c, medium, options.threads); });
    manifest["timings_s"]["simulate_ceui"] = clock.lap();
    if (c.write_signals)
      stage("io", [&] {
        io::write_signal(s.x, c.out_dir / "signals" / "ceui_x.f32");
        io::write_signal(s.y, c.out_dir / "signals" / "ceui_y.f32");
      });
    for (FilterKind kind : c.filters) {
      images[image_label(kind)] =
          stage("decode", [&] { return reconstruct_ceui(s.x_pe, s.y, c, kind, options.threads); });
      manifest["timings_s"]["decode_" + image_label(kind)] = clock.lap();
    }
  }
  if (c.mode == EmissionMode::pe || c.pe_baseline) {
    const PeSignals s = stage("simulate", [&] { return simulate_pe(c, medium, options.threads); });
    manifest["timings_s"]["simulate_pe"] = clock.lap();
    if (c.write_signals)
      stage("io", [&] {
        io::write_signal(s.x, c.out_dir / "signals" / "pe_x.f32");
        io::write_signal(s.y, c.out_dir / "signals" / "pe_y.f32");
      });
    images["pe"] = stage("decode", [&] { return reconstruct_pe(s, c); });
    manifest["timings_s"]["decode_pe"] = clock.lap();
  }

  std::map<std::string, std::map<std::string, double>> all;
  for (const auto& [label, image] : images) {
    all[label] = stage("metrics", [&] { return evaluate_image(image, medium, c); });
    stage("io", [&] { write_image_outputs(label, image, all[label], c, manifest); });
  }
  stage("io", [&] { write_metrics_table(all, c.out_dir / "metrics.csv"); });
  manifest["timings_s"]["metrics_and_io"] = clock.lap();
  stage("io", [&] {
    manifest["files"] = inventory(c.out_dir);
    write_manifest(manifest, c.out_dir);
  });
  return manifest;
}

nlohmann::json simulate(const ScenarioConfig& config_in, const RunOptions& options) {
  const ScenarioConfig c = stage("config", [&] { return apply_options(config_in, options); });
  json manifest = base_manifest("simulate", c, options);
  Stopwatch clock;
  const Medium medium = stage("medium", [&] { return build_medium(c); });
  if (c.mode == EmissionMode::ceui) {
    const CeuiSignals s = stage("simulate", [&] { return simulate_ceui(c, medium, options.threads); });
    stage("io", [&] {
      io::write_signal(s.x, c.out_dir / "signals" / "ceui_x.f32");
      io::write_signal(s.y, c.out_dir / "signals" / "ceui_y.f32");
    });
  }
  if (c.mode == EmissionMode::pe || c.pe_baseline) {
    const PeSignals s = stage("simulate", [&] { return simulate_pe(c, medium, options.threads); });
    stage("io", [&] {
      io::write_signal(s.x, c.out_dir / "signals" / "pe_x.f32");
      io::write_signal(s.y, c.out_dir / "signals" / "pe_y.f32");
    });
  }
  manifest["timings_s"]["simulate"] = clock.lap();
  stage("io", [&] {
    manifest["files"] = inventory(c.out_dir);
    write_manifest(manifest, c.out_dir);
  });
  return manifest;
}

nlohmann::json reconstruct(const ScenarioConfig& config_in, const fs::path& rf_path, const RunOptions& options) {
  const ScenarioConfig c = stage("config", [&] { return apply_options(config_in, options); });
  json manifest = base_manifest("reconstruct", c, options);
  manifest["input"] = {{"path", rf_path.generic_string()}, {"sha256", stage("io", [&] { return io::sha256_file(rf_path); })}};
  Stopwatch clock;
  const RfRecord y = stage("io", [&] { return io::read_signal(rf_path); });
  if (std::abs(y.fs - c.probe.fs) > 1e-6 * c.probe.fs)
    throw StageError("io", "signal sampled at " + std::to_string(y.fs) + " Hz, configuration expects " +
                               std::to_string(c.probe.fs) + " Hz");
  const Medium medium = stage("medium", [&] { return build_medium(c); });
  std::map<std::string, MModeImage> images;
  if (c.mode == EmissionMode::ceui) {
    const CeuiSignals s = stage("emission", [&] { return ceui_emission(c); });
    for (FilterKind kind : c.filters)
      images[image_label(kind)] = stage("decode", [&] { return reconstruct_ceui(s.x_pe, y, c, kind, options.threads); });
  } else {
    PeSignals s = stage("emission", [&] { return pe_emission(c); });
    s.y = y;
    images["pe"] = stage("decode", [&] { return reconstruct_pe(s, c); });
  }
  manifest["timings_s"]["decode"] = clock.lap();
  std::map<std::string, std::map<std::string, double>> all;
  for (const auto& [label, image] : images) {
    all[label] = stage("metrics", [&] { return evaluate_image(image, medium, c); });
    stage("io", [&] { write_image_outputs(label, image, all[label], c, manifest); });
  }
  stage("io", [&] {
    write_metrics_table(all, c.out_dir / "metrics.csv");
    manifest["files"] = inventory(c.out_dir);
    write_manifest(manifest, c.out_dir);
  });
  return manifest;
}

std::vector<CompareRow> compare_runs(const json& a, const json& b, const std::optional<std::string>& label_a,
                                     const std::optional<std::string>& label_b) {
  if (!a.contains("images") || !b.contains("images")) throw std::invalid_argument("compare: manifest without images");
  std::vector<std::pair<std::string, std::string>> pairs;
  if (label_a || label_b) {
    pairs.emplace_back(label_a.value_or(*label_b), label_b.value_or(*label_a));
  } else {
    for (const auto& [label, _] : a["images"].items())
      if (b["images"].contains(label)) pairs.emplace_back(label, label);
  }
  if (pairs.empty()) throw std::invalid_argument("compare: no image label common to both manifests");

  std::vector<CompareRow> rows;
  for (const auto& [la, lb] : pairs) {
    if (!a["images"].contains(la)) throw std::invalid_argument("compare: first manifest has no image '" + la + "'");
    if (!b["images"].contains(lb)) throw std::invalid_argument("compare: second manifest has no image '" + lb + "'");
    const json& ia = a["images"][la];
    const json& ib = b["images"][lb];
    const json& ga = ia["grid"]["depth"];
    const json& gb = ib["grid"]["depth"];
    const auto close = [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x)); };
    if (ga["n"].get<Index>() != gb["n"].get<Index>() || !close(ga["z_min"].get<double>(), gb["z_min"].get<double>()) ||
        !close(ga["dz"].get<double>(), gb["dz"].get<double>()))
      throw std::invalid_argument("compare: depth grids of '" + la + "' and '" + lb + "' differ");
    for (const auto& [key, va] : ia["metrics"].items()) {
      if (!ib["metrics"].contains(key)) continue;
      const json& vb = ib["metrics"][key];
      const double x = va.is_number() ? va.get<double>() : kNaN;
      const double y = vb.is_number() ? vb.get<double>() : kNaN;
      rows.push_back({la, lb, key, x, y, x - y, x / y});
    }
  }
  return rows;
}

std::string format_compare(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-10s %-10s %-28s %14s %14s %14s %10s\n", "a", "b", "metric", "value_a", "value_b",
                "delta", "ratio");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-10s %-10s %-28s %14.6g %14.6g %14.6g %10.4g\n", r.label_a.c_str(),
                  r.label_b.c_str(), r.metric.c_str(), r.a, r.b, r.delta, r.ratio);
    out << buf;
  }
  return out.str();
}

ScattererTrajectory path_rate_trajectory(double z0, double velocity, double duration, const ProbeConfig& probe,
                                         double knot_step) {
  const double path0 = forward_tof(z0, probe) * probe.c;
  motion::Piecewise p;
  const auto n = static_cast<Index>(std::ceil(duration / knot_step)) + 1;
  for (Index k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * knot_step;
    const auto z = depth_map((path0 - velocity * t) / probe.c, probe);
    if (!z) throw std::domain_error("path_rate_trajectory: path shorter than the element separation");
    p.knots.push_back({t, *z});
  }
  return {std::move(p), echo::Constant{1.0}};
}

DopplerPoint doppler_point(const ScenarioConfig& c, double velocity, int threads) {
  const ProbeConfig& probe = c.probe;
  const auto n = static_cast<Index>(std::llround(c.doppler_duration * probe.fs));
  RfRecord tone;
  tone.fs = probe.fs;
  tone.samples.resize(n);
  for (Index i = 0; i < n; ++i)
    tone.samples(i) = std::cos(2.0 * std::numbers::pi * probe.fc * static_cast<double>(i) / probe.fs);
  const RfRecord x = apply_transducer(tone, probe);
  const std::vector<ScattererTrajectory> medium{path_rate_trajectory(c.doppler_z0, velocity, c.doppler_duration, probe)};
  const RfRecord y = synthesize_rf(medium, x, probe, AttenuationModel{}, n, threads);

  const Index kernel = impulse_response(probe).size();
  const Index first = static_cast<Index>(std::ceil(forward_tof(c.doppler_z0, probe) * probe.fs)) + 2 * kernel;
  const Index last = n - 2 * kernel;
  if (last - first < 64) throw std::domain_error("doppler_point: record too short after the echo arrival");
  RfRecord steady;
  steady.fs = probe.fs;
  steady.t0 = y.time_at(static_cast<double>(first));
  steady.samples = y.samples.segment(first, last - first);

  DopplerPoint pt;
  pt.velocity = velocity;
  pt.expected = probe.fc * velocity / probe.c;
  pt.measured = estimate_doppler_shift(steady, probe);
  pt.relative_error = pt.expected != 0.0 ? std::abs(pt.measured - pt.expected) / std::abs(pt.expected)
                                         : std::abs(pt.measured);
  return pt;
}

std::vector<DopplerPoint> doppler_sweep(const ScenarioConfig& config_in, const RunOptions& options) {
  const ScenarioConfig c = stage("config", [&] { return apply_options(config_in, options); });
  std::vector<DopplerPoint> out;
  for (double v : c.doppler_velocities) out.push_back(stage("doppler", [&] { return doppler_point(c, v, options.threads); }));
  stage("io", [&] {
    fs::create_directories(c.out_dir);
    std::ofstream csv(c.out_dir / "doppler_sweep.csv");
    csv << "velocity_m_s,expected_hz,measured_hz,relative_error\n";
    char buf[160];
    for (const auto& p : out) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.velocity, p.expected, p.measured,
                    p.relative_error);
      csv << buf;
    }
    if (!csv) throw std::runtime_error("write failure on doppler_sweep.csv");
  });
  return out;
}

}  // namespace ceui
