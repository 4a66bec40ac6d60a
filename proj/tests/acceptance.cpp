// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, followed by the measured
// values. Usage: ceui_acceptance [work_dir]. Exit status is the number of
// failed criteria.

#include "oracles.hpp"

#include "ceui/decode.hpp"
#include "ceui/io.hpp"
#include "ceui/mmode.hpp"
#include "ceui/rfsim.hpp"
#include "ceui/scenario.hpp"
#include "ceui/waveform.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace ceui;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path g_work;

RunOptions threads(int n) {
  RunOptions o;
  o.threads = n;
  return o;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

double metric(const json& manifest, const std::string& label, const std::string& key) {
  const json& v = manifest["images"][label]["metrics"][key];
  return v.is_number() ? v.get<double>() : std::nan("");
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

ScenarioConfig quiet(ScenarioConfig c, const std::string& name) {
  c.out_dir = g_work / name;
  c.write_png = false;
  fs::remove_all(c.out_dir);
  return c;
}

ScenarioConfig static_scatterer(const std::string& name) {
  return quiet(parse_config("[scatterer.0]\nmotion = static\nz0 = 0.03\n[emission]\nduration = 200e-6\n"), name);
}

ScenarioConfig from_preset(const std::string& preset) {
  return quiet(parse_config("[medium]\npreset = " + preset + "\n"), preset);
}

// Depth-to-path scale at depth z for the bistatic geometry: d(R_E + R_R)/dz.
double path_per_depth(double z, const ProbeConfig& p) { return 2.0 * z / std::hypot(z, 0.5 * p.lateral_offset()); }

Outcome geometry() {
  const ScenarioConfig c = static_scatterer("c1_geometry");
  const ProbeConfig& p = c.probe;
  run_scenario(c, {});
  const double tof = forward_tof(0.03, p);
  const double z_back = depth_map(tof, p).value_or(-1.0);
  bool ok = std::abs(tof - 43.56e-6) < 0.005e-6 && std::abs(z_back - 0.03) < 1e-12;
  double worst = 0.0;
  Index columns = 0;
  for (const char* label : {"ceui_mf", "ceui_mmf", "pe"}) {
    const MModeImage im = io::read_mmode_csv(c.out_dir / "images" / (std::string(label) + ".csv"));
    for (Index w = 0; w < im.cols(); ++w) {
      Index r = 0;
      im.values.col(w).maxCoeff(&r);
      worst = std::max(worst, std::abs(im.depth_grid(r) - 0.03));
    }
    columns += im.cols();
  }
  ok = ok && worst <= p.wavelength() / 2.0;
  return {ok, fmt("TOF %.4f us -> z %.6f mm; worst column error %.3f lambda over %ld columns (tol 0.5)", tof * 1e6,
                  z_back * 1e3, worst / p.wavelength(), static_cast<long>(columns))};
}

Outcome doppler() {
  ScenarioConfig c = static_scatterer("c2_doppler");
  const auto points = doppler_sweep(c, threads(8));
  bool ok = points.size() == 5;
  std::ostringstream s;
  for (const auto& d : points) {
    ok = ok && d.relative_error < 0.05;
    s << fmt("v=%.1f: %.1f/%.1f Hz (%.2f%%) ", d.velocity, d.measured, d.expected, 100.0 * d.relative_error);
  }
  return {ok, s.str()};
}

Outcome mainlobe_widths() {
  double mf = 0.0, mmf = 0.0, pe = 0.0;
  const int seeds = 5;
  ProbeConfig probe;
  for (int s = 1; s <= seeds; ++s) {
    ScenarioConfig c = static_scatterer("c3_mlw");
    c.reseed(static_cast<std::uint64_t>(s));
    probe = c.probe;
    const json m = run_scenario(c, threads(8));
    mf += metric(m, "ceui_mf", "mlw_mean_lambda") / seeds;
    mmf += metric(m, "ceui_mmf", "mlw_mean_lambda") / seeds;
    pe += metric(m, "pe", "mlw_mean_lambda") / seeds;
  }
  const bool ok = std::abs(mmf - 1.1) <= 0.3 && std::abs(mf - 2.4) <= 0.4 && std::abs(pe - 2.5) <= 0.4;
  const double k = path_per_depth(0.03, probe);
  return {ok, fmt("depth MLW mMF %.2f (1.1+-0.3), MF %.2f (2.4+-0.4), PE %.2f (2.5+-0.4) lambda; "
                  "in round-trip path units mMF %.2f, MF %.2f, PE %.2f lambda",
                  mmf, mf, pe, mmf * k, mf * k, pe * k)};
}

json g_oscillating;

const json& oscillating() {
  if (g_oscillating.is_null()) g_oscillating = run_scenario(from_preset("oscillating"), threads(8));
  return g_oscillating;
}

Outcome islr_improvement() {
  const json& m = oscillating();
  const double mf = metric(m, "ceui_mf", "islr_mean");
  const double mmf = metric(m, "ceui_mmf", "islr_mean");
  return {mmf <= mf / 2.0, fmt("ISLR MF %.4f, mMF %.4f, ratio MF/mMF %.2f (gate >= 2)", mf, mmf, mf / mmf)};
}

Outcome blinks() {
  const json m = run_scenario(from_preset("blinking"), threads(8));
  const double mf = metric(m, "ceui_mf", "blinks");
  const double mmf = metric(m, "ceui_mmf", "blinks");
  const double pe = metric(m, "pe", "blinks");
  return {mf == 20.0 && mmf == 20.0 && pe <= 8.0,
          fmt("runs at 30 mm: CEUI-MF %.0f, CEUI-mMF %.0f (want 20), PE %.0f (want <= 8)", mf, mmf, pe)};
}

Outcome stroboscopic() {
  const json& m = oscillating();
  const double mf = metric(m, "ceui_mf", "dominant_frequency_hz");
  const double mmf = metric(m, "ceui_mmf", "dominant_frequency_hz");
  const double pe = metric(m, "pe", "dominant_frequency_hz");
  const double pe_rate = metric(m, "pe", "slow_time_rate_hz");
  const double alias = std::abs(12e3 - pe_rate);
  const bool ok = std::abs(mf - 12e3) <= 500.0 && std::abs(mmf - 12e3) <= 500.0 && std::abs(pe - alias) <= 1e3;
  return {ok, fmt("CEUI-MF %.0f Hz, CEUI-mMF %.0f Hz (12000+-500); PE at %.0f Hz sampling %.0f Hz (alias %.0f+-1000)",
                  mf, mmf, pe_rate, pe, alias)};
}

Outcome mismatched_optimality() {
  std::mt19937_64 gen(2718);
  std::normal_distribution<double> normal;
  double worst_gap = -1e300;
  double worst_energy = 0.0;
  int count = 0;
  for (Index k : {8, 16, 32}) {
    for (int i = 0; i < 50; ++i) {
      VectorXd x(k);
      for (Index j = 0; j < k; ++j) x(j) = normal(gen);
      const DecodingFilter h = mismatched_filter_islr(x, 0, 1e-6);
      const VectorXd numeric = oracle::islr_projected_gradient(x, 20000);
      worst_gap = std::max(worst_gap, oracle::psf_islr(x, h.taps, 0) - oracle::psf_islr(x, numeric, 0));
      worst_energy = std::max(worst_energy, std::abs(h.taps.squaredNorm() / x.squaredNorm() - 1.0));
      ++count;
    }
  }
  return {worst_gap <= 1e-6 && worst_energy <= 1e-10,
          fmt("%d references: max ISLR(closed) - ISLR(numeric) = %.3e (<= 1e-6), max energy error %.3e (<= 1e-10)",
              count, worst_gap, worst_energy)};
}

Outcome simulator_oracle() {
  const ProbeConfig p;
  const Index n = 4000;
  const RfRecord x = gen_noise_excitation(n, p, 1.0, 77).samples;
  const VectorXd kernel = impulse_response(p).samples;
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> depth(0.005, 0.04);
  std::uniform_real_distribution<double> amp(0.1, 2.0);
  double worst = 0.0, linearity = 0.0, scale = 0.0;
  for (int count = 1; count <= 10; ++count) {
    std::vector<ScattererTrajectory> med;
    std::vector<oracle::PointEcho> echoes;
    for (int k = 0; k < count; ++k) {
      const double z = depth(gen);
      const double a = amp(gen);
      med.push_back({motion::Static{z}, echo::Constant{a}});
      echoes.push_back({Vec3(0, 0, z), a});
    }
    const VectorXd got = synthesize_rf(med, x, p, {}, n).samples;
    const VectorXd want = oracle::delayed_sum(echoes, x.samples, p.p_emit, p.p_recv, p.c, p.fs, kernel, n);
    const double peak = want.cwiseAbs().maxCoeff();
    worst = std::max(worst, (got - want).cwiseAbs().maxCoeff() / peak);
    VectorXd parts = VectorXd::Zero(n);
    for (const auto& s : med) parts += synthesize_rf(std::vector{s}, x, p, {}, n).samples;
    linearity = std::max(linearity, (got - parts).cwiseAbs().maxCoeff() / peak);
    RfRecord x3 = x;
    x3.samples *= 3.0;
    scale = std::max(scale, (synthesize_rf(med, x3, p, {}, n).samples - 3.0 * got).cwiseAbs().maxCoeff() / peak);
  }
  const double eps = 64.0 * std::numeric_limits<double>::epsilon();
  return {worst < 1e-9 && linearity < eps && scale < eps,
          fmt("max error vs delayed sum %.2e of peak (< 1e-9); linearity %.2e, scale %.2e (< %.1e)", worst, linearity,
              scale, eps)};
}

Outcome attenuation_contrast() {
  const json m = run_scenario(from_preset("attenuated_column"), threads(8));
  bool ok = true;
  std::ostringstream s;
  for (int mm : {30, 45, 60, 75, 90, 105}) {
    const std::string key = fmt("psnr_db_%.2fmm", static_cast<double>(mm));
    const double d = metric(m, "ceui_mmf", key) - metric(m, "pe", key);
    ok = ok && d >= 1.0 && d <= 7.0;
    s << fmt("%d mm: %+.2f dB (mMF %.2f, PE %.2f) ", mm, d, metric(m, "ceui_mmf", key), metric(m, "pe", key));
  }
  return {ok, s.str() + "(want each in [1, 7])"};
}

Outcome mimo_reduction() {
  ProbeConfig p;
  const Index n = 4000;
  const std::vector<ScattererTrajectory> med{{motion::Static{0.02}, echo::Constant{0.7}},
                                             {motion::SinusoidalAxial{0.03, 12e3, 0.1e-3}, echo::Constant{1.0}}};
  const RfRecord x = gen_noise_excitation(n, p, 1.0, 3).samples;
  const RfRecord siso = synthesize_rf(med, x, p, {}, n);
  const auto one = mimo_synthesize_rf(med, std::vector{x}, {{p.p_emit}, {p.p_recv}}, p, {}, n);
  const bool identical = one[0].samples == siso.samples;

  RfRecord x1 = x, x2 = x;
  x1.samples.tail(n / 2).setZero();
  x2.samples.head(n / 2).setZero();
  const Vec3 e2(-7.5e-3, 0.0, 0.0);
  const auto two = mimo_synthesize_rf(med, std::vector{x1, x2}, {{p.p_emit, e2}, {p.p_recv}}, p, {}, n);
  ProbeConfig p2 = p;
  p2.p_emit = e2;
  const VectorXd sum = synthesize_rf(med, x1, p, {}, n).samples + synthesize_rf(med, x2, p2, {}, n).samples;
  const double rel = (two[0].samples - sum).cwiseAbs().maxCoeff() / sum.cwiseAbs().maxCoeff();
  return {identical && rel <= 1e-12,
          fmt("1x1 bit-identical: %s; 2-emitter superposition error %.2e (<= 1e-12)", identical ? "yes" : "no", rel)};
}

Outcome determinism() {
  const json a = run_scenario(static_scatterer("c11_threads1"), threads(1));
  const json b = run_scenario(static_scatterer("c11_threads8"), threads(8));
  const bool ok = !a["files"].empty() && a["files"] == b["files"];
  return {ok, fmt("%zu files, hashes %s between --threads 1 and --threads 8", a["files"].size(),
                  ok ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  g_work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "ceui_acceptance";
  fs::create_directories(g_work);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"geometry round trip", geometry},
      {"Doppler model fidelity", doppler},
      {"mainlobe widths", mainlobe_widths},
      {"ISLR improvement", islr_improvement},
      {"blink capture", blinks},
      {"stroboscopic contrast", stroboscopic},
      {"mismatched-filter optimality", mismatched_optimality},
      {"simulator oracle equivalence", simulator_oracle},
      {"attenuation contrast", attenuation_contrast},
      {"MIMO reduction", mimo_reduction},
      {"determinism across thread counts", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s %2d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
