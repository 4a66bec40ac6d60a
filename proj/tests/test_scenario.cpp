// SPDX-License-Identifier: Apache-2.0

#include "ceui/io.hpp"
#include "ceui/scenario.hpp"

#include <doctest.h>

#include <filesystem>

using namespace ceui;
namespace fs = std::filesystem;

namespace {

ScenarioConfig static_config(const fs::path& out) {
  ScenarioConfig c = parse_config(
      "[scatterer.0]\nmotion = static\nz0 = 0.03\n"
      "[emission]\nduration = 120e-6\n"
      "[decode]\ndecimate = 4\n"
      "[output]\npng = false\n");
  c.out_dir = out;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ceui_tests" / name;
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("run writes the three images and an inventory") {
  const fs::path out = scratch("run");
  const auto manifest = run_scenario(static_config(out), {});
  for (const char* label : {"ceui_mf", "ceui_mmf", "pe"}) {
    CHECK(manifest["images"].contains(label));
    CHECK(fs::exists(out / "images" / (std::string(label) + ".csv")));
  }
  CHECK(fs::exists(out / "manifest.json"));
  for (const auto& f : manifest["files"]) {
    CHECK(io::sha256_file(out / f["path"].get<std::string>()) == f["sha256"].get<std::string>());
  }
  const double depth = manifest["images"]["ceui_mmf"]["metrics"]["peak_depth_mean"].get<double>();
  CHECK(depth == doctest::Approx(0.03).epsilon(0.01));
}

TEST_CASE("comparing a run with itself gives zero deltas") {
  const fs::path out = scratch("self");
  const auto manifest = run_scenario(static_config(out), {});
  const auto rows = compare_runs(manifest, manifest);
  CHECK_FALSE(rows.empty());
  for (const auto& r : rows)
    if (std::isfinite(r.a)) CHECK(r.delta == 0.0);
  CHECK_FALSE(format_compare(rows).empty());
}

TEST_CASE("comparing different depth grids is an error") {
  ScenarioConfig a = static_config(scratch("grid_a"));
  ScenarioConfig b = static_config(scratch("grid_b"));
  b.dz = a.probe.wavelength() / 4.0;
  const auto ma = run_scenario(a, {});
  const auto mb = run_scenario(b, {});
  CHECK_THROWS_AS(compare_runs(ma, mb), std::invalid_argument);
  CHECK_NOTHROW(compare_runs(ma, ma, std::string("ceui_mmf"), std::string("pe")));
}

TEST_CASE("reconstruct from a stored signal reproduces the run") {
  const fs::path out = scratch("rec_run");
  const ScenarioConfig c = static_config(out);
  const auto ran = run_scenario(c, {});
  RunOptions opt;
  opt.out_dir = scratch("rec_out");
  const auto rec = reconstruct(c, out / "signals" / "ceui_y.f32", opt);
  const MModeImage a = io::read_mmode_csv(out / "images" / "ceui_mf.csv");
  const MModeImage b = io::read_mmode_csv(*opt.out_dir / "images" / "ceui_mf.csv");
  REQUIRE(a.values.rows() == b.values.rows());
  REQUIRE(a.values.cols() == b.values.cols());
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-5 * a.values.maxCoeff());
  CHECK(rec["input"]["sha256"].get<std::string>().size() == 64);
}

TEST_CASE("thread count and decimation override") {
  const fs::path out = scratch("opts");
  RunOptions opt;
  opt.threads = 3;
  opt.decimate = 8;
  opt.seed = 5;
  const ScenarioConfig c = apply_options(static_config(out), opt);
  CHECK(c.decimate == 8);
  CHECK(c.medium_seed != static_config(out).medium_seed);
  opt.decimate = 0;
  CHECK_THROWS(apply_options(static_config(out), opt));
}

TEST_CASE("path-rate Doppler point") {
  ScenarioConfig c = parse_config("[scatterer.0]\nmotion = static\nz0 = 0.03\n");
  const DopplerPoint d = doppler_point(c, 2.0, 4);
  CHECK(d.expected == doctest::Approx(6494.0).epsilon(1e-3));
  CHECK(d.relative_error < 0.05);
  const DopplerPoint still = doppler_point(c, 0.0, 4);
  CHECK(std::abs(still.measured) < 50.0);
}

TEST_CASE("path-rate trajectory shortens the bistatic path linearly") {
  const ProbeConfig p;
  const auto traj = path_rate_trajectory(0.03, 3.0, 1e-3, p);
  auto path = [&](double t) {
    const Vec3 s = position_at(traj, t);
    return (s - p.p_emit).norm() + (s - p.p_recv).norm();
  };
  for (double t : {0.1e-3, 0.5e-3, 0.9e-3}) CHECK(path(0.0) - path(t) == doctest::Approx(3.0 * t).epsilon(1e-6));
}
