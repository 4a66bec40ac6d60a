// SPDX-License-Identifier: Apache-2.0

#include "ceui/config.hpp"
#include "ceui/io.hpp"
#include "ceui/window.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

using namespace ceui;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ceui_tests";
  fs::create_directories(dir);
  return dir / name;
}

MModeImage small_image(Index rows, Index cols) {
  MModeImage im;
  im.values.resize(rows, cols);
  for (Index i = 0; i < im.values.size(); ++i) im.values(i) = 0.5 + static_cast<double>(i) / 7.0;
  im.depth_grid = VectorXd::LinSpaced(rows, 0.01, 0.02);
  im.time_grid = VectorXd::LinSpaced(cols, 1e-6, 2e-6);
  return im;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("signal files round trip") {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  RfRecord r;
  r.fs = 30e6;
  r.t0 = 0.25;
  r.samples.resize(1000);
  for (Index i = 0; i < r.size(); ++i) r.samples(i) = static_cast<float>(normal(gen));
  const fs::path path = scratch("sig.f32");
  io::write_signal(r, path);
  CHECK(fs::file_size(path) == 4000);
  CHECK(read_text(io::header_path(path)) ==
        "ceui-signal 1\ndtype float32\nendianness little\nfs 30000000\nt0 0.25\nlength 1000\n");
  const RfRecord back = io::read_signal(path);
  CHECK(back.fs == r.fs);
  CHECK(back.t0 == r.t0);
  CHECK(back.samples == r.samples);
}

TEST_CASE("empty signal is a valid file") {
  RfRecord r;
  r.fs = 1e6;
  const fs::path path = scratch("empty.f32");
  io::write_signal(r, path);
  const RfRecord back = io::read_signal(path);
  CHECK(back.size() == 0);
  CHECK(back.fs == 1e6);
}

TEST_CASE("truncated payload names both byte counts") {
  RfRecord r;
  r.fs = 1e6;
  r.samples = VectorXd::Ones(10);
  const fs::path path = scratch("trunc.f32");
  io::write_signal(r, path);
  fs::resize_file(path, 37);
  try {
    io::read_signal(path);
    FAIL("expected FormatError");
  } catch (const io::FormatError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("37") != std::string::npos);
    CHECK(msg.find("40") != std::string::npos);
  }
}

TEST_CASE("malformed header is rejected") {
  const fs::path path = scratch("bad.f32");
  std::ofstream(path) << "";
  std::ofstream(io::header_path(path)) << "ceui-signal 1\ndtype float64\nendianness little\nfs 1\nt0 0\nlength 0\n";
  CHECK_THROWS_AS(io::read_signal(path), io::FormatError);
}

TEST_CASE("M-mode CSV layout and round trip") {
  const MModeImage im = small_image(2, 2);
  const fs::path path = scratch("im.csv");
  io::write_mmode_csv(im, path);
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 2);
  }
  CHECK(rows == 3);
  CHECK(read_text(path).rfind("depth_m\\time_s,", 0) == 0);
  const MModeImage back = io::read_mmode_csv(path);
  CHECK((back.values - im.values).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((back.depth_grid - im.depth_grid).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("grayscale mapping endpoints") {
  MModeImage im = small_image(2, 3);
  im.values.setConstant(0.7);
  for (auto v : io::mmode_gray(im, 40.0)) CHECK(v == 255);
  im.values << 1.0, 0.1, 0.01, 1.0, 0.1, 0.01;
  const auto px = io::mmode_gray(im, 40.0);
  CHECK(px[0] == 255);
  CHECK(px[1] == 128);
  CHECK(px[2] == 0);
  im.values(0, 2) = 1e-4;
  CHECK(io::mmode_gray(im, 40.0)[2] == 0);
  const fs::path path = scratch("im.png");
  io::write_mmode_png(im, path, 40.0);
  std::ifstream png(path, std::ios::binary);
  char sig[8];
  png.read(sig, 8);
  CHECK(std::string(sig + 1, 3) == "PNG");
}

TEST_CASE("SHA-256 of a file") {
  const fs::path path = scratch("abc.txt");
  std::ofstream(path, std::ios::binary) << "abc";
  CHECK(io::sha256_file(path) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("minimal configuration takes the defaults") {
  const ScenarioConfig c = parse_config("[medium]\npreset = oscillating\n");
  CHECK(c.probe.fc == 5e6);
  CHECK(c.probe.fs == 30e6);
  CHECK(c.probe.c == 1540.0);
  CHECK(c.snr_db == 10.0);
  CHECK(c.n_e == 251);
  CHECK(c.step == 21);
  CHECK(c.r_max == 0.04);
  CHECK(c.preset == "oscillating");
  CHECK(c.duration == 500e-6);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(parse_config("[medium]\npreset = oscillating\n[windows]\nn_e = 250\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[medium]\npreset = oscillating\n[emission]\nmode = pe\n[windows]\nstep = 21\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("[medium]\npreset = oscillating\n[windows]\nwidth = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[colour]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[medium]\npreset = cyst\n[scatterer.0]\nz0 = 0.03\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[medium]\npreset = oscillating\n[mmode]\nz_max = 0.05\n"), ConfigError);
  try {
    parse_config("[medium]\npreset = oscillating\n[windows\n", "bad.ini");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.ini") != std::string::npos);
  }
  CHECK_NOTHROW(parse_config("[medium]\npreset = oscillating\n[emission]\nmode = pe\n"));
}

TEST_CASE("explicit scatterers") {
  const ScenarioConfig c = parse_config(
      "[scatterer.0]\nmotion = static\nz0 = 0.02\n"
      "[scatterer.1]\nmotion = piecewise\nknots = 0:0.03;1e-3:0.031\necho = blinking\nblinks = 1e-5:2e-5:0.8\n");
  const Medium m = build_medium(c);
  REQUIRE(m.scatterers.size() == 2);
  CHECK(depth_at(m.scatterers[0], 0.0) == 0.02);
  CHECK(depth_at(m.scatterers[1], 0.5e-3) == doctest::Approx(0.0305));
  CHECK(echogenicity_at(m.scatterers[1], 1.5e-5) == 0.8);
}

TEST_CASE("attenuated column preset respects the reference length bound") {
  const ScenarioConfig c = parse_config("[medium]\npreset = attenuated_column\n");
  CHECK(c.n_e == 4501);
  CHECK(static_cast<double>(c.n_e) <= max_reference_length(0.1e-3, 1.0, c.probe.fs));
  CHECK(c.attenuation.enabled);
  CHECK(build_medium(c).attenuation.alpha == 1.5);
  const ScenarioConfig off = parse_config("[medium]\npreset = attenuated_column\nattenuation = false\n");
  CHECK_FALSE(build_medium(off).attenuation.enabled);
}

TEST_CASE("reseeding changes every stream") {
  ScenarioConfig a = parse_config("[medium]\npreset = blinking\n");
  ScenarioConfig b = a;
  b.reseed(42);
  CHECK(a.medium_seed != b.medium_seed);
  CHECK(a.emission_seed != b.emission_seed);
  CHECK(a.noise_seed != b.noise_seed);
}
