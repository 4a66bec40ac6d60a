// SPDX-License-Identifier: Apache-2.0

#include "ceui/metrics.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace ceui {

double islr(std::span<const double> line, Index peak_index, Index mainlobe_halfwidth) {
  const auto n = static_cast<Index>(line.size());
  if (peak_index < 0 || peak_index >= n) throw std::out_of_range("islr: peak index outside the line");
  double main = 0.0;
  double side = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double e = line[static_cast<std::size_t>(i)] * line[static_cast<std::size_t>(i)];
    if (std::abs(i - peak_index) <= mainlobe_halfwidth) main += e;
    else side += e;
  }
  if (!(main > 0.0)) throw std::domain_error("islr: zero mainlobe energy");
  return side / main;
}

double islr(const VectorXd& line, Index peak_index, Index mainlobe_halfwidth) {
  return islr(std::span(line.data(), static_cast<std::size_t>(line.size())), peak_index, mainlobe_halfwidth);
}

double pslr_db(const VectorXd& line, Index peak_index, Index mainlobe_halfwidth) {
  const double peak = std::abs(line(peak_index));
  double side = 0.0;
  for (Index i = 0; i < line.size(); ++i)
    if (std::abs(i - peak_index) > mainlobe_halfwidth) side = std::max(side, std::abs(line(i)));
  return 20.0 * std::log10(side / peak);
}

double mainlobe_width_halfpower(const VectorXd& env, Index lo, Index hi, double spacing, double wavelength) {
  lo = std::max<Index>(lo, 0);
  hi = std::min<Index>(hi, env.size() - 1);
  if (hi < lo) throw std::out_of_range("mainlobe_width_halfpower: empty search range");
  Index peak = lo;
  env.segment(lo, hi - lo + 1).maxCoeff(&peak);
  peak += lo;
  const double level = env(peak) / std::numbers::sqrt2;
  if (!(env(peak) > 0.0)) throw std::domain_error("mainlobe_width_halfpower: no peak");

  Index r = peak;
  while (r + 1 < env.size() && env(r + 1) >= level) ++r;
  Index l = peak;
  while (l - 1 >= 0 && env(l - 1) >= level) --l;
  if (r + 1 >= env.size() || l - 1 < 0)
    throw std::domain_error("mainlobe_width_halfpower: half-power crossing outside the line");
  const double right = static_cast<double>(r) + (env(r) - level) / (env(r) - env(r + 1));
  const double left = static_cast<double>(l) - (env(l) - level) / (env(l) - env(l - 1));
  return (right - left) * spacing / wavelength;
}

double mainlobe_width_halfpower(const VectorXd& env, double spacing, double wavelength) {
  return mainlobe_width_halfpower(env, 0, env.size() - 1, spacing, wavelength);
}

double psnr_at_depth(const MModeImage& image, double depth, const PsnrOptions& options) {
  const VectorXd& z = image.depth_grid;
  std::vector<Index> peak_rows;
  std::vector<Index> noise_rows;
  for (Index i = 0; i < z.size(); ++i) {
    const double d = std::abs(z(i) - depth);
    if (d <= options.peak_window) peak_rows.push_back(i);
    else if (d <= options.peak_window + options.noise_band) noise_rows.push_back(i);
  }
  if (depth < z(0) || depth > z(z.size() - 1))
    throw std::out_of_range("psnr_at_depth: depth outside the image grid");
  if (peak_rows.empty()) peak_rows.push_back(image.row_nearest(depth));
  if (noise_rows.empty()) throw std::domain_error("psnr_at_depth: empty noise band");
  double sum_db = 0.0;
  for (Index w = 0; w < image.cols(); ++w) {
    double peak = 0.0;
    for (Index r : peak_rows) peak = std::max(peak, image.values(r, w));
    double energy = 0.0;
    for (Index r : noise_rows) energy += image.values(r, w) * image.values(r, w);
    const double rms = std::sqrt(energy / static_cast<double>(noise_rows.size()));
    double db = options.cap_db;
    if (rms > 0.0 && peak > 0.0) db = std::min(options.cap_db, 20.0 * std::log10(peak / rms));
    else if (peak == 0.0) db = -options.cap_db;
    sum_db += db;
  }
  return sum_db / static_cast<double>(image.cols());
}

namespace {

// Peak of |X| over bins [k_lo, k_hi] refined by a parabola through the log-magnitudes.
double refined_peak_bin(const std::vector<std::complex<double>>& spectrum, Index k_lo, Index k_hi) {
  Index best = k_lo;
  double best_mag = -1.0;
  for (Index k = k_lo; k <= k_hi; ++k) {
    const double m = std::abs(spectrum[static_cast<std::size_t>(k)]);
    if (m > best_mag) {
      best_mag = m;
      best = k;
    }
  }
  if (!(best_mag > 0.0)) throw std::domain_error("no spectral peak in the search band");
  if (best <= 0 || best + 1 >= static_cast<Index>(spectrum.size())) return static_cast<double>(best);
  const double a = std::log(std::abs(spectrum[static_cast<std::size_t>(best - 1)]) + 1e-300);
  const double b = std::log(best_mag);
  const double c = std::log(std::abs(spectrum[static_cast<std::size_t>(best + 1)]) + 1e-300);
  const double denom = a - 2.0 * b + c;
  const double delta = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
  return static_cast<double>(best) + std::clamp(delta, -0.5, 0.5);
}

VectorXd hann_tapered(const VectorXd& x) {
  const Index n = x.size();
  VectorXd out(n);
  for (Index i = 0; i < n; ++i)
    out(i) = x(i) * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1)));
  return out;
}

}  // namespace

double estimate_doppler_shift(const RfRecord& rf, const ProbeConfig& probe) {
  if (rf.size() < 4) throw std::domain_error("estimate_doppler_shift: record too short");
  const Index n_fft = next_pow2(rf.size()) * 16;
  const auto spectrum = fft_real(hann_tapered(rf.samples), n_fft);
  const double bin = rf.fs / static_cast<double>(n_fft);
  const auto k_lo = static_cast<Index>(std::ceil(probe.band_low() / bin));
  const auto k_hi = static_cast<Index>(std::floor(probe.band_high() / bin));
  const double peak = refined_peak_bin(spectrum, k_lo, std::min(k_hi, n_fft / 2));
  return peak * bin - probe.fc;
}

double dominant_frequency(const VectorXd& trace, double rate, double min_freq) {
  if (trace.size() < 3) throw std::domain_error("dominant_frequency: trace too short");
  const VectorXd centred = trace.array() - trace.mean();
  const Index n_fft = std::max<Index>(next_pow2(trace.size()) * 64, 4096);
  const auto spectrum = fft_real(hann_tapered(centred), n_fft);
  const double bin = rate / static_cast<double>(n_fft);
  const Index k_lo = std::max<Index>(1, static_cast<Index>(std::floor(min_freq / bin)) + 1);
  return refined_peak_bin(spectrum, k_lo, n_fft / 2) * bin;
}

BlinkRuns count_blinks(const MModeImage& image, double depth, double threshold_frac, double min_gap) {
  BlinkRuns out;
  if (image.cols() == 0) return out;
  const VectorXd row = image.values.row(image.row_nearest(depth)).transpose();
  const double max = row.maxCoeff();
  if (!(max > 0.0)) return out;
  const double threshold = threshold_frac * max;
  Index w = 0;
  while (w < row.size()) {
    if (row(w) >= threshold) {
      const Index start = w;
      while (w + 1 < row.size() && row(w + 1) >= threshold) ++w;
      if (!out.intervals.empty() && image.time_grid(start) - out.intervals.back().second < min_gap) {
        out.intervals.back().second = image.time_grid(w);
      } else {
        out.intervals.emplace_back(image.time_grid(start), image.time_grid(w));
        ++out.count;
      }
    }
    ++w;
  }
  return out;
}

namespace {

std::pair<Index, Index> row_range(const VectorXd& z, double z_lo, double z_hi) {
  Index lo = 0;
  while (lo < z.size() && z(lo) < z_lo) ++lo;
  Index hi = z.size() - 1;
  while (hi >= 0 && z(hi) > z_hi) --hi;
  if (hi < lo) throw std::out_of_range("depth range outside the image grid");
  return {lo, hi};
}

}  // namespace

VectorXd peak_depth_trace(const MModeImage& image, double z_lo, double z_hi) {
  const auto [lo, hi] = row_range(image.depth_grid, z_lo, z_hi);
  const double dz = image.depth_grid.size() > 1 ? image.depth_grid(1) - image.depth_grid(0) : 0.0;
  VectorXd out(image.cols());
  for (Index w = 0; w < image.cols(); ++w) {
    Index p = 0;
    image.values.col(w).segment(lo, hi - lo + 1).maxCoeff(&p);
    p += lo;
    double delta = 0.0;
    if (p > 0 && p + 1 < image.rows()) {
      const double a = image.values(p - 1, w);
      const double b = image.values(p, w);
      const double c = image.values(p + 1, w);
      const double denom = a - 2.0 * b + c;
      if (denom < 0.0) delta = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    }
    out(w) = image.depth_grid(p) + delta * dz;
  }
  return out;
}

VectorXd region_islr(const MModeImage& image, double z_lo, double z_hi, double mainlobe_half) {
  const auto [lo, hi] = row_range(image.depth_grid, z_lo, z_hi);
  VectorXd out(image.cols());
  for (Index w = 0; w < image.cols(); ++w) {
    const VectorXd seg = image.values.col(w).segment(lo, hi - lo + 1);
    Index p = 0;
    seg.maxCoeff(&p);
    double main = 0.0;
    double side = 0.0;
    for (Index i = 0; i < seg.size(); ++i) {
      const double e = seg(i) * seg(i);
      if (std::abs(image.depth_grid(lo + i) - image.depth_grid(lo + p)) <= mainlobe_half + 1e-12) main += e;
      else side += e;
    }
    if (!(main > 0.0)) throw std::domain_error("region_islr: zero mainlobe energy");
    out(w) = side / main;
  }
  return out;
}

}  // namespace ceui
