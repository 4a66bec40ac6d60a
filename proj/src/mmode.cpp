// SPDX-License-Identifier: Apache-2.0

#include "ceui/mmode.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace ceui {

EnvelopeOrder envelope_order_from_string(std::string_view name) {
  if (name == "rectified" || name == "literal") return EnvelopeOrder::rectified;
  if (name == "analytic" || name == "conventional") return EnvelopeOrder::analytic;
  throw std::invalid_argument("unknown envelope order '" + std::string(name) + "'");
}

std::string_view to_string(EnvelopeOrder order) {
  return order == EnvelopeOrder::rectified ? "rectified" : "analytic";
}

Index DepthGrid::size() const {
  if (!(dz > 0.0) || z_max < z_min) return 0;
  return static_cast<Index>(std::floor((z_max - z_min) / dz + 1e-9)) + 1;
}

VectorXd DepthGrid::points() const {
  const Index n = size();
  VectorXd out(n);
  for (Index i = 0; i < n; ++i) out(i) = z_min + static_cast<double>(i) * dz;
  return out;
}

Index MModeImage::row_nearest(double z) const {
  Index best = 0;
  (depth_grid.array() - z).abs().minCoeff(&best);
  return best;
}

VectorXd envelope(const VectorXd& line, EnvelopeOrder order) {
  const VectorXd input = order == EnvelopeOrder::rectified ? VectorXd(line.cwiseAbs()) : line;
  const auto analytic = analytic_signal(input);
  VectorXd out(line.size());
  for (Index i = 0; i < line.size(); ++i) out(i) = std::abs(analytic[static_cast<std::size_t>(i)]);
  return out;
}

VectorXd upsample(const VectorXd& x, int factor, bool non_negative) {
  if (factor < 1) throw std::invalid_argument("upsample: factor must be >= 1");
  if (factor == 1 || x.size() < 2) return x;
  const Index n = x.size();
  const Index u = factor;
  const Index half = 8 * u;
  VectorXd kernel(2 * half + 1);
  for (Index m = -half; m <= half; ++m) {
    const double arg = static_cast<double>(m) / static_cast<double>(u);
    const double sinc = m == 0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
    const double hann = 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(m) / static_cast<double>(half + 1)));
    kernel(m + half) = sinc * hann;
  }
  VectorXd out = VectorXd::Zero((n - 1) * u + 1);
  for (Index m = 0; m < out.size(); ++m) {
    const Index j_lo = std::max<Index>(0, (m - half + u - 1) / u);
    const Index j_hi = std::min<Index>(n - 1, (m + half) / u);
    double acc = 0.0;
    for (Index j = j_lo; j <= j_hi; ++j) acc += x(j) * kernel(m - j * u + half);
    out(m) = acc;
  }
  if (non_negative) out = out.cwiseMax(0.0);
  return out;
}

std::optional<double> depth_map(double t_tof, const ProbeConfig& probe) {
  const double path = t_tof * probe.c;
  const double dx = probe.lateral_offset();
  if (path < dx) return std::nullopt;
  return std::sqrt(path * path - dx * dx) / 2.0;
}

double forward_tof(double z, const ProbeConfig& probe) {
  const Vec3 p{0.0, 0.0, z};
  return ((p - probe.p_emit).norm() + (probe.p_recv - p).norm()) / probe.c;
}

double max_mapped_depth(Index n_lags, const ProbeConfig& probe) {
  const auto z = depth_map(static_cast<double>(n_lags - 1) / probe.fs, probe);
  return z.value_or(0.0);
}

DepthGrid default_depth_grid(const ProbeConfig& probe, Index n_lags, double r_max) {
  const double dz = probe.wavelength() / 8.0;
  const double deepest = std::min(r_max, max_mapped_depth(n_lags, probe));
  return {0.0, std::floor(deepest / dz) * dz, dz};
}

VectorXd line_to_column(const VectorXd& line, const ProbeConfig& probe, const MModeOptions& options) {
  const VectorXd env = upsample(envelope(line, options.envelope), options.upsample);
  const double lag_period = probe.sampling_period() / options.upsample;
  const double direct = probe.lateral_offset() / probe.c / lag_period;  // fractional lag of z = 0
  const Index n = env.size();
  if (direct > static_cast<double>(n - 1))
    throw std::out_of_range("line_to_column: line ends before the direct-path arrival");

  // Mapped (depth, value) pairs, increasing in depth, starting with the z = 0 anchor.
  std::vector<double> depth;
  std::vector<double> value;
  depth.reserve(static_cast<std::size_t>(n));
  value.reserve(static_cast<std::size_t>(n));
  depth.push_back(0.0);
  value.push_back(interpolate_linear(env, direct));
  for (Index u = static_cast<Index>(std::floor(direct)) + 1; u < n; ++u) {
    const auto z = depth_map(static_cast<double>(u) * lag_period, probe);
    if (!z || *z <= depth.back()) continue;
    depth.push_back(*z);
    value.push_back(env(u));
  }

  const VectorXd grid = options.grid.points();
  if (grid.size() == 0) throw std::invalid_argument("line_to_column: empty depth grid");
  if (grid(0) < 0.0 || grid(grid.size() - 1) > depth.back() * (1.0 + 1e-12))
    throw std::out_of_range("line_to_column: depth grid [" + std::to_string(grid(0)) + ", " +
                            std::to_string(grid(grid.size() - 1)) + "] m exceeds mapped range [0, " +
                            std::to_string(depth.back()) + "] m");
  VectorXd column(grid.size());
  std::size_t j = 0;
  for (Index i = 0; i < grid.size(); ++i) {
    const double z = grid(i);
    while (j + 2 < depth.size() && depth[j + 1] < z) ++j;
    const double span = depth[j + 1] - depth[j];
    const double a = std::clamp((z - depth[j]) / span, 0.0, 1.0);
    column(i) = (1.0 - a) * value[j] + a * value[j + 1];
  }
  return column;
}

MModeImage assemble_mmode(std::span<const VectorXd> lines, std::span<const double> times, const ProbeConfig& probe,
                          const MModeOptions& options, ImageMeta meta) {
  if (lines.size() != times.size())
    throw std::invalid_argument("assemble_mmode: " + std::to_string(lines.size()) + " lines for " +
                                std::to_string(times.size()) + " slow-time samples");
  for (const auto& l : lines)
    if (l.size() != lines.front().size()) throw std::invalid_argument("assemble_mmode: lines differ in length");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("assemble_mmode: slow-time grid not increasing");

  MModeImage image;
  image.depth_grid = options.grid.points();
  image.time_grid = Eigen::Map<const VectorXd>(times.data(), static_cast<Index>(times.size()));
  image.values.resize(image.depth_grid.size(), static_cast<Index>(lines.size()));
  for (std::size_t w = 0; w < lines.size(); ++w)
    image.values.col(static_cast<Index>(w)) = line_to_column(lines[w], probe, options);

  meta.fc = probe.fc;
  meta.fs = probe.fs;
  meta.c = probe.c;
  meta.lateral_offset = probe.lateral_offset();
  image.meta = std::move(meta);
  if (options.compounding_halfwidth > 0) return compound_hamming(image, options.compounding_halfwidth);
  return image;
}

MModeImage compound_hamming(const MModeImage& image, int halfwidth) {
  if (halfwidth < 0) throw std::invalid_argument("compound_hamming: negative half-width");
  if (halfwidth == 0) return image;
  const Index h = halfwidth;
  VectorXd weights(2 * h + 1);
  for (Index j = 0; j <= 2 * h; ++j)
    weights(j) = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(2 * h));
  MModeImage out = image;
  const Index cols = image.cols();
  for (Index w = 0; w < cols; ++w) {
    const Index lo = std::max<Index>(0, w - h);
    const Index hi = std::min<Index>(cols - 1, w + h);
    const auto wseg = weights.segment(lo - w + h, hi - lo + 1);
    out.values.col(w) = image.values.middleCols(lo, hi - lo + 1) * wseg / wseg.sum();
  }
  return out;
}

}  // namespace ceui
