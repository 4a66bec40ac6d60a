// SPDX-License-Identifier: Apache-2.0
//
// Compressed lines to M-mode image: envelope, band-limited upsampling, time of
// flight to depth through
//   z = sqrt((T_TOF c)^2 - dx^2) / 2,
// linear resampling onto a uniform depth grid and optional Hamming-weighted
// compounding of neighbouring slow-time columns.

#pragma once

#include "ceui/probe.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ceui {

enum class EnvelopeOrder {
  rectified,  ///< analytic-signal magnitude of |I_w|
  analytic,   ///< analytic-signal magnitude of I_w (default)
};

EnvelopeOrder envelope_order_from_string(std::string_view name);
std::string_view to_string(EnvelopeOrder order);

struct DepthGrid {
  double z_min = 0.0;
  double z_max = 0.04;
  double dz = 0.0;

  Index size() const;
  VectorXd points() const;
};

struct ImageMeta {
  double fc = 0.0;
  double fs = 0.0;
  double c = 0.0;
  double lateral_offset = 0.0;
  Index n_e = 0;
  Index step = 0;
  double r_max = 0.0;
  std::string label;
};

/// values(row, col): row indexes depth_grid, col indexes time_grid.
struct MModeImage {
  Eigen::MatrixXd values;
  VectorXd depth_grid;
  VectorXd time_grid;
  ImageMeta meta;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
  /// Row whose depth is closest to z.
  Index row_nearest(double z) const;
};

struct MModeOptions {
  int upsample = 4;
  DepthGrid grid;
  int compounding_halfwidth = 0;
  EnvelopeOrder envelope = EnvelopeOrder::analytic;
};

VectorXd envelope(const VectorXd& line, EnvelopeOrder order = EnvelopeOrder::analytic);

/// Zero insertion followed by a Hann-windowed sinc low-pass. Original samples are
/// kept exactly; output has (n - 1) * factor + 1 samples, clipped at zero when
/// `non_negative` is set.
VectorXd upsample(const VectorXd& x, int factor, bool non_negative = true);

/// Depth for a round-trip time; empty when t_tof * c < lateral offset.
std::optional<double> depth_map(double t_tof, const ProbeConfig& probe);

/// Round-trip time of an on-axis point scatterer at depth z for the actual element positions.
double forward_tof(double z, const ProbeConfig& probe);

/// Deepest depth reached by lag n_lags - 1 of a compressed line.
double max_mapped_depth(Index n_lags, const ProbeConfig& probe);

/// Grid over [0, min(r_max, deepest mapped depth)] with step lambda / 8.
DepthGrid default_depth_grid(const ProbeConfig& probe, Index n_lags, double r_max);

/// One compressed line to one image column on `grid`.
VectorXd line_to_column(const VectorXd& line, const ProbeConfig& probe, const MModeOptions& options);

MModeImage assemble_mmode(std::span<const VectorXd> lines, std::span<const double> times,
                          const ProbeConfig& probe, const MModeOptions& options, ImageMeta meta = {});

/// Each column replaced by the Hamming-weighted mean of its 2 * halfwidth + 1
/// neighbours (weights renormalised at the borders).
MModeImage compound_hamming(const MModeImage& image, int halfwidth);

}  // namespace ceui
