// SPDX-License-Identifier: Apache-2.0
//
// Image and signal quality measures: integrated and peak sidelobe ratios,
// half-power mainlobe width, PSNR around a depth, Doppler shift of a tone,
// blink counting along an image row, and the dominant frequency of a
// slow-time trace.

#pragma once

#include "ceui/mmode.hpp"

#include <span>
#include <vector>

namespace ceui {

struct LineMetrics {
  double islr = 0.0;     ///< linear
  double islr_db = 0.0;
  double pslr_db = 0.0;
  double mlw_halfpower = 0.0;  ///< wavelengths
  double peak_depth = 0.0;     ///< m
};

/// Sidelobe energy over mainlobe energy, mainlobe = |i - peak| <= halfwidth.
/// Throws std::domain_error when the mainlobe holds no energy.
double islr(std::span<const double> line, Index peak_index, Index mainlobe_halfwidth);
double islr(const VectorXd& line, Index peak_index, Index mainlobe_halfwidth);

/// Largest sidelobe magnitude over the peak magnitude, in dB.
double pslr_db(const VectorXd& line, Index peak_index, Index mainlobe_halfwidth);

inline double to_db_power(double ratio) { return 10.0 * std::log10(ratio); }

/// Full width between the two half-power (peak / sqrt 2) crossings around the
/// global maximum, crossings linearly interpolated, in units of `wavelength`.
/// Throws std::domain_error if either crossing is missing.
double mainlobe_width_halfpower(const VectorXd& envelope_line, double sample_spacing, double wavelength);

/// Same, restricted to the peak inside [lo, hi] (indices, inclusive).
double mainlobe_width_halfpower(const VectorXd& envelope_line, Index lo, Index hi, double sample_spacing,
                                double wavelength);

struct PsnrOptions {
  double peak_window = 0.0;   ///< half-width around the depth searched for the peak (m)
  double noise_band = 5e-3;   ///< extent of the noise band on each side, beyond the peak window (m)
  double cap_db = 200.0;      ///< value used when the noise band is silent
};

/// Mean over slow time of 20 log10(peak / RMS(noise band)).
double psnr_at_depth(const MModeImage& image, double depth, const PsnrOptions& options);

/// Spectral peak in the probe band minus fc: Hann taper, zero-padded
/// periodogram, parabolic interpolation of the log-magnitude peak.
double estimate_doppler_shift(const RfRecord& rf, const ProbeConfig& probe);

/// Frequency of the strongest spectral component of a real trace sampled at
/// `rate`, searched in (min_freq, rate/2]; the mean is removed first.
double dominant_frequency(const VectorXd& trace, double rate, double min_freq = 0.0);

struct BlinkRuns {
  Index count = 0;
  std::vector<std::pair<double, double>> intervals;  ///< slow-time [first, last] of each run
};

/// Contiguous runs of the row nearest `depth` at or above threshold_frac * row max.
/// Runs separated by less than `min_gap` seconds of slow time are merged.
BlinkRuns count_blinks(const MModeImage& image, double depth, double threshold_frac, double min_gap = 0.0);

/// Per-column depth of the maximum inside [z_lo, z_hi], refined by a parabola.
VectorXd peak_depth_trace(const MModeImage& image, double z_lo, double z_hi);

/// ISLR per column over [z_lo, z_hi]: mainlobe = |z - z_peak| <= mainlobe_half
/// around the column peak inside the region, energy taken from the envelope.
VectorXd region_islr(const MModeImage& image, double z_lo, double z_hi, double mainlobe_half);

}  // namespace ceui
