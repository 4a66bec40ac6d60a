// SPDX-License-Identifier: Apache-2.0
//
// Two mono-element probe: one emitter and one receiver modelled as points,
// sharing a Gaussian-enveloped piezo impulse response.

#pragma once

#include "ceui/signal.hpp"

namespace ceui {

struct ProbeConfig {
  double fc = 5e6;       ///< centre frequency (Hz)
  double fs = 30e6;      ///< sampling frequency (Hz)
  double bw_frac = 0.9;  ///< fractional bandwidth at -6 dB
  double c = 1540.0;     ///< sound speed (m/s)
  Vec3 p_emit{-15e-3, 0.0, 0.0};
  Vec3 p_recv{15e-3, 0.0, 0.0};

  double sampling_period() const { return 1.0 / fs; }
  double wavelength() const { return c / fc; }
  /// Lateral emitter/receiver separation |p_E.x - p_R.x|.
  double lateral_offset() const { return std::abs(p_emit.x() - p_recv.x()); }
  double band_low() const { return fc * (1.0 - bw_frac / 2.0); }
  double band_high() const { return fc * (1.0 + bw_frac / 2.0); }

  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

/// Gaussian envelope standard deviation (s) for the configured -6 dB bandwidth.
double impulse_envelope_sigma(const ProbeConfig& config);

/// Sampled i(t): unit-peak Gaussian-windowed cosine at fc, odd length, centred
/// (t0 is the time of sample 0, negative), truncated where the envelope drops
/// below 1e-3 of its peak.
RfRecord impulse_response(const ProbeConfig& config);

/// Convolves with i(t) in "same" alignment: output length equals input length and
/// the kernel centre introduces no delay.
RfRecord apply_transducer(const RfRecord& signal, const ProbeConfig& config);

}  // namespace ceui
