// SPDX-License-Identifier: Apache-2.0

#include "ceui/probe.hpp"

#include <numbers>
#include <string>

namespace ceui {

namespace {

constexpr double kTruncation = 1e-3;

}  // namespace

void ProbeConfig::validate() const {
  if (!(fc > 0.0)) throw std::invalid_argument("probe: fc must be positive");
  if (!(bw_frac > 0.0 && bw_frac < 2.0)) throw std::invalid_argument("probe: bw_frac must lie in (0, 2)");
  if (!(c > 0.0)) throw std::invalid_argument("probe: sound speed c must be positive");
  if (!(fs > 2.0 * fc * (1.0 + bw_frac / 2.0)))
    throw std::invalid_argument("probe: fs must exceed 2*fc*(1 + bw_frac/2), got fs=" + std::to_string(fs));
  if ((p_emit - p_recv).norm() == 0.0) throw std::invalid_argument("probe: emitter and receiver coincide");
}

double impulse_envelope_sigma(const ProbeConfig& config) {
  // |I(f)| = exp(-(f - fc)^2 / (2 sf^2)) is 1/2 at fc*(1 +- bw/2).
  const double sigma_f = config.fc * config.bw_frac / 2.0 / std::sqrt(2.0 * std::numbers::ln2);
  return 1.0 / (2.0 * std::numbers::pi * sigma_f);
}

RfRecord impulse_response(const ProbeConfig& config) {
  config.validate();
  const double sigma_t = impulse_envelope_sigma(config);
  const double t_cut = sigma_t * std::sqrt(-2.0 * std::log(kTruncation));
  const auto half = static_cast<Index>(std::floor(t_cut * config.fs));
  RfRecord out;
  out.fs = config.fs;
  out.t0 = -static_cast<double>(half) / config.fs;
  out.samples.resize(2 * half + 1);
  for (Index n = -half; n <= half; ++n) {
    const double t = static_cast<double>(n) / config.fs;
    out.samples(n + half) =
        std::exp(-t * t / (2.0 * sigma_t * sigma_t)) * std::cos(2.0 * std::numbers::pi * config.fc * t);
  }
  return out;
}

RfRecord apply_transducer(const RfRecord& signal, const ProbeConfig& config) {
  if (std::abs(signal.fs - config.fs) > 1e-9 * config.fs)
    throw std::invalid_argument("apply_transducer: signal sampled at " + std::to_string(signal.fs) +
                                " Hz, probe at " + std::to_string(config.fs) + " Hz");
  const RfRecord kernel = impulse_response(config);
  RfRecord out;
  out.fs = signal.fs;
  out.t0 = signal.t0;
  out.samples = convolve_same(signal.samples, kernel.samples);
  return out;
}

}  // namespace ceui
