// SPDX-License-Identifier: Apache-2.0

#include "ceui/waveform.hpp"

#include "ceui/random.hpp"

#include <numbers>
#include <string>

namespace ceui {

ContinuousExcitation gen_noise_excitation(Index n_samples, const ProbeConfig& config, double sigma,
                                          std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("gen_noise_excitation: n_samples must be >= 1");
  if (!(sigma >= 0.0)) throw std::invalid_argument("gen_noise_excitation: sigma must be non-negative");
  ContinuousExcitation out;
  out.sigma = sigma;
  out.seed = seed;
  out.samples.fs = config.fs;
  out.samples.t0 = 0.0;
  out.samples.samples.resize(n_samples);
  Rng rng(seed);
  const double w = 2.0 * std::numbers::pi * config.fc / config.fs;
  for (Index n = 0; n < n_samples; ++n) {
    const double amplitude = rng.rayleigh(sigma);
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    out.samples.samples(n) = amplitude * std::cos(w * static_cast<double>(n) + phase);
  }
  return out;
}

CodedPulse gen_barker13_pulse(const ProbeConfig& config, int cycles_per_chip) {
  if (cycles_per_chip < 1) throw std::invalid_argument("gen_barker13_pulse: cycles_per_chip must be >= 1");
  const double spc = config.fs / config.fc * cycles_per_chip;
  const double spc_round = std::round(spc);
  if (std::abs(spc - spc_round) > 1e-9 * spc)
    throw std::invalid_argument("gen_barker13_pulse: fs/fc * cycles_per_chip must be an integer, got " +
                                std::to_string(spc));
  CodedPulse out;
  out.code.assign(kBarker13.begin(), kBarker13.end());
  out.cycles_per_chip = cycles_per_chip;
  out.samples_per_chip = static_cast<Index>(spc_round);
  out.samples.fs = config.fs;
  out.samples.samples.resize(13 * out.samples_per_chip);
  const double w = 2.0 * std::numbers::pi * config.fc / config.fs;
  for (Index n = 0; n < out.samples.size(); ++n)
    out.samples.samples(n) = kBarker13[static_cast<std::size_t>(n / out.samples_per_chip)] *
                             std::cos(w * static_cast<double>(n));
  return out;
}

double pulse_repetition_interval(double r_max, const ProbeConfig& config) { return 2.0 * r_max / config.c; }

PulseTrain gen_pe_emission_train(const CodedPulse& pulse, double r_max, double duration,
                                 const ProbeConfig& config) {
  PulseTrain out;
  out.pri = pulse_repetition_interval(r_max, config);
  out.pulse_length = pulse.samples.size();
  const double pri_samples = out.pri * config.fs;
  if (static_cast<double>(out.pulse_length) > pri_samples)
    throw std::invalid_argument("gen_pe_emission_train: pulse (" + std::to_string(out.pulse_length) +
                                " samples) longer than the PRI (" + std::to_string(pri_samples) + " samples)");
  const auto total = static_cast<Index>(std::llround(duration * config.fs));
  out.samples.fs = config.fs;
  out.samples.samples = VectorXd::Zero(total);
  for (Index k = 0;; ++k) {
    const auto start = static_cast<Index>(std::llround(static_cast<double>(k) * pri_samples));
    if (start + out.pulse_length > total) break;
    out.samples.samples.segment(start, out.pulse_length) = pulse.samples.samples;
    out.starts.push_back(start);
  }
  return out;
}

}  // namespace ceui
