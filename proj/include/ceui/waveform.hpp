// SPDX-License-Identifier: Apache-2.0
//
// Emission waveforms: the continuous random excitation
//   e[n] = A[n] cos(2 pi fc n / fs + Theta[n]),  A ~ Rayleigh(sigma), Theta ~ U[0, 2 pi),
// the Barker-13 coded pulse and the pulse-echo emission train built from it.

#pragma once

#include "ceui/probe.hpp"

#include <array>
#include <cstdint>

namespace ceui {

inline constexpr std::array<int, 13> kBarker13{+1, +1, +1, +1, +1, -1, -1, +1, +1, -1, +1, -1, +1};

struct ContinuousExcitation {
  RfRecord samples;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

struct CodedPulse {
  RfRecord samples;
  std::vector<int> code;
  int cycles_per_chip = 1;
  Index samples_per_chip = 0;
};

/// Pulse-echo emission: pulse copies every PRI, first one at t = 0.
struct PulseTrain {
  RfRecord samples;
  std::vector<Index> starts;  ///< first sample of each pulse copy
  Index pulse_length = 0;
  double pri = 0.0;           ///< pulse repetition interval (s)
};

/// A and Theta are drawn per output sample, A first, from a generator seeded with `seed`.
/// e has variance sigma^2 (E[A^2] = 2 sigma^2, E[cos^2] = 1/2).
ContinuousExcitation gen_noise_excitation(Index n_samples, const ProbeConfig& config, double sigma,
                                          std::uint64_t seed);

CodedPulse gen_barker13_pulse(const ProbeConfig& config, int cycles_per_chip = 1);

/// Pulse repetition interval 2 r_max / c.
double pulse_repetition_interval(double r_max, const ProbeConfig& config);

/// Places every complete pulse copy that fits within `duration`; the copy k starts at
/// sample round(k * PRI * fs). Throws if the pulse is longer than the PRI.
PulseTrain gen_pe_emission_train(const CodedPulse& pulse, double r_max, double duration,
                                 const ProbeConfig& config);

}  // namespace ceui
