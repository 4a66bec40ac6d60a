// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include "ceui/probe.hpp"
#include "ceui/rfsim.hpp"
#include "ceui/signal.hpp"
#include "ceui/waveform.hpp"

#include <doctest.h>

#include <random>

using namespace ceui;

namespace {

// Largest DTFT magnitude of h over a fine grid around fc.
double spectral_peak(const VectorXd& h, const ProbeConfig& p) {
  double peak = 0.0;
  for (double f = 0.5 * p.fc; f <= 1.5 * p.fc; f += 1e3) peak = std::max(peak, oracle::dtft_magnitude(h, f, p.fs));
  return peak;
}

// Frequency where the DTFT magnitude falls to half its peak, searched outward from fc.
double half_amplitude_edge(const VectorXd& h, const ProbeConfig& p, double direction, double peak) {
  double f = p.fc;
  while (oracle::dtft_magnitude(h, f, p.fs) > 0.5 * peak) f += direction * 1e3;
  double lo = f - direction * 1e3;
  double hi = f;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle::dtft_magnitude(h, mid, p.fs) > 0.5 * peak ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("transducer spectrum is half amplitude at the band edges") {
  const ProbeConfig p;
  const VectorXd h = impulse_response(p).samples;
  const double peak = spectral_peak(h, p);
  CHECK(oracle::dtft_magnitude(h, 2.75e6, p.fs) / peak == doctest::Approx(0.501).epsilon(0.02));
  CHECK(oracle::dtft_magnitude(h, 7.25e6, p.fs) / peak == doctest::Approx(0.501).epsilon(0.02));
}

TEST_CASE("envelope duration agrees with the numeric -6 dB bandwidth") {
  const ProbeConfig p;
  const VectorXd h = impulse_response(p).samples;
  const double peak = spectral_peak(h, p);
  const double b6 = half_amplitude_edge(h, p, +1.0, peak) - half_amplitude_edge(h, p, -1.0, peak);
  // A Gaussian with half-amplitude bandwidth B has half-amplitude duration 4 ln2 / (pi B).
  const double duration_from_spectrum = 4.0 * std::numbers::ln2 / (std::numbers::pi * b6);
  const double duration_model = 2.0 * std::sqrt(2.0 * std::numbers::ln2) * impulse_envelope_sigma(p);
  CHECK(duration_model == doctest::Approx(duration_from_spectrum).epsilon(0.01));
}

TEST_CASE("very wide band shrinks the kernel envelope below one period") {
  ProbeConfig p;
  p.bw_frac = 1.9;
  p.fs = 60e6;
  const double fwhm = 2.0 * std::sqrt(2.0 * std::numbers::ln2) * impulse_envelope_sigma(p);
  CHECK(fwhm < 1.0 / p.fc);
  CHECK(impulse_response(p).size() < impulse_response(ProbeConfig{}).size());
}

TEST_CASE("transducer maps an impulse to the centred kernel") {
  const ProbeConfig p;
  const RfRecord kernel = impulse_response(p);
  const Index half = (kernel.size() - 1) / 2;
  RfRecord in;
  in.fs = p.fs;
  in.samples = VectorXd::Zero(4 * kernel.size());
  const Index at = 2 * kernel.size();
  in.samples(at) = 1.0;
  const RfRecord out = apply_transducer(in, p);
  CHECK((out.samples.segment(at - half, kernel.size()) - kernel.samples).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(out.samples.head(at - half).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a tone at fc passes scaled by the kernel response at fc") {
  const ProbeConfig p;
  const VectorXd h = impulse_response(p).samples;
  const double gain = oracle::dtft_magnitude(h, p.fc, p.fs);
  RfRecord in;
  in.fs = p.fs;
  in.samples.resize(3000);
  for (Index n = 0; n < in.size(); ++n) in.samples(n) = std::cos(2.0 * std::numbers::pi * p.fc * n / p.fs + 0.3);
  const RfRecord out = apply_transducer(in, p);
  const Index half = (h.size() - 1) / 2;
  double err = 0.0;
  for (Index n = half; n < in.size() - half; ++n) err = std::max(err, std::abs(out.samples(n) - gain * in.samples(n)));
  CHECK(err < 1e-9 * gain);
}

TEST_CASE("filtered white noise concentrates its power in the probe band") {
  const ProbeConfig p;
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> normal;
  RfRecord in;
  in.fs = p.fs;
  in.samples.resize(1 << 16);
  for (Index n = 0; n < in.size(); ++n) in.samples(n) = normal(gen);
  const RfRecord out = apply_transducer(in, p);
  const auto spectrum = fft_real(out.samples, out.size());
  double in_band = 0.0;
  double total = 0.0;
  for (Index k = 1; k < out.size() / 2; ++k) {
    const double f = static_cast<double>(k) * p.fs / static_cast<double>(out.size());
    const double power = std::norm(spectrum[static_cast<std::size_t>(k)]);
    total += power;
    if (f >= p.band_low() && f <= p.band_high()) in_band += power;
  }
  // A Gaussian amplitude response with half-amplitude edges at fc(1 +- bw/2) has
  // a power response of standard deviation sigma_f / sqrt 2, so the band holds
  // erf(sqrt(2 ln 2)) of the power.
  const double expected = std::erf(std::sqrt(2.0 * std::numbers::ln2));
  CHECK(in_band / total == doctest::Approx(expected).epsilon(0.02));
  const double out_density = (total - in_band) / (p.fs / 2.0 - p.fc * p.bw_frac);
  const double in_density = in_band / (p.fc * p.bw_frac);
  CHECK(10.0 * std::log10(out_density / in_density) < -10.0);
}

TEST_CASE("noise excitation is normal with the Monte-Carlo variance") {
  const ProbeConfig p;
  const Index n = 1000000;
  const VectorXd e = gen_noise_excitation(n, p, 1.0, 99).samples.samples;
  const double mean = e.mean();
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double d = e(i) - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double skew = m3 / std::pow(m2, 1.5);
  const double kurt = m4 / (m2 * m2);
  const double jarque_bera = static_cast<double>(n) / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
  CHECK(jarque_bera < 9.21);  // chi-square, 2 dof, 1 %

  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double acc = 0.0;
  const int draws = 2000000;
  for (int i = 0; i < draws; ++i) {
    const double a = std::sqrt(-2.0 * std::log(1.0 - u(gen)));
    const double c = std::cos(2.0 * std::numbers::pi * u(gen));
    acc += a * a * c * c;
  }
  CHECK(m2 == doctest::Approx(acc / draws).epsilon(0.01));
}

TEST_CASE("zero sigma gives a silent excitation") {
  const auto e = gen_noise_excitation(1000, ProbeConfig{}, 0.0, 3);
  CHECK(e.samples.samples.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("noise excitation is reproducible from its seed") {
  const ProbeConfig p;
  CHECK(gen_noise_excitation(500, p, 1.0, 4).samples.samples == gen_noise_excitation(500, p, 1.0, 4).samples.samples);
  CHECK(gen_noise_excitation(500, p, 1.0, 4).samples.samples != gen_noise_excitation(500, p, 1.0, 5).samples.samples);
}

TEST_CASE("Barker-13 chips have unit sidelobes") {
  VectorXd chips(13);
  for (Index i = 0; i < 13; ++i) chips(i) = kBarker13[static_cast<std::size_t>(i)];
  const VectorXd r = oracle::cross_correlation(chips, chips);
  CHECK(r(12) == 13.0);
  double worst = 0.0;
  for (Index i = 0; i < r.size(); ++i)
    if (i != 12) worst = std::max(worst, std::abs(r(i)));
  CHECK(worst == 1.0);
  CHECK(20.0 * std::log10(worst / r(12)) == doctest::Approx(-22.28).epsilon(1e-3));
}

TEST_CASE("Barker-13 pulse has 13 chips of one carrier period") {
  const ProbeConfig p;
  const CodedPulse pulse = gen_barker13_pulse(p);
  CHECK(pulse.samples.size() == 78);
  CHECK(pulse.samples_per_chip == 6);
  CHECK(pulse.samples.samples(0) == doctest::Approx(1.0));
  CHECK(pulse.samples.samples(30) == doctest::Approx(-1.0));  // chip 5 is negative
  CHECK_THROWS_AS(gen_barker13_pulse(ProbeConfig{5e6, 32e6}), std::invalid_argument);
}

TEST_CASE("pulse repetition follows the round trip to r_max") {
  const ProbeConfig p;
  const double pri = pulse_repetition_interval(0.04, p);
  CHECK(pri == doctest::Approx(51.948e-6).epsilon(1e-4));
  CHECK(1.0 / pri == doctest::Approx(19250.0).epsilon(1e-3));
  const CodedPulse pulse = gen_barker13_pulse(p);
  CHECK(gen_pe_emission_train(pulse, 0.04, 40e-6, p).starts.size() == 1);
  CHECK(gen_pe_emission_train(pulse, 0.04, 365e-6, p).starts.size() == 7);
}

TEST_CASE("emission power counts active samples only") {
  const ProbeConfig p;
  const CodedPulse pulse = gen_barker13_pulse(p);
  const PulseTrain train = gen_pe_emission_train(pulse, 0.04, 365e-6, p);
  CHECK(emission_power(train.samples) == doctest::Approx(mean_power(pulse.samples)).epsilon(1e-3));
}
