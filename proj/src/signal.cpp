// SPDX-License-Identifier: Apache-2.0

#include "ceui/signal.hpp"

#include <unsupported/Eigen/FFT>

namespace ceui {

std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& in) {
  Eigen::FFT<double> engine;
  std::vector<std::complex<double>> out;
  engine.fwd(out, in);
  return out;
}

std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& in) {
  Eigen::FFT<double> engine;
  std::vector<std::complex<double>> out;
  engine.inv(out, in);
  return out;
}

std::vector<std::complex<double>> fft_real(const VectorXd& in, Index n_fft) {
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(n_fft), {0.0, 0.0});
  const Index n = std::min(n_fft, in.size());
  for (Index i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = in(i);
  return fft(buf);
}

std::vector<std::complex<double>> analytic_signal(const VectorXd& x) {
  const auto n = static_cast<std::size_t>(x.size());
  if (n == 0) return {};
  auto spectrum = fft_real(x, x.size());
  // Keep DC (and Nyquist for even n), double positive frequencies, drop negative ones.
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < n; ++k) {
    const bool nyquist = (n % 2 == 0) && k == half;
    if (nyquist) continue;
    if (k < (n + 1) / 2) spectrum[k] *= 2.0;
    else spectrum[k] = 0.0;
  }
  return ifft(spectrum);
}

Index next_pow2(Index n) {
  Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace ceui
