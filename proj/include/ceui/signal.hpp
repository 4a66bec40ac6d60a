// SPDX-License-Identifier: Apache-2.0
//
// Sampled signal container and the small set of dense DSP primitives shared by
// every stage of the pipeline (convolution, correlation, analytic signal).

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace ceui {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::Index;
using Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

/// Uniformly sampled real signal. Sample n sits at time t0 + n / fs.
template <typename Scalar>
struct BasicRfRecord {
  Vector<Scalar> samples;
  double fs = 1.0;
  double t0 = 0.0;

  Index size() const { return samples.size(); }
  double period() const { return 1.0 / fs; }
  double time_at(double n) const { return t0 + n / fs; }
  double duration() const { return static_cast<double>(samples.size()) / fs; }
};

using RfRecord = BasicRfRecord<double>;

/// Mean power over the whole record.
template <typename Scalar>
double mean_power(const BasicRfRecord<Scalar>& r) {
  if (r.size() == 0) return 0.0;
  return static_cast<double>(r.samples.squaredNorm()) / static_cast<double>(r.size());
}

/// Linear interpolation at fractional index `pos`; samples outside [0, N) read as zero.
template <typename Derived>
typename Derived::Scalar interpolate_linear(const Eigen::MatrixBase<Derived>& v, double pos) {
  using Scalar = typename Derived::Scalar;
  const double fl = std::floor(pos);
  const double frac = pos - fl;
  const Index j = static_cast<Index>(fl);
  const Index n = v.size();
  const Scalar a = (j >= 0 && j < n) ? v(j) : Scalar(0);
  const Scalar b = (j + 1 >= 0 && j + 1 < n) ? v(j + 1) : Scalar(0);
  return static_cast<Scalar>((1.0 - frac) * a + frac * b);
}

/// Linear convolution cropped to the input length, with the kernel's centre tap
/// as zero delay. The kernel length must be odd.
template <typename DerivedS, typename DerivedK>
Vector<typename DerivedS::Scalar> convolve_same(const Eigen::MatrixBase<DerivedS>& signal,
                                                const Eigen::MatrixBase<DerivedK>& kernel) {
  using Scalar = typename DerivedS::Scalar;
  const Index n = signal.size();
  const Index l = kernel.size();
  if (l % 2 == 0) throw std::invalid_argument("convolve_same: kernel length must be odd");
  const Index half = (l - 1) / 2;
  Vector<Scalar> out = Vector<Scalar>::Zero(n);
  for (Index i = 0; i < n; ++i) {
    // out[i] = sum_j kernel[j] * signal[i - (j - half)]
    const Index j_lo = std::max<Index>(0, i + half - (n - 1));
    const Index j_hi = std::min<Index>(l - 1, i + half);
    Scalar acc(0);
    for (Index j = j_lo; j <= j_hi; ++j) acc += kernel(j) * signal(i + half - j);
    out(i) = acc;
  }
  return out;
}

/// Valid-region cross-correlation: out[l] = sum_k y[l + k] h[k], l in [0, Ny - K].
template <typename DerivedY, typename DerivedH>
Vector<typename DerivedY::Scalar> correlate_valid(const Eigen::MatrixBase<DerivedY>& y,
                                                  const Eigen::MatrixBase<DerivedH>& h) {
  using Scalar = typename DerivedY::Scalar;
  const Index k = h.size();
  if (k == 0 || k > y.size()) throw std::invalid_argument("correlate_valid: filter longer than signal");
  const Index n_out = y.size() - k + 1;
  Vector<Scalar> out(n_out);
  for (Index l = 0; l < n_out; ++l) out(l) = y.segment(l, k).dot(h);
  return out;
}

/// Full cross-correlation of x with h, lags tau in [-(K-1), Nx-1] stored at tau + K - 1.
template <typename DerivedX, typename DerivedH>
Vector<typename DerivedX::Scalar> correlate_full(const Eigen::MatrixBase<DerivedX>& x,
                                                 const Eigen::MatrixBase<DerivedH>& h) {
  using Scalar = typename DerivedX::Scalar;
  const Index nx = x.size();
  const Index k = h.size();
  Vector<Scalar> out = Vector<Scalar>::Zero(nx + k - 1);
  for (Index tau = -(k - 1); tau <= nx - 1; ++tau) {
    const Index lo = std::max<Index>(0, -tau);
    const Index hi = std::min<Index>(k, nx - tau);
    if (hi > lo) out(tau + k - 1) = x.segment(lo + tau, hi - lo).dot(h.segment(lo, hi - lo));
  }
  return out;
}

std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& in);
std::vector<std::complex<double>> fft_real(const VectorXd& in, Index n_fft);
std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& in);

/// Discrete analytic signal by one-sided spectrum doubling (no padding).
std::vector<std::complex<double>> analytic_signal(const VectorXd& x);

/// Smallest power of two >= n.
Index next_pow2(Index n);

}  // namespace ceui
