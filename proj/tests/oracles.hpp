// SPDX-License-Identifier: Apache-2.0
//
// Independent reference computations for the tests. Each is written from the
// defining formula with plain loops and shares no code with the library.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using Eigen::Index;
using Eigen::VectorXd;

/// |sum_n h[n] exp(-j 2 pi f n / fs)| with n counted from the kernel centre.
inline double dtft_magnitude(const VectorXd& h, double f, double fs) {
  const Index half = (h.size() - 1) / 2;
  std::complex<double> acc = 0.0;
  for (Index n = 0; n < h.size(); ++n) {
    const double phase = -2.0 * std::numbers::pi * f * static_cast<double>(n - half) / fs;
    acc += h(n) * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return std::abs(acc);
}

/// Aperiodic cross-correlation r[tau] = sum_k a[k + tau] b[k], tau in [-(nb-1), na-1].
inline VectorXd cross_correlation(const VectorXd& a, const VectorXd& b) {
  const Index na = a.size();
  const Index nb = b.size();
  VectorXd out = VectorXd::Zero(na + nb - 1);
  for (Index tau = -(nb - 1); tau <= na - 1; ++tau) {
    double acc = 0.0;
    for (Index k = 0; k < nb; ++k) {
      const Index j = k + tau;
      if (j >= 0 && j < na) acc += a(j) * b(k);
    }
    out(tau + nb - 1) = acc;
  }
  return out;
}

/// Sidelobe energy over squared zero-lag value of the correlation of x with h,
/// mainlobe = |tau| <= halfwidth.
inline double psf_islr(const VectorXd& x, const VectorXd& h, Index halfwidth) {
  const VectorXd c = cross_correlation(x, h);
  const Index centre = h.size() - 1;
  double main = 0.0;
  double side = 0.0;
  for (Index i = 0; i < c.size(); ++i) {
    if (std::abs(i - centre) <= halfwidth) main += c(i) * c(i);
    else side += c(i) * c(i);
  }
  return side / main;
}

/// Linear interpolation of v at fractional index pos, zero outside.
inline double lerp_at(const VectorXd& v, double pos) {
  const double fl = std::floor(pos);
  const auto j = static_cast<Index>(fl);
  const double a = (j >= 0 && j < v.size()) ? v(j) : 0.0;
  const double b = (j + 1 >= 0 && j + 1 < v.size()) ? v(j + 1) : 0.0;
  return a + (pos - fl) * (b - a);
}

struct PointEcho {
  Eigen::Vector3d position;
  double amplitude;
};

/// Static-medium received signal: every echo is the emission delayed by its
/// round-trip time, summed, then filtered by the odd-length centred kernel.
inline VectorXd delayed_sum(const std::vector<PointEcho>& echoes, const VectorXd& emission,
                            const Eigen::Vector3d& p_emit, const Eigen::Vector3d& p_recv, double c, double fs,
                            const VectorXd& kernel, Index n_samples) {
  VectorXd raw = VectorXd::Zero(n_samples);
  for (const auto& e : echoes) {
    const double delay = ((e.position - p_emit).norm() + (e.position - p_recv).norm()) / c * fs;
    for (Index n = 0; n < n_samples; ++n) raw(n) += e.amplitude * lerp_at(emission, static_cast<double>(n) - delay);
  }
  const Index half = (kernel.size() - 1) / 2;
  VectorXd out = VectorXd::Zero(n_samples);
  for (Index n = 0; n < n_samples; ++n)
    for (Index j = 0; j < kernel.size(); ++j) {
      const Index src = n - (j - half);
      if (src >= 0 && src < n_samples) out(n) += kernel(j) * raw(src);
    }
  return out;
}

/// Minimises the zero-lag ISLR of a length-K filter by accelerated projected
/// gradient: minimise h^T G h subject to x^T h = 1, G the sidelobe Gram matrix
/// built from the brute-force correlation, then rescale to h^T h = x^T x.
inline VectorXd islr_projected_gradient(const VectorXd& x, int iterations) {
  const Index k = x.size();
  // G = sum over nonzero lags tau of a_tau a_tau^T with a_tau[j] = x[j + tau].
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, k);
  for (Index tau = -(k - 1); tau <= k - 1; ++tau) {
    if (tau == 0) continue;
    VectorXd a = VectorXd::Zero(k);
    for (Index j = 0; j < k; ++j)
      if (j + tau >= 0 && j + tau < k) a(j) = x(j + tau);
    g += a * a.transpose();
  }
  const double lipschitz = 2.0 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().maxCoeff();
  const double xx = x.squaredNorm();
  auto project = [&](const VectorXd& h) -> VectorXd { return h - x * ((x.dot(h) - 1.0) / xx); };
  VectorXd h = x / xx;
  VectorXd z = h;
  double t = 1.0;
  for (int it = 0; it < iterations; ++it) {
    const VectorXd next = project(z - (2.0 * g * z) / lipschitz);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = next + ((t - 1.0) / t_next) * (next - h);
    h = next;
    t = t_next;
  }
  return h * std::sqrt(xx / h.squaredNorm());
}

}  // namespace oracle
