// SPDX-License-Identifier: Apache-2.0
//
// Received-signal model for a medium that moves while it is insonified. For each
// reception instant t_R and scatterer k the backscatter instant t_S solves
//   t_R = t_S + R_R(t_S) / c,        t_E = t_S - R_E(t_S) / c,
// and the echo is A_k(t_S) * x(t_E). Samples falling between grid points are
// linearly interpolated (A on the backscatter grid, x on the emission grid).

#pragma once

#include "ceui/medium.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ceui {

struct TofTriplet {
  double t_emit = 0.0;
  double t_scatter = 0.0;
  double t_recv = 0.0;
};

struct BackscatterSolver {
  /// Stop once |g(t_S)| falls below this many sampling periods.
  double tolerance_samples = 1e-6;
  int max_iterations = 200;
};

/// Root of g(t) = t + |p_recv - p(t)| / c - t_R on [0, t_R]; empty when g(0) > 0,
/// i.e. the echo would have left the scatterer before acquisition started.
std::optional<double> solve_backscatter_time(const ScattererTrajectory& traj, double t_recv,
                                             const Vec3& p_recv, const ProbeConfig& probe,
                                             const BackscatterSolver& solver = {});

std::optional<double> solve_backscatter_time(const ScattererTrajectory& traj, double t_recv,
                                             const ProbeConfig& probe, const BackscatterSolver& solver = {});

std::optional<TofTriplet> tof_triplet(const ScattererTrajectory& traj, double t_recv, const ProbeConfig& probe);

/// Throws std::domain_error if any scatterer reaches |dz/dt| >= c on [0, t_end].
void require_subsonic(std::span<const ScattererTrajectory> scatterers, const ProbeConfig& probe, double t_end);

/// SISO synthesis. `emission` is the transmitted signal x = e * i; the returned
/// record (t0 = 0, n_samples long) is already filtered by the receiving element.
/// Output is bit-identical for any thread count.
RfRecord synthesize_rf(std::span<const ScattererTrajectory> scatterers, const RfRecord& emission,
                       const ProbeConfig& probe, const AttenuationModel& attenuation, Index n_samples,
                       int threads = 1);

/// Power of the emission while it is active: mean of x^2 over its non-zero samples.
double emission_power(const RfRecord& emission);

/// Adds white Gaussian noise whose power inside the probe band equals
/// emission_power * 10^(-snr_db / 10). A non-finite snr_db returns the input unchanged.
RfRecord add_band_limited_noise(const RfRecord& signal, double snr_db, const ProbeConfig& probe,
                                const RfRecord& emission, std::uint64_t seed);

struct ElementLayout {
  std::vector<Vec3> emitters;
  std::vector<Vec3> receivers;
};

/// Multi-emitter / multi-receiver generalisation: per receiver j,
///   y_j(t_R) = sum_i sum_k A_k(t_S^{j,k}) x_i(t_E^{i,j,k}),
/// with t_S solved once per (j, k) and t_E derived per emitter. One record per receiver.
std::vector<RfRecord> mimo_synthesize_rf(std::span<const ScattererTrajectory> scatterers,
                                         std::span<const RfRecord> emissions, const ElementLayout& layout,
                                         const ProbeConfig& probe, const AttenuationModel& attenuation,
                                         Index n_samples, int threads = 1);

}  // namespace ceui
