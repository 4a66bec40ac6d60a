// SPDX-License-Identifier: Apache-2.0

#include "ceui/rfsim.hpp"

#include "ceui/parallel.hpp"
#include "ceui/random.hpp"

#include <string>

namespace ceui {

std::optional<double> solve_backscatter_time(const ScattererTrajectory& traj, double t_recv,
                                             const Vec3& p_recv, const ProbeConfig& probe,
                                             const BackscatterSolver& solver) {
  const double c = probe.c;
  auto g = [&](double t) { return t + (p_recv - position_at(traj, t)).norm() / c - t_recv; };
  if (t_recv < 0.0 || g(0.0) > 0.0) return std::nullopt;

  const double tol = solver.tolerance_samples / probe.fs;
  double lo = 0.0;
  double hi = t_recv;
  // g is strictly increasing for subsonic motion, so [lo, hi] always brackets the
  // root. Fixed-point steps t <- t_R - R_R(t)/c contract by |v|/c; bisection is the
  // fallback whenever a step leaves the bracket.
  double t = std::clamp(t_recv - (p_recv - position_at(traj, t_recv)).norm() / c, lo, hi);
  for (int it = 0; it < solver.max_iterations; ++it) {
    const double gv = g(t);
    if (std::abs(gv) <= tol) return t;
    if (gv < 0.0) lo = t;
    else hi = t;
    double next = t - gv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 0.0) break;
    t = next;
  }
  return t;
}

std::optional<double> solve_backscatter_time(const ScattererTrajectory& traj, double t_recv,
                                             const ProbeConfig& probe, const BackscatterSolver& solver) {
  return solve_backscatter_time(traj, t_recv, probe.p_recv, probe, solver);
}

std::optional<TofTriplet> tof_triplet(const ScattererTrajectory& traj, double t_recv, const ProbeConfig& probe) {
  const auto ts = solve_backscatter_time(traj, t_recv, probe);
  if (!ts) return std::nullopt;
  const double r_emit = (position_at(traj, *ts) - probe.p_emit).norm();
  return TofTriplet{*ts - r_emit / probe.c, *ts, t_recv};
}

void require_subsonic(std::span<const ScattererTrajectory> scatterers, const ProbeConfig& probe, double t_end) {
  for (std::size_t k = 0; k < scatterers.size(); ++k) {
    const double v = max_speed(scatterers[k], t_end, probe.sampling_period());
    if (!(v < probe.c))
      throw std::domain_error("scatterer " + std::to_string(k) + " reaches " + std::to_string(v) +
                              " m/s, not below the sound speed");
  }
}

namespace {

// Accumulates every scatterer's echo at one reception sample for one receiver,
// in ascending scatterer order and, per scatterer, ascending emitter order.
double receive_sample(std::span<const ScattererTrajectory> scatterers, std::span<const RfRecord> emissions,
                      std::span<const Vec3> emitters, const Vec3& p_recv, const ProbeConfig& probe,
                      const AttenuationModel& attenuation, Index n_recv) {
  const double ts_period = probe.sampling_period();
  const double t_recv = static_cast<double>(n_recv) * ts_period;
  double acc = 0.0;
  for (const auto& traj : scatterers) {
    const auto t_scatter = solve_backscatter_time(traj, t_recv, p_recv, probe);
    if (!t_scatter) continue;
    const double n_scatter = *t_scatter * probe.fs;
    const Vec3 p_s = position_at(traj, *t_scatter);
    const double r_recv = (p_recv - p_s).norm();

    const double n_floor = std::floor(n_scatter);
    const double beta = n_scatter - n_floor;
    const double amplitude = (1.0 - beta) * echogenicity_at(traj, n_floor * ts_period) +
                             beta * echogenicity_at(traj, (n_floor + 1.0) * ts_period);
    if (amplitude == 0.0) continue;

    for (std::size_t i = 0; i < emitters.size(); ++i) {
      const double r_emit = (p_s - emitters[i]).norm();
      const double n_emit = n_scatter - r_emit / (probe.c * ts_period);
      const RfRecord& x = emissions[i];
      const double x_value = interpolate_linear(x.samples, n_emit - x.t0 * x.fs);
      acc += amplitude * x_value * attenuation_factor(attenuation, probe.fc, r_emit, r_recv);
    }
  }
  return acc;
}

RfRecord receive(std::span<const ScattererTrajectory> scatterers, std::span<const RfRecord> emissions,
                 std::span<const Vec3> emitters, const Vec3& p_recv, const ProbeConfig& probe,
                 const AttenuationModel& attenuation, Index n_samples, int threads) {
  RfRecord raw;
  raw.fs = probe.fs;
  raw.t0 = 0.0;
  raw.samples = VectorXd::Zero(n_samples);
  parallel_for(n_samples, threads, [&](std::ptrdiff_t n) {
    raw.samples(n) = receive_sample(scatterers, emissions, emitters, p_recv, probe, attenuation, n);
  });
  return apply_transducer(raw, probe);
}

void check_emission_rate(const RfRecord& emission, const ProbeConfig& probe) {
  if (std::abs(emission.fs - probe.fs) > 1e-9 * probe.fs)
    throw std::invalid_argument("synthesize_rf: emission sampled at " + std::to_string(emission.fs) +
                                " Hz, probe at " + std::to_string(probe.fs) + " Hz");
}

}  // namespace

RfRecord synthesize_rf(std::span<const ScattererTrajectory> scatterers, const RfRecord& emission,
                       const ProbeConfig& probe, const AttenuationModel& attenuation, Index n_samples,
                       int threads) {
  probe.validate();
  check_emission_rate(emission, probe);
  require_subsonic(scatterers, probe, static_cast<double>(n_samples) / probe.fs);
  const Vec3 emitter = probe.p_emit;
  return receive(scatterers, std::span(&emission, 1), std::span(&emitter, 1), probe.p_recv, probe, attenuation,
                 n_samples, threads);
}

std::vector<RfRecord> mimo_synthesize_rf(std::span<const ScattererTrajectory> scatterers,
                                         std::span<const RfRecord> emissions, const ElementLayout& layout,
                                         const ProbeConfig& probe, const AttenuationModel& attenuation,
                                         Index n_samples, int threads) {
  if (emissions.size() != layout.emitters.size())
    throw std::invalid_argument("mimo_synthesize_rf: " + std::to_string(emissions.size()) + " emissions for " +
                                std::to_string(layout.emitters.size()) + " emitters");
  if (layout.receivers.empty()) throw std::invalid_argument("mimo_synthesize_rf: no receivers");
  for (const auto& e : emissions) check_emission_rate(e, probe);
  require_subsonic(scatterers, probe, static_cast<double>(n_samples) / probe.fs);
  std::vector<RfRecord> out;
  out.reserve(layout.receivers.size());
  for (const auto& p_recv : layout.receivers)
    out.push_back(receive(scatterers, emissions, layout.emitters, p_recv, probe, attenuation, n_samples, threads));
  return out;
}

double emission_power(const RfRecord& emission) {
  double energy = 0.0;
  Index active = 0;
  for (Index n = 0; n < emission.size(); ++n) {
    const double v = emission.samples(n);
    if (v != 0.0) {
      energy += v * v;
      ++active;
    }
  }
  return active > 0 ? energy / static_cast<double>(active) : 0.0;
}

RfRecord add_band_limited_noise(const RfRecord& signal, double snr_db, const ProbeConfig& probe,
                                const RfRecord& emission, std::uint64_t seed) {
  if (!std::isfinite(snr_db)) return signal;
  const double in_band = emission_power(emission) * std::pow(10.0, -snr_db / 10.0);
  const double bandwidth = probe.fc * probe.bw_frac;
  const double sigma = std::sqrt(in_band * (probe.fs / 2.0) / bandwidth);
  RfRecord out = signal;
  Rng rng(seed);
  for (Index n = 0; n < out.size(); ++n) out.samples(n) += sigma * rng.gaussian();
  return out;
}

}  // namespace ceui
