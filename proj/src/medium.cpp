// SPDX-License-Identifier: Apache-2.0

#include "ceui/medium.hpp"

#include "ceui/random.hpp"

#include <algorithm>
#include <numbers>

namespace ceui {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

echo::RayleighRandom echo::RayleighRandom::draw(double scale, std::uint64_t seed) {
  Rng rng(seed);
  return {scale, seed, rng.rayleigh(scale)};
}

double depth_at(const ScattererTrajectory& traj, double t) {
  return std::visit(
      Overloaded{
          [](const motion::Static& m) { return m.z0; },
          [t](const motion::SinusoidalAxial& m) {
            return m.z0 + 0.5 * m.peak_to_peak * std::sin(kTwoPi * m.f_osc * t);
          },
          [t](const motion::ConstantVelocity& m) {
            const double tc = std::clamp(t, m.t_start, m.t_stop);
            return m.z0 + m.v * (tc - m.t_start);
          },
          [t](const motion::Piecewise& m) {
            const auto& k = m.knots;
            if (k.empty()) return 0.0;
            if (t <= k.front().t) return k.front().z;
            if (t >= k.back().t) return k.back().z;
            auto hi = std::upper_bound(k.begin(), k.end(), t,
                                       [](double v, const motion::Piecewise::Knot& kn) { return v < kn.t; });
            auto lo = std::prev(hi);
            const double a = (t - lo->t) / (hi->t - lo->t);
            return lo->z + a * (hi->z - lo->z);
          },
          [t](const motion::Dilation& m) {
            return m.centre + (m.z0 - m.centre) * (1.0 + m.strain * std::sin(kTwoPi * m.frequency * t));
          },
      },
      traj.motion);
}

Vec3 position_at(const ScattererTrajectory& traj, double t) { return {0.0, 0.0, depth_at(traj, t)}; }

double echogenicity_at(const ScattererTrajectory& traj, double t) {
  return std::visit(Overloaded{
                        [](const echo::Constant& e) { return e.amplitude; },
                        [t](const echo::Blinking& e) {
                          for (const auto& b : e.blinks)
                            if (t >= b.t_on && t < b.t_off) return b.amplitude;
                          return 0.0;
                        },
                        [](const echo::RayleighRandom& e) { return e.amplitude; },
                    },
                    traj.echogenicity);
}

double attenuation_factor(const AttenuationModel& model, double fc, double r_emit, double r_recv) {
  if (!model.enabled || model.alpha == 0.0) return 1.0;
  const double db = model.alpha * (fc * 1e-6) * ((r_emit + r_recv) * 1e2);
  return std::pow(10.0, -db / 20.0);
}

double max_speed(const ScattererTrajectory& traj, double t_end, double dt) {
  double vmax = 0.0;
  double prev = depth_at(traj, 0.0);
  for (double t = dt; t <= t_end + 0.5 * dt; t += dt) {
    const double z = depth_at(traj, t);
    vmax = std::max(vmax, std::abs(z - prev) / dt);
    prev = z;
  }
  return vmax;
}

std::pair<double, double> depth_extent(const ScattererTrajectory& traj, double t_begin, double t_end, double dt) {
  double lo = depth_at(traj, t_begin);
  double hi = lo;
  for (double t = t_begin; t <= t_end; t += dt) {
    const double z = depth_at(traj, t);
    lo = std::min(lo, z);
    hi = std::max(hi, z);
  }
  const double z_end = depth_at(traj, t_end);
  return {std::min(lo, z_end), std::max(hi, z_end)};
}

namespace {

Medium oscillating() {
  Medium m;
  m.scatterers.push_back({motion::SinusoidalAxial{30e-3, 12e3, 0.1e-3}, echo::Constant{1.0}});
  return m;
}

// 20 non-overlapping blinks of random length in [10, 40] us. The free time left
// after the blinks and the minimum gaps is split at random between the 21 gaps.
Medium blinking(std::uint64_t seed, const PresetOptions& opt) {
  constexpr int kBlinks = 20;
  Rng rng(seed);
  std::vector<double> lengths(kBlinks);
  for (auto& d : lengths) d = rng.uniform(10e-6, 40e-6);
  std::vector<double> amplitudes(kBlinks);
  for (auto& a : amplitudes) a = rng.uniform(0.5, 1.0);

  const double span = opt.duration - opt.blink_margin_start - opt.blink_margin_end;
  double busy = opt.blink_min_gap * (kBlinks - 1);
  for (double d : lengths) busy += d;
  if (busy > span)
    throw std::invalid_argument("preset blinking: acquisition too short to place 20 blinks");
  std::vector<double> weights(kBlinks + 1);
  double total = 0.0;
  for (auto& w : weights) total += (w = rng.exponential());
  const double slack = span - busy;

  echo::Blinking e;
  double t = opt.blink_margin_start;
  for (int i = 0; i < kBlinks; ++i) {
    t += slack * weights[static_cast<std::size_t>(i)] / total + (i > 0 ? opt.blink_min_gap : 0.0);
    e.blinks.push_back({t, t + lengths[static_cast<std::size_t>(i)], amplitudes[static_cast<std::size_t>(i)]});
    t += lengths[static_cast<std::size_t>(i)];
  }
  Medium m;
  m.scatterers.push_back({motion::Static{30e-3}, std::move(e)});
  return m;
}

Medium cyst(std::uint64_t seed, const ProbeConfig& probe, const PresetOptions& opt) {
  constexpr int kCyst = 50;
  constexpr int kBackgroundPerLambda = 10;
  constexpr int kBackgroundLambdas = 95;
  const double lambda = probe.wavelength();
  const double centre = 30e-3;
  const double radius = 0.5 * kCyst * lambda;
  Rng rng(seed);
  Medium m;
  for (int i = 0; i < kCyst; ++i) {
    const double z0 = centre + (i - 0.5 * (kCyst - 1)) * lambda + rng.uniform(-0.25, 0.25) * lambda;
    m.scatterers.push_back({motion::Dilation{z0, centre, opt.cyst_amplitude / radius, opt.cyst_frequency},
                            echo::Constant{rng.uniform(0.5, 1.5)}});
  }
  const double bg_start = centre - 0.5 * kBackgroundLambdas * lambda;
  for (int cell = 0; cell < kBackgroundLambdas; ++cell) {
    for (int j = 0; j < kBackgroundPerLambda; ++j) {
      const double z0 = bg_start + (cell + rng.uniform()) * lambda;
      m.scatterers.push_back({motion::Static{z0}, echo::RayleighRandom::draw(0.05, rng.next())});
    }
  }
  return m;
}

Medium attenuated_column() {
  Medium m;
  for (double z : {30e-3, 45e-3, 60e-3, 75e-3, 90e-3, 105e-3})
    m.scatterers.push_back({motion::Static{z}, echo::Constant{1.0}});
  m.attenuation = {1.5, true};
  return m;
}

}  // namespace

Medium preset(std::string_view name, std::uint64_t seed, const ProbeConfig& probe, const PresetOptions& options) {
  if (name == "oscillating") return oscillating();
  if (name == "blinking") return blinking(seed, options);
  if (name == "cyst") return cyst(seed, probe, options);
  if (name == "attenuated_column") return attenuated_column();
  throw std::invalid_argument("preset: unknown medium '" + std::string(name) + "'");
}

}  // namespace ceui
