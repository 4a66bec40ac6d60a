// SPDX-License-Identifier: Apache-2.0
//
// Imaged medium: point scatterers on the central line x = 0 with time-parameterised
// depth and echogenicity, the linear-in-frequency attenuation law, and the four
// preset media.

#pragma once

#include "ceui/probe.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ceui {

namespace motion {

struct Static {
  double z0 = 0.0;
};

/// z(t) = z0 + (peak_to_peak / 2) sin(2 pi f_osc t)
struct SinusoidalAxial {
  double z0 = 0.0;
  double f_osc = 0.0;
  double peak_to_peak = 0.0;
};

/// z0 before t_start, moving at v until t_stop, frozen afterwards.
struct ConstantVelocity {
  double z0 = 0.0;
  double v = 0.0;
  double t_start = 0.0;
  double t_stop = std::numeric_limits<double>::infinity();
};

/// Piecewise-linear depth through (t, z) knots, held constant outside the knot span.
struct Piecewise {
  struct Knot {
    double t;
    double z;
  };
  std::vector<Knot> knots;
};

/// Radial dilation about a centre depth: z(t) = centre + (z0 - centre)(1 + strain sin(2 pi f t)).
struct Dilation {
  double z0 = 0.0;
  double centre = 0.0;
  double strain = 0.0;
  double frequency = 0.0;
};

}  // namespace motion

using Motion = std::variant<motion::Static, motion::SinusoidalAxial, motion::ConstantVelocity,
                            motion::Piecewise, motion::Dilation>;

namespace echo {

struct Constant {
  double amplitude = 1.0;
};

struct Blink {
  double t_on;
  double t_off;  ///< exclusive
  double amplitude;
};

struct Blinking {
  std::vector<Blink> blinks;
};

/// Time-constant amplitude drawn once from Rayleigh(scale) with the given seed.
struct RayleighRandom {
  double scale = 0.0;
  std::uint64_t seed = 0;
  double amplitude = 0.0;

  static RayleighRandom draw(double scale, std::uint64_t seed);
};

}  // namespace echo

using Echogenicity = std::variant<echo::Constant, echo::Blinking, echo::RayleighRandom>;

struct ScattererTrajectory {
  Motion motion = motion::Static{};
  Echogenicity echogenicity = echo::Constant{};
};

struct AttenuationModel {
  double alpha = 0.0;  ///< dB / MHz / cm
  bool enabled = false;
};

struct Medium {
  std::vector<ScattererTrajectory> scatterers;
  AttenuationModel attenuation;
};

double depth_at(const ScattererTrajectory& traj, double t);
Vec3 position_at(const ScattererTrajectory& traj, double t);
double echogenicity_at(const ScattererTrajectory& traj, double t);

/// Amplitude factor 10^(-alpha * fc[MHz] * (r_emit + r_recv)[cm] / 20); 1 when disabled.
double attenuation_factor(const AttenuationModel& model, double fc, double r_emit, double r_recv);

/// Largest |dz/dt| of the trajectory sampled on [0, t_end] with step dt.
double max_speed(const ScattererTrajectory& traj, double t_end, double dt);

/// Min and max depth reached on [t_begin, t_end] (sampled with step dt).
std::pair<double, double> depth_extent(const ScattererTrajectory& traj, double t_begin, double t_end, double dt);

/// Knobs of the preset media that are not fixed by the scenario names.
struct PresetOptions {
  double duration = 1e-3;          ///< acquisition length (s), bounds blink placement
  double cyst_amplitude = 1e-3;    ///< peak radial displacement of the cyst edge (m)
  double cyst_frequency = 500.0;   ///< dilation rate (Hz)
  double blink_margin_start = 40e-6;
  double blink_margin_end = 80e-6;
  double blink_min_gap = 15e-6;
};

inline constexpr std::string_view kPresetNames[] = {"oscillating", "blinking", "cyst", "attenuated_column"};

/// Builds one of the named media; throws std::invalid_argument for unknown names.
Medium preset(std::string_view name, std::uint64_t seed, const ProbeConfig& probe,
              const PresetOptions& options = {});

}  // namespace ceui
