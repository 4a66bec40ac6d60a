// SPDX-License-Identifier: Apache-2.0

#include "ceui/window.hpp"

#include <numbers>
#include <string>

namespace ceui {

namespace {

Index sample_index(const RfRecord& r, double t) { return static_cast<Index>(std::llround((t - r.t0) * r.fs)); }

RfRecord slice(const RfRecord& r, Index start, Index length, const char* what) {
  if (start < 0 || start + length > r.size())
    throw std::out_of_range(std::string(what) + ": samples [" + std::to_string(start) + ", " +
                            std::to_string(start + length) + ") outside signal of " + std::to_string(r.size()));
  RfRecord out;
  out.fs = r.fs;
  out.t0 = r.time_at(static_cast<double>(start));
  out.samples = r.samples.segment(start, length);
  return out;
}

}  // namespace

Index echo_length(Index n_e, double r_max, const ProbeConfig& probe) {
  const double round_trip = 2.0 * r_max / (probe.c * probe.sampling_period());
  // Guard against 1558.0000000001 rounding up a whole sample.
  return n_e + static_cast<Index>(std::ceil(round_trip - 1e-9));
}

double imaging_rate(const WindowPlan& plan, const ProbeConfig& probe) {
  return probe.fs / static_cast<double>(plan.step);
}

double first_center_at(double t_start, Index n_e, double fs) {
  return t_start + static_cast<double>((n_e - 1) / 2) / fs;
}

double max_reference_length(double dz, double v_max, double fs) {
  if (!(dz > 0.0) || !(v_max > 0.0) || !(fs > 0.0))
    throw std::invalid_argument("max_reference_length: dz, v_max and fs must be positive");
  return std::numbers::pi * dz * fs / v_max;
}

void validate_plan(const WindowPlan& plan, const ProbeConfig& probe) {
  if (plan.n_e < 1 || plan.n_e % 2 == 0)
    throw std::invalid_argument("window plan: n_e must be odd and positive, got " + std::to_string(plan.n_e));
  if (plan.step < 1) throw std::invalid_argument("window plan: step must be >= 1 sample");
  if (plan.r_max < 0.0) throw std::invalid_argument("window plan: r_max must be non-negative");
  if (plan.n_windows < 0) throw std::invalid_argument("window plan: negative window count");
  (void)probe;
}

RfRecord reference_window(const RfRecord& x_pe, double t_center, Index n_e) {
  if (n_e < 1 || n_e % 2 == 0) throw std::invalid_argument("reference_window: n_e must be odd");
  const Index start = sample_index(x_pe, t_center) - (n_e - 1) / 2;
  return slice(x_pe, start, n_e, "reference_window");
}

RfRecord echo_window(const RfRecord& y, double t_center, Index n_e, double r_max, const ProbeConfig& probe) {
  if (n_e < 1 || n_e % 2 == 0) throw std::invalid_argument("echo_window: n_e must be odd");
  const Index start = sample_index(y, t_center) - (n_e - 1) / 2;
  return slice(y, start, echo_length(n_e, r_max, probe), "echo_window");
}

Index max_windows(const WindowPlan& plan, const RfRecord& x_pe, const RfRecord& y, const ProbeConfig& probe) {
  validate_plan(plan, probe);
  const Index half = (plan.n_e - 1) / 2;
  const Index n_r = echo_length(plan.n_e, plan.r_max, probe);
  const Index x_start = sample_index(x_pe, plan.t_first_center) - half;
  const Index y_start = sample_index(y, plan.t_first_center) - half;
  if (x_start < 0 || y_start < 0) return 0;
  const Index x_room = x_pe.size() - plan.n_e - x_start;
  const Index y_room = y.size() - n_r - y_start;
  const Index room = std::min(x_room, y_room);
  if (room < 0) return 0;
  return room / plan.step + 1;
}

WindowPlan fit_plan(Index n_e, Index step, double r_max, const RfRecord& x_pe, const RfRecord& y,
                    const ProbeConfig& probe) {
  WindowPlan plan;
  plan.n_e = n_e;
  plan.step = step;
  plan.r_max = r_max;
  plan.t_first_center = first_center_at(std::max(x_pe.t0, y.t0), n_e, probe.fs);
  plan.n_windows = max_windows(plan, x_pe, y, probe);
  return plan;
}

std::vector<double> window_centers(const WindowPlan& plan, const ProbeConfig& probe) {
  std::vector<double> out(static_cast<std::size_t>(plan.n_windows));
  // Snap the first centre to the sample grid so every centre is a grid point.
  const double n0 = std::round(plan.t_first_center * probe.fs);
  for (Index w = 0; w < plan.n_windows; ++w)
    out[static_cast<std::size_t>(w)] = (n0 + static_cast<double>(w * plan.step)) / probe.fs;
  return out;
}

std::vector<WindowPair> plan_windows(const WindowPlan& plan, const RfRecord& x_pe, const RfRecord& y,
                                     const ProbeConfig& probe) {
  const Index feasible = max_windows(plan, x_pe, y, probe);
  if (plan.n_windows > feasible)
    throw WindowOverrun("plan_windows: " + std::to_string(plan.n_windows) + " windows requested, only " +
                            std::to_string(feasible) + " fit the signals",
                        feasible);
  std::vector<WindowPair> out;
  out.reserve(static_cast<std::size_t>(plan.n_windows));
  for (double t : window_centers(plan, probe))
    out.push_back({reference_window(x_pe, t, plan.n_e), echo_window(y, t, plan.n_e, plan.r_max, probe), t});
  return out;
}

}  // namespace ceui
