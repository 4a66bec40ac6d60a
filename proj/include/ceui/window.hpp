// SPDX-License-Identifier: Apache-2.0
//
// Sliding-window extraction of coherent (reference, echo) pairs. A reference of
// N_E samples centred on t_E^w is cut from the transducer-matched emission; the
// echo window starts at the same instant and spans N_R = N_E + ceil(2 R_max / (c T_s))
// samples so it holds every echo of the reference up to depth R_max.

#pragma once

#include "ceui/probe.hpp"

#include <stdexcept>
#include <vector>

namespace ceui {

struct WindowPlan {
  double t_first_center = 0.0;  ///< centre of the first reference window (s)
  Index step = 21;              ///< samples between successive windows
  Index n_windows = 0;
  Index n_e = 251;              ///< reference length, odd
  double r_max = 0.04;          ///< maximal imaged range (m)
};

struct WindowPair {
  RfRecord x_w;
  RfRecord y_w;
  double t_center = 0.0;
};

/// Thrown when a plan does not fit the recorded signals.
class WindowOverrun : public std::out_of_range {
 public:
  WindowOverrun(const std::string& what, Index feasible) : std::out_of_range(what), feasible_(feasible) {}
  /// Largest window count that fits.
  Index feasible() const { return feasible_; }

 private:
  Index feasible_;
};

/// N_E + ceil(2 r_max / (c T_s)).
Index echo_length(Index n_e, double r_max, const ProbeConfig& probe);

/// Slow-time rate fs / step.
double imaging_rate(const WindowPlan& plan, const ProbeConfig& probe);

/// Longest reference over which a medium moving at most `v_max` with smallest
/// displacement amplitude `dz` stays resolved: pi * dz * fs / v_max samples.
double max_reference_length(double dz, double v_max, double fs);

/// Reference centre that puts the first reference sample on t = t_start.
double first_center_at(double t_start, Index n_e, double fs);

/// N_E samples with |n - n_c| <= (N_E - 1)/2, n_c the sample nearest t_center.
RfRecord reference_window(const RfRecord& x_pe, double t_center, Index n_e);

/// N_R samples starting with the first sample of the matching reference window.
RfRecord echo_window(const RfRecord& y, double t_center, Index n_e, double r_max, const ProbeConfig& probe);

/// Largest N_img for which every pair of the plan lies inside both signals.
Index max_windows(const WindowPlan& plan, const RfRecord& x_pe, const RfRecord& y, const ProbeConfig& probe);

/// Plan sized to fill the signals: first reference starts at the later start time
/// of x_pe and y, n_windows = max_windows.
WindowPlan fit_plan(Index n_e, Index step, double r_max, const RfRecord& x_pe, const RfRecord& y,
                    const ProbeConfig& probe);

/// Centres t_first_center + w * step / fs, w in [0, n_windows).
std::vector<double> window_centers(const WindowPlan& plan, const ProbeConfig& probe);

/// Throws WindowOverrun (carrying the feasible count) if the plan overruns a signal.
std::vector<WindowPair> plan_windows(const WindowPlan& plan, const RfRecord& x_pe, const RfRecord& y,
                                     const ProbeConfig& probe);

void validate_plan(const WindowPlan& plan, const ProbeConfig& probe);

}  // namespace ceui
