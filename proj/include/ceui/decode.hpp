// SPDX-License-Identifier: Apache-2.0
//
// Pulse compression of one window pair.
//
// The PSF of a filter h (length K) against a reference x is the full
// cross-correlation c = Lambda h, with Lambda[tau, k] = x[k + tau]. The ISLR
// mismatched filter minimises the sidelobe energy c^T F c for a fixed mainlobe,
// F being the identity with zeros on the 2m+1 central lags:
//   h  ~  (Lambda^T F Lambda + eps I)^{-1} x,    rescaled so that h^T h = x^T x.
// Lambda^T Lambda is the Toeplitz matrix of the autocorrelation of x, so the
// system matrix is assembled directly from it minus the mainlobe rows.

#pragma once

#include "ceui/probe.hpp"

#include <stdexcept>
#include <string_view>

namespace ceui {

enum class FilterKind { matched, mismatched_islr };

std::string_view to_string(FilterKind kind);
FilterKind filter_kind_from_string(std::string_view name);

struct DecodingFilter {
  VectorXd taps;
  FilterKind kind = FilterKind::matched;
  Index mainlobe_halfwidth = 0;  ///< mismatched only
  double loading = 0.0;          ///< mismatched only, relative to the mean diagonal
};

struct Psf {
  VectorXd values;  ///< lags -(K-1) .. (N-1)
  Index center_index = 0;
};

/// Raised when the loaded normal matrix cannot be factorised.
class SingularSystem : public std::runtime_error {
 public:
  SingularSystem(const std::string& what, double rcond) : std::runtime_error(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

/// round(fs / (4 fc)) lags on each side of the peak, i.e. a lambda/2 band.
Index default_mainlobe_halfwidth(const ProbeConfig& probe);

/// h = x / sqrt(x^T x). Throws std::invalid_argument on a zero-energy reference.
DecodingFilter matched_filter(const VectorXd& x_w);
DecodingFilter matched_filter(const RfRecord& x_w);

/// Lambda^T F Lambda for reference x (K = len(x)), mainlobe band |tau| <= halfwidth zeroed.
Eigen::MatrixXd sidelobe_gram(const VectorXd& x_w, Index mainlobe_halfwidth);

DecodingFilter mismatched_filter_islr(const VectorXd& x_w, Index mainlobe_halfwidth, double loading = 1e-6);
DecodingFilter mismatched_filter_islr(const RfRecord& x_w, Index mainlobe_halfwidth, double loading = 1e-6);

DecodingFilter design_filter(FilterKind kind, const VectorXd& x_w, Index mainlobe_halfwidth, double loading);

/// I_w = y_w (cross-correlated with) h over the valid lags: N_R - K + 1 samples, lag 0
/// being an echo that starts with the window.
RfRecord compress(const RfRecord& y_w, const DecodingFilter& filter);

/// Full cross-correlation of the reference with the filter taps; centre at zero lag.
Psf psf(const VectorXd& x_w, const DecodingFilter& filter);
Psf psf(const RfRecord& x_w, const DecodingFilter& filter);

}  // namespace ceui
