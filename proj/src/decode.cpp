// SPDX-License-Identifier: Apache-2.0

#include "ceui/decode.hpp"

#include <limits>
#include <string>

namespace ceui {

std::string_view to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::matched: return "mf";
    case FilterKind::mismatched_islr: return "mmf";
  }
  return "?";
}

FilterKind filter_kind_from_string(std::string_view name) {
  if (name == "mf" || name == "matched") return FilterKind::matched;
  if (name == "mmf" || name == "mismatched" || name == "mismatched_islr") return FilterKind::mismatched_islr;
  throw std::invalid_argument("unknown filter '" + std::string(name) + "' (expected mf or mmf)");
}

Index default_mainlobe_halfwidth(const ProbeConfig& probe) {
  return static_cast<Index>(std::lround(probe.fs / (4.0 * probe.fc)));
}

DecodingFilter matched_filter(const VectorXd& x_w) {
  const double energy = x_w.squaredNorm();
  if (!(energy > 0.0)) throw std::invalid_argument("matched_filter: zero-energy reference");
  return {x_w / std::sqrt(energy), FilterKind::matched, 0, 0.0};
}

DecodingFilter matched_filter(const RfRecord& x_w) { return matched_filter(x_w.samples); }

Eigen::MatrixXd sidelobe_gram(const VectorXd& x_w, Index mainlobe_halfwidth) {
  const Index k = x_w.size();
  VectorXd autocorr(k);
  for (Index d = 0; d < k; ++d) autocorr(d) = x_w.head(k - d).dot(x_w.tail(k - d));

  Eigen::MatrixXd gram(k, k);
  for (Index j = 0; j < k; ++j)
    for (Index i = j; i < k; ++i) gram(i, j) = autocorr(i - j);

  // Remove the mainlobe rows a_tau[k] = x[k + tau], |tau| <= m.
  VectorXd row(k);
  for (Index tau = -mainlobe_halfwidth; tau <= mainlobe_halfwidth; ++tau) {
    row.setZero();
    const Index lo = std::max<Index>(0, -tau);
    const Index hi = std::min<Index>(k, k - tau);
    if (hi <= lo) continue;
    row.segment(lo, hi - lo) = x_w.segment(lo + tau, hi - lo);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(row, -1.0);
  }
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  return gram;
}

DecodingFilter mismatched_filter_islr(const VectorXd& x_w, Index mainlobe_halfwidth, double loading) {
  const Index k = x_w.size();
  if (mainlobe_halfwidth < 0) throw std::invalid_argument("mismatched_filter_islr: negative mainlobe half-width");
  if (!(loading >= 0.0)) throw std::invalid_argument("mismatched_filter_islr: negative loading");
  const double energy = x_w.squaredNorm();
  if (!(energy > 0.0)) throw std::invalid_argument("mismatched_filter_islr: zero-energy reference");

  Eigen::MatrixXd system = sidelobe_gram(x_w, mainlobe_halfwidth);
  const double mean_diag = system.trace() / static_cast<double>(k);
  system.diagonal().array() += loading * mean_diag;

  Eigen::LLT<Eigen::MatrixXd> llt(system);
  const double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
  if (llt.info() != Eigen::Success || !(rcond > std::numeric_limits<double>::epsilon()))
    throw SingularSystem("mismatched_filter_islr: singular system after loading (rcond estimate " +
                             std::to_string(rcond) + ")",
                         rcond);
  VectorXd u = llt.solve(x_w);
  u *= std::sqrt(energy) / u.norm();
  return {std::move(u), FilterKind::mismatched_islr, mainlobe_halfwidth, loading};
}

DecodingFilter mismatched_filter_islr(const RfRecord& x_w, Index mainlobe_halfwidth, double loading) {
  return mismatched_filter_islr(x_w.samples, mainlobe_halfwidth, loading);
}

DecodingFilter design_filter(FilterKind kind, const VectorXd& x_w, Index mainlobe_halfwidth, double loading) {
  if (kind == FilterKind::matched) return matched_filter(x_w);
  return mismatched_filter_islr(x_w, mainlobe_halfwidth, loading);
}

RfRecord compress(const RfRecord& y_w, const DecodingFilter& filter) {
  if (filter.taps.size() == 0 || filter.taps.size() > y_w.size())
    throw std::invalid_argument("compress: filter of " + std::to_string(filter.taps.size()) +
                                " taps does not fit an echo window of " + std::to_string(y_w.size()));
  RfRecord out;
  out.fs = y_w.fs;
  out.t0 = y_w.t0;
  out.samples = correlate_valid(y_w.samples, filter.taps);
  return out;
}

Psf psf(const VectorXd& x_w, const DecodingFilter& filter) {
  return {correlate_full(x_w, filter.taps), filter.taps.size() - 1};
}

Psf psf(const RfRecord& x_w, const DecodingFilter& filter) { return psf(x_w.samples, filter); }

}  // namespace ceui
