// SPDX-License-Identifier: Apache-2.0
//
// hisac: performance analysis toolkit for holographic-MIMO integrated
// sensing and communications
// Copyright (C) 2026 The hisac authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HISAC_SPECIAL_HPP
#define HISAC_SPECIAL_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "hisac/types.hpp"

namespace hisac {

/// Exponential integral Ei(x) for x < 0, to near machine accuracy.
/// Only negative arguments occur in the rate expressions, so positive
/// arguments are rejected.
double exp_integral_ei(double x);

/// e^x * E1(x) for x > 0. Stable for arbitrarily large x, where computing
/// the two factors separately would overflow/underflow. This is the kernel
/// of every exponential-fading ergodic rate in the library:
///   E{ln(1 + a X)} = e^{1/(a m)} E1(1/(a m))   for X ~ Exp(mean m).
double expx_e1(double x);

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
double reg_lower_gamma(double s, double x);

/// Lower incomplete gamma function gamma(s, x), non-regularized.
double lower_incomplete_gamma(double s, double x);

/// Digamma at a positive integer: psi(k) = -EulerGamma + sum_{j<k} 1/j.
double digamma_int(std::int64_t k);

/// Distribution machinery for X = sum_i lambda_i |h_i|^2 with h_i standard
/// circular Gaussian, i.e. a positively weighted sum of unit exponentials.
/// The series representation expands X into a mixture of Erlang laws with a
/// common scale lambda_min; `log_weight(k)` is the log of the k-th mixture
/// mass and the masses sum to one. Mixture coefficients follow the usual
/// delta recursion and are kept in log space so strongly spread weight sets
/// do not overflow.
class SpectralStats {
 public:
  /// `eigs` are the positive weights; any order, sorted internally.
  /// Weights within relative 1e-9 of the minimum are snapped onto it before
  /// the recursion (near-equal values add noise without information).
  explicit SpectralStats(RVector eigs, double tol = 1e-10);

  const RVector& eigs() const { return eigs_; }
  int rank() const { return static_cast<int>(eigs_.size()); }
  double lambda_min() const { return eigs_(eigs_.size() - 1); }
  double lambda_max() const { return eigs_(0); }
  double trace() const { return eigs_.sum(); }
  double tol() const { return tol_; }

  /// log of the k-th Erlang mixture mass; grows the recursion on demand.
  double log_weight(int k) const;
  /// delta_k in linear scale (may overflow to inf for extreme spreads).
  double delta(int k) const;
  /// Highest index the recursion has been advanced to so far.
  int trunc_k() const { return static_cast<int>(log_delta_.size()) - 1; }

  /// Mean and spread of the mixture index; the series needs roughly
  /// mean + a few sigma terms, which decides series-vs-inversion routing.
  double mixture_mean() const { return mix_mean_; }
  double mixture_sd() const { return mix_sd_; }
  /// True if the Erlang-mixture series can converge within `k_max` terms.
  bool series_feasible(int k_max = kMaxTerms) const;

  static constexpr int kMaxTerms = 5000;

 private:
  void ensure(int k) const;

  RVector eigs_;            // sorted descending, strictly positive
  RVector ratio_base_;      // 1 - lambda_min / lambda_i
  double log_coeff_;        // log prod(lambda_min / lambda_i)
  double tol_;
  double mix_mean_, mix_sd_;
  mutable std::vector<double> log_delta_;
  mutable std::vector<double> log_b_;  // log sum_i ratio_base_i^k
  mutable std::vector<double> power_;  // running ratio_base^i per weight
};

/// delta recursion driver exposed for direct inspection: returns the
/// coefficients delta_0..delta_K in linear scale together with the index K
/// at which the mixture mass tail drops below `tol`.
std::pair<std::vector<double>, int> moschopoulos_deltas(const RVector& eigs,
                                                        double tol);

/// CDF of the weighted exponential sum at x >= 0.
double weighted_expsum_cdf(const SpectralStats& stats, double x);

/// Density of the weighted exponential sum at x >= 0.
double weighted_expsum_pdf(const SpectralStats& stats, double x);

/// Ergodic rate E{log2(1 + a X)} in bit/s/Hz for X the weighted exponential
/// sum with the given weights and a > 0.
double zeta_ecr(const SpectralStats& stats, double a);
double zeta_ecr(const RVector& eigs, double a);

/// Exact log expectation E{log2 X} in bit/s/Hz.
double upsilon(const SpectralStats& stats);
double upsilon(const RVector& eigs);

namespace internal {

/// Gil-Pelaez characteristic-function inversion for the weighted
/// exponential sum. Absolute accuracy ~1e-12; used when the eigenvalue
/// spread makes the Erlang-mixture series impractical.
double imhof_cdf(const RVector& eigs, double x);
double imhof_pdf(const RVector& eigs, double x);

/// E{ln(1 + a X)} via the Frullani representation
///   integral_0^inf e^-t (1 - prod_i (1 + a lambda_i t)^-1) / t dt,
/// a smooth 1-D integral immune to eigenvalue spread.
double log1p_rate_integral(const RVector& eigs, double a);

/// E{ln X} via integral_0^inf (e^-t - prod_i (1 + lambda_i t)^-1) / t dt.
double log_expectation_integral(const RVector& eigs);

/// j_q(c) = (1/q!) integral_0^inf t^q e^-t / (t + c) dt, computed as a
/// stable sequence for q = 0..q_max. Building block of the Erlang ergodic
/// rate: E{ln(1 + a X)} = sum_{q<M} j_q(1/(a scale)) for X ~ Erlang(M).
std::vector<double> jq_sequence(int q_max, double c);

}  // namespace internal

}  // namespace hisac

#endif  // HISAC_SPECIAL_HPP
