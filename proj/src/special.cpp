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

#include "hisac/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "hisac/internal/quadrature.hpp"

namespace hisac {

namespace {

constexpr double kTiny = 1e-300;

double logsumexp(const std::vector<double>& terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

}  // namespace

double expx_e1(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("expx_e1: argument must be > 0");
  if (x <= 1.0) {
    // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
    double sum = 0.0;
    double pow_term = 1.0;  // x^k / k!
    double sign = 1.0;
    for (int k = 1; k <= 48; ++k) {
      pow_term *= x / k;
      const double s = sign * pow_term / k;
      sum += s;
      sign = -sign;
      if (std::abs(s) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return std::exp(x) * (-kEulerGamma - std::log(x) + sum);
  }
  // Even contraction of the continued fraction,
  //   e^x E1(x) = 1 / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...))),
  // evaluated with the modified Lentz scheme.
  const double eps = 1e-16;
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 400; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + a / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) return h;
  }
  throw convergence_error("expx_e1: continued fraction did not converge");
}

double exp_integral_ei(double x) {
  if (!(x < 0.0)) {
    throw std::invalid_argument(
        "exp_integral_ei: only negative arguments are supported");
  }
  const double t = -x;
  // Ei(-t) = -e^{-t} (e^t E1(t)); the product form avoids overflow.
  return -std::exp(-t) * expx_e1(t);
}

double reg_lower_gamma(double s, double x) {
  if (!(s > 0.0) || x < 0.0) {
    throw std::invalid_argument("reg_lower_gamma: require s > 0, x >= 0");
  }
  if (x == 0.0) return 0.0;
  const double log_prefix = -x + s * std::log(x) - std::lgamma(s);
  if (x < s + 1.0) {
    double ap = s;
    double del = 1.0 / s;
    double sum = del;
    for (int i = 0; i < 100000; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-17) {
        return sum * std::exp(log_prefix);
      }
    }
    throw convergence_error("reg_lower_gamma: series did not converge");
  }
  // Continued fraction for Q(s, x), Lentz form.
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 100000; ++i) {
    const double an = -static_cast<double>(i) * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-17) {
      const double q = std::exp(log_prefix) * h;
      return 1.0 - q;
    }
  }
  throw convergence_error("reg_lower_gamma: continued fraction stalled");
}

double lower_incomplete_gamma(double s, double x) {
  return reg_lower_gamma(s, x) * std::exp(std::lgamma(s));
}

double digamma_int(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("digamma_int: require k >= 1");
  long double acc = -static_cast<long double>(kEulerGamma);
  for (std::int64_t j = 1; j < k; ++j) acc += 1.0L / j;
  return static_cast<double>(acc);
}

// ---------------------------------------------------------------------------
// SpectralStats
// ---------------------------------------------------------------------------

SpectralStats::SpectralStats(RVector eigs, double tol) : tol_(tol) {
  if (eigs.size() == 0) {
    throw std::invalid_argument("SpectralStats: empty weight list");
  }
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (!(eigs(i) > 0.0) || !std::isfinite(eigs(i))) {
      throw std::invalid_argument("SpectralStats: weights must be positive");
    }
  }
  std::sort(eigs.data(), eigs.data() + eigs.size(), std::greater<double>());
  const double lmin = eigs(eigs.size() - 1);
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (eigs(i) - lmin <= 1e-9 * lmin) eigs(i) = lmin;
  }
  eigs_ = std::move(eigs);

  const Eigen::Index r = eigs_.size();
  ratio_base_.resize(r);
  log_coeff_ = 0.0;
  double mean = 0.0, var = 0.0;
  for (Eigen::Index i = 0; i < r; ++i) {
    const double rho = eigs_(i) / lmin;
    ratio_base_(i) = 1.0 - 1.0 / rho;
    log_coeff_ -= std::log(rho);
    mean += rho - 1.0;
    var += rho * (rho - 1.0);
  }
  mix_mean_ = mean;
  mix_sd_ = std::sqrt(std::max(var, 0.0));
  log_delta_.push_back(0.0);  // delta_0 = 1
}

namespace {
std::mutex g_spectral_mutex;
}

void SpectralStats::ensure(int k) const {
  std::lock_guard<std::mutex> lock(g_spectral_mutex);
  const Eigen::Index r = eigs_.size();
  if (power_.empty()) power_.assign(static_cast<size_t>(r), 1.0);
  std::vector<double> lse;
  while (static_cast<int>(log_delta_.size()) <= k) {
    const int kk = static_cast<int>(log_delta_.size());
    // b_kk = sum_i ratio_base_i^kk, powers advanced incrementally.
    double b = 0.0;
    for (Eigen::Index i = 0; i < r; ++i) {
      power_[static_cast<size_t>(i)] *= ratio_base_(i);
      b += power_[static_cast<size_t>(i)];
    }
    log_b_.push_back(b > 0.0 ? std::log(b)
                             : -std::numeric_limits<double>::infinity());
    lse.clear();
    lse.reserve(static_cast<size_t>(kk));
    for (int i = 1; i <= kk; ++i) {
      lse.push_back(log_b_[static_cast<size_t>(i - 1)] +
                    log_delta_[static_cast<size_t>(kk - i)]);
    }
    log_delta_.push_back(logsumexp(lse) - std::log(static_cast<double>(kk)));
  }
}

double SpectralStats::log_weight(int k) const {
  if (k < 0) throw std::invalid_argument("log_weight: negative index");
  if (k >= static_cast<int>(log_delta_.size())) ensure(k);
  return log_coeff_ + log_delta_[static_cast<size_t>(k)];
}

double SpectralStats::delta(int k) const {
  if (k < 0) throw std::invalid_argument("delta: negative index");
  if (k >= static_cast<int>(log_delta_.size())) ensure(k);
  return std::exp(log_delta_[static_cast<size_t>(k)]);
}

bool SpectralStats::series_feasible(int k_max) const {
  return mix_mean_ + 12.0 * mix_sd_ + 64.0 <= static_cast<double>(k_max);
}

std::pair<std::vector<double>, int> moschopoulos_deltas(const RVector& eigs,
                                                        double tol) {
  SpectralStats stats(eigs, tol);
  if (!stats.series_feasible()) {
    throw convergence_error(
        "moschopoulos_deltas: weight spread too large for the mixture "
        "series (mixture mean " +
        std::to_string(stats.mixture_mean()) + ")");
  }
  double mass = 0.0;
  int trunc = SpectralStats::kMaxTerms;
  for (int k = 0; k < SpectralStats::kMaxTerms; ++k) {
    mass += std::exp(stats.log_weight(k));
    if (1.0 - mass <= tol) {
      trunc = k;
      break;
    }
  }
  std::vector<double> deltas(static_cast<size_t>(trunc) + 1);
  for (int k = 0; k <= trunc; ++k) deltas[static_cast<size_t>(k)] = stats.delta(k);
  return {std::move(deltas), trunc};
}

// ---------------------------------------------------------------------------
// CDF / PDF
// ---------------------------------------------------------------------------

double weighted_expsum_cdf(const SpectralStats& stats, double x) {
  if (x < 0.0) throw std::invalid_argument("weighted_expsum_cdf: x < 0");
  if (x == 0.0) return 0.0;
  if (!stats.series_feasible()) {
    return std::clamp(internal::imhof_cdf(stats.eigs(), x), 0.0, 1.0);
  }
  const int r = stats.rank();
  const double y = x / stats.lambda_min();
  const double tol = stats.tol();
  double accum = 0.0;
  double mass = 0.0;
  for (int k = 0; k < SpectralStats::kMaxTerms; ++k) {
    const double w = std::exp(stats.log_weight(k));
    const double p = reg_lower_gamma(static_cast<double>(r + k), y);
    accum += w * p;
    mass += w;
    // P(r+k, y) decreases in k, so the tail is below (1-mass) * p.
    if ((1.0 - mass) * p <= tol * accum + kTiny) {
      return std::clamp(accum, 0.0, 1.0);
    }
  }
  throw convergence_error("weighted_expsum_cdf: series not converged");
}

double weighted_expsum_pdf(const SpectralStats& stats, double x) {
  if (x < 0.0) throw std::invalid_argument("weighted_expsum_pdf: x < 0");
  const int r = stats.rank();
  const double lm = stats.lambda_min();
  if (x == 0.0) return r == 1 ? 1.0 / lm : 0.0;
  if (!stats.series_feasible()) {
    return std::max(internal::imhof_pdf(stats.eigs(), x), 0.0);
  }
  const double y = x / lm;
  const double tol = stats.tol();
  const double log_x = std::log(x);
  const double log_lm = std::log(lm);
  double accum = 0.0;
  double mass = 0.0;
  for (int k = 0; k < SpectralStats::kMaxTerms; ++k) {
    const int m = r + k;
    const double w = std::exp(stats.log_weight(k));
    const double dens =
        std::exp((m - 1) * log_x - y - m * log_lm - std::lgamma(m));
    accum += w * dens;
    mass += w;
    // Erlang densities decrease in the shape parameter once m > x/lm.
    if (m > y && (1.0 - mass) * dens <= tol * accum + kTiny) return accum;
  }
  throw convergence_error("weighted_expsum_pdf: series not converged");
}

// ---------------------------------------------------------------------------
// Erlang log-rate building blocks
// ---------------------------------------------------------------------------

namespace internal {

namespace {

// (1/q!) integral t^q e^-t / (t+c), evaluated directly; anchor for the
// two-sided j recursion where neither direction is stable on its own.
double jq_direct(int q, double c) {
  if (q == 0) return expx_e1(c);
  const double qd = static_cast<double>(q);
  const double lg = std::lgamma(qd + 1.0);
  const double width = 12.0 * std::sqrt(qd) + 30.0;
  const double lo = std::max(0.0, qd - width);
  const double hi = qd + width + 10.0;
  const auto f = [&](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp(qd * std::log(t) - t - lg) / (t + c);
  };
  const double scale = 1.0 / (qd + c + 1.0);
  return adaptive_simpson(f, lo, hi, 1e-13 * scale, 52);
}

}  // namespace

std::vector<double> jq_sequence(int q_max, double c) {
  if (q_max < 0) throw std::invalid_argument("jq_sequence: q_max < 0");
  if (!(c > 0.0)) throw std::invalid_argument("jq_sequence: c must be > 0");
  std::vector<double> j(static_cast<size_t>(q_max) + 1);
  // Forward recursion j_q = (1 - c j_{q-1})/q damps errors for q > c and
  // amplifies them for q < c; the backward form does the opposite. Anchor
  // near q ~ c and recurse outward in the stable direction on each side.
  const int q0 = (c <= 1.5) ? 0
                            : std::min<int>(q_max, static_cast<int>(std::ceil(c)));
  j[static_cast<size_t>(q0)] = jq_direct(q0, c);
  for (int q = q0; q >= 1; --q) {
    j[static_cast<size_t>(q - 1)] = (1.0 - q * j[static_cast<size_t>(q)]) / c;
  }
  for (int q = q0 + 1; q <= q_max; ++q) {
    j[static_cast<size_t>(q)] = (1.0 - c * j[static_cast<size_t>(q - 1)]) / q;
  }
  return j;
}

double log1p_rate_integral(const RVector& eigs, double a) {
  const double tr = eigs.sum();
  const auto f = [&](double u) {
    const double t = std::exp(u);
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) s += std::log1p(a * eigs(i) * t);
    return std::exp(-t) * (-std::expm1(-s));
  };
  const double u_lo = -41.5 - std::max(0.0, std::log(a * tr));
  const double u_hi = std::log(50.0);
  const double tol = 1e-13 * (1.0 + std::log1p(a * tr));
  return adaptive_simpson_panels(f, u_lo, u_hi, tol, 8);
}

double log_expectation_integral(const RVector& eigs) {
  const double tr = eigs.sum();
  double sum_log = 0.0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i) sum_log += std::log(eigs(i));
  const auto f = [&](double u) {
    const double t = std::exp(u);
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) s += std::log1p(eigs(i) * t);
    // e^-t - e^-s, written to survive s ~ t cancellation.
    return std::exp(-s) * std::expm1(s - t);
  };
  const double u_lo = -45.0 - std::max(0.0, std::log(tr + 1.0));
  const double r = static_cast<double>(eigs.size());
  const double u_hi =
      std::max(4.0, (42.0 - sum_log) / r + 1.0);
  const double tol = 1e-13 * (1.0 + std::abs(std::log(tr)));
  return adaptive_simpson_panels(f, u_lo, u_hi, tol, 12);
}

namespace {

RVector prune_for_inversion(const RVector& eigs) {
  const double lmax = eigs.maxCoeff();
  std::vector<double> kept;
  kept.reserve(static_cast<size_t>(eigs.size()));
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (eigs(i) > 1e-14 * lmax) kept.push_back(eigs(i));
  }
  RVector out(static_cast<Eigen::Index>(kept.size()));
  for (size_t i = 0; i < kept.size(); ++i) out(static_cast<Eigen::Index>(i)) = kept[i];
  return out;
}

double inversion_envelope_log(const RVector& l, double t) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < l.size(); ++i) s += std::log1p(l(i) * l(i) * t * t);
  return 0.5 * s;
}

}  // namespace

double imhof_cdf(const RVector& eigs_in, double x) {
  if (!(x > 0.0)) return 0.0;
  const RVector l = prune_for_inversion(eigs_in);
  if (l.size() == 0) throw model_error("imhof_cdf: all weights pruned");
  const auto theta = [&](double t) {
    double s = -x * t;
    for (Eigen::Index i = 0; i < l.size(); ++i) s += std::atan(l(i) * t);
    return s;
  };
  double T = 1.0 / l.maxCoeff();
  for (int i = 0; i < 80; ++i) {
    const double env = std::exp(-inversion_envelope_log(l, T)) / T;
    const double osc = std::min(1.0, 2.0 / (x * T));
    if (env * osc < 1e-12 || T > 1e9) break;
    T *= 2.0;
  }
  const auto f = [&](double t) {
    if (t <= 0.0) return l.sum() - x;
    return std::sin(theta(t)) *
           std::exp(-inversion_envelope_log(l, t)) / t;
  };
  const double swings =
      (static_cast<double>(l.size()) * 0.5 * kPi + x * T) / kPi;
  const int panels =
      std::clamp(static_cast<int>(swings) + 16, 16, 20000);
  const double integral = adaptive_simpson_panels(f, 0.0, T, 1e-12, panels);
  return 0.5 - integral / kPi;
}

double imhof_pdf(const RVector& eigs_in, double x) {
  if (!(x > 0.0)) return 0.0;
  const RVector l = prune_for_inversion(eigs_in);
  if (l.size() == 0) throw model_error("imhof_pdf: all weights pruned");
  const auto theta = [&](double t) {
    double s = -x * t;
    for (Eigen::Index i = 0; i < l.size(); ++i) s += std::atan(l(i) * t);
    return s;
  };
  double T = 1.0 / l.maxCoeff();
  for (int i = 0; i < 80; ++i) {
    const double env = std::exp(-inversion_envelope_log(l, T));
    const double osc = std::min(1.0, 2.0 / (x * T));
    if (env * osc < 1e-12 || T > 1e9) break;
    T *= 2.0;
  }
  const auto f = [&](double t) {
    return std::cos(theta(t)) * std::exp(-inversion_envelope_log(l, t));
  };
  const double swings =
      (static_cast<double>(l.size()) * 0.5 * kPi + x * T) / kPi;
  const int panels =
      std::clamp(static_cast<int>(swings) + 16, 16, 20000);
  return adaptive_simpson_panels(f, 0.0, T, 1e-12, panels) / kPi;
}

}  // namespace internal

// ---------------------------------------------------------------------------
// Ergodic rate and log expectation
// ---------------------------------------------------------------------------

double zeta_ecr(const SpectralStats& stats, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("zeta_ecr: a must be > 0");
  const double tr = stats.trace();
  if (a * tr < 1e-14) return a * tr * kLog2E;  // linear regime to double precision
  if (stats.rank() == 1) {
    return kLog2E * expx_e1(1.0 / (a * stats.lambda_min()));
  }
  if (!stats.series_feasible()) {
    return kLog2E * internal::log1p_rate_integral(stats.eigs(), a);
  }
  const int r = stats.rank();
  const double c = 1.0 / (a * stats.lambda_min());
  const double tol = stats.tol();
  const int q_cap = r + SpectralStats::kMaxTerms;
  const std::vector<double> j = internal::jq_sequence(q_cap, c);
  // erlang_log[M] = E{ln(1 + a X)} for X ~ Erlang(M, lambda_min).
  std::vector<double> prefix(static_cast<size_t>(q_cap) + 1, 0.0);
  for (int q = 0; q < q_cap; ++q) {
    prefix[static_cast<size_t>(q + 1)] =
        prefix[static_cast<size_t>(q)] + j[static_cast<size_t>(q)];
  }
  double accum = 0.0;
  double mass = 0.0;
  for (int k = 0; k < SpectralStats::kMaxTerms; ++k) {
    const double w = std::exp(stats.log_weight(k));
    const double erl = prefix[static_cast<size_t>(r + k)];
    accum += w * erl;
    mass += w;
    // Remaining Erlang log-rates exceed erl by at most log((r+Kmax)/(r+k)).
    const double grow =
        std::log(static_cast<double>(r + SpectralStats::kMaxTerms) / (r + k));
    if ((1.0 - mass) * (erl + grow) <= tol * accum + kTiny) {
      return kLog2E * accum;
    }
  }
  throw convergence_error("zeta_ecr: series not converged");
}

double zeta_ecr(const RVector& eigs, double a) {
  return zeta_ecr(SpectralStats(eigs), a);
}

double upsilon(const SpectralStats& stats) {
  const int r = stats.rank();
  const double lm = stats.lambda_min();
  if (r == 1) return kLog2E * (std::log(lm) - kEulerGamma);
  if (!stats.series_feasible()) {
    return kLog2E * internal::log_expectation_integral(stats.eigs());
  }
  const double tol = stats.tol();
  const double log_lm = std::log(lm);
  double psi = digamma_int(r);
  double accum = 0.0;
  double mass = 0.0;
  for (int k = 0; k < SpectralStats::kMaxTerms; ++k) {
    const double w = std::exp(stats.log_weight(k));
    const double v = psi + log_lm;
    accum += w * v;
    mass += w;
    const double grow =
        std::log(static_cast<double>(r + SpectralStats::kMaxTerms) / (r + k));
    if ((1.0 - mass) * (std::abs(v) + grow) <=
        tol * (std::abs(accum) + 1.0) + kTiny) {
      return kLog2E * accum;
    }
    psi += 1.0 / (r + k);
  }
  throw convergence_error("upsilon: series not converged");
}

double upsilon(const RVector& eigs) { return upsilon(SpectralStats(eigs)); }

}  // namespace hisac
