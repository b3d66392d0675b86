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

#include <cmath>

#include "doctest.h"
#include "hisac/special.hpp"
#include "oracles.hpp"

using namespace hisac;

namespace {

RVector make_eigs(std::initializer_list<double> v) {
  RVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("exponential integral against quadrature of the definition") {
  CHECK(exp_integral_ei(-1.0) ==
        doctest::Approx(oracle::ei_quadrature(-1.0)).epsilon(1e-12));
  // tabulated value as an extra anchor
  CHECK(exp_integral_ei(-1.0) == doctest::Approx(-0.21938393439552026).epsilon(1e-12));
  for (double x : {-0.05, -0.3, -2.0, -5.0, -7.9, -8.1, -15.0, -30.0}) {
    CHECK(std::abs(exp_integral_ei(x) - oracle::ei_quadrature(x)) < 1e-10);
  }
  CHECK(std::abs(exp_integral_ei(-10.0)) < 5e-6);
  CHECK_THROWS_AS(exp_integral_ei(0.0), std::invalid_argument);
  CHECK_THROWS_AS(exp_integral_ei(1.0), std::invalid_argument);
}

TEST_CASE("expx_e1 matches -e^x Ei(-x) and stays finite for large x") {
  for (double x : {1e-4, 0.1, 1.0, 3.0, 50.0}) {
    const double ref = -std::exp(x) * oracle::ei_quadrature(-x);
    CHECK(expx_e1(x) == doctest::Approx(ref).epsilon(1e-11));
  }
  // asymptotically 1/x
  CHECK(expx_e1(1e8) == doctest::Approx(1e-8).epsilon(1e-6));
  CHECK(std::isfinite(expx_e1(5000.0)));
}

TEST_CASE("high-snr form of the exponential rate kernel") {
  // -e^{1/a} Ei(-1/a) log2e approaches log2(a) - EulerGamma/ln(2); the
  // first-order gap at a = 1e3 is about 0.0106.
  auto kernel = [](double a) { return kLog2E * expx_e1(1.0 / a); };
  auto approx = [](double a) {
    return std::log2(a) - kEulerGamma * kLog2E;
  };
  CHECK(std::abs(kernel(1e3) - approx(1e3)) < 0.011);
  CHECK(std::abs(kernel(1e6) - approx(1e6)) < 2e-5);
}

TEST_CASE("lower incomplete gamma") {
  // closed forms
  for (double x : {0.2, 1.0, 4.0}) {
    CHECK(lower_incomplete_gamma(1.0, x) ==
          doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-13));
  }
  CHECK(lower_incomplete_gamma(3.0, 0.0) == 0.0);
  CHECK(lower_incomplete_gamma(0.7, 0.0) == 0.0);
  // small-x asymptote: gamma(s, x) -> x^s / s
  const double s = 3.0, x = 1e-6;
  CHECK(lower_incomplete_gamma(s, x) / (std::pow(x, s) / s) ==
        doctest::Approx(1.0).epsilon(1e-5));
  // quadrature oracle over the working range
  for (double ss : {0.5, 3.0, 7.5}) {
    for (double xx : {0.1, 1.0, 10.0}) {
      CHECK(std::abs(lower_incomplete_gamma(ss, xx) -
                     oracle::ligamma_quadrature(ss, xx)) < 1e-10);
    }
  }
  // regularized version saturates to 1
  CHECK(reg_lower_gamma(5.0, 1e4) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("digamma at integers") {
  CHECK(digamma_int(1) == doctest::Approx(-kEulerGamma).epsilon(1e-15));
  CHECK(digamma_int(2) == doctest::Approx(1.0 - kEulerGamma).epsilon(1e-15));
  long double h = 0.0L;
  for (int j = 1; j <= 9; ++j) h += 1.0L / j;
  CHECK(digamma_int(10) ==
        doctest::Approx(static_cast<double>(h) - kEulerGamma).epsilon(1e-15));
}

TEST_CASE("delta recursion") {
  SUBCASE("equal weights give a single Erlang term") {
    SpectralStats stats(make_eigs({2.0, 2.0, 2.0}));
    CHECK(stats.delta(0) == 1.0);
    CHECK(stats.delta(1) == 0.0);
    CHECK(stats.delta(5) == 0.0);
  }
  SUBCASE("single weight") {
    auto [deltas, trunc] = moschopoulos_deltas(make_eigs({3.0}), 1e-10);
    REQUIRE(deltas.size() >= 1);
    CHECK(deltas[0] == 1.0);
    CHECK(trunc == 0);
  }
  SUBCASE("hand-evaluated first coefficient for weights {2,1}") {
    auto [deltas, trunc] = moschopoulos_deltas(make_eigs({2.0, 1.0}), 1e-10);
    REQUIRE(trunc >= 1);
    CHECK(deltas[0] == 1.0);
    CHECK(deltas[1] == doctest::Approx(0.5).epsilon(1e-13));
    // mixture masses sum to one: sum_k delta_k = prod(lambda_i/lambda_min)
    double sum = 0.0;
    for (double d : deltas) sum += d;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("non-positive weights are rejected") {
    CHECK_THROWS_AS(SpectralStats(make_eigs({1.0, 0.0})), std::invalid_argument);
    CHECK_THROWS_AS(SpectralStats(make_eigs({1.0, -2.0})), std::invalid_argument);
  }
}

TEST_CASE("weighted exponential sum cdf") {
  SUBCASE("single weight reduces to the exponential law") {
    SpectralStats stats(make_eigs({2.5}));
    for (double x : {0.1, 1.0, 5.0}) {
      CHECK(weighted_expsum_cdf(stats, x) ==
            doctest::Approx(1.0 - std::exp(-x / 2.5)).epsilon(1e-13));
    }
    CHECK(weighted_expsum_cdf(stats, 0.0) == 0.0);
  }
  SUBCASE("brute-force sampler at {2,1}") {
    SpectralStats stats(make_eigs({2.0, 1.0}));
    const auto sample = oracle::sample_expsum(make_eigs({2.0, 1.0}), 1000000, 77);
    for (double x : {0.5, 1.5, 3.0, 6.0}) {
      const double cf = weighted_expsum_cdf(stats, x);
      CHECK(std::abs(cf - sample.cdf(x)) < 3.0 * sample.cdf_stderr(x));
    }
  }
  SUBCASE("monotone and saturating") {
    SpectralStats stats(make_eigs({4.0, 2.0, 1.0, 0.5, 0.25}));
    double prev = 0.0;
    for (double x = 0.0; x <= 60.0; x += 0.5) {
      const double c = weighted_expsum_cdf(stats, x);
      CHECK(c >= prev - 1e-14);
      CHECK(c <= 1.0);
      prev = c;
    }
    CHECK(weighted_expsum_cdf(stats, 400.0) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("series agrees with characteristic-function inversion") {
    const auto eigs = make_eigs({4.0, 2.0, 1.0, 0.5, 0.25});
    SpectralStats stats(eigs);
    for (double x : {0.7, 3.0, 9.0, 20.0}) {
      CHECK(weighted_expsum_cdf(stats, x) ==
            doctest::Approx(internal::imhof_cdf(eigs, x)).epsilon(1e-8));
    }
  }
}

TEST_CASE("weighted exponential sum pdf") {
  SUBCASE("single weight") {
    SpectralStats stats(make_eigs({2.0}));
    for (double x : {0.2, 1.0, 7.0}) {
      CHECK(weighted_expsum_pdf(stats, x) ==
            doctest::Approx(0.5 * std::exp(-x / 2.0)).epsilon(1e-13));
    }
  }
  SUBCASE("integrates to one") {
    SpectralStats stats(make_eigs({2.0, 1.0, 0.5}));
    const double total = oracle::integrate(
        [&](double x) { return weighted_expsum_pdf(stats, x); }, 0.0, 120.0,
        1e-9);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("derivative of the cdf") {
    SpectralStats stats(make_eigs({2.0, 1.0}));
    for (double x : {0.5, 2.0, 5.0}) {
      const double h = 1e-5;
      const double fd = (weighted_expsum_cdf(stats, x + h) -
                         weighted_expsum_cdf(stats, x - h)) /
                        (2.0 * h);
      CHECK(weighted_expsum_pdf(stats, x) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("ergodic rate of a weighted exponential sum") {
  SUBCASE("single weight closed form") {
    for (double a : {0.5, 10.0, 1e4}) {
      CHECK(zeta_ecr(make_eigs({1.0}), a) ==
            doctest::Approx(kLog2E * expx_e1(1.0 / a)).epsilon(1e-12));
    }
  }
  SUBCASE("monte carlo at {2,1}, a = 10") {
    const auto mc = oracle::expsum_mean(
        make_eigs({2.0, 1.0}), 1000000, 1234,
        [](double x) { return std::log2(1.0 + 10.0 * x); });
    const double cf = zeta_ecr(make_eigs({2.0, 1.0}), 10.0);
    CHECK(std::abs(cf - mc.mean) < 3.0 * mc.se);
  }
  SUBCASE("vanishes with the snr") {
    CHECK(zeta_ecr(make_eigs({2.0, 1.0}), 1e-9) < 1e-7);
    CHECK(zeta_ecr(make_eigs({2.0, 1.0}), 1e-9) > 0.0);
  }
  SUBCASE("strictly increasing in snr and in each weight") {
    const auto e = make_eigs({2.0, 1.0});
    CHECK(zeta_ecr(e, 2.0) < zeta_ecr(e, 2.5));
    CHECK(zeta_ecr(e, 2.0) < zeta_ecr(make_eigs({2.2, 1.0}), 2.0));
    CHECK(zeta_ecr(e, 2.0) < zeta_ecr(make_eigs({2.0, 1.1}), 2.0));
  }
  SUBCASE("scale absorption: zeta(c*eigs, a) = zeta(eigs, c*a)") {
    const auto e = make_eigs({3.0, 1.0, 0.5});
    CHECK(zeta_ecr(make_eigs({6.0, 2.0, 1.0}), 5.0) ==
          doctest::Approx(zeta_ecr(e, 10.0)).epsilon(1e-10));
  }
  SUBCASE("series route agrees with the integral route") {
    const auto e = make_eigs({4.0, 2.0, 1.0, 0.5});
    for (double a : {0.05, 1.0, 30.0, 1e4}) {
      CHECK(zeta_ecr(e, a) ==
            doctest::Approx(kLog2E * internal::log1p_rate_integral(e, a))
                .epsilon(1e-9));
    }
  }
  SUBCASE("wide spread routes through the integral and stays sane") {
    const auto wide = make_eigs({1e5, 1.0, 1e-4});
    REQUIRE_FALSE(SpectralStats(wide).series_feasible());
    const auto mc = oracle::expsum_mean(
        wide, 400000, 99, [](double x) { return std::log2(1.0 + 0.1 * x); });
    CHECK(std::abs(zeta_ecr(wide, 0.1) - mc.mean) < 3.0 * mc.se);
  }
}

TEST_CASE("log expectation of a weighted exponential sum") {
  SUBCASE("single weight") {
    CHECK(upsilon(make_eigs({1.0})) ==
          doctest::Approx(-kEulerGamma * kLog2E).epsilon(1e-13));
    CHECK(upsilon(make_eigs({8.0})) ==
          doctest::Approx(3.0 - kEulerGamma * kLog2E).epsilon(1e-12));
  }
  SUBCASE("two equal weights: Erlang-2 log moment") {
    CHECK(upsilon(make_eigs({1.0, 1.0})) ==
          doctest::Approx((1.0 - kEulerGamma) * kLog2E).epsilon(1e-12));
  }
  SUBCASE("monte carlo at {2,1}") {
    const auto mc = oracle::expsum_mean(make_eigs({2.0, 1.0}), 1000000, 4321,
                                        [](double x) { return std::log2(x); });
    CHECK(std::abs(upsilon(make_eigs({2.0, 1.0})) - mc.mean) < 3.0 * mc.se);
  }
  SUBCASE("Jensen bound") {
    for (auto e : {make_eigs({2.0, 1.0}), make_eigs({5.0, 0.1, 0.1}),
                   make_eigs({1.0, 1.0, 1.0, 1.0})}) {
      CHECK(upsilon(e) <= std::log2(e.sum()));
    }
  }
  SUBCASE("series route agrees with the integral route") {
    const auto e = make_eigs({4.0, 2.0, 1.0, 0.5});
    CHECK(upsilon(e) ==
          doctest::Approx(kLog2E * internal::log_expectation_integral(e))
              .epsilon(1e-9));
  }
  SUBCASE("high-snr tie between rate and log expectation") {
    const auto e = make_eigs({2.0, 1.0});
    const double gap = zeta_ecr(e, 1e6) - (std::log2(1e6) + upsilon(e));
    CHECK(std::abs(gap) < 0.02);
    CHECK(gap > 0.0);  // log2(1 + aX) > log2(aX)
  }
}

TEST_CASE("erlang log-rate sequence j_q") {
  // j_q = (1/q!) int t^q e^-t/(t+c); check against direct quadrature for a
  // range of c spanning both recursion regimes.
  for (double c : {0.01, 0.5, 3.0, 40.0, 500.0}) {
    const auto j = internal::jq_sequence(24, c);
    for (int q : {0, 1, 5, 17, 24}) {
      const double lg = std::lgamma(q + 1.0);
      const double ref = oracle::integrate(
          [&](double t) {
            return t <= 0.0 ? 0.0
                            : std::exp(q * std::log(t) - t - lg) / (t + c);
          },
          1e-12, q + 40.0 + 12.0 * std::sqrt(q + 1.0),
          1e-12 / (q + c + 1.0));
      CHECK(j[static_cast<size_t>(q)] == doctest::Approx(ref).epsilon(1e-9));
      // crude bounds: 1/(q+1+c) <= j_q <= 1/max(q, c-ish)
      CHECK(j[static_cast<size_t>(q)] >= 1.0 / (q + 1.0 + c) - 1e-15);
    }
  }
}
