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

#ifndef HISAC_RNG_HPP
#define HISAC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "hisac/types.hpp"

namespace hisac {

/// SplitMix64 finalizer; used to derive decorrelated per-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic random source: mt19937_64 plus an explicit Box-Muller
/// transform. std::normal_distribution is implementation-defined, so the
/// Gaussian path is spelled out to keep runs bit-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Independent stream for lane `lane` of a run keyed by `master`.
  static Rng stream(std::uint64_t master, std::uint64_t lane) {
    return Rng(splitmix64(master ^ splitmix64(lane + 1)));
  }

  /// Uniform draw in the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard real normal N(0, 1).
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Standard circularly-symmetric complex normal, E|z|^2 = 1.
  Complex cgauss() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1));
    const double a = 2.0 * kPi * u2;
    return Complex(r * std::cos(a), r * std::sin(a));
  }

  /// Unit-mean exponential draw.
  double exponential() { return -std::log(uniform()); }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hisac

#endif  // HISAC_RNG_HPP
