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

#ifndef HISAC_INTERNAL_QUADRATURE_HPP
#define HISAC_INTERNAL_QUADRATURE_HPP

#include <cmath>
#include <utility>

namespace hisac::internal {

template <class F>
double simpson_step(F&& f, double a, double fa, double b, double fb,
                    double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(F&& f, double a, double fa, double b, double fb,
                            double m, double fm, double whole, double tol,
                            int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_step(f, a, fa, m, fm, lm, flm);
  const double right = simpson_step(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  // The relative floor stops refinement once the update is rounding noise,
  // whatever absolute tolerance was requested.
  const double floor = 1e-15 * (std::abs(left) + std::abs(right));
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol || std::abs(delta) <= floor) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                              depth - 1);
}

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol,
                        int max_depth = 40) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = simpson_step(f, a, fa, b, fb, m, fm);
  return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// Adaptive Simpson over [a, b] split into `panels` seed intervals; useful
/// for oscillatory or multi-peaked integrands where one global parabola fit
/// would accept a poor estimate.
template <class F>
double adaptive_simpson_panels(F&& f, double a, double b, double tol,
                               int panels, int max_depth = 36) {
  if (panels < 1) panels = 1;
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    total += adaptive_simpson(f, a + i * h, a + (i + 1) * h, tol / panels,
                              max_depth);
  }
  return total;
}

}  // namespace hisac::internal

#endif  // HISAC_INTERNAL_QUADRATURE_HPP
