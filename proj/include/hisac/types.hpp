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

#ifndef HISAC_TYPES_HPP
#define HISAC_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hisac {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.5772156649015328606065121;
inline constexpr double kLog2E = 1.4426950408889634073599247;

/// A series or iterative scheme failed to reach its tolerance.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar solver could not bracket or refine a root.
class solver_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model construction produced an inconsistent object.
class model_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace hisac

#endif  // HISAC_TYPES_HPP
