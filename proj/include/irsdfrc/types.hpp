// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace irsdfrc {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Random engine used for every stochastic draw. One engine per realization.
using Rng = std::mt19937_64;

constexpr double kPi = 3.14159265358979323846;

/// Unconjugated inner product a^T b.
inline cd tdot(const CVec& a, const CVec& b) { return (a.array() * b.array()).sum(); }

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double db2lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin2db(double lin) { return 10.0 * std::log10(lin); }

/// Thrown for malformed or out-of-range configuration values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when array dimensions do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace irsdfrc
