#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kronsbl {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sizes or shapes of the arguments do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The input is numerically degenerate (zero signal, singular system, ...).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// A configuration value is outside its admissible range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kronsbl
