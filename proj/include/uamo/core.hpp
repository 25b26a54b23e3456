#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace uamo {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr Complex kI{0.0, 1.0};

// Base of every error raised by the library. The harness maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class InvalidWindow : public Error {
 public:
  using Error::Error;
};

class SingularCoefficient : public Error {
 public:
  SingularCoefficient(const std::string& what, long site) : Error(what), site(site) {}
  long site;
};

class SingularConjugator : public Error {
 public:
  using Error::Error;
};

class SingularWindow : public Error {
 public:
  using Error::Error;
};

class IdentityInapplicable : public Error {
 public:
  using Error::Error;
};

class DivergentRate : public Error {
 public:
  using Error::Error;
};

class DegenerateNodes : public Error {
 public:
  using Error::Error;
};

class SchemeUnavailable : public Error {
 public:
  SchemeUnavailable(const std::string& what, long nearest) : Error(what), nearest_valid_y(nearest) {}
  long nearest_valid_y;  // -1 when nothing valid exists below the search limit
};

class NoEigenpair : public Error {
 public:
  using Error::Error;
};

class UninformativeFit : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Operator 2-norm of a 2x2 complex matrix, closed form.
double norm2(const Mat2& m);

// Unit circle point e^{2 pi i phase}.
inline Complex on_circle(double phase) { return std::polar(1.0, kTwoPi * phase); }

// Real x reduced to [0, 1).
double frac(double x);

}  // namespace uamo
