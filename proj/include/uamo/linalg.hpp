#pragma once

#include <vector>

#include "uamo/core.hpp"

namespace uamo {

// Complex number carried as log-modulus and unit phase so that large windows do not overflow.
struct LogValue {
  double log_abs = 0.0;
  Complex phase{1.0, 0.0};
  bool zero = false;

  static LogValue from(Complex v);
  Complex value() const;  // may under/overflow; check log_abs first
  bool underflows() const { return zero || log_abs < std::log(1e-300); }
  LogValue& operator*=(const LogValue& o);
  LogValue& operator*=(Complex v);
};

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// 2x2 product with an explicit exponent, renormalised as it grows.
struct ScaledMat2 {
  Mat2 m = Mat2::Identity();
  long exp2 = 0;  // value = m * 2^exp2

  void left_multiply(const Mat2& a);
  void renormalize();
  double log_scale() const { return static_cast<double>(exp2) * 0.69314718055994530942; }
  double log_norm() const { return std::log(norm2(m)) + log_scale(); }
  Mat2 value() const { return m * std::ldexp(1.0, static_cast<int>(exp2)); }
};

struct Tridiagonal {
  CVector sub;   // A(i+1, i)
  CVector diag;  // A(i, i)
  CVector sup;   // A(i, i+1)

  explicit Tridiagonal(Eigen::Index n = 0) : sub(n > 0 ? n - 1 : 0), diag(n), sup(n > 0 ? n - 1 : 0) {}
  Eigen::Index size() const { return diag.size(); }
  CMatrix dense() const;
  CVector apply(const CVector& x) const;
  // Principal submatrix on rows/cols [i0, i1].
  Tridiagonal block(Eigen::Index i0, Eigen::Index i1) const;
};

// Continuant recurrence. Exact zeros are reported through LogValue::zero.
LogValue tridiagonal_logdet(const Tridiagonal& t);

// Gaussian elimination with partial pivoting, LAPACK gtsv style.
CVector tridiagonal_solve(const Tridiagonal& t, const CVector& rhs);

// General square band matrix with kl sub- and ku super-diagonals.
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(Eigen::Index n, int kl, int ku);

  Eigen::Index size() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }
  bool in_band(Eigen::Index i, Eigen::Index j) const { return j - i <= ku_ && i - j <= kl_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const;
  Complex& ref(Eigen::Index i, Eigen::Index j);
  CVector apply(const CVector& x) const;
  CMatrix dense() const;

 private:
  Eigen::Index n_ = 0;
  int kl_ = 0, ku_ = 0;
  std::vector<Complex> data_;  // row-major, width kl+ku+1
};

// log|det| and phase of a dense matrix through partial pivot LU.
LogValue dense_logdet(const CMatrix& a);

}  // namespace uamo
