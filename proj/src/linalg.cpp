#include "uamo/linalg.hpp"

#include <cmath>

namespace uamo {

double norm2(const Mat2& m) {
  const double f2 = m.squaredNorm();
  const double d = std::abs(m.determinant());
  const double disc = std::max(0.0, f2 * f2 - 4.0 * d * d);
  return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

double frac(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

LogValue LogValue::from(Complex v) {
  LogValue out;
  const double a = std::abs(v);
  if (a == 0.0) {
    out.zero = true;
    out.log_abs = -INFINITY;
    return out;
  }
  out.log_abs = std::log(a);
  out.phase = v / a;
  return out;
}

Complex LogValue::value() const {
  if (zero) return 0.0;
  return phase * std::exp(log_abs);
}

LogValue& LogValue::operator*=(const LogValue& o) {
  zero = zero || o.zero;
  log_abs += o.log_abs;
  phase *= o.phase;
  return *this;
}

LogValue& LogValue::operator*=(Complex v) { return *this *= LogValue::from(v); }

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

void ScaledMat2::left_multiply(const Mat2& a) {
  m = a * m;
  const double big = m.cwiseAbs().maxCoeff();
  if (big > 1e150 || (big < 1e-150 && big > 0.0)) renormalize();
}

void ScaledMat2::renormalize() {
  const double big = m.cwiseAbs().maxCoeff();
  if (big == 0.0) return;
  const int e = std::ilogb(big);
  m *= std::ldexp(1.0, -e);
  exp2 += e;
}

CMatrix Tridiagonal::dense() const {
  const auto n = size();
  CMatrix a = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = diag(i);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    a(i + 1, i) = sub(i);
    a(i, i + 1) = sup(i);
  }
  return a;
}

CVector Tridiagonal::apply(const CVector& x) const {
  const auto n = size();
  CVector y = diag.cwiseProduct(x);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    y(i + 1) += sub(i) * x(i);
    y(i) += sup(i) * x(i + 1);
  }
  return y;
}

Tridiagonal Tridiagonal::block(Eigen::Index i0, Eigen::Index i1) const {
  const Eigen::Index n = i1 - i0 + 1;
  Tridiagonal t(std::max<Eigen::Index>(n, 0));
  if (n <= 0) return t;
  t.diag = diag.segment(i0, n);
  if (n > 1) {
    t.sub = sub.segment(i0, n - 1);
    t.sup = sup.segment(i0, n - 1);
  }
  return t;
}

LogValue tridiagonal_logdet(const Tridiagonal& t) {
  const auto n = t.size();
  LogValue out;
  if (n == 0) return out;
  Complex prev = 1.0, cur = t.diag(0);
  double log_scale = 0.0;
  for (Eigen::Index k = 1; k < n; ++k) {
    const Complex next = t.diag(k) * cur - t.sub(k - 1) * t.sup(k - 1) * prev;
    prev = cur;
    cur = next;
    const double big = std::max(std::abs(prev), std::abs(cur));
    if (big > 1e100 || (big < 1e-100 && big > 0.0)) {
      const int e = std::ilogb(big);
      prev = std::ldexp(1.0, -e) * prev;
      cur = std::ldexp(1.0, -e) * cur;
      log_scale += e * std::log(2.0);
    }
  }
  out = LogValue::from(cur);
  if (!out.zero) out.log_abs += log_scale;
  return out;
}

CVector tridiagonal_solve(const Tridiagonal& t, const CVector& rhs) {
  const auto n = t.size();
  if (rhs.size() != n) throw InvalidParameter("tridiagonal_solve: size mismatch");
  if (n == 0) return CVector();
  CVector d = t.diag, u = t.sup, l = t.sub, b = rhs;
  CVector w = CVector::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (std::abs(d(i)) >= std::abs(l(i))) {
      if (d(i) == 0.0) throw SingularWindow("tridiagonal_solve: singular matrix");
      const Complex m = l(i) / d(i);
      d(i + 1) -= m * u(i);
      b(i + 1) -= m * b(i);
    } else {
      const Complex m = d(i) / l(i);
      d(i) = l(i);
      const Complex tmp = d(i + 1);
      d(i + 1) = u(i) - m * tmp;
      u(i) = tmp;
      if (i + 2 < n) {
        w(i) = u(i + 1);
        u(i + 1) = -m * w(i);
      }
      std::swap(b(i), b(i + 1));
      b(i + 1) -= m * b(i);
    }
  }
  if (d(n - 1) == 0.0) throw SingularWindow("tridiagonal_solve: singular matrix");
  CVector x(n);
  x(n - 1) = b(n - 1) / d(n - 1);
  if (n > 1) x(n - 2) = (b(n - 2) - u(n - 2) * x(n - 1)) / d(n - 2);
  for (Eigen::Index i = n - 3; i >= 0; --i) x(i) = (b(i) - u(i) * x(i + 1) - w(i) * x(i + 2)) / d(i);
  return x;
}

BandMatrix::BandMatrix(Eigen::Index n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), data_(static_cast<size_t>(n * (kl + ku + 1)), Complex(0.0)) {}

Complex BandMatrix::operator()(Eigen::Index i, Eigen::Index j) const {
  if (!in_band(i, j)) return 0.0;
  return data_[static_cast<size_t>(i * (kl_ + ku_ + 1) + (j - i + kl_))];
}

Complex& BandMatrix::ref(Eigen::Index i, Eigen::Index j) {
  if (!in_band(i, j)) throw InvalidParameter("BandMatrix: entry outside band");
  return data_[static_cast<size_t>(i * (kl_ + ku_ + 1) + (j - i + kl_))];
}

CVector BandMatrix::apply(const CVector& x) const {
  CVector y = CVector::Zero(n_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    const Eigen::Index j0 = std::max<Eigen::Index>(0, i - kl_);
    const Eigen::Index j1 = std::min<Eigen::Index>(n_ - 1, i + ku_);
    Complex s = 0.0;
    for (Eigen::Index j = j0; j <= j1; ++j) s += (*this)(i, j) * x(j);
    y(i) = s;
  }
  return y;
}

CMatrix BandMatrix::dense() const {
  CMatrix a = CMatrix::Zero(n_, n_);
  for (Eigen::Index i = 0; i < n_; ++i)
    for (Eigen::Index j = std::max<Eigen::Index>(0, i - kl_); j <= std::min<Eigen::Index>(n_ - 1, i + ku_); ++j)
      a(i, j) = (*this)(i, j);
  return a;
}

LogValue dense_logdet(const CMatrix& a) {
  LogValue out;
  if (a.rows() == 0) return out;
  Eigen::PartialPivLU<CMatrix> lu(a);
  const CMatrix& f = lu.matrixLU();
  for (Eigen::Index i = 0; i < f.rows(); ++i) out *= f(i, i);
  if (lu.permutationP().determinant() < 0) out.phase = -out.phase;
  return out;
}

}  // namespace uamo
