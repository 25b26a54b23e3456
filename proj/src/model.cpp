#include "uamo/model.hpp"

#include <cmath>
#include <string>

namespace uamo {

namespace {

long floor_div2(long n) { return n >= 0 ? n / 2 : -((1 - n) / 2); }

bool is_even(long n) { return (n % 2) == 0; }

void check_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidParameter(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

ModelParams ModelParams::make(double l1, double l2, double omega, double theta) {
  check_unit(l1, "lambda1");
  check_unit(l2, "lambda2");
  if (!std::isfinite(omega) || !std::isfinite(theta)) throw InvalidParameter("omega and theta must be finite");
  ModelParams p;
  p.lambda1 = l1;
  p.lambda2 = l2;
  p.lambda1p = std::sqrt((1.0 - l1) * (1.0 + l1));
  p.lambda2p = std::sqrt((1.0 - l2) * (1.0 + l2));
  p.omega = frac(omega);
  p.theta = frac(theta);
  return p;
}

ModelParams ModelParams::with_theta(double t) const {
  ModelParams p = *this;
  p.theta = frac(t);
  return p;
}

ModelParams ModelParams::shifted(long k) const { return with_theta(orbit_phase(theta, k, omega)); }

double orbit_phase(double theta, long k, double omega) {
  const double kd = static_cast<double>(k);
  const double prod = kd * omega;
  const double err = std::fma(kd, omega, -prod);  // exact remainder of the product
  return frac(frac(prod) + err + theta);
}

VerblunskyPair verblunsky_pair(const ModelParams& p, long n) {
  VerblunskyPair v;
  v.index = n;
  if (is_even(n)) {
    v.alpha = p.lambda1p;
    v.rho = p.lambda1;
  } else {
    const double x = kTwoPi * orbit_phase(p.theta, floor_div2(n), p.omega);
    v.alpha = p.lambda2 * std::sin(x);
    v.rho = Complex(p.lambda2 * std::cos(x), p.lambda2p);
  }
  return v;
}

Mat2 theta_block(const VerblunskyPair& v) {
  Mat2 t;
  t << std::conj(v.alpha), v.rho, std::conj(v.rho), -v.alpha;
  return t;
}

Mat2 theta_block_inverse(const VerblunskyPair& v) {
  Mat2 t;
  t << v.alpha, v.rho, std::conj(v.rho), -std::conj(v.alpha);
  return t;
}

CMVWindow::CMVWindow(const ModelParams& p, long a, long b, Boundary bc) {
  if (b <= a) throw InvalidWindow("window requires a < b");
  const Complex beta = bc.beta.value_or(verblunsky_pair(p, a - 1).alpha);
  const Complex gamma = bc.gamma.value_or(verblunsky_pair(p, b).alpha);
  if (std::abs(beta) > 1.0 + 1e-14 || std::abs(gamma) > 1.0 + 1e-14)
    throw InvalidWindow("boundary values must satisfy |beta|, |gamma| <= 1");
  build(p, a, b, beta, gamma);
}

CMVWindow CMVWindow::unchecked(const ModelParams& p, long a, long b, Complex beta, Complex gamma) {
  if (b < a) throw InvalidWindow("window requires a <= b");
  CMVWindow w;
  w.build(p, a, b, beta, gamma);
  return w;
}

void CMVWindow::build(const ModelParams& p, long a, long b, Complex beta, Complex gamma) {
  params_ = p;
  a_ = a;
  b_ = b;
  coeff_.clear();
  coeff_.reserve(static_cast<size_t>(b - a + 2));
  for (long n = a - 1; n <= b; ++n) coeff_.push_back(verblunsky_pair(p, n));
  coeff_.front().alpha = beta;
  coeff_.back().alpha = gamma;
}

bool CMVWindow::unitary(double tol) const {
  return std::abs(std::abs(beta()) - 1.0) <= tol && std::abs(std::abs(gamma()) - 1.0) <= tol;
}

// fn(j, local index of j, has j, has j+1) for every block of the factor touching [a, b].
template <class Fn>
void CMVWindow::for_blocks(Factor f, Fn&& fn) const {
  const long parity = f == Factor::L ? 0 : 1;
  long j = a_ - 1;
  if (((j % 2) + 2) % 2 != parity) ++j;
  for (; j <= b_; j += 2) fn(j, static_cast<Eigen::Index>(j - a_), j >= a_, j + 1 <= b_);
}

BandMatrix CMVWindow::factor(Factor f) const {
  BandMatrix m(size(), 1, 1);
  for_blocks(f, [&](long j, Eigen::Index i, bool first, bool second) {
    const Mat2 t = theta_block(pair(j));
    if (first && second) {
      m.ref(i, i) = t(0, 0);
      m.ref(i, i + 1) = t(0, 1);
      m.ref(i + 1, i) = t(1, 0);
      m.ref(i + 1, i + 1) = t(1, 1);
    } else if (second) {
      m.ref(i + 1, i + 1) = t(1, 1);
    } else if (first) {
      m.ref(i, i) = t(0, 0);
    }
  });
  return m;
}

BandMatrix CMVWindow::W() const {
  const BandMatrix l = factor(Factor::L), m = factor(Factor::M);
  const Eigen::Index n = size();
  BandMatrix w(n, 2, 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = std::max<Eigen::Index>(0, i - 2); k <= std::min<Eigen::Index>(n - 1, i + 2); ++k) {
      Complex s = 0.0;
      for (Eigen::Index j = std::max<Eigen::Index>(0, i - 1); j <= std::min<Eigen::Index>(n - 1, i + 1); ++j)
        s += l(i, j) * m(j, k);
      w.ref(i, k) = s;
    }
  return w;
}

CVector CMVWindow::apply(Factor f, const CVector& v) const {
  if (v.size() != size()) throw InvalidParameter("state dimension does not match window");
  CVector out(size());
  for_blocks(f, [&](long j, Eigen::Index i, bool first, bool second) {
    const Mat2 t = theta_block(pair(j));
    if (first && second) {
      out(i) = t(0, 0) * v(i) + t(0, 1) * v(i + 1);
      out(i + 1) = t(1, 0) * v(i) + t(1, 1) * v(i + 1);
    } else if (second) {
      out(i + 1) = t(1, 1) * v(i + 1);
    } else if (first) {
      out(i) = t(0, 0) * v(i);
    }
  });
  return out;
}

CVector CMVWindow::apply_inverse(Factor f, const CVector& v) const {
  if (v.size() != size()) throw InvalidParameter("state dimension does not match window");
  CVector out(size());
  for_blocks(f, [&](long j, Eigen::Index i, bool first, bool second) {
    const VerblunskyPair& c = pair(j);
    if (first && second) {
      const Mat2 t = theta_block_inverse(c);
      out(i) = t(0, 0) * v(i) + t(0, 1) * v(i + 1);
      out(i + 1) = t(1, 0) * v(i) + t(1, 1) * v(i + 1);
      return;
    }
    const Complex e = second ? -c.alpha : std::conj(c.alpha);
    if (e == 0.0) throw SingularWindow("truncated factor has a zero boundary entry");
    const Eigen::Index k = second ? i + 1 : i;
    out(k) = v(k) / e;
  });
  return out;
}

CVector CMVWindow::apply_W(const CVector& v) const { return apply(Factor::L, apply(Factor::M, v)); }

namespace {

void add_inverse_blocks(const CMVWindow& w, Factor f, Complex z, Tridiagonal& t) {
  const long parity = f == Factor::L ? 0 : 1;
  long j = w.a() - 1;
  if (((j % 2) + 2) % 2 != parity) ++j;
  for (; j <= w.b(); j += 2) {
    const Eigen::Index i = j - w.a();
    const bool first = j >= w.a(), second = j + 1 <= w.b();
    const VerblunskyPair& c = w.pair(j);
    if (first && second) {
      const Mat2 inv = theta_block_inverse(c);
      t.diag(i) += z * inv(0, 0);
      t.sup(i) += z * inv(0, 1);
      t.sub(i) += z * inv(1, 0);
      t.diag(i + 1) += z * inv(1, 1);
    } else {
      const Complex e = second ? -c.alpha : std::conj(c.alpha);
      if (e == 0.0) throw SingularWindow("truncated factor has a zero boundary entry");
      t.diag(second ? i + 1 : i) += z / e;
    }
  }
}

void subtract_factor(const BandMatrix& m, Tridiagonal& t) {
  const auto n = t.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    t.diag(i) -= m(i, i);
    if (i + 1 < n) {
      t.sup(i) -= m(i, i + 1);
      t.sub(i) -= m(i + 1, i);
    }
  }
}

}  // namespace

Tridiagonal CMVWindow::A(Complex z) const {
  Tridiagonal t(size());
  t.diag.setZero();
  t.sub.setZero();
  t.sup.setZero();
  add_inverse_blocks(*this, Factor::L, z, t);
  subtract_factor(factor(Factor::M), t);
  return t;
}

Tridiagonal CMVWindow::A_tilde(Complex z) const {
  Tridiagonal t(size());
  t.diag.setZero();
  t.sub.setZero();
  t.sup.setZero();
  add_inverse_blocks(*this, Factor::M, z, t);
  subtract_factor(factor(Factor::L), t);
  return t;
}

bool CMVWindow::invertible(Factor f) const {
  bool ok = true;
  for_blocks(f, [&](long j, Eigen::Index, bool first, bool second) {
    if (first && second) return;
    const Complex e = second ? -pair(j).alpha : std::conj(pair(j).alpha);
    if (e == 0.0) ok = false;
  });
  return ok;
}

LogValue CMVWindow::det(Factor f) const {
  LogValue d;
  for_blocks(f, [&](long j, Eigen::Index, bool first, bool second) {
    const VerblunskyPair& c = pair(j);
    if (first && second)
      d *= theta_block(c).determinant();
    else
      d *= second ? -c.alpha : std::conj(c.alpha);
  });
  return d;
}

CMatrix walk_dense(const ModelParams& p, long c0, long c1) {
  const Eigen::Index n = 2 * (c1 - c0 + 1);
  auto idx = [&](long c, int s) { return static_cast<Eigen::Index>(2 * (c - c0) + s); };
  CMatrix q = CMatrix::Zero(n, n), s = CMatrix::Zero(n, n);
  for (long c = c0; c <= c1; ++c) {
    const double x = kTwoPi * orbit_phase(p.theta, c, p.omega);
    const double cs = p.lambda2 * std::cos(x), sn = p.lambda2 * std::sin(x);
    q(idx(c, 0), idx(c, 0)) = Complex(cs, p.lambda2p);
    q(idx(c, 0), idx(c, 1)) = -sn;
    q(idx(c, 1), idx(c, 0)) = sn;
    q(idx(c, 1), idx(c, 1)) = Complex(cs, -p.lambda2p);
    // S delta_c^+ = l1 delta_{c+1}^+ + l1' delta_c^-, S delta_c^- = l1 delta_{c-1}^- - l1' delta_c^+
    if (c + 1 <= c1) s(idx(c + 1, 0), idx(c, 0)) = p.lambda1;
    s(idx(c, 1), idx(c, 0)) = p.lambda1p;
    if (c - 1 >= c0) s(idx(c - 1, 1), idx(c, 1)) = p.lambda1;
    s(idx(c, 0), idx(c, 1)) = -p.lambda1p;
  }
  return s * q;
}

WalkEquivalence walk_vs_cmv_equivalence(const ModelParams& p, long n_max) {
  if (n_max < 2) throw InvalidParameter("n_max must be at least 2");
  WalkEquivalence out;
  out.cells = 2 * n_max;
  const long pad = 2;
  const long c0 = -n_max - pad, c1 = n_max - 1 + pad;
  const CMatrix walk = walk_dense(p, c0, c1);
  // CMV indices [2 c0 - 1, 2 c1 + 2] cover both maps.
  const long a = 2 * c0 - 1, b = 2 * c1 + 2;
  const CMatrix cmv = CMVWindow(p, a, b).dense_W();
  auto walk_idx = [&](long c, int s) { return static_cast<Eigen::Index>(2 * (c - c0) + s); };
  auto lit = [&](long c, int s) { return static_cast<Eigen::Index>(2 * c + s - a); };
  auto shifted = [&](long c, int s) { return static_cast<Eigen::Index>(2 * c + 1 + s - a); };
  for (long c = -n_max; c < n_max; ++c)
    for (int s = 0; s < 2; ++s)
      for (long d = -n_max; d < n_max; ++d)
        for (int t = 0; t < 2; ++t) {
          const Complex w = walk(walk_idx(c, s), walk_idx(d, t));
          out.literal_residual = std::max(out.literal_residual, std::abs(w - cmv(lit(c, s), lit(d, t))));
          out.residual = std::max(out.residual, std::abs(w - std::conj(cmv(shifted(c, s), shifted(d, t)))));
        }
  return out;
}

}  // namespace uamo
