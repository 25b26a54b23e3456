#include "uamo/green.hpp"

#include <cmath>

namespace uamo {

namespace {

bool odd(long n) { return n % 2 != 0; }

double log_abs_or_throw(const LogValue& v, const char* what) {
  if (v.zero) throw SingularWindow(what);
  return v.log_abs;
}

double log_det_P(const ModelParams& p, long a, long b, Complex beta, Complex gamma, Complex z) {
  if (b < a) return 0.0;
  const CMVWindow w = CMVWindow::unchecked(p, a, b, beta, gamma);
  return log_abs_or_throw(window_determinant(w, z, DetRoute::CMVDirect), "sub-window determinant vanishes");
}

double log_det_factor(const ModelParams& p, long a, long b, Complex beta, Complex gamma, Factor f) {
  if (b < a) return 0.0;
  const CMVWindow w = CMVWindow::unchecked(p, a, b, beta, gamma);
  return log_abs_or_throw(w.det(f), "factor determinant vanishes");
}

CVector unit(Eigen::Index n, Eigen::Index k) {
  CVector e = CVector::Zero(n);
  e(k) = 1.0;
  return e;
}

}  // namespace

double tridiagonal_inverse_log_abs(const Tridiagonal& t, Eigen::Index i, Eigen::Index j) {
  const Eigen::Index n = t.size();
  if (i < 0 || j < 0 || i >= n || j >= n) throw InvalidParameter("index outside matrix");
  const double full = log_abs_or_throw(tridiagonal_logdet(t), "matrix is singular");
  const Eigen::Index lo = std::min(i, j), hi = std::max(i, j);
  double s = 0.0;
  for (Eigen::Index k = lo; k < hi; ++k) s += std::log(std::abs(i > j ? t.sub(k) : t.sup(k)));
  if (lo > 0) s += tridiagonal_logdet(t.block(0, lo - 1)).log_abs;
  if (hi < n - 1) s += tridiagonal_logdet(t.block(hi + 1, n - 1)).log_abs;
  return s - full;
}

GreenEntry green_entry(const ModelParams& p, long a, long b, Complex z, long y, Edge edge) {
  if (b < a) throw InvalidWindow("green_entry requires a <= b");
  if (y < a || y > b) throw InvalidParameter("y must lie in [a, b]");
  GreenEntry g;
  g.a = a;
  g.b = b;
  g.y = y;
  g.z = z;
  g.edge = edge;
  g.variant = odd(y) ? GreenVariant::G : GreenVariant::GTilde;
  const Factor f = odd(y) ? Factor::L : Factor::M;

  const Complex beta = verblunsky_pair(p, a - 1).alpha, gamma = verblunsky_pair(p, b).alpha;
  const CMVWindow w = CMVWindow::unchecked(p, a, b, beta, gamma);
  const Tridiagonal t = f == Factor::L ? w.A(z) : w.A_tilde(z);
  const double log_P = log_det_P(p, a, b, beta, gamma, z);
  const double log_F = log_det_factor(p, a, b, beta, gamma, f);

  const Eigen::Index iy = y - a, ie = edge == Edge::Left ? 0 : w.size() - 1;
  g.direct = tridiagonal_solve(t, unit(w.size(), ie))(iy);

  double log_band = 0.0, log_rho = 0.0;
  if (edge == Edge::Left) {
    for (long j = a; j < y; ++j) {
      log_band += std::log(std::abs(t.sub(j - a)));
      log_rho += std::log(std::abs(verblunsky_pair(p, j).rho));
    }
    const Complex beta_sub = verblunsky_pair(p, y).alpha;
    const double sub = log_det_P(p, y + 1, b, beta_sub, gamma, z) - log_det_factor(p, y + 1, b, beta_sub, gamma, f);
    g.cramer_abs = std::exp(log_band + sub - log_P + log_F);
    g.literal_abs = std::exp(log_rho + sub - log_P + log_F);
  } else {
    for (long j = y; j < b; ++j) {
      log_band += std::log(std::abs(t.sup(j - a)));
      log_rho += std::log(std::abs(verblunsky_pair(p, j).rho));
    }
    double sub = 0.0, sub_literal = 0.0;
    if (y > a) {
      const Complex native = verblunsky_pair(p, y - 1).alpha;
      sub_literal = log_det_P(p, a, y - 1, beta, native, z) - log_det_factor(p, a, y - 1, beta, native, f);
      if (std::abs(native) == 0.0)
        throw IdentityInapplicable("alpha_{y-1} vanishes; the modified right boundary is undefined");
      const Complex modified = 1.0 / std::conj(native);
      sub = log_det_P(p, a, y - 1, beta, modified, z) - log_det_factor(p, a, y - 1, beta, modified, f);
    }
    g.cramer_abs = std::exp(log_band + sub - log_P + log_F);
    g.literal_abs = std::exp(log_rho + sub_literal - log_P + log_F);
  }
  return g;
}

Complex poisson_reconstruct(const ModelParams& p, long a, long b, Complex z, const PsiBoundary& psi, long y) {
  if (b < a) throw InvalidWindow("poisson_reconstruct requires a <= b");
  if (y < a || y > b) throw InvalidParameter("y must lie in [a, b]");
  const CMVWindow w = CMVWindow::unchecked(p, a, b, verblunsky_pair(p, a - 1).alpha, verblunsky_pair(p, b).alpha);
  const Tridiagonal t = w.A(z);
  const Eigen::Index n = w.size();
  const Complex g_left = tridiagonal_solve(t, unit(n, 0))(y - a);
  const Complex g_right = tridiagonal_solve(t, unit(n, n - 1))(y - a);

  const VerblunskyPair l = verblunsky_pair(p, a - 1), r = verblunsky_pair(p, b);
  Complex bl, br;
  if (odd(a)) {
    if (l.alpha == 0.0) throw IdentityInapplicable("alpha_{a-1} vanishes");
    bl = z * (1.0 / l.alpha - std::conj(l.alpha)) * psi.left + z * std::conj(l.rho) * psi.outer_left;
  } else {
    bl = -std::conj(l.rho) * psi.outer_left;
  }
  if (odd(b)) {
    br = -r.rho * psi.outer_right;
  } else {
    if (r.alpha == 0.0) throw IdentityInapplicable("alpha_b vanishes");
    br = -z * (1.0 / std::conj(r.alpha) - r.alpha) * psi.right + z * r.rho * psi.outer_right;
  }
  return -g_left * bl - g_right * br;
}

double poisson_bound_ratio(const ModelParams& p, long a, long b, Complex z, const PsiBoundary& psi, long y,
                           Complex psi_y) {
  const Complex beta = verblunsky_pair(p, a - 1).alpha, gamma = verblunsky_pair(p, b).alpha;
  const double log_P = log_det_P(p, a, b, beta, gamma, z);
  double left = 0.0, right = 0.0;
  for (long j = a; j < y; ++j) left += std::log(std::abs(verblunsky_pair(p, j).rho));
  for (long j = y; j < b; ++j) right += std::log(std::abs(verblunsky_pair(p, j).rho));
  left += log_det_P(p, y + 1, b, verblunsky_pair(p, y).alpha, gamma, z) - log_P;
  right += log_det_P(p, a, y - 1, beta, verblunsky_pair(p, y - 1).alpha, z) - log_P;
  const double bound = std::exp(left) * std::max(std::abs(psi.outer_left), std::abs(psi.left)) +
                       std::exp(right) * std::max(std::abs(psi.right), std::abs(psi.outer_right));
  return std::abs(psi_y) / bound;
}

}  // namespace uamo
