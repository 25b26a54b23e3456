#include <algorithm>
#include <cmath>

#include "uamo/determinants.hpp"
#include "uamo/green.hpp"
#include "uamo/spectral.hpp"

namespace uamo {

namespace {

long floor_even(long c) { return c >= 0 ? c - c % 2 : c - ((c % 2) + 2) % 2; }

bool is_odd(long x) { return x % 2 != 0; }

// Scale index n for y, or -1.
int select_n(long y, const ContinuedFraction& cf, double eps) {
  for (int k = 1; k + 1 < static_cast<int>(cf.q.size()); ++k) {
    const double qn = static_cast<double>(cf.q[static_cast<size_t>(k)]);
    const double qn1 = static_cast<double>(cf.q[static_cast<size_t>(k + 1)]);
    if (eps * qn < static_cast<double>(y) && static_cast<double>(y) < qn1 / 20.0) return k;
  }
  return -1;
}

int select_m(long y, const ContinuedFraction& cf) {
  int m = -1;
  for (int k = 0; k + 1 < static_cast<int>(cf.q.size()); ++k)
    if (6 * cf.q[static_cast<size_t>(k)] <= y) m = k;
  return m;
}

bool scheme_exists(long y, const ContinuedFraction& cf, double eps) {
  return y >= 1 && select_n(y, cf, eps) >= 0 && select_m(y, cf) >= 0;
}

}  // namespace

std::vector<long> OddInterval::odd() const {
  std::vector<long> out;
  for (long x = lo; x <= hi; ++x)
    if (is_odd(x)) out.push_back(x);
  return out;
}

long OddInterval::odd_count() const { return static_cast<long>(odd().size()); }

LocalizationScheme localization_scheme(long y, const ContinuedFraction& cf, double eps) {
  if (!(eps > 0.0)) throw InvalidParameter("epsilon must be positive");
  if (!scheme_exists(y, cf, eps)) {
    long nearest = -1;
    for (long d = 1; d <= 1000000 && nearest < 0; ++d) {
      if (y - d >= 1 && scheme_exists(y - d, cf, eps)) nearest = y - d;
      else if (scheme_exists(y + d, cf, eps)) nearest = y + d;
    }
    throw SchemeUnavailable("no continued fraction scale brackets y = " + std::to_string(y) +
                                (nearest >= 0 ? "; nearest valid y = " + std::to_string(nearest) : ""),
                            nearest);
  }
  LocalizationScheme s;
  s.y = y;
  s.epsilon = eps;
  s.n = select_n(y, cf, eps);
  s.m = select_m(y, cf);
  s.q_n = cf.q[static_cast<size_t>(s.n)];
  s.q_n1 = cf.q[static_cast<size_t>(s.n + 1)];
  s.q_m = cf.q[static_cast<size_t>(s.m)];
  s.q_m1 = cf.q[static_cast<size_t>(s.m + 1)];
  s.s = y / (6 * s.q_m);
  s.h = 2 * s.s * s.q_m - 2;
  const long sq = s.s * s.q_m, quarter = sq / 4;
  s.I1 = {y - sq - quarter + 1, y - quarter};
  s.I2 = {-2 * sq + quarter + 1, -sq + quarter};
  return s;
}

LocalizationScheme localization_scheme(long y, double omega, double eps) {
  return localization_scheme(y, continued_fraction(omega, 60), eps);
}

namespace {

struct Candidate {
  long x1 = 0, x2 = 0;
  double m0 = -INFINITY, m1 = -INFINITY, m2 = -INFINITY;
  double score() const { return std::min(m0, std::min(m1, m2)); }
};

struct Evaluator {
  const ModelParams& p;
  const EigenPair& e;
  LyapunovConstants lc;
  double eps;
  std::vector<double> rho_prefix;  // prefix sums of ln|rho_j| over the window

  Evaluator(const ModelParams& p_, const EigenPair& e_, double eps_) : p(p_), e(e_), lc(lyapunov_constants(p_)), eps(eps_) {
    rho_prefix.push_back(0.0);
    for (long j = e.a; j <= e.b; ++j) rho_prefix.push_back(rho_prefix.back() + std::log(std::abs(verblunsky_pair(p, j).rho)));
  }

  double sum_rho(long lo, long hi) const {
    if (hi < lo) return 0.0;
    return rho_prefix[static_cast<size_t>(hi - e.a + 1)] - rho_prefix[static_cast<size_t>(lo - e.a)];
  }

  double log_P(long lo, long hi) const {
    if (hi < lo) return 0.0;
    return box_determinant(p, lo, hi, e.z, DetRoute::CMVDirect).value.log_abs;
  }

  Candidate evaluate(long x1, long h, long y) const {
    Candidate c;
    c.x1 = x1;
    c.x2 = x1 + h - 1;
    const double Lp = lc.L_plus, Lm = lc.L_minus, L = lc.L;
    c.m0 = log_P(c.x1, c.x2) - (Lp / 2.0 - 2.0 * eps) * static_cast<double>(h);
    const double dl = static_cast<double>(y - c.x1), dr = static_cast<double>(c.x2 - y);
    (void)L;
    const double rhs1 = dl / 2.0 * (Lp + 2.0 * eps) + dr / 2.0 * (Lm + eps);
    c.m1 = rhs1 - (sum_rho(y + 1, c.x2) + log_P(c.x1, y - 1));
    const double rhs2 = dr / 2.0 * (Lp + 2.0 * eps) + dl / 2.0 * (Lm + eps);
    c.m2 = rhs2 - (sum_rho(c.x1, y - 1) + log_P(y + 1, c.x2));
    return c;
  }

  bool inside(long x1, long x2, long buffer) const { return x1 - 1 >= e.a + buffer && x2 + 1 <= e.b - buffer; }
};

}  // namespace

LocalizationCertificate certificate_replay(const ModelParams& p, const EigenPair& e, long y, double epsilon,
                                           const CertificateOptions& opt) {
  LocalizationCertificate cert;
  cert.scheme = localization_scheme(y, p.omega, epsilon);
  const LocalizationScheme& s = cert.scheme;
  const Evaluator ev(p, e, epsilon);
  cert.L = ev.lc.L;
  cert.L_plus = ev.lc.L_plus;
  cert.L_minus = ev.lc.L_minus;
  cert.center = e.center;
  cert.translation = floor_even(e.center);
  cert.y_abs = cert.translation + y;
  const long N = e.b - e.a + 1;
  const long buffer = static_cast<long>(std::ceil(opt.edge_buffer * static_cast<double>(N)));

  Candidate best, best_P;
  bool any = false;
  for (long x1r : s.I1.odd()) {
    const long x1 = cert.translation + x1r;
    if (!ev.inside(x1, x1 + s.h - 1, buffer)) continue;
    const Candidate c = ev.evaluate(x1, s.h, cert.y_abs);
    if (!any || c.score() > best.score()) best = c;
    if (!any || c.m0 > best_P.m0) best_P = c;
    any = true;
  }
  if (!any) throw InvalidWindow("no admissible x1 in I1 lies inside the window buffer");
  cert.x1 = best.x1;
  cert.x2 = best.x2;
  cert.margin_P = best.m0;
  cert.margin_nu1 = best.m1;
  cert.margin_nu2 = best.m2;
  cert.argmax_P_x1 = best_P.x1;
  cert.argmax_P_margin_min = best_P.score();

  cert.I2_margin_P = -INFINITY;
  for (long x1r : s.I2.odd()) {
    const long x1 = cert.translation + x1r;
    if (!ev.inside(x1, x1 + s.h - 1, buffer)) continue;
    cert.I2_margin_P =
        std::max(cert.I2_margin_P, ev.log_P(x1, x1 + s.h - 1) - (ev.lc.L_plus / 2.0 - 2.0 * epsilon) * static_cast<double>(s.h));
  }

  const double r = ev.lc.L / 2.0 - 25.0 * epsilon;
  const long yy = cert.y_abs;
  const double d1 = static_cast<double>(std::labs(yy - cert.x1)), d2 = static_cast<double>(std::labs(yy - cert.x2));
  const double rhs = std::max(-r * d1 + std::max(e.log_abs_at(cert.x1 - 1), e.log_abs_at(cert.x1)),
                              -r * d2 + std::max(e.log_abs_at(cert.x2), e.log_abs_at(cert.x2 + 1)));
  cert.margin_nu3 = rhs - e.log_abs_at(yy);

  const CMVWindow box = CMVWindow::unchecked(p, cert.x1, cert.x2, verblunsky_pair(p, cert.x1 - 1).alpha,
                                             verblunsky_pair(p, cert.x2).alpha);
  const Tridiagonal t = box.A(e.z);
  const Eigen::Index iy = yy - cert.x1;
  double kappa = 0.0;
  if (d1 > 0) kappa = std::max(kappa, std::exp(tridiagonal_inverse_log_abs(t, iy, 0) / d1));
  if (d2 > 0) kappa = std::max(kappa, std::exp(tridiagonal_inverse_log_abs(t, iy, t.size() - 1) / d2));
  cert.contraction = kappa;
  cert.contraction_reference = std::exp(-r);

  cert.hypothesis = ev.lc.L > 0.0;
  cert.passed = cert.hypothesis && cert.margin_P > 0.0 && cert.margin_nu1 > 0.0 && cert.margin_nu2 > 0.0 &&
                cert.margin_nu3 >= 0.0 && cert.contraction <= cert.contraction_reference && cert.contraction < 1.0;
  return cert;
}

DecayIteration iterate_decay_bound(const ModelParams& p, const EigenPair& e, long y, double epsilon, int cap) {
  if (cap <= 0) cap = static_cast<int>(std::ceil(10.0 / epsilon));
  const ContinuedFraction cf = continued_fraction(p.omega, 60);
  const Evaluator ev(p, e, epsilon);
  const long translation = floor_even(e.center);
  const long N = e.b - e.a + 1;
  const long buffer = static_cast<long>(std::ceil(0.05 * static_cast<double>(N)));
  const double r = ev.lc.L / 2.0 - 25.0 * epsilon;
  const double log_inf = *std::max_element(e.log_abs.begin(), e.log_abs.end());

  DecayIteration it;
  it.y = y;
  it.actual_log = e.log_abs_at(translation + y);
  it.target_log = -(ev.lc.L / 2.0 - 30.0 * epsilon) * static_cast<double>(y) + log_inf;
  const LocalizationScheme s0 = localization_scheme(y, cf, epsilon);
  long cur = y;
  double total = 0.0;
  it.path.push_back(cur);
  while (it.steps < cap) {
    if (cur < 1 || !scheme_exists(cur, cf, epsilon)) break;
    const LocalizationScheme s = localization_scheme(cur, cf, epsilon);
    const long ya = translation + cur;
    Candidate best;
    bool any = false;
    for (long x1r : s.I1.odd()) {
      const long x1 = translation + x1r;
      if (!ev.inside(x1, x1 + s.h - 1, buffer)) continue;
      const Candidate c = ev.evaluate(x1, s.h, ya);
      if (!any || c.score() > best.score()) best = c;
      any = true;
    }
    if (!any) break;
    const long x1r = best.x1 - translation, x2r = best.x2 - translation;
    if (static_cast<double>(x1r) <= epsilon * static_cast<double>(s0.q_n) ||
        static_cast<double>(x2r) >= static_cast<double>(s0.q_n1) / 20.0)
      break;
    const long cand[4] = {best.x1 - 1, best.x1, best.x2, best.x2 + 1};
    double best_term = -INFINITY;
    long next = cur;
    double step = 0.0;
    for (long c : cand) {
      const double d = static_cast<double>(std::labs(ya - c));
      const double term = -r * d + e.log_abs_at(c);
      if (term > best_term) {
        best_term = term;
        next = c - translation;
        step = -r * d;
      }
    }
    if (e.log_abs_at(ya) > best_term) it.chain_valid = false;
    total += step;
    cur = next;
    it.path.push_back(cur);
    ++it.steps;
  }
  it.chain_log_bound = total + log_inf;
  it.holds = it.actual_log <= it.target_log && it.actual_log <= it.chain_log_bound;
  return it;
}

}  // namespace uamo
