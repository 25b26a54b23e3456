#include "uamo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uamo/determinants.hpp"

namespace uamo {

namespace {

double phase_of(Complex z) { return frac(std::arg(z) / kTwoPi); }

// Unit complex whose real part has the sign of the real phase function at phi; 0 at an exact root.
struct PhaseFunction {
  const CMVWindow& w;
  long N;
  Complex norm;

  double operator()(double phi) const {
    const LogValue P = window_determinant(w, on_circle(phi), DetRoute::CMVDirect);
    if (P.zero) return 0.0;
    return (P.phase * std::polar(1.0, -kPi * static_cast<double>(N) * phi) / norm).real();
  }
};

double log_sum_exp2(double la, double lb) {
  // 0.5 ln(e^{2 la} + e^{2 lb})
  const double m = std::max(la, lb);
  if (!std::isfinite(m)) return m;
  return m + 0.5 * std::log(std::exp(2.0 * (la - m)) + std::exp(2.0 * (lb - m)));
}

}  // namespace

Spectrum truncated_spectrum(const ModelParams& p, long N, Boundary bc, SpectrumMethod method) {
  if (N < 2) throw InvalidParameter("N must be >= 2");
  if (N > 4096 && method == SpectrumMethod::Dense) throw InvalidParameter("dense spectrum limited to N <= 4096");
  const CMVWindow w(p, 1, N, bc);
  Spectrum s;
  s.method = method;
  s.nonunitary = !w.unitary(1e-12);
  if (method == SpectrumMethod::RootIsolation && s.nonunitary) s.method = SpectrumMethod::Dense;

  if (s.method == SpectrumMethod::Dense) {
    Eigen::ComplexEigenSolver<CMatrix> es(w.dense_W(), false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s.z.push_back(es.eigenvalues()(i));
  } else {
    LogValue det = w.det(Factor::L);
    det *= w.det(Factor::M);
    const Complex norm = std::pow(kI, static_cast<int>(N % 4)) * std::sqrt(det.phase);
    const PhaseFunction f{w, N, norm};
    std::vector<double> roots;
    for (long M = 8 * N; M <= 128 * N; M *= 2) {
      roots.clear();
      double prev = f(0.0);
      double prev_phi = 0.0;
      for (long k = 1; k <= M; ++k) {
        const double phi = static_cast<double>(k) / static_cast<double>(M);
        const double cur = k == M ? f(0.0) : f(phi);
        if (cur == 0.0) {
          roots.push_back(phi);
        } else if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) {
          double lo = prev_phi, hi = phi, flo = prev;
          while (hi - lo > 1e-13) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if (fm == 0.0) {
              lo = hi = mid;
              break;
            }
            if ((fm < 0.0) == (flo < 0.0)) {
              lo = mid;
              flo = fm;
            } else {
              hi = mid;
            }
          }
          roots.push_back(frac(0.5 * (lo + hi)));
        }
        prev = cur;
        prev_phi = phi;
      }
      if (static_cast<long>(roots.size()) >= N) break;
    }
    s.complete = static_cast<long>(roots.size()) == N;
    for (double r : roots) s.z.push_back(on_circle(r));
  }
  for (const Complex& z : s.z) s.phases.push_back(phase_of(z));
  std::vector<size_t> order(s.z.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return s.phases[i] < s.phases[j]; });
  Spectrum sorted = s;
  for (size_t i = 0; i < order.size(); ++i) {
    sorted.phases[i] = s.phases[order[i]];
    sorted.z[i] = s.z[order[i]];
  }
  return sorted;
}

double EigenPair::log_pair_amplitude(long y) const { return log_sum_exp2(log_abs_at(y), log_abs_at(y + 1)); }

namespace {

// Null vector of the tridiagonal T rebuilt from both edges, matched at index pk.
bool recurrence_profile(const Tridiagonal& t, Eigen::Index pk, std::vector<double>& logs,
                        std::vector<Complex>& phases) {
  const Eigen::Index n = t.size();
  logs.assign(static_cast<size_t>(n), 0.0);
  phases.assign(static_cast<size_t>(n), 1.0);
  auto store = [&](Eigen::Index k, Complex v, double off) {
    const double a = std::abs(v);
    logs[static_cast<size_t>(k)] = a > 0.0 ? std::log(a) + off : -INFINITY;
    phases[static_cast<size_t>(k)] = a > 0.0 ? v / a : Complex(1.0);
  };
  auto rescale = [](Complex& u0, Complex& u1, double& off) {
    const double big = std::max(std::abs(u0), std::abs(u1));
    if (big > 1e100 || (big < 1e-100 && big > 0.0)) {
      const int e = std::ilogb(big);
      u0 = std::ldexp(1.0, -e) * u0;
      u1 = std::ldexp(1.0, -e) * u1;
      off += e * std::log(2.0);
    }
  };
  {
    Complex um = 0.0, u = 1.0;
    double off = 0.0;
    store(0, u, off);
    for (Eigen::Index k = 0; k < pk; ++k) {
      const Complex next = -((k > 0 ? t.sub(k - 1) * um : Complex(0.0)) + t.diag(k) * u) / t.sup(k);
      um = u;
      u = next;
      rescale(um, u, off);
      store(k + 1, u, off);
    }
  }
  const double left_log = logs[static_cast<size_t>(pk)];
  const Complex left_phase = phases[static_cast<size_t>(pk)];
  {
    Complex up = 0.0, u = 1.0;
    double off = 0.0;
    std::vector<double> rl(static_cast<size_t>(n), 0.0);
    std::vector<Complex> rp(static_cast<size_t>(n), 1.0);
    auto rstore = [&](Eigen::Index k) {
      const double a = std::abs(u);
      rl[static_cast<size_t>(k)] = a > 0.0 ? std::log(a) + off : -INFINITY;
      rp[static_cast<size_t>(k)] = a > 0.0 ? u / a : Complex(1.0);
    };
    rstore(n - 1);
    for (Eigen::Index k = n - 1; k > pk; --k) {
      const Complex next = -(t.diag(k) * u + (k + 1 < n ? t.sup(k) * up : Complex(0.0))) / t.sub(k - 1);
      up = u;
      u = next;
      rescale(up, u, off);
      rstore(k - 1);
    }
    if (!std::isfinite(rl[static_cast<size_t>(pk)]) || !std::isfinite(left_log)) return false;
    const double shift = left_log - rl[static_cast<size_t>(pk)];
    const Complex rot = left_phase / rp[static_cast<size_t>(pk)];
    for (Eigen::Index k = pk + 1; k < n; ++k) {
      logs[static_cast<size_t>(k)] = rl[static_cast<size_t>(k)] + shift;
      phases[static_cast<size_t>(k)] = rp[static_cast<size_t>(k)] * rot;
    }
  }
  return true;
}

}  // namespace

EigenPair eigenpair_extract(const ModelParams& p, long N, double target_phase, const EigenOptions& opt) {
  if (N < 2) throw InvalidParameter("N must be >= 2");
  const CMVWindow w(p, opt.a, opt.a + N - 1, opt.bc);
  const bool unitary = w.unitary(1e-12);
  const Complex z0 = on_circle(target_phase);

  CVector x(N);
  for (long k = 0; k < N; ++k) x(k) = 1.0 + 0.25 * std::sin(0.7 * static_cast<double>(k));
  x.normalize();
  Complex mu = z0;
  double res = INFINITY;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const Complex shift = it < opt.fixed_shift_iterations ? z0 : mu;
    CVector y;
    try {
      y = tridiagonal_solve(w.A(shift), w.apply_inverse(Factor::L, x));
    } catch (const SingularWindow&) {
      mu = shift;
      break;
    }
    const double nrm = y.norm();
    if (!std::isfinite(nrm) || nrm == 0.0) break;
    x = y / nrm;
    const CVector wx = w.apply_W(x);
    mu = x.dot(wx);
    if (unitary) mu /= std::abs(mu);
    res = (wx - mu * x).norm();
    if (it >= opt.fixed_shift_iterations && res <= opt.tolerance) break;
  }
  {
    const CVector wx = w.apply_W(x);
    res = (wx - mu * x).norm();
  }
  if (!(res <= 1e-9)) throw NoEigenpair("inverse iteration did not converge (residual " + std::to_string(res) + ")");

  EigenPair e;
  e.params = p;
  e.bc = opt.bc;
  e.a = w.a();
  e.b = w.b();
  e.z = mu;
  e.phase = phase_of(mu);
  e.iterations = it + 1;

  Eigen::Index pk = 0;
  x.cwiseAbs().maxCoeff(&pk);
  std::vector<double> logs;
  std::vector<Complex> phases;
  bool refined = false;
  if (opt.refine_tails && recurrence_profile(w.A(mu), pk, logs, phases)) {
    // Accept the rebuilt profile only where it agrees with the iterate in the bulk.
    const double lmax = *std::max_element(logs.begin(), logs.end());
    const double xmax = x.cwiseAbs().maxCoeff();
    const Complex align = x(pk) / std::abs(x(pk)) / phases[static_cast<size_t>(pk)];
    double diff = 0.0;
    for (Eigen::Index k = 0; k < N; ++k) {
      if (std::abs(x(k)) < 1e-6 * xmax) continue;
      const Complex r = std::exp(logs[static_cast<size_t>(k)] - lmax) * phases[static_cast<size_t>(k)] * align * xmax;
      diff = std::max(diff, std::abs(r - x(k)) / xmax);
    }
    refined = diff < 1e-6;
  }
  if (!refined) {
    logs.resize(static_cast<size_t>(N));
    phases.resize(static_cast<size_t>(N));
    for (Eigen::Index k = 0; k < N; ++k) {
      const double a = std::abs(x(k));
      logs[static_cast<size_t>(k)] = a > 0.0 ? std::log(a) : -INFINITY;
      phases[static_cast<size_t>(k)] = a > 0.0 ? x(k) / a : Complex(1.0);
    }
  }
  const double lmax = *std::max_element(logs.begin(), logs.end());
  double ss = 0.0;
  for (double l : logs) ss += std::exp(2.0 * (l - lmax));
  const double lnorm = lmax + 0.5 * std::log(ss);
  e.log_abs.resize(static_cast<size_t>(N));
  e.psi.resize(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    e.log_abs[static_cast<size_t>(k)] = logs[static_cast<size_t>(k)] - lnorm;
    e.psi(k) = std::exp(e.log_abs[static_cast<size_t>(k)]) * phases[static_cast<size_t>(k)];
  }
  e.residual = (w.apply_W(e.psi) - e.z * e.psi).norm() / e.psi.norm();
  Eigen::Index c = 0;
  e.psi.cwiseAbs().maxCoeff(&c);
  e.center = e.a + c;
  return e;
}

double central_eigenphase(const ModelParams& p, long center, long half) {
  const CMVWindow w(p, center - half, center + half - 1, Boundary::fixed(1.0, 1.0));
  Eigen::ComplexEigenSolver<CMatrix> es(w.dense_W(), true);
  long best_dist = -1;
  double best_phase = 0.0;
  double best_peak = 0.0;
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    Eigen::Index k = 0;
    const double peak = es.eigenvectors().col(j).cwiseAbs().maxCoeff(&k);
    const long dist = std::labs(w.a() + static_cast<long>(k) - center);
    if (best_dist < 0 || dist < best_dist || (dist == best_dist && peak > best_peak)) {
      best_dist = dist;
      best_phase = phase_of(es.eigenvalues()(j));
      best_peak = peak;
    }
  }
  return best_phase;
}

GZSolutionPair gz_pair(const EigenPair& e) {
  const CMVWindow w(e.params, e.a, e.b, e.bc);
  GZSolutionPair g;
  g.a = e.a;
  g.u = e.psi;
  g.v = w.apply_inverse(Factor::L, e.psi);
  return g;
}

double gz_residual(const EigenPair& e, const GZSolutionPair& g) {
  const double scale = g.u.cwiseAbs().maxCoeff();
  double worst = 0.0;
  const Eigen::Index n = g.u.size();
  for (Eigen::Index k = 2; k + 3 < n; ++k) {
    const long site = g.a + static_cast<long>(k);
    const Mat2 M = cocycle_step(e.params, CocycleKind::GZ, site, e.z).m;
    const Vec2 cur(g.u(k), g.v(k)), next(g.u(k + 1), g.v(k + 1));
    worst = std::max(worst, (next - M * cur).cwiseAbs().maxCoeff());
  }
  return worst / scale;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidParameter("linear_fit needs matching samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

DecayFit decay_rate_fit(const EigenPair& e, const FitWindow& fw) {
  const long N = e.b - e.a + 1;
  const long buffer = static_cast<long>(std::ceil(fw.edge_buffer * static_cast<double>(N)));
  const long c = e.center;
  if (c - e.a < buffer || e.b - c < buffer) throw UninformativeFit("eigenfunction peak lies inside the edge buffer");
  const double rmin = fw.r_min * 0.5 * static_cast<double>(N), rmax = fw.r_max * 0.5 * static_cast<double>(N);
  std::vector<double> xs, ys;
  for (long y = e.a + buffer; y < e.b - buffer; ++y) {
    const double r = std::abs(static_cast<double>(y - c));
    if (r < rmin || r > rmax) continue;
    const double l = e.log_pair_amplitude(y);
    if (!std::isfinite(l)) continue;
    xs.push_back(r);
    ys.push_back(l);
  }
  if (xs.size() < 10) throw UninformativeFit("too few points inside the fit window");
  const LinearFit f = linear_fit(xs, ys);
  DecayFit d;
  d.slope = f.slope;
  d.intercept = f.intercept;
  d.r2 = f.r2;
  d.center = c;
  d.points = static_cast<long>(xs.size());
  d.flagged_no_decay = std::abs(d.slope) < 0.02;
  return d;
}

SpreadSeries evolve_moments(const ModelParams& p, long N, long T, long record_every) {
  if (N < 120) throw InvalidParameter("N must be >= 120");
  if (T < 0 || record_every < 1) throw InvalidParameter("need T >= 0 and record_every >= 1");
  const long a = -N / 2, b = a + N - 1;
  const CMVWindow w(p, a, b, Boundary::fixed(1.0, 1.0));
  CVector psi = CVector::Zero(N);
  psi(-a) = 1.0;
  std::vector<double> x2w(static_cast<size_t>(N));
  for (long k = 0; k < N; ++k) {
    const double X = 0.5 * static_cast<double>(a + k);
    x2w[static_cast<size_t>(k)] = X * X;
  }
  SpreadSeries s;
  s.N = N;
  auto moment = [&]() {
    double m = 0.0;
    for (long k = 0; k < N; ++k) m += std::norm(psi(k)) * x2w[static_cast<size_t>(k)];
    return m;
  };
  s.times.push_back(0);
  s.x2.push_back(0.0);
  for (long t = 1; t <= T; ++t) {
    psi = w.apply_W(psi);
    double edge = 0.0;
    for (long k = 0; k < 50; ++k) edge += std::norm(psi(k)) + std::norm(psi(N - 1 - k));
    if (edge > 1e-12) {
      s.truncated = true;
      break;
    }
    if (t % record_every == 0 || t == T) {
      s.times.push_back(t);
      s.x2.push_back(moment());
    }
  }
  return s;
}

}  // namespace uamo

namespace uamo {

SpreadTrend spread_trend(const SpreadSeries& s) {
  if (s.times.empty()) throw UninformativeFit("empty series");
  const double t_max = static_cast<double>(s.times.back());
  std::vector<double> lt, raw, avg;
  double acc = 0.0;
  for (size_t i = 0; i < s.times.size(); ++i) {
    acc += s.x2[i];
    const double t = static_cast<double>(s.times[i]);
    if (t >= t_max / 10.0 && t > 0.0 && s.x2[i] > 0.0) {
      lt.push_back(std::log(t));
      raw.push_back(std::log(s.x2[i]));
      avg.push_back(std::log(acc / static_cast<double>(i + 1)));
    }
  }
  if (lt.size() < 3) throw UninformativeFit("fewer than 3 samples in the last decade");
  SpreadTrend out;
  out.raw = linear_fit(lt, raw);
  out.cesaro = linear_fit(lt, avg);
  out.points = static_cast<long>(lt.size());
  return out;
}

}  // namespace uamo
