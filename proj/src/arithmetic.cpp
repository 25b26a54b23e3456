#include "uamo/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "uamo/model.hpp"

namespace uamo {

namespace {

void push_convergent(ContinuedFraction& cf, long ak) {
  const size_t k = cf.a.size();
  cf.a.push_back(ak);
  const std::int64_t p1 = k >= 1 ? cf.p[k - 1] : 1, q1 = k >= 1 ? cf.q[k - 1] : 0;
  const std::int64_t p2 = k >= 2 ? cf.p[k - 2] : (k == 1 ? 1 : 0), q2 = k >= 2 ? cf.q[k - 2] : (k == 1 ? 0 : 1);
  if (k == 0) {
    cf.p.push_back(ak);
    cf.q.push_back(1);
  } else {
    cf.p.push_back(ak * p1 + p2);
    cf.q.push_back(ak * q1 + q2);
  }
}

}  // namespace

ContinuedFraction continued_fraction(double omega, int K) {
  if (K < 1) throw InvalidParameter("K must be >= 1");
  if (!std::isfinite(omega)) throw InvalidParameter("omega must be finite");
  ContinuedFraction cf;
  cf.omega = omega;
  long double x = omega;
  long double a0 = std::floor(x);
  push_convergent(cf, static_cast<long>(a0));
  long double r = x - a0;
  for (int k = 1; k <= K; ++k) {
    if (r == 0.0L) {
      cf.rational = true;
      break;
    }
    if (r < 1e-15L || static_cast<long double>(cf.q.back()) * cf.q.back() > 1e15L) {
      cf.precision_limited = true;
      break;
    }
    x = 1.0L / r;
    const long double ak = std::floor(x);
    push_convergent(cf, static_cast<long>(ak));
    r = x - ak;
  }
  return cf;
}

ContinuedFraction continued_fraction_rational(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw InvalidParameter("denominator must be positive");
  ContinuedFraction cf;
  cf.omega = static_cast<double>(num) / static_cast<double>(den);
  std::int64_t a = num, b = den;
  std::int64_t q0 = a >= 0 ? a / b : -((-a + b - 1) / b);
  push_convergent(cf, static_cast<long>(q0));
  a -= q0 * b;
  while (a != 0) {
    std::swap(a, b);
    const std::int64_t qk = a / b;
    push_convergent(cf, static_cast<long>(qk));
    a -= qk * b;
  }
  cf.rational = true;
  return cf;
}

double torus_norm(double x) { return std::abs(x - std::nearbyint(x)); }

double orbit_torus_norm(long n, double omega, double shift) { return torus_norm(orbit_phase(shift, n, omega)); }

DiophantineReport diophantine_check(double omega, double tau, double nu, long N) {
  if (!(tau > 1.0) || !(nu > 0.0) || N < 1) throw InvalidParameter("need tau > 1, nu > 0, N >= 1");
  DiophantineReport r;
  r.tau = tau;
  r.nu = nu;
  r.N = N;
  r.worst_ratio = INFINITY;
  for (long n = 1; n <= N; ++n) {
    const double v = orbit_torus_norm(n, omega) * std::pow(static_cast<double>(n), tau);
    if (v < r.worst_ratio) {
      r.worst_ratio = v;
      r.worst_n = n;
    }
  }
  r.passed = r.worst_ratio >= nu;
  return r;
}

ResonanceReport resonance_exponent(double omega, double theta, long N) {
  if (N < 1) throw InvalidParameter("N must be >= 1");
  ResonanceReport r;
  r.theta = theta;
  r.omega = omega;
  r.N = N;
  r.running.reserve(static_cast<size_t>(N));
  const double shift = frac(2.0 * theta - 0.5);
  double best = -INFINITY;
  for (long n = 1; n <= N; ++n) {
    double v = -INFINITY;
    for (long sn : {n, -n}) {
      const double d = orbit_torus_norm(sn, omega, shift);
      if (d == 0.0) {
        if (!r.infinite) r.witness = sn;
        r.infinite = true;
        v = INFINITY;
        continue;
      }
      v = std::max(v, -std::log(d) / static_cast<double>(n));
    }
    r.running.push_back(v);
    best = std::max(best, v);
  }
  r.partial_sup = std::max(0.0, best);
  return r;
}

namespace {

std::vector<double> node_values(const std::vector<double>& nodes, long n, double omega, NodeVariable var) {
  const double shift = 0.5 * static_cast<double>(n - 1) * omega;
  std::vector<double> c;
  c.reserve(nodes.size());
  for (double t : nodes) {
    const double x = kTwoPi * frac(t + shift);
    c.push_back(var == NodeVariable::Cos ? std::cos(x) : std::sin(x));
  }
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = i + 1; j < c.size(); ++j)
      if (std::abs(c[i] - c[j]) < 1e-14) throw DegenerateNodes("coincident interpolation nodes");
  return c;
}

}  // namespace

UniformityReport kappa_uniformity(const std::vector<double>& nodes, long n, double omega,
                                  const UniformityOptions& opt) {
  if (n < 1 || nodes.size() != static_cast<size_t>(n + 1)) throw InvalidParameter("need n + 1 nodes with n >= 1");
  if (opt.z_points < 2 || !(opt.z_hi > opt.z_lo)) throw InvalidParameter("bad z grid");
  const std::vector<double> c = node_values(nodes, n, omega, opt.variable);
  const size_t m = c.size();
  std::vector<double> denom(m, 0.0);
  for (size_t j = 0; j < m; ++j)
    for (size_t l = 0; l < m; ++l)
      if (l != j) denom[j] += std::log(std::abs(c[j] - c[l]));

  std::vector<double> zs;
  for (long k = 0; k < opt.z_points; ++k)
    zs.push_back(opt.z_lo + (opt.z_hi - opt.z_lo) * static_cast<double>(k) / static_cast<double>(opt.z_points - 1));
  UniformityReport r;
  r.nodes = nodes;
  r.n = n;
  r.options = opt;
  double best = -INFINITY;
  std::vector<double> lz(m);
  for (double z : zs) {
    double total = 0.0;
    bool hit = false;
    size_t hit_idx = 0;
    for (size_t l = 0; l < m; ++l) {
      const double d = std::abs(z - c[l]);
      if (d == 0.0) {
        hit = true;
        hit_idx = l;
        lz[l] = 0.0;
      } else {
        lz[l] = std::log(d);
        total += lz[l];
      }
    }
    for (size_t j = 0; j < m; ++j) {
      double v;
      if (hit)
        v = j == hit_idx ? 0.0 : -INFINITY;  // basis polynomial is 1 at its own node, 0 at others
      else
        v = total - lz[j] - denom[j];
      if (v > best) {
        best = v;
        r.argmax_z = z;
        r.argmax_j = static_cast<long>(j);
      }
    }
  }
  r.kappa_hat = best / static_cast<double>(n);
  return r;
}

Complex lagrange_interpolate(const std::vector<Complex>& values, const std::vector<double>& nodes, long n,
                             double omega, double target) {
  if (n < 0 || nodes.size() != static_cast<size_t>(n + 1) || values.size() != nodes.size())
    throw InvalidParameter("need n + 1 nodes and values");
  const std::vector<double> s = node_values(nodes, n, omega, NodeVariable::Sin);
  const double st = std::sin(kTwoPi * frac(target + 0.5 * static_cast<double>(n - 1) * omega));
  Complex out = 0.0;
  for (size_t j = 0; j < s.size(); ++j) {
    double w = 1.0;
    for (size_t l = 0; l < s.size(); ++l)
      if (l != j) w *= (st - s[l]) / (s[j] - s[l]);
    out += values[j] * w;
  }
  return out;
}

TrigProductBound trig_product_bound(double omega, double theta, std::int64_t q, double C) {
  if (q < 3) throw InvalidParameter("q must be >= 3");
  TrigProductBound r;
  std::vector<double> logs(static_cast<size_t>(q));
  double smallest = INFINITY;
  for (std::int64_t j = 0; j < q; ++j) {
    const double c = std::abs(std::cos(kPi * orbit_phase(theta, static_cast<long>(j), omega)));
    logs[static_cast<size_t>(j)] = c > 0.0 ? std::log(c) : -INFINITY;
    if (c < smallest) {
      smallest = c;
      r.j0 = static_cast<long>(j);
    }
  }
  CompensatedSum s;
  for (std::int64_t j = 0; j < q; ++j)
    if (j != r.j0) s.add(logs[static_cast<size_t>(j)]);
  r.sum = s.value() + static_cast<double>(q - 1) * std::log(2.0);
  r.band = C * std::log(static_cast<double>(q));
  r.ratio = std::abs(r.sum) / std::log(static_cast<double>(q));
  return r;
}

double parse_frequency(const std::string& s) {
  if (s == "golden") return kGolden;
  if (s == "silver") return kSilver;
  const auto slash = s.find('/');
  try {
    size_t used = 0;
    if (slash != std::string::npos) {
      const long long num = std::stoll(s.substr(0, slash), &used);
      if (used != slash) throw InvalidParameter("bad frequency: " + s);
      const std::string ds = s.substr(slash + 1);
      const long long den = std::stoll(ds, &used);
      if (used != ds.size() || den <= 0) throw InvalidParameter("bad frequency: " + s);
      return frac(static_cast<double>(num) / static_cast<double>(den));
    }
    const double v = std::stod(s, &used);
    if (used != s.size()) throw InvalidParameter("bad frequency: " + s);
    return frac(v);
  } catch (const std::logic_error&) {
    throw InvalidParameter("bad frequency '" + s + "': use golden, silver, p/q or a decimal");
  }
}

}  // namespace uamo
