#include "uamo/determinants.hpp"

#include <cmath>

#include "uamo/cocycles.hpp"

namespace uamo {

namespace {

Mat2 szego_matrix(const VerblunskyPair& v, Complex z) {
  Mat2 s;
  s << z, -std::conj(v.alpha), -v.alpha * z, 1.0;
  return s / std::abs(v.rho);
}

bool native_gamma(const CMVWindow& w) { return w.gamma() == verblunsky_pair(w.params(), w.b()).alpha; }
bool native_beta(const CMVWindow& w) { return w.beta() == verblunsky_pair(w.params(), w.a() - 1).alpha; }

LogValue lu_route(const CMVWindow& w, Complex z) {
  CMatrix m = -w.dense_W();
  m.diagonal().array() += z;
  return dense_logdet(m);
}

// S_b ... S_from as a scaled product plus sum of ln|rho_j| over the same sites.
ScaledMat2 szego_product(const CMVWindow& w, long from, Complex z, double& log_rho) {
  ScaledMat2 t;
  CompensatedSum s;
  for (long n = from; n <= w.b(); ++n) {
    const VerblunskyPair& v = w.pair(n);
    if (std::abs(v.rho) == 0.0) throw SingularCoefficient("rho vanishes inside the window", n);
    t.left_multiply(szego_matrix(v, z));
    s.add(std::log(std::abs(v.rho)));
  }
  t.renormalize();
  log_rho = s.value();
  return t;
}

LogValue sze1_route(const CMVWindow& w, Complex z) {
  double log_rho = 0.0;
  const ScaledMat2 t = szego_product(w, w.a(), z, log_rho);
  LogValue out = LogValue::from(t.m(0, 0) - w.beta() * t.m(0, 1));
  if (!out.zero) out.log_abs += t.log_scale() + log_rho;
  return out;
}

LogValue sze2_route(const CMVWindow& w, Complex z) {
  double log_rho = 0.0;
  const ScaledMat2 t = szego_product(w, w.a() - 1, z, log_rho);
  LogValue out = LogValue::from(t.m(0, 0) / z);
  if (!out.zero) out.log_abs += t.log_scale() + log_rho;
  return out;
}

LogValue cmv_direct_route(const CMVWindow& w, Complex z, DetRoute* used) {
  if (w.invertible(Factor::L)) {
    LogValue d = w.det(Factor::L);
    d *= tridiagonal_logdet(w.A(z));
    return d;
  }
  if (w.invertible(Factor::M)) {
    LogValue d = w.det(Factor::M);
    d *= tridiagonal_logdet(w.A_tilde(z));
    return d;
  }
  if (used) *used = DetRoute::LU;
  return lu_route(w, z);
}

}  // namespace

const char* to_string(DetRoute r) {
  switch (r) {
    case DetRoute::LU: return "lu";
    case DetRoute::CMVDirect: return "cmv";
    case DetRoute::TransferSze1: return "sze1";
    case DetRoute::TransferSze2: return "sze2";
  }
  return "?";
}

DetRoute det_route_from_string(const std::string& s) {
  for (DetRoute r : {DetRoute::LU, DetRoute::CMVDirect, DetRoute::TransferSze1, DetRoute::TransferSze2})
    if (s == to_string(r)) return r;
  throw InvalidParameter("unknown determinant route: " + s);
}

LogValue window_determinant(const CMVWindow& w, Complex z, DetRoute route, DetRoute* used) {
  if (used) *used = route;
  switch (route) {
    case DetRoute::LU: return lu_route(w, z);
    case DetRoute::CMVDirect: return cmv_direct_route(w, z, used);
    case DetRoute::TransferSze1:
      if (native_gamma(w)) return sze1_route(w, z);
      break;
    case DetRoute::TransferSze2:
      if (native_gamma(w) && native_beta(w)) return sze2_route(w, z);
      if (native_gamma(w)) {
        if (used) *used = DetRoute::TransferSze1;
        return sze1_route(w, z);
      }
      break;
  }
  if (used) *used = DetRoute::LU;
  return lu_route(w, z);
}

BoxDeterminant box_determinant(const ModelParams& p, long a, long b, Complex z, DetRoute route, Boundary bc) {
  BoxDeterminant out;
  out.a = a;
  out.b = b;
  out.z = z;
  out.theta = p.theta;
  out.route = route;
  if (b == a - 1) return out;
  if (b < a - 1) throw InvalidWindow("box_determinant requires b >= a - 1");
  const Complex beta = bc.beta.value_or(verblunsky_pair(p, a - 1).alpha);
  const Complex gamma = bc.gamma.value_or(verblunsky_pair(p, b).alpha);
  if (std::abs(beta) > 1.0 + 1e-14 || std::abs(gamma) > 1.0 + 1e-14)
    throw InvalidWindow("boundary values must satisfy |beta|, |gamma| <= 1");
  const CMVWindow w = CMVWindow::unchecked(p, a, b, beta, gamma);
  out.value = window_determinant(w, z, route, &out.route);
  out.underflow = out.value.underflows();
  return out;
}

BoxDeterminant box_determinant(const ModelParams& p, long a, long b, Complex z, double theta, DetRoute route) {
  return box_determinant(p.with_theta(theta), a, b, z, route);
}

TransferIdentityResiduals det_transfer_identity(const ModelParams& p, long a, long b, Complex z) {
  if (b <= a) throw InvalidWindow("det_transfer_identity requires a < b");
  if (z == 0.0) throw InvalidParameter("z must be nonzero");
  const Complex alpha_left = verblunsky_pair(p, a - 1).alpha;
  if (std::abs(alpha_left) <= 1e-8)
    throw IdentityInapplicable("alpha_{a-1} vanishes; the second transfer identity divides by it");

  Mat2 t = Mat2::Identity();
  double pr = 1.0;
  for (long n = a; n <= b; ++n) {
    const VerblunskyPair v = verblunsky_pair(p, n);
    if (std::abs(v.rho) == 0.0) throw SingularCoefficient("rho vanishes inside the window", n);
    t = szego_matrix(v, z) * t;
    pr *= std::abs(v.rho);
  }
  const Complex zr = 1.0 / std::conj(z);
  const int k = static_cast<int>(b - a + 1);
  auto P = [&](long lo, long hi, Boundary bc, Complex at) {
    return box_determinant(p, lo, hi, at, DetRoute::LU, bc).complex_value();
  };

  TransferIdentityResiduals r;
  {
    const Boundary minus{Complex(-1.0), std::nullopt}, plus{Complex(1.0), std::nullopt};
    const Complex pm = P(a, b, minus, z), pp = P(a, b, plus, z);
    const Complex pm_r = P(a, b, minus, zr), pp_r = P(a, b, plus, zr);
    Mat2 x;
    x << pm + pp, pm - pp, reversed(pm_r - pp_r, z, k), reversed(pm_r + pp_r, z, k);
    x /= 2.0 * pr;
    r.r_sze1 = norm2(t - x) / norm2(t);
  }
  {
    const Boundary nat = Boundary::native();
    const Complex q = P(a + 1, b, nat, z), pab = P(a, b, nat, z);
    const Complex q_r = P(a + 1, b, nat, zr), pab_r = P(a, b, nat, zr);
    const Complex num = (z * q - pab) / alpha_left;
    const Complex num_r = (zr * q_r - pab_r) / alpha_left;
    Mat2 x;
    x << z * q, num, z * reversed(num_r, z, k - 1), reversed(q_r, z, k - 1);
    x /= pr;
    r.r_sze2 = norm2(t - x) / norm2(t);
  }
  return r;
}

UpperLeftValue p_upper_left(const ModelParams& p, long n, Complex z) {
  if (n < 1) throw InvalidParameter("n must be >= 1");
  Mat2 prod = Mat2::Identity();
  for (long j = 0; j < n; ++j) {
    const VerblunskyPair v0 = verblunsky_pair(p, 2 * j), v1 = verblunsky_pair(p, 2 * j + 1);
    const Mat2 d = cocycle_step(p, CocycleKind::Szego2, j, z).m * (std::abs(v0.rho) * std::abs(v1.rho));
    prod = d * prod;
  }
  const VerblunskyPair last = verblunsky_pair(p, 2 * n);
  const Mat2 s = szego_matrix(last, z);
  const Complex zn = std::pow(z, static_cast<int>(n - 1));
  UpperLeftValue out;
  out.literal = zn * (s * prod)(0, 0);
  out.normalized = out.literal * std::abs(last.rho);
  return out;
}

Complex SinePolynomialReport::coefficient(long freq) const {
  const long g = static_cast<long>(coefficients.size());
  if (g == 0 || freq > g / 2 || freq < -(g - 1) / 2) return 0.0;
  return coefficients[static_cast<size_t>((freq % g + g) % g)];
}

SinePolynomialReport sine_polynomial_check(const ModelParams& p, long n, Complex z, long grid_size) {
  if (n < 1) throw InvalidParameter("n must be >= 1");
  if (grid_size <= 0) grid_size = 8 * n + 8;
  if (grid_size < 4 * n + 4) throw InvalidParameter("grid_size must be >= 4n + 4");
  const long G = grid_size;
  std::vector<Complex> samples(static_cast<size_t>(G)), shifted(static_cast<size_t>(G));
  const double shift = 0.25 - 0.5 * static_cast<double>(n - 1) * p.omega;
  for (long k = 0; k < G; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(G);
    samples[static_cast<size_t>(k)] = box_determinant(p.with_theta(t), 1, 2 * n, z, DetRoute::CMVDirect).complex_value();
    shifted[static_cast<size_t>(k)] =
        box_determinant(p.with_theta(t + shift), 1, 2 * n, z, DetRoute::CMVDirect).complex_value();
  }
  SinePolynomialReport r;
  r.n = n;
  r.grid = G;
  r.coefficients.assign(static_cast<size_t>(G), 0.0);
  double total = 0.0, tail = 0.0;
  for (long f = 0; f < G; ++f) {
    Complex c = 0.0;
    for (long k = 0; k < G; ++k) {
      const long e = (f * k) % G;
      c += samples[static_cast<size_t>(k)] * std::polar(1.0, -kTwoPi * static_cast<double>(e) / static_cast<double>(G));
    }
    c /= static_cast<double>(G);
    r.coefficients[static_cast<size_t>(f)] = c;
    const long freq = f <= G / 2 ? f : f - G;
    total += std::norm(c);
    if (std::labs(freq) > n) tail += std::norm(c);
  }
  r.tail_mass = total > 0.0 ? std::sqrt(tail / total) : 0.0;
  double gmax = 0.0, diff = 0.0;
  for (long k = 0; k < G; ++k) {
    gmax = std::max(gmax, std::abs(shifted[static_cast<size_t>(k)]));
    diff = std::max(diff, std::abs(shifted[static_cast<size_t>(k)] - shifted[static_cast<size_t>((G - k) % G)]));
  }
  r.evenness_residual = gmax > 0.0 ? diff / gmax : 0.0;
  return r;
}

const char* to_string(BoundSupport s) {
  switch (s) {
    case BoundSupport::Neither: return "neither";
    case BoundSupport::A: return "bound_a";
    case BoundSupport::B: return "bound_b";
    case BoundSupport::Both: return "both";
  }
  return "?";
}

AverageLogDet average_log_det(const ModelParams& p, long n, Complex z, long grid_size) {
  if (n < 1) throw InvalidParameter("n must be >= 1");
  if (grid_size < 4096) throw InvalidParameter("grid_size must be >= 2^12");
  AverageLogDet out;
  CompensatedSum s;
  const double floor_log = std::log(1e-250);
  for (long k = 0; k < grid_size; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(grid_size);
    const LogValue v = box_determinant(p.with_theta(t), 1, 2 * n, z, DetRoute::CMVDirect).value;
    if (v.zero || v.log_abs < floor_log) {
      ++out.excluded;
      continue;
    }
    s.add(v.log_abs);
  }
  out.numeric = s.value() / static_cast<double>(grid_size) / static_cast<double>(2 * n);
  out.bound_a = 0.5 * std::log(p.lambda2 * (1.0 + p.lambda1p));
  out.bound_b = 0.5 * std::log(p.lambda2 * (1.0 + p.lambda1p) / 2.0);
  const bool sa = out.numeric >= out.bound_a - 0.01, sb = out.numeric >= out.bound_b - 0.01;
  out.supports = sa && sb ? BoundSupport::Both : sa ? BoundSupport::A : sb ? BoundSupport::B : BoundSupport::Neither;
  return out;
}

}  // namespace uamo
