#include "uamo/cocycles.hpp"

#include <cmath>
#include <numeric>

namespace uamo {

namespace {

constexpr double kRhoFloor = 1e-15;

void require_rho(const VerblunskyPair& v) {
  if (std::abs(v.rho) < kRhoFloor)
    throw SingularCoefficient("rho vanishes at site " + std::to_string(v.index), v.index);
}

void require_z(Complex z) {
  if (z == 0.0) throw InvalidParameter("spectral parameter z must be nonzero");
}

Mat2 szego(const VerblunskyPair& v, Complex z) {
  require_rho(v);
  Mat2 s;
  s << z, -std::conj(v.alpha), -v.alpha * z, 1.0;
  return s / std::abs(v.rho);
}

Mat2 gz(const VerblunskyPair& v, Complex z) {
  require_rho(v);
  Mat2 m;
  if (v.index % 2 != 0)
    m << -std::conj(v.alpha), z, 1.0 / z, -v.alpha;
  else
    m << -v.alpha, 1.0, 1.0, -std::conj(v.alpha);
  return m / v.rho;
}

Mat2 szego_two_step(const ModelParams& p, long j, Complex z) {
  const VerblunskyPair a0 = verblunsky_pair(p, 2 * j), a1 = verblunsky_pair(p, 2 * j + 1);
  require_rho(a0);
  require_rho(a1);
  const Complex x = a0.alpha, y = a1.alpha;
  Mat2 s;
  s << x * std::conj(y) + z, -std::conj(x) - std::conj(y) / z, -x - y * z, std::conj(x) * y + 1.0 / z;
  return s / (std::abs(a0.rho) * std::abs(a1.rho));
}

Mat2 standard(const ModelParams& p, long n, Complex z) {
  const VerblunskyPair e = verblunsky_pair(p, 2 * n), o = verblunsky_pair(p, 2 * n - 1),
                       e0 = verblunsky_pair(p, 2 * n - 2);
  require_rho(e);
  require_rho(o);
  const Complex a2 = e.alpha, a1 = o.alpha, a0 = e0.alpha;
  const Complex r2 = e.rho, r0c = std::conj(e0.rho);
  Mat2 m;
  m << 1.0 / z + a2 * std::conj(a1) + a1 * std::conj(a0) + a2 * std::conj(a0) * z, -r0c * a1 - r0c * a2 * z,
      -r2 * std::conj(a1) - r2 * std::conj(a0) * z, r2 * r0c * z;
  return m / (e.rho * o.rho);
}

}  // namespace

const char* to_string(CocycleKind k) {
  switch (k) {
    case CocycleKind::Szego1: return "szego1";
    case CocycleKind::Szego2: return "szego2";
    case CocycleKind::GZ: return "gz";
    case CocycleKind::GZ2: return "gz2";
    case CocycleKind::Standard: return "standard";
  }
  return "?";
}

CocycleKind cocycle_kind_from_string(const std::string& s) {
  for (CocycleKind k : {CocycleKind::Szego1, CocycleKind::Szego2, CocycleKind::GZ, CocycleKind::GZ2,
                        CocycleKind::Standard})
    if (s == to_string(k)) return k;
  throw InvalidParameter("unknown cocycle kind: " + s);
}

int sites_per_step(CocycleKind k) { return k == CocycleKind::Szego1 || k == CocycleKind::GZ ? 1 : 2; }

SpectralParam SpectralParam::make(Complex z) {
  require_z(z);
  return {z, std::abs(std::abs(z) - 1.0) <= 1e-12};
}

CocycleMatrix cocycle_step(const ModelParams& p, CocycleKind kind, long step, Complex z) {
  require_z(z);
  CocycleMatrix out;
  out.kind = kind;
  out.step = step;
  out.theta = p.theta;
  switch (kind) {
    case CocycleKind::Szego1: out.m = szego(verblunsky_pair(p, step), z); break;
    case CocycleKind::GZ: out.m = gz(verblunsky_pair(p, step), z); break;
    case CocycleKind::Szego2: out.m = szego_two_step(p, step, z); break;
    case CocycleKind::GZ2:
      out.m = gz(verblunsky_pair(p, 2 * step + 2), z) * gz(verblunsky_pair(p, 2 * step + 1), z);
      break;
    case CocycleKind::Standard: out.m = standard(p, step, z); break;
  }
  return out;
}

Mat2 conjugator_B(const ModelParams& p, long n) {
  const VerblunskyPair v = verblunsky_pair(p, 2 * n);
  if (std::abs(v.rho) < kRhoFloor) throw SingularConjugator("B_n is singular: rho_2n vanishes");
  Mat2 b;
  b << 1.0, 0.0, -std::conj(v.alpha), std::conj(v.rho);
  return b;
}

ConjugacyResiduals conjugacy_residuals(const ModelParams& p0, double theta, Complex z) {
  require_z(z);
  const ModelParams p = p0.with_theta(theta);
  if (p.lambda1 == 0.0) throw SingularConjugator("B_n is singular: lambda1 = 0");
  ConjugacyResiduals r;
  {
    const VerblunskyPair v1 = verblunsky_pair(p, 1), v2 = verblunsky_pair(p, 2);
    const Mat2 lhs = gz(v2, z) * gz(v1, z);
    Mat2 R;
    R << 0.0, 1.0, 1.0, 0.0;
    const Complex c = std::abs(v1.rho * v2.rho) / (z * v1.rho * v2.rho);
    const Mat2 rhs = c * R * szego(v2, z) * szego(v1, z) * R;
    r.r1 = norm2(lhs - rhs) / norm2(lhs);
  }
  {
    const Mat2 lhs = standard(p, 0, z);
    const Mat2 rhs = conjugator_B(p, 0).inverse() * gz(verblunsky_pair(p, 0), z) * gz(verblunsky_pair(p, -1), z) *
                     conjugator_B(p, -1);
    r.r2 = norm2(lhs - rhs) / norm2(lhs);
  }
  return r;
}

TransferProduct transfer_product(const ModelParams& p0, CocycleKind kind, double theta, Complex z, long N,
                                 bool keep_trace) {
  if (N < 1) throw InvalidParameter("transfer_product requires N >= 1");
  const ModelParams p = p0.with_theta(theta);
  TransferProduct out;
  ScaledMat2 prod;
  if (keep_trace) out.log_norms.reserve(static_cast<size_t>(N));
  for (long k = 0; k < N; ++k) {
    prod.left_multiply(cocycle_step(p, kind, k, z).m);
    if ((k + 1) % 32 == 0) prod.renormalize();
    if (keep_trace) out.log_norms.push_back(prod.log_norm() / static_cast<double>(k + 1));
  }
  if (N == 1) {
    out.matrix = cocycle_step(p, kind, 0, z);
  } else {
    prod.renormalize();
    out.matrix.m = prod.m;
    out.matrix.kind = kind;
    out.matrix.step = N;
    out.matrix.theta = p.theta;
    out.log_scale = prod.log_scale();
  }
  out.log_norm = prod.log_norm();
  return out;
}

LyapunovEstimate lyapunov_estimate(const ModelParams& p, CocycleKind kind, Complex z, long N, int theta_samples) {
  if (theta_samples < 1) throw InvalidParameter("theta_samples must be >= 1");
  LyapunovEstimate est;
  est.kind = kind;
  est.z = z;
  est.N = N;
  est.sites_per_step = sites_per_step(kind);
  for (int k = 0; k < theta_samples; ++k) {
    const double t = frac(p.theta + static_cast<double>(k) / theta_samples);
    est.samples.push_back(transfer_product(p, kind, t, z, N, false).log_norm / static_cast<double>(N));
  }
  const double S = static_cast<double>(theta_samples);
  est.mean = std::accumulate(est.samples.begin(), est.samples.end(), 0.0) / S;
  if (theta_samples > 1) {
    double ss = 0.0;
    for (double v : est.samples) ss += (v - est.mean) * (v - est.mean);
    est.stderr_ = std::sqrt(ss / (S - 1.0) / S);
  }
  return est;
}

LyapunovConstants lyapunov_constants(const ModelParams& p) {
  if (p.lambda1 == 0.0 || p.lambda2 == 0.0) throw DivergentRate("Lyapunov constants need lambda1, lambda2 > 0");
  LyapunovConstants c;
  c.L_plus = std::log(p.lambda2 * (1.0 + p.lambda1p) / 2.0);
  c.L_minus = std::log(p.lambda1 * (1.0 + p.lambda2p) / 2.0);
  c.L = c.L_plus - c.L_minus;
  return c;
}

double lyapunov_closed_form(const ModelParams& p) {
  if (p.lambda1 == 0.0) throw DivergentRate("closed form diverges at lambda1 = 0");
  if (p.lambda2 == 0.0) return 0.0;
  return std::max(0.0, std::log(p.lambda2 * (1.0 + p.lambda1p) / (p.lambda1 * (1.0 + p.lambda2p))));
}

std::vector<SzegoPair> szego_polynomials(const ModelParams& p, Complex z, long N) {
  require_z(z);
  if (N < 0) throw InvalidParameter("N must be >= 0");
  std::vector<SzegoPair> out;
  out.reserve(static_cast<size_t>(N + 1));
  Vec2 v(1.0, 1.0);
  out.push_back({v(0), v(1)});
  for (long n = 0; n < N; ++n) {
    v = szego(verblunsky_pair(p, n), z) * v;
    out.push_back({v(0), v(1)});
  }
  return out;
}

LogRhoIntegral log_rho_integral_check(const ModelParams& p, long grid_size, double offset) {
  if (grid_size < 64) throw InvalidParameter("grid_size must be >= 64");
  if (p.lambda1 == 0.0) throw DivergentRate("ln|rho| is not integrable at lambda1 = 0");
  LogRhoIntegral out;
  CompensatedSum s;
  long used = 0;
  for (long k = 0; k < grid_size; ++k) {
    const double t = (static_cast<double>(k) + offset) / static_cast<double>(grid_size);
    const double g = p.lambda1 * std::abs(Complex(p.lambda2 * std::cos(kTwoPi * t), p.lambda2p));
    if (g == 0.0) {
      ++out.excluded;
      continue;
    }
    s.add(std::log(g));
    ++used;
  }
  out.numeric = s.value() / static_cast<double>(used);
  out.closed = std::log(p.lambda1 * (1.0 + p.lambda2p) / 2.0);
  return out;
}

}  // namespace uamo
