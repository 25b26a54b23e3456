#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uamo/core.hpp"

namespace uamo {

inline const double kGolden = 0.61803398874989484820;  // (sqrt 5 - 1) / 2
inline const double kSilver = 0.41421356237309504880;  // sqrt 2 - 1

// Indices follow the usual convention: a[0] = floor(omega), q[0] = 1, p[0] = a[0], q_{-1} = 0, p_{-1} = 1.
struct ContinuedFraction {
  double omega = 0.0;
  std::vector<long> a;
  std::vector<std::int64_t> p;
  std::vector<std::int64_t> q;
  bool rational = false;           // expansion terminated exactly
  bool precision_limited = false;  // stopped because double precision ran out

  int depth() const { return static_cast<int>(a.size()) - 1; }
};

ContinuedFraction continued_fraction(double omega, int K);
// Exact expansion of num/den.
ContinuedFraction continued_fraction_rational(std::int64_t num, std::int64_t den);

double torus_norm(double x);
// || n omega + shift ||_T with the product reduced exactly.
double orbit_torus_norm(long n, double omega, double shift = 0.0);

struct DiophantineReport {
  double tau = 0.0, nu = 0.0;
  long N = 0;
  long worst_n = 0;
  double worst_ratio = 0.0;  // min over n of ||n omega|| n^tau
  bool passed = false;
};

DiophantineReport diophantine_check(double omega, double tau, double nu, long N);

struct ResonanceReport {
  double theta = 0.0, omega = 0.0;
  long N = 0;
  std::vector<double> running;  // running[k] = max over n = +-(k+1) of -ln||2 theta - 1/2 + n omega|| / |n|
  double partial_sup = 0.0;     // max(0, max running)
  bool infinite = false;
  long witness = 0;             // n with exact resonance, when infinite
};

ResonanceReport resonance_exponent(double omega, double theta, long N);

enum class NodeVariable { Cos, Sin };

struct UniformityOptions {
  double z_lo = -1.0;
  double z_hi = 1.0;
  long z_points = 2001;
  NodeVariable variable = NodeVariable::Cos;
};

struct UniformityReport {
  std::vector<double> nodes;
  long n = 0;
  double kappa_hat = 0.0;  // (1/n) ln max_{z, j} |prod (z - c_l) / (c_j - c_l)|
  double argmax_z = 0.0;
  long argmax_j = 0;
  UniformityOptions options;
};

// Node variable c_l = cos (or sin) 2 pi (theta_l + (n-1) omega / 2). Needs nodes.size() == n + 1.
UniformityReport kappa_uniformity(const std::vector<double>& nodes, long n, double omega,
                                  const UniformityOptions& opt = {});

// Lagrange interpolation in s = sin 2 pi (theta + (n-1) omega / 2).
Complex lagrange_interpolate(const std::vector<Complex>& values, const std::vector<double>& nodes, long n,
                             double omega, double target);

struct TrigProductBound {
  double sum = 0.0;   // sum_{j != j0} ln|cos pi (theta + j omega)| + (q - 1) ln 2
  double band = 0.0;  // C ln q
  long j0 = 0;
  double ratio = 0.0; // |sum| / ln q
};

TrigProductBound trig_product_bound(double omega, double theta, std::int64_t q, double C = 20.0);

// golden, silver, p/q or a decimal literal.
double parse_frequency(const std::string& s);

}  // namespace uamo
