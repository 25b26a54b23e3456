#pragma once

#include <cmath>
#include <random>

#include "uamo/model.hpp"

// Independent reference constructions used by the tests. Nothing here calls the library's windowed code.
namespace oracle {

using uamo::CMatrix;
using uamo::Complex;

inline Complex alpha(const uamo::ModelParams& p, long n) {
  if (n % 2 == 0) return p.lambda1p;
  const long k = (n - 1) / 2;  // exact for odd n
  return p.lambda2 * std::sin(2.0 * M_PI * (p.theta + static_cast<double>(k) * p.omega));
}

inline Complex rho(const uamo::ModelParams& p, long n) {
  if (n % 2 == 0) return p.lambda1;
  const long k = (n - 1) / 2;
  return Complex(p.lambda2 * std::cos(2.0 * M_PI * (p.theta + static_cast<double>(k) * p.omega)), p.lambda2p);
}

// Dense L or M on [a, b] with boundary values beta at a-1 and gamma at b, built entry by entry.
inline CMatrix factor(const uamo::ModelParams& p, long a, long b, Complex beta, Complex gamma, bool is_L) {
  const long n = b - a + 1;
  CMatrix m = CMatrix::Zero(n, n);
  auto al = [&](long j) { return j == a - 1 ? beta : j == b ? gamma : alpha(p, j); };
  // Boundary blocks are always truncated, so their rho never enters.
  for (long j = a - 1; j <= b; ++j) {
    const bool even = ((j % 2) + 2) % 2 == 0;
    if (even != is_L) continue;
    const Complex A = al(j), R = rho(p, j);
    const long i0 = j - a, i1 = j + 1 - a;
    if (i0 >= 0 && i1 < n) {
      m(i0, i0) = std::conj(A);
      m(i0, i1) = R;
      m(i1, i0) = std::conj(R);
      m(i1, i1) = -A;
    } else if (i0 < 0 && i1 < n) {
      m(i1, i1) = -A;
    } else if (i0 >= 0 && i1 >= n) {
      m(i0, i0) = std::conj(A);
    }
  }
  return m;
}

inline std::mt19937_64 rng(std::uint64_t s) { return std::mt19937_64(s); }

inline double unif(std::mt19937_64& g, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace oracle
