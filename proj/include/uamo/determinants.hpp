#pragma once

#include <vector>

#include "uamo/model.hpp"

namespace uamo {

enum class DetRoute { LU, CMVDirect, TransferSze1, TransferSze2 };

const char* to_string(DetRoute r);
DetRoute det_route_from_string(const std::string& s);

struct BoxDeterminant {
  long a = 0, b = 0;
  Complex z;
  double theta = 0.0;
  LogValue value;
  DetRoute route = DetRoute::LU;  // route actually used
  bool underflow = false;

  Complex complex_value() const { return value.value(); }
};

// P_{[a,b],z}(theta) = det(z - W|_{[a,b]}). b == a - 1 gives the empty determinant 1.
// Transfer routes need the native right coefficient; Sze2 also needs the native left one.
// When a requirement fails the LU route is used and reported.
BoxDeterminant box_determinant(const ModelParams& p, long a, long b, Complex z, DetRoute route,
                               Boundary bc = Boundary::native());
BoxDeterminant box_determinant(const ModelParams& p, long a, long b, Complex z, double theta, DetRoute route);

// Same on an existing window; accepts windows built with CMVWindow::unchecked.
LogValue window_determinant(const CMVWindow& w, Complex z, DetRoute route, DetRoute* used = nullptr);

// p^*(z) = z^k conj(p(1/conj z)) for a function known at 1/conj(z).
inline Complex reversed(Complex p_at_reflected, Complex z, int k) { return std::pow(z, k) * std::conj(p_at_reflected); }

struct TransferIdentityResiduals {
  double r_sze1 = 0.0;
  double r_sze2 = 0.0;
};

// Relative residuals between S_b...S_a and the two determinant matrices.
// Throws IdentityInapplicable when |alpha_{a-1}| <= 1e-8.
TransferIdentityResiduals det_transfer_identity(const ModelParams& p, long a, long b, Complex z);

struct UpperLeftValue {
  Complex normalized;  // with |rho_2n| S_2n, equals P_{[1,2n],z}
  Complex literal;     // with S_2n as printed
};

// Upper-left entry of z^{n-1} S_{2n,z} D(theta + (n-1) omega) ... D(theta), D = |rho_1 rho_0| S~.
UpperLeftValue p_upper_left(const ModelParams& p, long n, Complex z);

struct SinePolynomialReport {
  long n = 0;
  long grid = 0;
  std::vector<Complex> coefficients;  // DFT of theta -> P_{[1,2n],z}(theta), index k is frequency k or k - grid
  double tail_mass = 0.0;             // relative l2 mass beyond |frequency| n
  double evenness_residual = 0.0;     // max |g(t) - g(-t)| / max |g|
  Complex coefficient(long freq) const;
};

// grid_size <= 0 selects 8n + 8.
SinePolynomialReport sine_polynomial_check(const ModelParams& p, long n, Complex z, long grid_size = 0);

enum class BoundSupport { Neither, A, B, Both };
const char* to_string(BoundSupport s);

struct AverageLogDet {
  double numeric = 0.0;
  double bound_a = 0.0;  // (1/2) ln(lambda2 (1 + lambda1'))
  double bound_b = 0.0;  // (1/2) ln(lambda2 (1 + lambda1') / 2)
  long excluded = 0;
  BoundSupport supports = BoundSupport::Neither;  // numeric >= bound - 0.01
};

AverageLogDet average_log_det(const ModelParams& p, long n, Complex z, long grid_size);

}  // namespace uamo
