#pragma once

#include <string>
#include <vector>

#include "uamo/model.hpp"

namespace uamo {

enum class CocycleKind { Szego1, Szego2, GZ, GZ2, Standard };

const char* to_string(CocycleKind k);
CocycleKind cocycle_kind_from_string(const std::string& s);
// Lattice sites advanced per application.
int sites_per_step(CocycleKind k);

struct SpectralParam {
  Complex z;
  bool on_circle = false;

  static SpectralParam make(Complex z);
};

struct CocycleMatrix {
  Mat2 m;
  CocycleKind kind = CocycleKind::Szego1;
  long step = 0;  // site n for one-step kinds, orbit step j for two-step kinds
  double theta = 0.0;
};

struct LyapunovConstants {
  double L_plus = 0.0;
  double L_minus = 0.0;
  double L = 0.0;
};

struct LyapunovEstimate {
  CocycleKind kind = CocycleKind::Szego2;
  Complex z;
  long N = 0;
  std::vector<double> samples;  // (1/N) ln ||product_N(theta_k)||
  double mean = 0.0;
  double stderr_ = 0.0;
  int sites_per_step = 2;
};

// One application of the cocycle.
//   Szego1:   S_{n,z}, step = n
//   GZ:       M_{n,z}, step = n
//   Szego2:   S~(theta + j omega) = (1/z) S_{2j+1} S_{2j}, closed form
//   GZ2:      M~(theta + j omega) = M_{2j+2} M_{2j+1}
//   Standard: A_{j,z}, closed form
CocycleMatrix cocycle_step(const ModelParams& p, CocycleKind kind, long step, Complex z);

// Conjugator B_n = [[1, 0], [-conj(alpha_2n), conj(rho_2n)]].
Mat2 conjugator_B(const ModelParams& p, long n);

struct ConjugacyResiduals {
  double r1 = 0.0;  // M M vs R^{-1} S S R, relative to ||M M||
  double r2 = 0.0;  // A vs B^{-1} M M B, relative to ||A||
};

// Relative operator-norm residuals at site pair (1, 2) and at n = 0 for phase theta.
ConjugacyResiduals conjugacy_residuals(const ModelParams& p, double theta, Complex z);

struct TransferProduct {
  CocycleMatrix matrix;          // normalised product, value = matrix.m * exp(log_scale)
  double log_scale = 0.0;
  double log_norm = 0.0;         // ln ||product_N||
  std::vector<double> log_norms; // (1/k) ln ||product_k||, k = 1..N
};

// Ordered product over steps 0..N-1 starting at phase theta.
TransferProduct transfer_product(const ModelParams& p, CocycleKind kind, double theta, Complex z, long N,
                                 bool keep_trace = true);

LyapunovEstimate lyapunov_estimate(const ModelParams& p, CocycleKind kind, Complex z, long N, int theta_samples);

LyapunovConstants lyapunov_constants(const ModelParams& p);
// max(0, ln(lambda2 (1 + lambda1') / (lambda1 (1 + lambda2')))), per two-step application.
double lyapunov_closed_form(const ModelParams& p);

struct SzegoPair {
  Complex phi;
  Complex phi_star;
};

// Normalised recurrence from phi_0 = phi_0^* = 1. Returns N + 1 entries.
std::vector<SzegoPair> szego_polynomials(const ModelParams& p, Complex z, long N);

struct LogRhoIntegral {
  double numeric = 0.0;
  double closed = 0.0;
  long excluded = 0;
};

// Uniform grid rule for the integral of ln|lambda1 (lambda2 cos 2 pi t + i lambda2')| with nodes (k + offset)/G.
LogRhoIntegral log_rho_integral_check(const ModelParams& p, long grid_size, double offset = 0.5);

}  // namespace uamo
