#pragma once

#include <vector>

#include "uamo/arithmetic.hpp"
#include "uamo/cocycles.hpp"
#include "uamo/model.hpp"

namespace uamo {

enum class SpectrumMethod { Dense, RootIsolation };

struct Spectrum {
  std::vector<double> phases;  // sorted, in [0, 1)
  std::vector<Complex> z;
  SpectrumMethod method = SpectrumMethod::Dense;
  bool nonunitary = false;     // boundary values off the circle; eigenvalues may leave it
  bool complete = true;        // root isolation found all N roots
};

// Eigenvalues of W|_{[1, N]}.
Spectrum truncated_spectrum(const ModelParams& p, long N, Boundary bc = Boundary::fixed(1.0, 1.0),
                            SpectrumMethod method = SpectrumMethod::Dense);

struct EigenPair {
  Complex z;
  double phase = 0.0;
  long a = 1, b = 1;            // window
  CVector psi;                  // unit l2 norm; deep tails may underflow to zero
  std::vector<double> log_abs;  // ln |Psi_y| without underflow
  double residual = 0.0;        // ||W Psi - z Psi|| / ||Psi||
  long center = 0;              // absolute index of max |Psi|
  int iterations = 0;
  ModelParams params;
  Boundary bc;

  // log of (|Psi_y|^2 + |Psi_{y+1}|^2) / 2 at absolute index y
  double log_pair_amplitude(long y) const;
  double log_abs_at(long y) const { return log_abs.at(static_cast<size_t>(y - a)); }
};

struct EigenOptions {
  long a = 1;               // window is [a, a + N - 1]
  Boundary bc = Boundary::fixed(1.0, 1.0);
  int max_iterations = 60;
  int fixed_shift_iterations = 3;
  double tolerance = 1e-13;
  bool refine_tails = true;  // rebuild tails from the three-term recurrence of A
};

// Inverse iteration on (z - W|) through the tridiagonal factor A, then Rayleigh refinement.
EigenPair eigenpair_extract(const ModelParams& p, long N, double target_phase, const EigenOptions& opt = {});

// Eigenphase of the eigenvector of a dense sub-window [center - half, center + half - 1] peaked nearest center.
double central_eigenphase(const ModelParams& p, long center, long half = 128);

struct GZSolutionPair {
  long a = 0;
  CVector u, v;  // v = L|^{-1} u
};

GZSolutionPair gz_pair(const EigenPair& e);
// max over interior n of |(u, v)_{n+1} - M_{n,z} (u, v)_n| / max|u|.
double gz_residual(const EigenPair& e, const GZSolutionPair& g);

struct FitWindow {
  double r_min = 0.2;        // fraction of N/2
  double r_max = 0.8;
  double edge_buffer = 0.05; // fraction of N excluded at each edge
};

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  long center = 0;
  long points = 0;
  bool flagged_no_decay = false;  // |slope| < 0.02
};

DecayFit decay_rate_fit(const EigenPair& e, const FitWindow& w = {});

struct SpreadSeries {
  std::vector<long> times;
  std::vector<double> x2;  // <X^2>, X = CMV index / 2
  bool truncated = false;  // wavefront reached the edge buffer
  long N = 0;
};

// delta_0 evolved under W| on [-N/2, N/2 - 1] with unitary boundary.
SpreadSeries evolve_moments(const ModelParams& p, long N, long T, long record_every = 1);

struct LinearFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct SpreadTrend {
  LinearFit raw;      // ln <X^2>(t) against ln t over the last decade
  LinearFit cesaro;   // same for the running time average (1/t) sum <X^2>
  long points = 0;
};

// Trend over t in [t_max / 10, t_max]. Needs at least 3 recorded times there.
SpreadTrend spread_trend(const SpreadSeries& s);

struct OddInterval {
  long lo = 0, hi = 0;  // inclusive bounds before the parity filter
  std::vector<long> odd() const;
  long odd_count() const;
};

struct LocalizationScheme {
  long y = 0;
  double epsilon = 0.0;
  int n = 0, m = 0;
  std::int64_t q_n = 0, q_n1 = 0, q_m = 0, q_m1 = 0;
  long s = 0;
  long h = 0;  // 2 s q_m - 2
  OddInterval I1, I2;
};

LocalizationScheme localization_scheme(long y, const ContinuedFraction& cf, double epsilon);
LocalizationScheme localization_scheme(long y, double omega, double epsilon);

struct CertificateOptions {
  double edge_buffer = 0.05;
};

struct LocalizationCertificate {
  LocalizationScheme scheme;
  long center = 0;        // argmax |Psi|
  long translation = 0;   // even shift applied to relative coordinates
  long y_abs = 0;
  long x1 = 0, x2 = 0;    // chosen from I1, absolute
  double L = 0.0, L_plus = 0.0, L_minus = 0.0;
  double margin_P = 0.0;    // ln|P_{[x1,x2]}| - (L+/2 - 2 eps) h
  double margin_nu1 = 0.0;  // log difference of the two sides
  double margin_nu2 = 0.0;
  double margin_nu3 = 0.0;  // ln(rhs) - ln|Psi_y|
  double contraction = 0.0; // max_i |G(y, x_i)|^{1/|y - x_i|}
  double contraction_reference = 0.0;  // e^{-(L/2 - 25 eps)}
  long argmax_P_x1 = 0;
  double argmax_P_margin_min = 0.0;  // min margin when x1 maximises |P| instead
  double I2_margin_P = 0.0;          // best margin_P over I2
  bool hypothesis = false;           // L > 0
  bool passed = false;
};

LocalizationCertificate certificate_replay(const ModelParams& p, const EigenPair& e, long y, double epsilon,
                                           const CertificateOptions& opt = {});

struct DecayIteration {
  long y = 0;
  int steps = 0;
  double chain_log_bound = 0.0;  // ln bound on |Psi_y| from the chain
  double target_log = 0.0;       // -(L/2 - 30 eps) y + ln ||Psi||_inf
  double actual_log = 0.0;
  bool chain_valid = true;       // every step's inequality held
  bool holds = false;            // actual <= target
  std::vector<long> path;        // relative positions visited
};

// Follows the largest boundary term of the Poisson bound until x1 <= eps q_n, x2 >= q_{n+1}/20 or cap steps.
DecayIteration iterate_decay_bound(const ModelParams& p, const EigenPair& e, long y, double epsilon, int cap = 0);

}  // namespace uamo
