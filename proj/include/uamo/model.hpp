#pragma once

#include <optional>
#include <vector>

#include "uamo/core.hpp"
#include "uamo/linalg.hpp"

namespace uamo {

// Couplings, frequency and phase. Angles are kept in cycles, reduced mod 1.
struct ModelParams {
  double lambda1 = 0.5;
  double lambda2 = 0.9;
  double lambda1p = 0.0;  // sqrt(1 - lambda1^2)
  double lambda2p = 0.0;
  double omega = 0.0;
  double theta = 0.0;

  static ModelParams make(double l1, double l2, double omega, double theta);
  ModelParams with_theta(double t) const;
  // theta + k omega
  ModelParams shifted(long k) const;
  bool decoupled() const { return lambda1 == 0.0; }
};

// frac(theta + k*omega) with the product reduced exactly.
double orbit_phase(double theta, long k, double omega);

struct VerblunskyPair {
  long index = 0;
  Complex alpha;
  Complex rho;
};

VerblunskyPair verblunsky_pair(const ModelParams& p, long n);

// [[conj(alpha), rho], [conj(rho), -alpha]] acting on {n, n+1}.
Mat2 theta_block(const VerblunskyPair& v);
// Inverse of a unitary theta block.
Mat2 theta_block_inverse(const VerblunskyPair& v);

// nullopt keeps the native coefficient.
struct Boundary {
  std::optional<Complex> beta;
  std::optional<Complex> gamma;

  static Boundary native() { return {}; }
  static Boundary fixed(Complex beta, Complex gamma) { return {beta, gamma}; }
};

enum class Factor { L, M };

// Restriction of L, M and W = LM to the sites [a, b].
class CMVWindow {
 public:
  CMVWindow(const ModelParams& p, long a, long b, Boundary bc = Boundary::native());
  // No |beta|, |gamma| <= 1 check. Used for the modified right-edge minors.
  static CMVWindow unchecked(const ModelParams& p, long a, long b, Complex beta, Complex gamma);

  long a() const { return a_; }
  long b() const { return b_; }
  Eigen::Index size() const { return b_ - a_ + 1; }
  const ModelParams& params() const { return params_; }
  Complex beta() const { return coeff_.front().alpha; }
  Complex gamma() const { return coeff_.back().alpha; }
  bool unitary(double tol = 1e-14) const;

  // Coefficient pair at absolute index n in [a-1, b], boundary values substituted.
  const VerblunskyPair& pair(long n) const { return coeff_.at(static_cast<size_t>(n - a_ + 1)); }

  BandMatrix factor(Factor f) const;
  BandMatrix W() const;
  CMatrix dense(Factor f) const { return factor(f).dense(); }
  CMatrix dense_W() const { return W().dense(); }

  CVector apply(Factor f, const CVector& v) const;
  CVector apply_inverse(Factor f, const CVector& v) const;
  CVector apply_W(const CVector& v) const;

  // z L^{-1} - M  and  z M^{-1} - L. Both tridiagonal.
  Tridiagonal A(Complex z) const;
  Tridiagonal A_tilde(Complex z) const;
  bool invertible(Factor f) const;
  LogValue det(Factor f) const;

 private:
  CMVWindow() = default;
  void build(const ModelParams& p, long a, long b, Complex beta, Complex gamma);

  template <class Fn>
  void for_blocks(Factor f, Fn&& fn) const;

  ModelParams params_;
  long a_ = 0, b_ = 0;
  std::vector<VerblunskyPair> coeff_;
};

struct WalkEquivalence {
  double residual = 0.0;          // walk vs conjugated CMV form, shifted map
  double literal_residual = 0.0;  // walk vs CMV form under delta_n^+ -> 2n, delta_n^- -> 2n+1
  long cells = 0;
};

// Builds S Q and L M independently on a block of cells and compares interior entries.
WalkEquivalence walk_vs_cmv_equivalence(const ModelParams& p, long n_max);

// Dense S_{lambda1} Q on cells [c0, c1], basis order (c,+), (c,-).
CMatrix walk_dense(const ModelParams& p, long c0, long c1);

}  // namespace uamo
