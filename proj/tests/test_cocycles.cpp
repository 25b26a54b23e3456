#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "uamo/arithmetic.hpp"
#include "uamo/cocycles.hpp"
#include "uamo/spectral.hpp"

using namespace uamo;

namespace {

// Szego step written out from the recurrence phi_{n+1} = (z phi_n - conj(alpha) phi*_n) / |rho|.
Mat2 szego_ref(const ModelParams& p, long n, Complex z) {
  const Complex a = oracle::alpha(p, n);
  Mat2 s;
  s << z, -std::conj(a), -a * z, 1.0;
  return s / std::abs(oracle::rho(p, n));
}

}  // namespace

TEST_CASE("one-step Szego cocycle reproduces the recurrence") {
  const ModelParams p = ModelParams::make(0.6, 0.8, kGolden, 0.13);
  const Complex z = on_circle(0.31);
  const auto phis = szego_polynomials(p, z, 30);
  Complex phi = 1.0, star = 1.0;
  for (long n = 0; n < 30; ++n) {
    const Complex a = oracle::alpha(p, n), r = std::abs(oracle::rho(p, n));
    const Complex next = (z * phi - std::conj(a) * star) / r;
    star = (star - a * z * phi) / r;
    phi = next;
    CHECK(std::abs(phis[static_cast<size_t>(n + 1)].phi - phi) <= 1e-12 * std::abs(phi));
    // On the circle |phi*| = |phi|.
    CHECK(std::abs(phi) == doctest::Approx(std::abs(star)).epsilon(1e-12));
  }
  CHECK((cocycle_step(p, CocycleKind::Szego1, 7, z).m - szego_ref(p, 7, z)).norm() <= 1e-14);
}

TEST_CASE("two-step forms are the stated products") {
  const ModelParams p = ModelParams::make(0.3, 0.7, kGolden, 0.27);
  const Complex z = on_circle(0.61);
  for (long j = -2; j < 5; ++j) {
    const ModelParams pj = p.with_theta(p.theta);
    const Mat2 s2 = szego_ref(pj, 2 * j + 1, z) * szego_ref(pj, 2 * j, z) / z;
    CHECK((cocycle_step(p, CocycleKind::Szego2, j, z).m - s2).norm() <= 1e-13 * s2.norm());
    const Mat2 m2 = cocycle_step(p, CocycleKind::GZ, 2 * j + 2, z).m * cocycle_step(p, CocycleKind::GZ, 2 * j + 1, z).m;
    CHECK((cocycle_step(p, CocycleKind::GZ2, j, z).m - m2).norm() <= 1e-13 * m2.norm());
  }
}

TEST_CASE("cocycle determinants have unit modulus on the circle") {
  const ModelParams p = ModelParams::make(0.5, 0.9, kGolden, 0.05);
  const Complex z = on_circle(0.2);
  for (CocycleKind k : {CocycleKind::Szego1, CocycleKind::Szego2, CocycleKind::GZ, CocycleKind::GZ2,
                        CocycleKind::Standard})
    for (long n = 1; n < 6; ++n)
      CHECK(std::abs(cocycle_step(p, k, n, z).m.determinant()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("conjugacy identities hold over random draws") {
  auto g = oracle::rng(11);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const ModelParams p =
        ModelParams::make(oracle::unif(g, 0.05, 0.95), oracle::unif(g, 0.05, 0.95), kGolden, oracle::unif(g));
    const ConjugacyResiduals r = conjugacy_residuals(p, oracle::unif(g), on_circle(oracle::unif(g)));
    worst = std::max({worst, r.r1, r.r2});
  }
  CHECK(worst <= 1e-12);
  CHECK_THROWS_AS(conjugacy_residuals(ModelParams::make(0.0, 0.5, kGolden, 0.1), 0.1, 1.0), SingularConjugator);
}

TEST_CASE("renormalised transfer product equals the naive product") {
  const ModelParams p = ModelParams::make(0.5, 0.9, kGolden, 0.4);
  const Complex z = on_circle(0.12);
  Mat2 naive = Mat2::Identity();
  for (long k = 0; k < 70; ++k) naive = cocycle_step(p, CocycleKind::GZ, k, z).m * naive;
  const TransferProduct t = transfer_product(p, CocycleKind::GZ, 0.4, z, 70);
  CHECK((t.matrix.m * std::exp(t.log_scale) - naive).norm() <= 1e-11 * naive.norm());
  CHECK(t.log_norms.size() == 70);
  const TransferProduct one = transfer_product(p, CocycleKind::Szego1, 0.4, z, 1);
  CHECK((one.matrix.m - cocycle_step(p, CocycleKind::Szego1, 0, z).m).norm() <= 1e-15);
}

TEST_CASE("Lyapunov estimate approaches the closed form") {
  const ModelParams p = ModelParams::make(0.6, 0.8, kGolden, 0.13);
  const double L = lyapunov_closed_form(p);
  CHECK(L == doctest::Approx(std::log(0.8 * 1.8 / (0.6 * 1.6))).epsilon(1e-14));
  // The closed form holds on the spectrum; inside a gap the exponent is larger.
  const Spectrum s = truncated_spectrum(p, 300);
  const LyapunovEstimate e = lyapunov_estimate(p, CocycleKind::Szego2, s.z[100], 20000, 4);
  CHECK(std::abs(e.mean - L) <= 0.02);
  CHECK(lyapunov_estimate(p, CocycleKind::Szego2, on_circle(0.3), 20000, 1).mean >= L - 0.02);
  const LyapunovConstants c = lyapunov_constants(p);
  CHECK(c.L == doctest::Approx(L));
  CHECK(lyapunov_closed_form(ModelParams::make(0.8, 0.6, kGolden, 0.1)) == 0.0);
  CHECK_THROWS_AS(lyapunov_closed_form(ModelParams::make(0.0, 0.6, kGolden, 0.1)), DivergentRate);
}

TEST_CASE("integral of ln|rho| over the torus") {
  const LogRhoIntegral r = log_rho_integral_check(ModelParams::make(0.6, 0.8, kGolden, 0.0), 4096);
  CHECK(r.numeric == doctest::Approx(r.closed).epsilon(1e-12));
  CHECK(r.closed == doctest::Approx(std::log(0.6 * 1.6 / 2.0)));
}

TEST_CASE("vanishing rho is refused") {
  // lambda2 = 1 makes rho_1 = cos 2 pi theta, which vanishes at theta = 1/4.
  const ModelParams p = ModelParams::make(0.5, 1.0, kGolden, 0.25);
  CHECK_THROWS_AS(cocycle_step(p, CocycleKind::Szego1, 1, on_circle(0.1)), SingularCoefficient);
  CHECK_THROWS_AS(cocycle_step(p, CocycleKind::Szego1, 0, 0.0), InvalidParameter);
}
