#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "uamo/arithmetic.hpp"
#include "uamo/determinants.hpp"

using namespace uamo;

namespace {

// det(z - L M) on [a, b] with native boundary, from the entrywise factors.
Complex det_ref(const ModelParams& p, long a, long b, Complex z) {
  const Complex beta = oracle::alpha(p, a - 1), gamma = oracle::alpha(p, b);
  const CMatrix W = oracle::factor(p, a, b, beta, gamma, true) * oracle::factor(p, a, b, beta, gamma, false);
  return (z * CMatrix::Identity(W.rows(), W.cols()) - W).determinant();
}

}  // namespace

TEST_CASE("all routes reproduce the dense determinant") {
  auto g = oracle::rng(21);
  for (int t = 0; t < 40; ++t) {
    const ModelParams p = ModelParams::make(oracle::unif(g, 0.1, 0.9), oracle::unif(g, 0.1, 0.9), kGolden,
                                            oracle::unif(g));
    const long a = static_cast<long>(oracle::unif(g, -10, 10));
    const long b = a + 1 + static_cast<long>(oracle::unif(g, 0, 40));
    const Complex z = on_circle(oracle::unif(g));
    const Complex ref = det_ref(p, a, b, z);
    for (DetRoute r : {DetRoute::LU, DetRoute::CMVDirect, DetRoute::TransferSze1, DetRoute::TransferSze2}) {
      const BoxDeterminant d = box_determinant(p, a, b, z, r);
      CHECK(std::abs(d.complex_value() - ref) <= 1e-10 * std::abs(ref));
    }
  }
}

TEST_CASE("route fallback and the empty window") {
  const ModelParams p = ModelParams::make(0.5, 0.9, kGolden, 0.3);
  const Complex z = on_circle(0.1);
  CHECK(std::abs(box_determinant(p, 5, 4, z, DetRoute::LU).complex_value() - 1.0) <= 1e-15);
  const BoxDeterminant d = box_determinant(p, 1, 10, z, DetRoute::TransferSze1, Boundary::fixed(1.0, 1.0));
  CHECK(d.route == DetRoute::LU);
  const BoxDeterminant e = box_determinant(p, 1, 10, z, DetRoute::TransferSze2, Boundary{Complex(1.0), std::nullopt});
  CHECK(e.route == DetRoute::TransferSze1);
  CHECK_THROWS_AS(box_determinant(p, 1, 10, z, DetRoute::LU, Boundary::fixed(2.0, 1.0)), InvalidWindow);
}

TEST_CASE("unitary boundary gives a polynomial vanishing on the spectrum") {
  const ModelParams p = ModelParams::make(0.5, 0.9, kGolden, 0.3);
  const CMVWindow w(p, 1, 12, Boundary::fixed(1.0, 1.0));
  Eigen::ComplexEigenSolver<CMatrix> es(w.dense_W());
  for (Eigen::Index i = 0; i < 12; ++i) {
    const BoxDeterminant d = box_determinant(p, 1, 12, es.eigenvalues()(i), DetRoute::CMVDirect, Boundary::fixed(1.0, 1.0));
    CHECK(d.value.log_abs < std::log(1e-10));
  }
}

TEST_CASE("transfer matrices are determinant matrices") {
  auto g = oracle::rng(22);
  for (int t = 0; t < 30; ++t) {
    const ModelParams p = ModelParams::make(oracle::unif(g, 0.1, 0.9), oracle::unif(g, 0.1, 0.9), kGolden,
                                            oracle::unif(g));
    const long a = 1 + 2 * static_cast<long>(oracle::unif(g, 0, 5));  // odd a has alpha_{a-1} = lambda1'
    const long b = a + 2 + static_cast<long>(oracle::unif(g, 0, 30));
    const TransferIdentityResiduals r = det_transfer_identity(p, a, b, on_circle(oracle::unif(g)));
    CHECK(r.r_sze1 <= 1e-10);
    CHECK(r.r_sze2 <= 1e-10);
  }
  CHECK_THROWS_AS(det_transfer_identity(ModelParams::make(1.0, 0.5, kGolden, 0.1), 1, 8, 1.0), IdentityInapplicable);
}

TEST_CASE("upper-left entry of the two-step product") {
  const ModelParams p = ModelParams::make(0.6, 0.8, kGolden, 0.21);
  const Complex z = on_circle(0.37);
  for (long n : {1L, 3L, 8L}) {
    const UpperLeftValue u = p_upper_left(p, n, z);
    const Complex ref = det_ref(p, 1, 2 * n, z);
    CHECK(std::abs(u.normalized - ref) <= 1e-11 * std::abs(ref));
    CHECK(std::abs(u.literal) * p.lambda1 == doctest::Approx(std::abs(ref)).epsilon(1e-11));
  }
}

TEST_CASE("P on [1, 2n] is a degree-n trigonometric polynomial in theta") {
  // Interpolate from 2n + 1 equispaced samples, then predict at fresh phases.
  auto g = oracle::rng(23);
  for (long n : {2L, 5L, 9L}) {
    const Complex z = on_circle(oracle::unif(g));
    const long K = 2 * n + 1;
    std::vector<Complex> s(static_cast<size_t>(K));
    for (long k = 0; k < K; ++k)
      s[static_cast<size_t>(k)] = det_ref(ModelParams::make(0.5, 0.9, kGolden, static_cast<double>(k) / K), 1, 2 * n, z);
    for (int trial = 0; trial < 10; ++trial) {
      const double th = oracle::unif(g);
      Complex pred = 0.0;
      for (long f = -n; f <= n; ++f) {
        Complex c = 0.0;
        for (long k = 0; k < K; ++k)
          c += s[static_cast<size_t>(k)] * std::polar(1.0, -2.0 * M_PI * static_cast<double>(f * k) / K);
        pred += c / static_cast<double>(K) * std::polar(1.0, 2.0 * M_PI * static_cast<double>(f) * th);
      }
      const Complex ref = det_ref(ModelParams::make(0.5, 0.9, kGolden, th), 1, 2 * n, z);
      CHECK(std::abs(pred - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
    }
    const SinePolynomialReport r = sine_polynomial_check(ModelParams::make(0.5, 0.9, kGolden, 0.0), n, z);
    CHECK(r.tail_mass <= 1e-12);
    CHECK(r.evenness_residual <= 1e-12);
  }
}

TEST_CASE("averaged log-determinant against the two candidate constants") {
  const ModelParams p = ModelParams::make(0.6, 0.8, kGolden, 0.0);
  const AverageLogDet a = average_log_det(p, 8, on_circle(0.2), 4096);
  CHECK(a.bound_a == doctest::Approx(0.5 * std::log(0.8 * 1.8)));
  CHECK(a.bound_b == doctest::Approx(0.5 * std::log(0.8 * 1.8 / 2.0)));
  CHECK(a.numeric >= a.bound_b - 0.01);
  CHECK_THROWS_AS(average_log_det(p, 8, 1.0, 100), InvalidParameter);
}
