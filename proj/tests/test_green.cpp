#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "uamo/arithmetic.hpp"
#include "uamo/green.hpp"

using namespace uamo;

namespace {

// Dense (z L^{-1} - M)^{-1} on [a, b] with native boundary.
CMatrix green_ref(const ModelParams& p, long a, long b, Complex z) {
  const Complex beta = oracle::alpha(p, a - 1), gamma = oracle::alpha(p, b);
  const CMatrix L = oracle::factor(p, a, b, beta, gamma, true), M = oracle::factor(p, a, b, beta, gamma, false);
  return (z * L.inverse() - M).inverse();
}

}  // namespace

TEST_CASE("Cramer form of edge Green entries") {
  const ModelParams p = ModelParams::make(0.5, 0.9, kGolden, 0.17);
  const Complex z = on_circle(0.43);
  for (auto [a, b] : {std::pair{1L, 30L}, std::pair{2L, 25L}}) {
    const CMatrix G = green_ref(p, a, b, z);
    for (long y = a; y <= b; ++y) {
      const GreenEntry l = green_entry(p, a, b, z, y, Edge::Left);
      const GreenEntry r = green_entry(p, a, b, z, y, Edge::Right);
      if (y % 2 != 0) {
        const Complex gl = G(y - a, 0), gr = G(y - a, b - a);
        CHECK(std::abs(l.direct - gl) <= 1e-10 * std::abs(gl));
        CHECK(std::abs(r.direct - gr) <= 1e-10 * std::abs(gr));
      }
      CHECK(l.cramer_abs == doctest::Approx(std::abs(l.direct)).epsilon(1e-10));
      CHECK(r.cramer_abs == doctest::Approx(std::abs(r.direct)).epsilon(1e-10));
    }
  }
}

TEST_CASE("inverse entries from principal minors") {
  const ModelParams p = ModelParams::make(0.6, 0.8, kGolden, 0.05);
  const CMVWindow w(p, 1, 20, Boundary::native());
  const Tridiagonal t = w.A(on_circle(0.7));
  const CMatrix inv = t.dense().inverse();
  for (Eigen::Index i = 0; i < 20; i += 3)
    for (Eigen::Index j : {Eigen::Index{0}, Eigen::Index{7}, Eigen::Index{19}})
      CHECK(tridiagonal_inverse_log_abs(t, i, j) == doctest::Approx(std::log(std::abs(inv(i, j)))).epsilon(1e-10));
}

TEST_CASE("Poisson formula rebuilds eigenvector values from boundary data") {
  const ModelParams p = ModelParams::make(0.5, 0.9, kGolden, 0.31);
  const CMVWindow big(p, 1, 120, Boundary::fixed(1.0, 1.0));
  Eigen::ComplexEigenSolver<CMatrix> es(big.dense_W());
  for (Eigen::Index k : {Eigen::Index{5}, Eigen::Index{60}}) {
    const Complex z = es.eigenvalues()(k);
    const CVector psi = es.eigenvectors().col(k);
    auto at = [&](long s) { return psi(s - 1); };
    for (auto [a, b] : {std::pair{31L, 80L}, std::pair{40L, 71L}, std::pair{33L, 76L}, std::pair{42L, 75L}}) {
      const PsiBoundary bd{at(a - 1), at(a), at(b), at(b + 1)};
      for (long y = a + 2; y < b - 1; y += 5) {
        const Complex rec = poisson_reconstruct(p, a, b, z, bd, y);
        CHECK(std::abs(rec - at(y)) <= 1e-9 * psi.cwiseAbs().maxCoeff());
      }
    }
  }
}
