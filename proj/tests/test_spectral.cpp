#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "uamo/spectral.hpp"

using namespace uamo;

TEST_CASE("unitary truncation has N eigenvalues on the circle") {
  const ModelParams p = ModelParams::make(0.5, 0.9, kGolden, 0.13);
  const Spectrum s = truncated_spectrum(p, 300);
  CHECK(s.phases.size() == 300);
  for (const Complex& z : s.z) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-10);
  CHECK(std::is_sorted(s.phases.begin(), s.phases.end()));
  CHECK_THROWS_AS(truncated_spectrum(p, 5000), InvalidParameter);
  const Spectrum off = truncated_spectrum(p, 40, Boundary::fixed(0.3, 1.0));
  CHECK(off.nonunitary);
}

TEST_CASE("root isolation agrees with the dense solver") {
  const ModelParams p = ModelParams::make(0.6, 0.8, kGolden, 0.41);
  const Spectrum d = truncated_spectrum(p, 256), r = truncated_spectrum(p, 256, Boundary::fixed(1.0, 1.0),
                                                                        SpectrumMethod::RootIsolation);
  REQUIRE(r.phases.size() == d.phases.size());
  CHECK(r.complete);
  double haus = 0.0;
  auto dist = [](double a, double b) { return std::min(std::abs(a - b), 1.0 - std::abs(a - b)); };
  for (double x : d.phases) {
    double best = 1.0;
    for (double y : r.phases) best = std::min(best, dist(x, y));
    haus = std::max(haus, best);
  }
  CHECK(haus <= 1e-8);
}

TEST_CASE("rational frequency opens q - 1 gaps") {
  for (long q : {3L, 5L}) {
    const ModelParams p = ModelParams::make(0.5, 0.9, 2.0 / static_cast<double>(q), 0.13);
    const Spectrum s = truncated_spectrum(p, 40 * q);
    std::vector<double> gaps;
    for (size_t i = 0; i < s.phases.size(); ++i)
      gaps.push_back(i + 1 < s.phases.size() ? s.phases[i + 1] - s.phases[i] : 1.0 + s.phases[0] - s.phases[i]);
    std::vector<double> sorted = gaps;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    const long big = std::count_if(gaps.begin(), gaps.end(), [&](double g) { return g > 10.0 * median; });
    CHECK(big >= q - 1);
  }
}

TEST_CASE("eigenpair extraction against a dense eigenvector") {
  const ModelParams p = ModelParams::make(0.5, 0.9, kGolden, 0.13);
  const CMVWindow w(p, 1, 256, Boundary::fixed(1.0, 1.0));
  Eigen::ComplexEigenSolver<CMatrix> es(w.dense_W());
  const Eigen::Index k = 100;
  const double ph = frac(std::arg(es.eigenvalues()(k)) / (2.0 * M_PI));
  const EigenPair e = eigenpair_extract(p, 256, ph);
  CHECK(std::abs(e.z - es.eigenvalues()(k)) <= 1e-10);
  CHECK(e.psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const CVector ref = es.eigenvectors().col(k).normalized();
  CHECK(std::abs(std::abs(ref.dot(e.psi)) - 1.0) <= 1e-9);
  CHECK(e.residual <= 1e-10);
}

TEST_CASE("large window eigenpair and the GZ step identity") {
  const ModelParams p = ModelParams::make(0.5, 0.9, kGolden, 0.13);
  const EigenPair e = eigenpair_extract(p, 2000, central_eigenphase(p, 1000));
  CHECK(e.residual <= 1e-10);
  CHECK(std::abs(std::abs(e.z) - 1.0) <= 1e-10);
  const GZSolutionPair g = gz_pair(e);
  CHECK(gz_residual(e, g) <= 1e-9);
  CHECK(e.log_abs_at(e.center) == doctest::Approx(std::log(e.psi.cwiseAbs().maxCoeff())));
}

TEST_CASE("decay rate matches half the Lyapunov exponent") {
  const ModelParams p = ModelParams::make(0.6, 0.8, kGolden, 0.13);
  const EigenPair e = eigenpair_extract(p, 2000, central_eigenphase(p, 1000));
  const DecayFit f = decay_rate_fit(e);
  const double target = -0.5 * lyapunov_closed_form(p);
  CHECK(target == doctest::Approx(-0.202733).epsilon(1e-5));
  CHECK(std::abs(f.slope - target) <= 0.1 * std::abs(target));
  CHECK_FALSE(f.flagged_no_decay);
}

TEST_CASE("equal couplings show no decay") {
  const ModelParams p = ModelParams::make(0.7, 0.7, kGolden, 0.13);
  const EigenPair e = eigenpair_extract(p, 1000, central_eigenphase(p, 500));
  try {
    CHECK(decay_rate_fit(e).flagged_no_decay);
  } catch (const UninformativeFit&) {
    // A delocalised state may peak near the edge; that is also a negative finding.
    CHECK(true);
  }
}

TEST_CASE("linear fit") {
  const LinearFit f = linear_fit({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
}

TEST_CASE("localization scheme at y = 1000") {
  // Direct enumeration of Fibonacci denominators.
  std::vector<long> q = {1, 1};
  while (q.back() < 100000) q.push_back(q[q.size() - 1] + q[q.size() - 2]);
  const double eps = 0.01;
  const long y = 1000;
  size_t n = 1;
  while (!(eps * q[n] < y && y < q[n + 1] / 20.0)) ++n;
  size_t m = 0;
  for (size_t k = 0; k < q.size(); ++k)
    if (6 * q[k] <= y) m = k;
  const long s = y / (6 * q[m]);

  const LocalizationScheme sc = localization_scheme(y, kGolden, eps);
  CHECK(sc.q_n == q[n]);
  CHECK(sc.q_n == 17711);
  CHECK(sc.q_m == 144);
  CHECK(sc.s == s);
  CHECK(sc.h == 286);
  CHECK(std::max(eps * sc.q_n, 6.0 * sc.s * sc.q_m) <= y);
  CHECK(y < std::min(6 * (sc.s + 1) * sc.q_m, 6 * sc.q_m1));
  const long sq = sc.s * sc.q_m;
  CHECK(sc.I1.odd_count() == sq / 2);
  CHECK(sc.I2.odd_count() == sq / 2);
  CHECK(sc.I1.hi - sc.I1.lo + 1 == sq);
  for (long x : sc.I1.odd()) CHECK(x % 2 != 0);
}

TEST_CASE("scheme unavailable below the first scale") {
  CHECK_THROWS_AS(localization_scheme(3, kGolden, 0.05), SchemeUnavailable);
  try {
    localization_scheme(3, kGolden, 0.05);
  } catch (const SchemeUnavailable& e) {
    CHECK(e.nearest_valid_y > 3);
    CHECK_NOTHROW(localization_scheme(e.nearest_valid_y, kGolden, 0.05));
  }
}

TEST_CASE("certificate replay on a localized state and on the control") {
  const ModelParams p = ModelParams::make(0.5, 0.9, kGolden, 0.13);
  const EigenPair e = eigenpair_extract(p, 2000, central_eigenphase(p, 1000));
  const LocalizationCertificate c = certificate_replay(p, e, 400, 0.05);
  CHECK(c.passed);
  CHECK(c.margin_P > 0.0);
  CHECK(c.x2 - c.x1 + 1 == c.scheme.h);
  CHECK(c.x1 - c.translation >= c.scheme.I1.lo);
  CHECK(c.contraction < 1.0);

  const ModelParams ctl = ModelParams::make(0.7, 0.7, kGolden, 0.13);
  const EigenPair ec = eigenpair_extract(ctl, 2000, central_eigenphase(ctl, 1000));
  CHECK_FALSE(certificate_replay(ctl, ec, 400, 0.05).passed);
}

TEST_CASE("certificate margins improve with the window") {
  const ModelParams p = ModelParams::make(0.5, 0.9, kGolden, 0.13);
  // Windows share the centre so the same eigenstate is refined.
  const double ph = central_eigenphase(p, 1000);
  double prev = -INFINITY;
  for (long N : {1000L, 2000L, 4000L}) {
    EigenOptions o;
    o.a = 1001 - N / 2;
    const EigenPair e = eigenpair_extract(p, N, ph, o);
    const LocalizationCertificate c = certificate_replay(p, e, 300, 0.05);
    const double worst = std::min({c.margin_P, c.margin_nu1, c.margin_nu2});
    CHECK(worst >= prev - 1e-6);
    prev = worst;
  }
}

TEST_CASE("spreading diagnostics") {
  const ModelParams p = ModelParams::make(0.5, 0.9, kGolden, 0.13);
  const SpreadSeries zero = evolve_moments(p, 200, 0);
  REQUIRE(zero.x2.size() == 1);
  CHECK(zero.x2[0] == 0.0);
  const SpreadSeries free = evolve_moments(ModelParams::make(0.5, 0.0, kGolden, 0.0), 1200, 200, 10);
  for (double v : free.x2) CHECK(v >= 0.0);
  CHECK_FALSE(free.truncated);
  std::vector<double> t2, x2;
  for (size_t i = 1; i < free.times.size(); ++i) {
    t2.push_back(static_cast<double>(free.times[i]) * free.times[i]);
    x2.push_back(free.x2[i]);
  }
  CHECK(linear_fit(t2, x2).r2 >= 0.999);
  const SpreadSeries hit = evolve_moments(ModelParams::make(0.5, 0.0, kGolden, 0.0), 200, 400);
  CHECK(hit.truncated);
}

TEST_CASE("spread trend on synthetic series") {
  SpreadSeries s;
  for (long t = 0; t <= 1000; ++t) {
    s.times.push_back(t);
    s.x2.push_back(static_cast<double>(t) * t);
  }
  const SpreadTrend tr = spread_trend(s);
  CHECK(tr.raw.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(tr.cesaro.slope == doctest::Approx(2.0).epsilon(0.01));
  CHECK(tr.points == 901);

  SpreadSeries flat;
  for (long t = 0; t <= 1000; ++t) {
    flat.times.push_back(t);
    flat.x2.push_back(1.0 + 0.8 * std::sin(0.37 * t));
  }
  const SpreadTrend ft = spread_trend(flat);
  CHECK(std::abs(ft.cesaro.slope) < 0.01);
  CHECK_THROWS_AS(spread_trend(SpreadSeries{}), UninformativeFit);
}
