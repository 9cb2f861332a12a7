#include <doctest.h>

#include <cmath>
#include <random>

#include "core/distributions.hpp"
#include "core/kernels.hpp"
#include "core/quadrature.hpp"
#include "core/truncated.hpp"
#include "golden_values.hpp"

using ovl::SupportInterval;
using ovl::TruncatedDensity;

TEST_CASE("near-untruncated normal reproduces the unrestricted density") {
  const SupportInterval s = ovl::make_support(-10.0, 10.0);
  const auto d = TruncatedDensity::normal(0.0, 1.0, s);
  CHECK(d.pdf(0.0) == doctest::Approx(golden::kStdNormalPdfAt0).epsilon(1e-8));
  CHECK(d.pdf(11.0) == 0.0);
  CHECK(d.pdf(-10.0001) == 0.0);
  CHECK(d.norm_const() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(d.mean() == doctest::Approx(0.0).epsilon(1e-12));

  // pdf integrates to one over the support.
  const int m = 20001;
  const double total = ovl::integrate(d.grid_values(s, m), s);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("normalizing constants of the simulation configurations") {
  const SupportInterval s1 = ovl::make_support(-golden::kCaseISupportA, golden::kCaseISupportA);
  CHECK(TruncatedDensity::normal(1.0, 4.0, s1).norm_const() ==
        doctest::Approx(golden::kCaseINormF).epsilon(1e-11));
  CHECK(TruncatedDensity::normal(5.0, 4.5, s1).norm_const() ==
        doctest::Approx(golden::kCaseINormG).epsilon(1e-11));

  const SupportInterval s2 = ovl::make_support(-golden::kCaseIISupportA, golden::kCaseIISupportA);
  CHECK(TruncatedDensity::normal(5.0, 4.0, s2).norm_const() ==
        doctest::Approx(golden::kCaseIINormF).epsilon(1e-11));
  CHECK(TruncatedDensity::logistic(0.0, 3.0, s2).norm_const() ==
        doctest::Approx(golden::kCaseIINormG).epsilon(1e-11));
}

TEST_CASE("support from a quantile of the untruncated law") {
  const SupportInterval s1 =
      ovl::support_from_quantile(TruncatedDensity::Family::normal, 1.0, 4.0, 0.995);
  CHECK(s1.hi == doctest::Approx(golden::kCaseISupportA).epsilon(1e-11));
  CHECK(s1.lo == doctest::Approx(-golden::kCaseISupportA).epsilon(1e-11));

  const SupportInterval s2 =
      ovl::support_from_quantile(TruncatedDensity::Family::normal, 5.0, 4.0, 0.995);
  CHECK(s2.hi == doctest::Approx(golden::kCaseIISupportA).epsilon(1e-11));

  CHECK_THROWS_AS((void)ovl::support_from_quantile(TruncatedDensity::Family::normal, 0.0, 1.0, 0.4),
                  ovl::validation_error);
  CHECK_THROWS_AS((void)ovl::support_from_quantile(TruncatedDensity::Family::normal, 0.0, 1.0, 1.0),
                  ovl::validation_error);
}

TEST_CASE("degenerate truncation is rejected") {
  // Support far out in the tail leaves no probability mass to normalize.
  const SupportInterval far = ovl::make_support(60.0, 61.0);
  CHECK_THROWS_AS((void)TruncatedDensity::normal(0.0, 1.0, far), ovl::degenerate_error);
  CHECK_THROWS_AS((void)TruncatedDensity::normal(0.0, -1.0, ovl::make_support(-1.0, 1.0)),
                  ovl::validation_error);
}

TEST_CASE("truncated mean closed form") {
  const SupportInterval s1 = ovl::make_support(-golden::kCaseISupportA, golden::kCaseISupportA);
  const auto f = TruncatedDensity::normal(1.0, 4.0, s1);
  CHECK(f.mean() == doctest::Approx(golden::kCaseITruncMean).epsilon(1e-8));

  // Cross-check against direct quadrature of x * pdf(x).
  const int m = 40001;
  std::vector<double> xs(static_cast<size_t>(m));
  const double step = s1.length() / (m - 1);
  for (int i = 0; i < m; ++i) {
    const double x = s1.lo + step * i;
    xs[static_cast<size_t>(i)] = x * f.pdf(x);
  }
  CHECK(ovl::integrate(xs, s1) == doctest::Approx(f.mean()).epsilon(1e-9));

  // Logistic mean (computed by quadrature internally): symmetric location 0.
  const SupportInterval s2 = ovl::make_support(-golden::kCaseIISupportA, golden::kCaseIISupportA);
  CHECK(TruncatedDensity::logistic(0.0, 3.0, s2).mean() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("second derivative of the truncated normal") {
  const SupportInterval s1 = ovl::make_support(-golden::kCaseISupportA, golden::kCaseISupportA);
  const auto f = TruncatedDensity::normal(1.0, 4.0, s1);
  CHECK(f.pdf(1.0) == doctest::Approx(golden::kCaseIFAt1).epsilon(1e-10));
  CHECK(f.second_derivative(1.0) == doctest::Approx(golden::kCaseIFSecondDerivAt1).epsilon(1e-10));

  // Finite-difference confirmation.
  const double eps = 1e-4;
  const double fd = (f.pdf(1.0 + eps) - 2 * f.pdf(1.0) + f.pdf(1.0 - eps)) / (eps * eps);
  CHECK(fd == doctest::Approx(f.second_derivative(1.0)).epsilon(1e-6));

  // Logistic second derivative: finite-difference check only.
  const SupportInterval s2 = ovl::make_support(-golden::kCaseIISupportA, golden::kCaseIISupportA);
  const auto g = TruncatedDensity::logistic(0.0, 3.0, s2);
  const double fd2 = (g.pdf(2.0 + eps) - 2 * g.pdf(2.0) + g.pdf(2.0 - eps)) / (eps * eps);
  CHECK(fd2 == doctest::Approx(g.second_derivative(2.0)).epsilon(1e-6));
}

TEST_CASE("inverse-CDF draws stay inside the support and match the quantile map") {
  const SupportInterval s1 = ovl::make_support(-golden::kCaseISupportA, golden::kCaseISupportA);
  const auto f = TruncatedDensity::normal(1.0, 4.0, s1);

  std::mt19937_64 gen(20240817);
  const auto sample = f.draw(100000, gen);
  REQUIRE(sample.n() == 100000);
  double sum = 0.0;
  for (double x : sample.values) {
    CHECK(x >= s1.lo);
    CHECK(x <= s1.hi);
    sum += x;
  }
  // Sample mean within 4 standard errors of the exact truncated mean
  // (sd < 4, so se < 0.0127).
  CHECK(std::abs(sum / 100000.0 - f.mean()) < 4.0 * 4.0 / std::sqrt(100000.0));

  // Quantiles invert the truncated CDF: integrating the pdf up to
  // quantile(p) recovers p. (The truncation window is not centered on the
  // mean, so the median is slightly below 1.)
  for (double p : {0.1, 0.5, 0.9}) {
    const double q = f.quantile(p);
    const int mq = 20001;
    std::vector<double> vals(static_cast<size_t>(mq));
    const double stepq = (q - s1.lo) / (mq - 1);
    for (int i = 0; i < mq; ++i) {
      vals[static_cast<size_t>(i)] = f.pdf(s1.lo + stepq * i);
    }
    CHECK(ovl::integrate(vals, ovl::make_support(s1.lo, q)) == doctest::Approx(p).epsilon(1e-8));
  }
  CHECK(f.quantile(0.5) < 1.0);
  // A symmetric window around a symmetric density does keep the median put.
  const auto sym = TruncatedDensity::normal(0.0, 1.0, ovl::make_support(-3.0, 3.0));
  CHECK(sym.quantile(0.5) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK_THROWS_AS((void)f.quantile(0.0), ovl::validation_error);

  // Determinism: identical seeds produce identical samples.
  std::mt19937_64 g1(42), g2(42);
  const auto a = f.draw(50, g1);
  const auto b = f.draw(50, g2);
  CHECK(a.values == b.values);
}

TEST_CASE("describe names the family and parameters") {
  const SupportInterval s = ovl::make_support(-2.0, 2.0);
  const auto f = TruncatedDensity::normal(0.5, 1.5, s);
  const std::string d = f.describe();
  CHECK(d.find("normal") != std::string::npos);
  const auto g = TruncatedDensity::logistic(0.0, 3.0, s);
  CHECK(g.describe().find("logistic") != std::string::npos);
}
