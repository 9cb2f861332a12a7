#include "core/truncated.hpp"

#include <cmath>
#include <sstream>

#include "core/distributions.hpp"
#include "core/rng.hpp"

namespace ovl {

TruncatedDensity::TruncatedDensity(Family fam, double a, double b, const SupportInterval& support)
    : family_(fam), p1_(a), p2_(b), support_(support) {
  if (!(p2_ > 0.0)) throw validation_error("scale parameter must be positive");
  cdf_lo_ = base_cdf(support_.lo);
  norm_const_ = base_cdf(support_.hi) - cdf_lo_;
  if (!(norm_const_ > 0.0)) {
    throw degenerate_error("truncation support carries no probability mass");
  }
}

TruncatedDensity TruncatedDensity::normal(double mu, double sigma, const SupportInterval& support) {
  return TruncatedDensity(Family::normal, mu, sigma, support);
}

TruncatedDensity TruncatedDensity::logistic(double theta1, double theta2,
                                            const SupportInterval& support) {
  return TruncatedDensity(Family::logistic, theta1, theta2, support);
}

double TruncatedDensity::base_pdf(double x) const {
  if (family_ == Family::normal) {
    return norm_pdf((x - p1_) / p2_) / p2_;
  }
  return logistic_pdf(x, p1_, p2_);
}

double TruncatedDensity::base_cdf(double x) const {
  if (family_ == Family::normal) {
    return norm_cdf((x - p1_) / p2_);
  }
  return logistic_cdf(x, p1_, p2_);
}

double TruncatedDensity::base_quantile(double p) const {
  if (family_ == Family::normal) {
    return p1_ + p2_ * norm_quantile(p);
  }
  return logistic_quantile(p, p1_, p2_);
}

double TruncatedDensity::pdf(double x) const {
  if (x < support_.lo || x > support_.hi) return 0.0;
  return base_pdf(x) / norm_const_;
}

double TruncatedDensity::second_derivative(double x) const {
  if (x < support_.lo || x > support_.hi) return 0.0;
  if (family_ == Family::normal) {
    // d2/dx2 of the normal pdf: pdf * ((z^2 - 1)/sigma^2), z = (x-mu)/sigma.
    const double z = (x - p1_) / p2_;
    return base_pdf(x) * (z * z - 1.0) / (p2_ * p2_) / norm_const_;
  }
  // Logistic pdf in terms of its own cdf F: pdf = F(1-F)/s, so
  // pdf'' = pdf * (1 - 6*F*(1-F)) / s^2.
  const double F = base_cdf(x);
  return base_pdf(x) * (1.0 - 6.0 * F * (1.0 - F)) / (p2_ * p2_) / norm_const_;
}

double TruncatedDensity::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw validation_error("quantile requires a probability in (0, 1)");
  }
  return base_quantile(cdf_lo_ + p * norm_const_);
}

double TruncatedDensity::mean() const {
  if (family_ == Family::normal) {
    // Closed form: mu + sigma * (phi(alpha) - phi(beta)) / mass, where
    // alpha, beta are the standardized endpoints.
    const double alpha = (support_.lo - p1_) / p2_;
    const double beta = (support_.hi - p1_) / p2_;
    return p1_ + p2_ * (norm_pdf(alpha) - norm_pdf(beta)) / norm_const_;
  }
  // No convenient closed form once truncated: 20001-point Simpson.
  const int m = 20001;
  std::vector<double> vals(m);
  const double step = support_.length() / (m - 1);
  for (int i = 0; i < m; ++i) {
    const double x = support_.lo + step * i;
    vals[i] = x * pdf(x);
  }
  return integrate(vals, support_);
}

Sample TruncatedDensity::draw(size_t n, std::mt19937_64& gen) const {
  if (n < 1) throw validation_error("cannot draw an empty sample");
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    // Inverse-CDF restricted to [F(lo), F(hi)]: exact and branch-free.
    out[i] = base_quantile(cdf_lo_ + uniform01(gen) * norm_const_);
  }
  return Sample{std::move(out)};
}

std::vector<double> TruncatedDensity::grid_values(const SupportInterval& on, int m) const {
  if (m < 3 || m % 2 == 0) {
    throw validation_error("grid size must be odd and >= 3, got " + std::to_string(m));
  }
  std::vector<double> vals(m);
  const double step = on.length() / (m - 1);
  for (int i = 0; i < m; ++i) {
    vals[i] = pdf(on.lo + step * i);
  }
  return vals;
}

std::string TruncatedDensity::describe() const {
  std::ostringstream os;
  if (family_ == Family::normal) {
    os << "truncated normal(mu=" << p1_ << ", sigma=" << p2_ << ")";
  } else {
    os << "truncated logistic(location=" << p1_ << ", scale=" << p2_ << ")";
  }
  os << " on [" << support_.lo << ", " << support_.hi << "]";
  return os.str();
}

SupportInterval support_from_quantile(const TruncatedDensity::Family& family, double param1,
                                      double param2, double q) {
  if (!(q > 0.5 && q < 1.0)) {
    throw validation_error("support quantile must lie in (0.5, 1), got " + std::to_string(q));
  }
  double a = 0.0;
  if (family == TruncatedDensity::Family::normal) {
    a = param1 + param2 * norm_quantile(q);
  } else {
    a = logistic_quantile(q, param1, param2);
  }
  return make_support(-a, a);
}

}  // namespace ovl
