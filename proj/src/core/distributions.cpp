#include "core/distributions.hpp"

#include <cmath>
#include <string>

#include "core/kernels.hpp"

namespace ovl {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Rational initial guess for the standard normal quantile (central and tail
// branches), accurate to about 1e-9 before refinement.
double quantile_seed(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}
}  // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw validation_error("normal quantile requires a probability in (0, 1), got " +
                           std::to_string(p));
  }
  double x = quantile_seed(p);
  // One Halley step against the erfc-based CDF pins the error well below 1e-8.
  const double e = norm_cdf(x) - p;
  const double u = e / norm_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double z_multiplier(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw validation_error("confidence level must lie in (0, 1), got " + std::to_string(level));
  }
  return norm_quantile(1.0 - (1.0 - level) / 2.0);
}

double logistic_pdf(double x, double theta1, double theta2) {
  if (!(theta2 > 0.0)) throw validation_error("logistic scale must be positive");
  const double t = std::exp(-std::abs(x - theta1) / theta2);
  const double denom = (1.0 + t);
  return t / (theta2 * denom * denom);
}

double logistic_cdf(double x, double theta1, double theta2) {
  if (!(theta2 > 0.0)) throw validation_error("logistic scale must be positive");
  return 1.0 / (1.0 + std::exp(-(x - theta1) / theta2));
}

double logistic_quantile(double p, double theta1, double theta2) {
  if (!(p > 0.0 && p < 1.0)) {
    throw validation_error("logistic quantile requires a probability in (0, 1), got " +
                           std::to_string(p));
  }
  return theta1 + theta2 * std::log(p / (1.0 - p));
}

}  // namespace ovl
