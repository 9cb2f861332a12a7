#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "core/kde.hpp"
#include "core/quadrature.hpp"

namespace ovl {

// An analytic density restricted to a compact support and renormalized:
// pdf(x) = base_pdf(x) / (F(hi) - F(lo)) inside [lo, hi], zero outside.
// These serve as simulation ground truth with exactly computable moments.
class TruncatedDensity {
 public:
  enum class Family { normal, logistic };

  static TruncatedDensity normal(double mu, double sigma, const SupportInterval& support);
  static TruncatedDensity logistic(double theta1, double theta2, const SupportInterval& support);

  double pdf(double x) const;           // 0 outside the support
  double second_derivative(double x) const;  // of the truncated pdf, inside the support
  double quantile(double p) const;      // of the truncated law, p in (0,1)
  double mean() const;                  // closed form (normal) / quadrature (logistic)

  // n i.i.d. draws by inverse-CDF sampling restricted to [F(lo), F(hi)].
  Sample draw(size_t n, std::mt19937_64& gen) const;

  // Density values on a uniform grid over an interval (possibly wider than
  // the truncation support, where the pdf is zero).
  std::vector<double> grid_values(const SupportInterval& on, int m) const;

  const SupportInterval& support() const { return support_; }
  double norm_const() const { return norm_const_; }
  Family family() const { return family_; }
  std::string describe() const;

 private:
  TruncatedDensity(Family fam, double a, double b, const SupportInterval& support);

  double base_pdf(double x) const;
  double base_cdf(double x) const;
  double base_quantile(double p) const;

  Family family_;
  double p1_;  // mu / theta1
  double p2_;  // sigma / theta2
  SupportInterval support_;
  double cdf_lo_ = 0.0;
  double norm_const_ = 1.0;
};

// The symmetric support [-a, a] with a = the q-quantile of the *untruncated*
// density (q in (0.5, 1)); the convention used by the simulation scenarios.
SupportInterval support_from_quantile(const TruncatedDensity::Family& family, double param1,
                                      double param2, double q);

}  // namespace ovl
