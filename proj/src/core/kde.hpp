#pragma once

#include <string>
#include <vector>

#include "core/kernels.hpp"
#include "core/quadrature.hpp"

namespace ovl {

// An ordered batch of real observations.
struct Sample {
  std::vector<double> values;

  size_t n() const { return values.size(); }
};

// Validates finiteness and n >= 2.
Sample make_sample(std::vector<double> values);

// Bandwidth schedules h_n. All built-in rules satisfy h -> 0, n*h -> infinity
// and n*h^3 -> 0; in particular the classic n^(-1/5) rate is intentionally
// not offered because it violates n*h^3 -> 0.
struct BandwidthRule {
  enum class Kind { power, scaled_log, root_log, two_thirds, fixed };
  Kind kind = Kind::two_thirds;
  double alpha = 0.5;  // power: h = n^(-alpha), alpha in (1/3, 1)
  double c = 0.45;     // scaled_log: h = sqrt(log n)/(c * n^p)
  double p = 2.0 / 3.0;
  double h = 0.1;  // fixed

  static BandwidthRule power(double alpha);
  static BandwidthRule scaled_log(double c, double p);
  static BandwidthRule root_log();  // sqrt(log n)/(0.45 * n^(2/3))
  static BandwidthRule two_thirds();  // 4.2/n^(2/3)
  static BandwidthRule fixed(double h);

  std::string describe() const;
};

// h_n for the rule at sample size n (n >= 2).
double bandwidth(const BandwidthRule& rule, size_t n);

// A kernel density estimate evaluated on a uniform grid.
struct DensityEstimate {
  SupportInterval support;
  std::vector<double> values;  // density at m uniformly spaced points
  double h = 0.0;
  std::string kernel;
  size_t n = 0;

  size_t m() const { return values.size(); }
  double grid_point(size_t i) const {
    return support.lo + support.length() * static_cast<double>(i) /
                            static_cast<double>(values.size() - 1);
  }
};

// Pointwise estimator value (1/(n h)) * sum K((x - X_i)/h).
double kde_eval(const Sample& s, const Kernel& k, double h, double x);

// Evaluates the estimator on m uniformly spaced points over `support`.
// m must be odd and >= 3 so downstream Simpson integration applies directly.
DensityEstimate kde_grid(const Sample& s, const Kernel& k, double h,
                         const SupportInterval& support, int m);

// The default estimation support for one sample:
// [min - h*half_width, max + h*half_width], the smallest interval containing
// all of the estimate's mass.
SupportInterval default_support(const Sample& s, const Kernel& k, double h);

// Empirical bounds of a density estimate. The theory behind the variance
// formulas assumes the true densities are bounded away from zero on the
// common support; a tiny empirical minimum is therefore worth a warning,
// never an abort.
struct AssumptionDiagnostics {
  double min_value = 0.0;        // empirical lower bound (c_f)
  double max_value = 0.0;        // empirical upper bound (C_f)
  bool low_density_warning = false;
  double threshold = 1e-6;
};

AssumptionDiagnostics assumption_diagnostics(const DensityEstimate& d,
                                             double threshold = 1e-6);

}  // namespace ovl
