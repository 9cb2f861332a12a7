#pragma once

#include <string>
#include <vector>

#include "core/kde.hpp"
#include "core/quadrature.hpp"

namespace ovl {

// Pianka's measure I(1,1)/sqrt(I(2,0)*I(0,2)) — the cosine of the angle
// between the two densities in L2 of the common support.
double pianka(const MomentTable& t);

// MacArthur-Levins measure I(1,1)/I(2,0) (first density's squared norm in the
// denominator). The reversed orientation is macarthur_levins(t.swapped()).
double macarthur_levins(const MomentTable& t);

// Asymptotic variance sigma^2 of the scaled statistic
// sqrt(n*h)*(rho(f_n,g_n) - rho(f,g)), evaluated on a moment table:
// k02 * (A - 2B + C - 2D) / E with
//   A = I(0,3)*I(1,1)^2*I(2,0)^2
//   B = I(1/2,5/2)*I(1,1)*I(2,0)^2*I(0,2)
//   C = I(0,2)^2*(I(2,0)^2*I(1,2) + I(2,0)^2*I(2,1) + I(1,1)^2*I(3,0))
//   D = I(1,1)*I(2,0)*I(0,2)^2*I(5/2,1/2)
//   E = I(2,0)^3*I(0,2)^3
double pianka_variance(const MomentTable& t, double k02);

// The same quantity through the delta-method route: gradient of
// psi(t1,t2,t3) = t1/sqrt(t2*t3) against the 3x3 covariance of the scaled
// plug-in moment vector. Equal to pianka_variance to rounding error; kept as
// an independent path for cross-checking.
double pianka_variance_gradient(const MomentTable& t, double k02);

// Asymptotic variance of the scaled MacArthur-Levins statistic in the
// orientation whose denominator is the SECOND density's squared norm I(0,2).
// Two modes ship because the source formulas are internally inconsistent:
//   as_printed:  k02 * [ (I(2,1)+I(1,2))/I(0,2)^2
//                        - 4*I(1/2,5/2)*I(1,1)/I(0,2)^5
//                        + 4*I(0,3)*I(1,1)^2/I(0,2)^8 ]
//   rederived:   same first term, but denominator powers I(0,2)^3 and
//                I(0,2)^4, as the delta-method gradient (1/t2, -t1/t2^2)
//                actually implies.
// `rederived` is the default; the Monte Carlo acceptance experiment
// arbitrates empirically. For the variance of I(1,1)/I(2,0) apply these to
// t.swapped().
enum class MlVarianceMode { as_printed, rederived };
double ml_variance(const MomentTable& t, double k02, MlVarianceMode mode);

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.0;
  double z = 0.0;
};

// point -/+ z * sqrt(variance) / sqrt(n*h); z is the two-sided normal
// multiplier for `level`.
ConfidenceInterval confidence_interval(double point, double variance, size_t n, double h,
                                       double level);

// Configuration for a full two-sample analysis.
struct AnalysisConfig {
  enum class SupportPolicy { automatic, explicit_interval, quantile };

  std::string kernel = "epanechnikov";
  BandwidthRule bandwidth_rule = BandwidthRule::two_thirds();
  SupportPolicy support_policy = SupportPolicy::automatic;
  double support_lo = 0.0;  // explicit_interval only
  double support_hi = 0.0;
  double support_q = 0.995;  // quantile policy: pooled empirical [1-q, q]
  int grid = 1001;
  double level = 0.95;
};

// One measure's worth of results inside a report. A negative plug-in variance
// is flagged (variance_negative) and leaves se/CI unset rather than being
// clamped: it signals an assumption violation the user must see.
struct MeasureResult {
  double point = 0.0;
  double variance = 0.0;  // default-mode sigma^2 of the scaled statistic
  double se = 0.0;
  ConfidenceInterval ci;
  bool variance_negative = false;
};

// Full result of estimate_overlap. Everything a reader needs to reproduce the
// run is echoed: kernel, bandwidth rule, support policy and the realized
// support, grid size, and sample sizes.
struct OverlapReport {
  std::string kernel;
  std::string bandwidth_desc;
  std::string support_policy;
  SupportInterval support;
  int grid = 0;
  double level = 0.0;
  size_t n_x = 0;
  size_t n_y = 0;
  size_t n_common = 0;  // the n entering h and the CI scaling
  double h = 0.0;
  double k02 = 0.0;

  MeasureResult pianka;
  MeasureResult ml_fg;  // I(1,1)/I(2,0)
  MeasureResult ml_gf;  // I(1,1)/I(0,2)
  double ml_fg_variance_as_printed = 0.0;
  double ml_gf_variance_as_printed = 0.0;

  MomentTable table;
  AssumptionDiagnostics diag_x;
  AssumptionDiagnostics diag_y;
  std::vector<std::string> warnings;
};

// The full pipeline: bandwidth, common support, both KDEs, moment table,
// measures, variances, confidence intervals, diagnostics.
OverlapReport estimate_overlap(const Sample& x, const Sample& y, const AnalysisConfig& cfg);

}  // namespace ovl
