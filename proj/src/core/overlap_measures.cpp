#include "core/overlap_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/distributions.hpp"

namespace ovl {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double pianka(const MomentTable& t) {
  const double i20 = t.at(2, 0);
  const double i02 = t.at(0, 2);
  if (!(i20 > 0.0) || !(i02 > 0.0)) {
    throw degenerate_error("a density has zero L2 norm on the support; Pianka's measure is undefined");
  }
  return t.at(1, 1) / std::sqrt(i20 * i02);
}

double macarthur_levins(const MomentTable& t) {
  const double i20 = t.at(2, 0);
  if (!(i20 > 0.0)) {
    throw degenerate_error(
        "the first density has zero L2 norm on the support; the MacArthur-Levins measure is undefined");
  }
  return t.at(1, 1) / i20;
}

double pianka_variance(const MomentTable& t, double k02) {
  const double i11 = t.at(1, 1);
  const double i20 = t.at(2, 0);
  const double i02 = t.at(0, 2);
  const double E = i20 * i20 * i20 * i02 * i02 * i02;
  if (!(E > 0.0)) {
    throw degenerate_error("zero norm product; the asymptotic variance is undefined");
  }
  const double A = t.at(0, 3) * i11 * i11 * i20 * i20;
  const double B = t.at(0.5, 2.5) * i11 * i20 * i20 * i02;
  const double C =
      i02 * i02 * (i20 * i20 * t.at(1, 2) + i20 * i20 * t.at(2, 1) + i11 * i11 * t.at(3, 0));
  const double D = i11 * i20 * i02 * i02 * t.at(2.5, 0.5);
  return k02 * (A - 2.0 * B + C - 2.0 * D) / E;
}

double pianka_variance_gradient(const MomentTable& t, double k02) {
  const double t1 = t.at(1, 1);
  const double t2 = t.at(2, 0);
  const double t3 = t.at(0, 2);
  if (!(t2 > 0.0) || !(t3 > 0.0)) {
    throw degenerate_error("zero norm; the asymptotic variance is undefined");
  }
  const double g1 = 1.0 / std::sqrt(t2 * t3);
  const double g2 = -0.5 * t1 / (std::pow(t2, 1.5) * std::sqrt(t3));
  const double g3 = -0.5 * t1 / (std::sqrt(t2) * std::pow(t3, 1.5));
  // Covariance of the scaled plug-in vector (I_n(1,1), I_n(2,0), I_n(0,2)).
  const double s11 = t.at(2, 1) + t.at(1, 2);
  const double s12 = 2.0 * t.at(2.5, 0.5);
  const double s13 = 2.0 * t.at(0.5, 2.5);
  const double s22 = 4.0 * t.at(3, 0);
  const double s33 = 4.0 * t.at(0, 3);
  const double quad = g1 * (s11 * g1 + s12 * g2 + s13 * g3) + g2 * (s12 * g1 + s22 * g2) +
                      g3 * (s13 * g1 + s33 * g3);
  return k02 * quad;
}

double ml_variance(const MomentTable& t, double k02, MlVarianceMode mode) {
  const double i11 = t.at(1, 1);
  const double i02 = t.at(0, 2);
  if (!(i02 > 0.0)) {
    throw degenerate_error("zero denominator norm; the asymptotic variance is undefined");
  }
  const double first = (t.at(2, 1) + t.at(1, 2)) / (i02 * i02);
  if (mode == MlVarianceMode::as_printed) {
    return k02 * (first - 4.0 * t.at(0.5, 2.5) * i11 / std::pow(i02, 5) +
                  4.0 * t.at(0, 3) * i11 * i11 / std::pow(i02, 8));
  }
  return k02 * (first - 4.0 * t.at(0.5, 2.5) * i11 / std::pow(i02, 3) +
                4.0 * t.at(0, 3) * i11 * i11 / std::pow(i02, 4));
}

ConfidenceInterval confidence_interval(double point, double variance, size_t n, double h,
                                       double level) {
  if (variance < 0.0) {
    throw validation_error(
        "plug-in variance is negative; the estimate violates the assumptions behind the interval");
  }
  if (!(h > 0.0) || n < 2) {
    throw validation_error("confidence interval needs n >= 2 and h > 0");
  }
  ConfidenceInterval ci;
  ci.level = level;
  ci.z = z_multiplier(level);
  const double half = ci.z * std::sqrt(variance) / std::sqrt(static_cast<double>(n) * h);
  ci.lo = point - half;
  ci.hi = point + half;
  return ci;
}

namespace {

// Type-7 (linear interpolation) empirical quantile of a sorted vector.
double empirical_quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

MeasureResult make_measure(double point, double variance, size_t n, double h, double level,
                           std::vector<std::string>& warnings, const std::string& label) {
  MeasureResult r;
  r.point = point;
  r.variance = variance;
  if (variance < 0.0) {
    r.variance_negative = true;
    r.se = kNaN;
    r.ci = ConfidenceInterval{kNaN, kNaN, level, z_multiplier(level)};
    warnings.push_back(label +
                       ": plug-in variance is negative (assumption violation); se and interval "
                       "are reported as null");
    return r;
  }
  r.se = std::sqrt(variance) / std::sqrt(static_cast<double>(n) * h);
  r.ci = confidence_interval(point, variance, n, h, level);
  return r;
}

}  // namespace

OverlapReport estimate_overlap(const Sample& x, const Sample& y, const AnalysisConfig& cfg) {
  if (cfg.grid < 3 || cfg.grid % 2 == 0) {
    throw validation_error("grid size must be odd and >= 3, got " + std::to_string(cfg.grid));
  }
  if (!(cfg.level > 0.0 && cfg.level < 1.0)) {
    throw validation_error("confidence level must lie in (0, 1)");
  }
  const Kernel& kern = builtin_kernel(cfg.kernel);

  OverlapReport rep;
  rep.kernel = cfg.kernel;
  rep.bandwidth_desc = cfg.bandwidth_rule.describe();
  rep.grid = cfg.grid;
  rep.level = cfg.level;
  rep.n_x = x.n();
  rep.n_y = y.n();
  rep.k02 = kern.moment(0, 2);

  // The estimator theory uses one n and one h for both samples. With unequal
  // sizes we fall back to the geometric-mean n, flag the departure, and let
  // the reader judge.
  if (x.n() == y.n()) {
    rep.n_common = x.n();
  } else {
    rep.n_common = static_cast<size_t>(
        std::llround(std::sqrt(static_cast<double>(x.n()) * static_cast<double>(y.n()))));
    rep.warnings.push_back(
        "unequal sample sizes (" + std::to_string(x.n()) + " vs " + std::to_string(y.n()) +
        "): the asymptotic theory assumes a common n; using the geometric mean n = " +
        std::to_string(rep.n_common) + " for bandwidth and interval scaling — results are "
        "outside the stated assumptions");
  }
  if (x.n() < 10 || y.n() < 10) {
    rep.warnings.push_back("a sample has fewer than 10 observations; asymptotic results are "
                           "unreliable at this size");
  }
  rep.h = bandwidth(cfg.bandwidth_rule, rep.n_common);

  switch (cfg.support_policy) {
    case AnalysisConfig::SupportPolicy::automatic: {
      // Union of the two per-sample default supports: the smallest interval
      // carrying all the mass of both estimates.
      const SupportInterval sx = default_support(x, kern, rep.h);
      const SupportInterval sy = default_support(y, kern, rep.h);
      rep.support = make_support(std::min(sx.lo, sy.lo), std::max(sx.hi, sy.hi));
      rep.support_policy = "auto";
      break;
    }
    case AnalysisConfig::SupportPolicy::explicit_interval:
      rep.support = make_support(cfg.support_lo, cfg.support_hi);
      rep.support_policy = "explicit";
      break;
    case AnalysisConfig::SupportPolicy::quantile: {
      if (!(cfg.support_q > 0.5 && cfg.support_q < 1.0)) {
        throw validation_error("support quantile must lie in (0.5, 1)");
      }
      std::vector<double> pooled;
      pooled.reserve(x.n() + y.n());
      pooled.insert(pooled.end(), x.values.begin(), x.values.end());
      pooled.insert(pooled.end(), y.values.begin(), y.values.end());
      std::sort(pooled.begin(), pooled.end());
      rep.support = make_support(empirical_quantile(pooled, 1.0 - cfg.support_q),
                                 empirical_quantile(pooled, cfg.support_q));
      rep.support_policy = "quantile(" + std::to_string(cfg.support_q) + ")";
      break;
    }
  }

  const DensityEstimate fx = kde_grid(x, kern, rep.h, rep.support, cfg.grid);
  const DensityEstimate gy = kde_grid(y, kern, rep.h, rep.support, cfg.grid);
  rep.diag_x = assumption_diagnostics(fx);
  rep.diag_y = assumption_diagnostics(gy);
  if (rep.diag_x.low_density_warning || rep.diag_y.low_density_warning) {
    rep.warnings.push_back(
        "an estimated density falls to ~0 somewhere on the support; the variance formulas assume "
        "densities bounded away from zero, so intervals may be unreliable");
  }

  rep.table = build_moment_table(fx.values, gy.values, rep.support);

  const size_t n = rep.n_common;
  const double h = rep.h;
  rep.pianka = make_measure(pianka(rep.table), pianka_variance(rep.table, rep.k02), n, h,
                            cfg.level, rep.warnings, "pianka");

  const MomentTable swapped = rep.table.swapped();
  // ml_variance is oriented with the denominator norm on the SECOND density,
  // so the f-denominator measure I(1,1)/I(2,0) takes the swapped table.
  rep.ml_fg = make_measure(macarthur_levins(rep.table),
                           ml_variance(swapped, rep.k02, MlVarianceMode::rederived), n, h,
                           cfg.level, rep.warnings, "macarthur_levins(f,g)");
  rep.ml_gf = make_measure(macarthur_levins(swapped),
                           ml_variance(rep.table, rep.k02, MlVarianceMode::rederived), n, h,
                           cfg.level, rep.warnings, "macarthur_levins(g,f)");
  rep.ml_fg_variance_as_printed = ml_variance(swapped, rep.k02, MlVarianceMode::as_printed);
  rep.ml_gf_variance_as_printed = ml_variance(rep.table, rep.k02, MlVarianceMode::as_printed);
  return rep;
}

}  // namespace ovl
