#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/kde.hpp"
#include "core/overlap_measures.hpp"
#include "core/truncated.hpp"

namespace ovl {

// Configuration of one replication experiment: draw M pairs of samples of
// size n from a scenario's ground-truth densities, estimate the chosen
// overlap measure on each pair, and collect the scaled statistics
// sqrt(n*h)*(measure_n - measure).
struct SimulationConfig {
  enum class Scenario { case_I, case_II };
  enum class Measure { pianka, macarthur_levins };

  Scenario scenario = Scenario::case_I;
  size_t n = 500;
  size_t reps = 500;
  uint64_t seed = 0;
  std::string kernel = "epanechnikov";
  BandwidthRule bandwidth_rule = BandwidthRule::root_log();
  int grid = 1001;
  Measure measure = Measure::pianka;
  unsigned threads = 0;  // 0 = hardware concurrency

  std::string scenario_name() const;
  std::string measure_name() const;
};

// The ground-truth density pair of a scenario, on its compact support:
//   case_I:  f = truncated normal(1, 4^2),  g = truncated normal(5, 4.5^2)
//   case_II: f = truncated normal(5, 4^2),  g = truncated logistic(0, 3)
// The support is [-a, a] with a = the 0.995 quantile of the untruncated f.
struct ScenarioDensities {
  TruncatedDensity f;
  TruncatedDensity g;
  SupportInterval support;
};
ScenarioDensities scenario_densities(SimulationConfig::Scenario s);

// Moment table of two analytic densities on a reference grid (default
// 100001 points) — deliberately finer than, and independent of, the
// estimation grid, so oracle values share no discretization error with the
// system under test.
MomentTable analytic_moment_table(const TruncatedDensity& f, const TruncatedDensity& g,
                                  const SupportInterval& support, int ref_grid = 100001);

// The results of one experiment. `values[i]` was produced with
// `replicate_seeds[i]` = derive_seed(seed, i), so the set is reproducible
// bit-for-bit from the config regardless of thread count or schedule.
struct ReplicationSet {
  SimulationConfig config;
  double h = 0.0;
  SupportInterval support;
  std::vector<double> values;
  std::vector<uint64_t> replicate_seeds;
  double true_measure = 0.0;
  double sigma2_theory = 0.0;             // default-mode asymptotic variance
  double sigma2_theory_as_printed = 0.0;  // alternate mode (MacArthur-Levins only; else NaN)
};

ReplicationSet run_replications(const SimulationConfig& cfg);

// Goodness-of-fit of the replication values against N(0, sigma2_theory).
struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  size_t count = 0;
};

struct NormalityDiagnostics {
  double ks_stat = 0.0;           // one-sample Kolmogorov-Smirnov
  double ks_threshold_1pct = 0.0; // asymptotic 1% critical value 1.63/sqrt(M)
  bool ks_accept_1pct = false;
  double empirical_variance = 0.0;  // unbiased sample variance of the values
  double empirical_mean = 0.0;
  std::vector<std::pair<double, double>> qq;  // (theoretical quantile, order statistic)
  std::vector<HistogramBin> histogram;        // ceil(sqrt(M)) equal-width bins
};

NormalityDiagnostics normality_diagnostics(const ReplicationSet& r);

// JSON summary ("schema": 1) of an experiment and its diagnostics.
std::string summary_to_json(const ReplicationSet& r, const NormalityDiagnostics& d,
                            int indent = 2);

// Monte Carlo check of the integrated-variance inequality
// n*h*integral(Var f_n(x) dx) <= k02 (with 5% statistical slack).
struct VarianceBoundReport {
  size_t n = 0;
  size_t reps = 0;
  double h = 0.0;
  double estimate = 0.0;  // n*h*integral of the pointwise replicate variance
  double k02 = 0.0;
  double slack = 1.05;
  bool holds = false;
};

VarianceBoundReport variance_bound_check(const TruncatedDensity& f, const SupportInterval& support,
                                         const std::string& kernel_name,
                                         const BandwidthRule& rule, size_t n, size_t reps,
                                         uint64_t seed, int grid = 1001, unsigned threads = 0);

}  // namespace ovl
