#include "core/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <json.hpp>

#include "core/distributions.hpp"
#include "core/rng.hpp"

namespace ovl {

std::string SimulationConfig::scenario_name() const {
  return scenario == Scenario::case_I ? "case_I" : "case_II";
}

std::string SimulationConfig::measure_name() const {
  return measure == Measure::pianka ? "pianka" : "macarthur_levins";
}

ScenarioDensities scenario_densities(SimulationConfig::Scenario s) {
  if (s == SimulationConfig::Scenario::case_I) {
    const SupportInterval sup =
        support_from_quantile(TruncatedDensity::Family::normal, 1.0, 4.0, 0.995);
    return ScenarioDensities{TruncatedDensity::normal(1.0, 4.0, sup),
                             TruncatedDensity::normal(5.0, 4.5, sup), sup};
  }
  // case_II reuses the same support convention: [-a, a], a = 0.995 quantile
  // of the untruncated first density.
  const SupportInterval sup =
      support_from_quantile(TruncatedDensity::Family::normal, 5.0, 4.0, 0.995);
  return ScenarioDensities{TruncatedDensity::normal(5.0, 4.0, sup),
                           TruncatedDensity::logistic(0.0, 3.0, sup), sup};
}

MomentTable analytic_moment_table(const TruncatedDensity& f, const TruncatedDensity& g,
                                  const SupportInterval& support, int ref_grid) {
  return build_moment_table(f.grid_values(support, ref_grid), g.grid_values(support, ref_grid),
                            support);
}

namespace {

// Runs fn(i) for i in [0, count) across a small thread pool. Each index is
// processed exactly once; results must be written to index-addressed slots so
// the outcome is independent of scheduling.
void parallel_for(size_t count, unsigned threads, const std::function<void(size_t)>& fn) {
  unsigned hw = threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (hw == 0) hw = 1;
  hw = static_cast<unsigned>(std::min<size_t>(hw, count));
  if (hw <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(hw);
  for (unsigned t = 0; t < hw; ++t) {
    pool.emplace_back([&]() {
      for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

double measure_from_grids(const std::vector<double>& fv, const std::vector<double>& gv,
                          const SupportInterval& sup, SimulationConfig::Measure m) {
  const double i11 = moment_integral(fv, gv, 1, 1, sup);
  const double i20 = moment_integral(fv, gv, 2, 0, sup);
  if (m == SimulationConfig::Measure::macarthur_levins) {
    if (!(i20 > 0.0)) throw degenerate_error("replicate produced a zero-norm estimate");
    return i11 / i20;
  }
  const double i02 = moment_integral(fv, gv, 0, 2, sup);
  if (!(i20 > 0.0) || !(i02 > 0.0)) {
    throw degenerate_error("replicate produced a zero-norm estimate");
  }
  return i11 / std::sqrt(i20 * i02);
}

}  // namespace

ReplicationSet run_replications(const SimulationConfig& cfg) {
  if (cfg.reps < 1) throw validation_error("replication count must be >= 1");
  if (cfg.n < 10) throw validation_error("simulation sample size must be >= 10");

  const ScenarioDensities sc = scenario_densities(cfg.scenario);
  const Kernel& kern = builtin_kernel(cfg.kernel);
  const double k02 = kern.moment(0, 2);

  ReplicationSet out;
  out.config = cfg;
  out.support = sc.support;
  out.h = bandwidth(cfg.bandwidth_rule, cfg.n);

  // Ground truth from the analytic densities on the fine reference grid.
  const MomentTable truth = analytic_moment_table(sc.f, sc.g, sc.support);
  if (cfg.measure == SimulationConfig::Measure::pianka) {
    out.true_measure = pianka(truth);
    out.sigma2_theory = pianka_variance(truth, k02);
    out.sigma2_theory_as_printed = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.true_measure = macarthur_levins(truth);
    const MomentTable swapped = truth.swapped();
    out.sigma2_theory = ml_variance(swapped, k02, MlVarianceMode::rederived);
    out.sigma2_theory_as_printed = ml_variance(swapped, k02, MlVarianceMode::as_printed);
  }

  out.values.resize(cfg.reps);
  out.replicate_seeds.resize(cfg.reps);
  const double scale = std::sqrt(static_cast<double>(cfg.n) * out.h);

  parallel_for(cfg.reps, cfg.threads, [&](size_t i) {
    const uint64_t seed_i = derive_seed(cfg.seed, i);
    out.replicate_seeds[i] = seed_i;
    std::mt19937_64 gen(seed_i);
    const Sample x = sc.f.draw(cfg.n, gen);
    const Sample y = sc.g.draw(cfg.n, gen);
    const DensityEstimate fx = kde_grid(x, kern, out.h, sc.support, cfg.grid);
    const DensityEstimate gy = kde_grid(y, kern, out.h, sc.support, cfg.grid);
    const double m = measure_from_grids(fx.values, gy.values, sc.support, cfg.measure);
    out.values[i] = scale * (m - out.true_measure);
  });
  return out;
}

NormalityDiagnostics normality_diagnostics(const ReplicationSet& r) {
  const size_t m = r.values.size();
  if (m < 20) throw validation_error("normality diagnostics need at least 20 replicates");
  std::vector<double> sorted = r.values;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) {
    throw degenerate_error("all replication values are identical; diagnostics are undefined");
  }
  if (!(r.sigma2_theory > 0.0)) {
    throw degenerate_error("theoretical variance is not positive; no reference distribution");
  }

  NormalityDiagnostics d;
  const double sigma = std::sqrt(r.sigma2_theory);

  // One-sample Kolmogorov-Smirnov against N(0, sigma^2).
  double ks = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double F = norm_cdf(sorted[i] / sigma);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(m) - F;
    const double lo = F - static_cast<double>(i) / static_cast<double>(m);
    ks = std::max({ks, hi, lo});
  }
  d.ks_stat = ks;
  d.ks_threshold_1pct = 1.63 / std::sqrt(static_cast<double>(m));
  d.ks_accept_1pct = d.ks_stat < d.ks_threshold_1pct;

  double mean = 0.0;
  for (double v : r.values) mean += v;
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (double v : r.values) ss += (v - mean) * (v - mean);
  d.empirical_mean = mean;
  d.empirical_variance = ss / static_cast<double>(m - 1);

  d.qq.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    d.qq.emplace_back(sigma * norm_quantile(p), sorted[i]);
  }

  const size_t bins = static_cast<size_t>(std::ceil(std::sqrt(static_cast<double>(m))));
  const double lo = sorted.front();
  const double width = (sorted.back() - lo) / static_cast<double>(bins);
  d.histogram.assign(bins, HistogramBin{});
  for (size_t b = 0; b < bins; ++b) {
    d.histogram[b].lo = lo + width * static_cast<double>(b);
    d.histogram[b].hi = lo + width * static_cast<double>(b + 1);
  }
  for (double v : sorted) {
    size_t b = width > 0.0 ? static_cast<size_t>((v - lo) / width) : 0;
    if (b >= bins) b = bins - 1;  // right edge belongs to the last bin
    d.histogram[b].count++;
  }
  return d;
}

std::string summary_to_json(const ReplicationSet& r, const NormalityDiagnostics& d, int indent) {
  nlohmann::json j{
      {"schema", 1},
      {"config",
       {{"scenario", r.config.scenario_name()},
        {"measure", r.config.measure_name()},
        {"n", r.config.n},
        {"reps", r.config.reps},
        {"seed", r.config.seed},
        {"kernel", r.config.kernel},
        {"bandwidth", r.config.bandwidth_rule.describe()},
        {"grid", r.config.grid}}},
      {"h", r.h},
      {"support", {{"lo", r.support.lo}, {"hi", r.support.hi}}},
      {"true_measure", r.true_measure},
      {"sigma2_theory", r.sigma2_theory},
      {"empirical_mean", d.empirical_mean},
      {"empirical_variance", d.empirical_variance},
      {"ks_stat", d.ks_stat},
      {"ks_threshold_1pct", d.ks_threshold_1pct},
      {"ks_accept_1pct", d.ks_accept_1pct},
  };
  if (r.config.measure == SimulationConfig::Measure::macarthur_levins) {
    j["sigma2_theory_mode"] = "rederived";
    j["sigma2_theory_as_printed"] = r.sigma2_theory_as_printed;
  }
  return j.dump(indent);
}

VarianceBoundReport variance_bound_check(const TruncatedDensity& f, const SupportInterval& support,
                                         const std::string& kernel_name,
                                         const BandwidthRule& rule, size_t n, size_t reps,
                                         uint64_t seed, int grid, unsigned threads) {
  if (reps < 2) throw validation_error("variance bound check needs at least 2 replicates");
  const Kernel& kern = builtin_kernel(kernel_name);

  VarianceBoundReport rep;
  rep.n = n;
  rep.reps = reps;
  rep.h = bandwidth(rule, n);
  rep.k02 = kern.moment(0, 2);

  // Keep every replicate's grid row and reduce them in index order so the
  // result does not depend on thread scheduling.
  std::vector<std::vector<double>> rows(reps);
  parallel_for(reps, threads, [&](size_t i) {
    std::mt19937_64 gen(derive_seed(seed, i));
    const Sample x = f.draw(n, gen);
    rows[i] = kde_grid(x, kern, rep.h, support, grid).values;
  });

  const size_t m = rows.front().size();
  std::vector<double> mean(m, 0.0), ss(m, 0.0);
  for (size_t i = 0; i < reps; ++i) {
    for (size_t p = 0; p < m; ++p) mean[p] += rows[i][p];
  }
  for (size_t p = 0; p < m; ++p) mean[p] /= static_cast<double>(reps);
  for (size_t i = 0; i < reps; ++i) {
    for (size_t p = 0; p < m; ++p) {
      const double dlt = rows[i][p] - mean[p];
      ss[p] += dlt * dlt;
    }
  }
  for (size_t p = 0; p < m; ++p) ss[p] /= static_cast<double>(reps - 1);

  rep.estimate = static_cast<double>(n) * rep.h * integrate(ss, support);
  rep.holds = rep.estimate <= rep.k02 * rep.slack;
  return rep;
}

}  // namespace ovl
