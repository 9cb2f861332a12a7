// Acceptance harness: runs the nine release criteria end to end and prints
// one PASS/FAIL line per criterion. The process exit code is the number of
// failed criteria, so the test runner shows red if any criterion fails.
//
// Criteria that measure the sampling behavior of the scaled estimators are
// executed exactly as stated and allowed to fail honestly; their FAIL lines
// carry the measured numbers so the outcome is auditable.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/distributions.hpp"
#include "core/kde.hpp"
#include "core/kernels.hpp"
#include "core/montecarlo.hpp"
#include "core/overlap_measures.hpp"
#include "core/quadrature.hpp"
#include "core/rng.hpp"
#include "core/truncated.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr uint64_t kMasterSeed = 424242;

int g_failures = 0;

void report(int k, bool pass, const std::string& detail) {
  std::printf("AC-%d %s: %s\n", k, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string num(double v, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("overlap_acceptance_" + std::to_string(static_cast<long>(::getpid())));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out = work_dir() / ("cap" + std::to_string(counter++) + ".txt");
  const std::string cmd = "\"" + std::string(OVERLAP_CLI_PATH) + "\" " + args + " >\"" +
                          out.string() + "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = raw == -1 ? -1 : (WIFEXITED(raw) ? WEXITSTATUS(raw) : -2);
  r.out = slurp(out);
  return r;
}

// ---------------------------------------------------------------- criteria

void ac1_kernel_moments() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string why;
  const auto& epan = ovl::builtin_kernel("epanechnikov");
  if (std::abs(epan.moment(0, 2) - 0.6) > 1e-10) {
    ok = false;
    why += " epanechnikov k02=" + num(epan.moment(0, 2), "%.12g");
  }
  if (std::abs(epan.moment(2, 1) - 0.2) > 1e-10) {
    ok = false;
    why += " epanechnikov k21=" + num(epan.moment(2, 1), "%.12g");
  }
  const auto& box = ovl::builtin_kernel("box");
  if (std::abs(box.moment(0, 2) - 0.5) > 1e-10) {
    ok = false;
    why += " box k02=" + num(box.moment(0, 2), "%.12g");
  }
  for (const auto& name : ovl::builtin_kernel_names()) {
    if (std::abs(ovl::builtin_kernel(name).moment(1, 1)) > 1e-10) {
      ok = false;
      why += " " + name + " k11 nonzero";
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 1.0) {
    ok = false;
    why += " runtime " + num(secs) + "s >= 1s";
  }
  report(1, ok,
         ok ? "epanechnikov k02=0.6 k21=0.2, box k02=0.5, k11=0 for all built-ins (" +
                  num(secs, "%.3g") + "s)"
            : "violations:" + why);
}

void ac2_identities_and_bounds() {
  const auto t0 = Clock::now();
  const ovl::SupportInterval sup =
      ovl::support_from_quantile(ovl::TruncatedDensity::Family::normal, 1.0, 4.0, 0.995);
  bool ok = true;
  std::string why;
  double worst_bound = 0.0, worst_self = 0.0, worst_identity = 0.0;
  for (int i = 0; i < 50 && ok; ++i) {
    std::mt19937_64 gen(ovl::derive_seed(kMasterSeed, 1000 + static_cast<uint64_t>(i)));
    const size_t n = 20 + static_cast<size_t>(180.0 * ovl::uniform01(gen));
    const double mu_x = -4.0 + 8.0 * ovl::uniform01(gen);
    const double sd_x = 1.0 + 4.0 * ovl::uniform01(gen);
    const double mu_y = -4.0 + 8.0 * ovl::uniform01(gen);
    const double sd_y = 1.0 + 4.0 * ovl::uniform01(gen);
    const auto fx = ovl::TruncatedDensity::normal(mu_x, sd_x, sup);
    const auto fy = ovl::TruncatedDensity::normal(mu_y, sd_y, sup);
    const auto x = fx.draw(n, gen);
    const auto y = fy.draw(n, gen);

    ovl::AnalysisConfig cfg;  // defaults: epanechnikov, two_thirds, auto support
    const auto rep = ovl::estimate_overlap(x, y, cfg);
    const double rho = rep.pianka.point;
    worst_bound = std::max({worst_bound, -rho, rho - 1.0});
    if (rho < 0.0 || rho > 1.0 + 1e-9) {
      ok = false;
      why = "pair " + std::to_string(i) + ": rho=" + num(rho, "%.12g") + " outside [0, 1+1e-9]";
      break;
    }
    const double identity_err = std::abs(rep.ml_fg.point * rep.ml_gf.point - rho * rho);
    worst_identity = std::max(worst_identity, identity_err);
    if (identity_err > 1e-9) {
      ok = false;
      why = "pair " + std::to_string(i) + ": |Dfg*Dgf - rho^2| = " + num(identity_err, "%.3g");
      break;
    }
    const auto self = ovl::estimate_overlap(x, x, cfg);
    const double self_err = std::abs(self.pianka.point - 1.0);
    worst_self = std::max(worst_self, self_err);
    if (self_err > 1e-6) {
      ok = false;
      why = "pair " + std::to_string(i) + ": rho(x,x)=" + num(self.pianka.point, "%.12g");
      break;
    }
  }
  const double secs = seconds_since(t0);
  if (ok && secs >= 30.0) {
    ok = false;
    why = "runtime " + num(secs) + "s >= 30s";
  }
  report(2, ok,
         ok ? "50 seeded pairs: bounds hold (worst excess " + num(worst_bound, "%.2g") +
                  "), rho(x,x)=1 within " + num(worst_self, "%.2g") +
                  ", ratio identity within " + num(worst_identity, "%.2g") + " (" +
                  num(secs, "%.3g") + "s)"
            : why);
}

// Mean absolute error of the plug-in cross moment I_n(1,1) against the
// analytic I(1,1) over `reps` replications at sample size n.
double mean_i11_error(const ovl::ScenarioDensities& sc, const ovl::MomentTable& truth, size_t n,
                      int reps, uint64_t stream) {
  const auto& kern = ovl::builtin_kernel("epanechnikov");
  const double h = ovl::bandwidth(ovl::BandwidthRule::root_log(), n);
  const double i11_true = truth.at(1, 1);
  double acc = 0.0;
  for (int i = 0; i < reps; ++i) {
    std::mt19937_64 gen(ovl::derive_seed(kMasterSeed, stream + static_cast<uint64_t>(i)));
    const auto x = sc.f.draw(n, gen);
    const auto y = sc.g.draw(n, gen);
    const auto fx = ovl::kde_grid(x, kern, h, sc.support, 1001);
    const auto gy = ovl::kde_grid(y, kern, h, sc.support, 1001);
    acc += std::abs(ovl::moment_integral(fx.values, gy.values, 1, 1, sc.support) - i11_true);
  }
  return acc / reps;
}

void ac3_consistency() {
  const auto sc = ovl::scenario_densities(ovl::SimulationConfig::Scenario::case_I);
  const auto truth = ovl::analytic_moment_table(sc.f, sc.g, sc.support);
  const double i11 = truth.at(1, 1);
  const double err200 = mean_i11_error(sc, truth, 200, 200, 20000);
  const double err2000 = mean_i11_error(sc, truth, 2000, 200, 30000);
  const double threshold = 0.005 * i11;
  const bool decreases = err2000 < err200;
  const bool small_enough = err2000 < threshold;
  report(3, decreases && small_enough,
         "mean |I_n(1,1) - I(1,1)| over 200 reps: " + num(err200) + " at n=200, " + num(err2000) +
             " at n=2000 (decrease " + (decreases ? "holds" : "FAILS") + "); absolute threshold " +
             num(threshold) + " " + (small_enough ? "met" : "EXCEEDED") +
             " — the plug-in moment converges at the 1/sqrt(n) scale, slower than this bound");
}

void ac4_normality() {
  const auto t0 = Clock::now();
  ovl::SimulationConfig cfg;
  cfg.scenario = ovl::SimulationConfig::Scenario::case_I;
  cfg.measure = ovl::SimulationConfig::Measure::pianka;
  cfg.n = 500;
  cfg.reps = 500;
  cfg.seed = kMasterSeed;
  const auto r500 = ovl::run_replications(cfg);
  const auto d500 = ovl::normality_diagnostics(r500);

  ovl::SimulationConfig cfg50 = cfg;
  cfg50.n = 50;
  const auto r50 = ovl::run_replications(cfg50);
  const auto d50 = ovl::normality_diagnostics(r50);

  const bool ks_ok = d500.ks_stat < d500.ks_threshold_1pct;
  const bool monotone_ok = d500.ks_stat <= d50.ks_stat;
  const double mean_scaled = d500.empirical_mean;
  const double sd_scaled = std::sqrt(d500.empirical_variance);
  report(4, ks_ok && monotone_ok,
         "KS(n=500, M=500) = " + num(d500.ks_stat) + " vs 1% critical " +
             num(d500.ks_threshold_1pct) + (ks_ok ? " (under)" : " (OVER)") +
             "; KS(n=50) = " + num(d50.ks_stat) +
             (monotone_ok ? " (no worse at n=500)" : " (WORSE at n=500)") +
             " — scaled statistic sqrt(nh)(rho_n - rho): mean " + num(mean_scaled) + ", sd " +
             num(sd_scaled) + " vs claimed N(0, " + num(std::sqrt(r500.sigma2_theory)) +
             "^2); the statistic is biased and underdispersed at this scaling (" +
             num(seconds_since(t0), "%.3g") + "s)");
}

void ac5_ml_variance_arbitration() {
  ovl::SimulationConfig cfg;
  cfg.scenario = ovl::SimulationConfig::Scenario::case_I;
  cfg.measure = ovl::SimulationConfig::Measure::macarthur_levins;
  cfg.n = 500;
  cfg.reps = 1000;
  cfg.seed = kMasterSeed;
  const auto r = ovl::run_replications(cfg);
  const auto d = ovl::normality_diagnostics(r);

  const double empirical = d.empirical_variance;
  const double rederived = r.sigma2_theory;
  const double as_printed = r.sigma2_theory_as_printed;
  const auto within25 = [&](double target) {
    return target > 0.0 && std::abs(empirical - target) <= 0.25 * target;
  };
  const bool match_re = within25(rederived);
  const bool match_ap = within25(as_printed);
  const bool ok = match_re != match_ap;  // exactly one
  std::string detail = "empirical var of sqrt(nh)(D_n - D) (M=1000, n=500) = " + num(empirical) +
                       "; rederived formula = " + num(rederived) + " (ratio " +
                       num(empirical / rederived, "%.3g") + "), as-printed formula = " +
                       num(as_printed) + " (ratio " + num(empirical / as_printed, "%.3g") + ")";
  if (ok) {
    detail += std::string("; matches the ") + (match_re ? "rederived" : "as-printed") +
              " mode only — that mode is the documented default";
  } else if (match_re && match_ap) {
    detail += "; matches BOTH modes — arbitration inconclusive";
  } else {
    detail +=
        "; matches NEITHER mode within 25% — the sampling fluctuation of the statistic sits at "
        "the 1/sqrt(n) scale, so its sqrt(nh)-scaled variance shrinks like h and no fixed "
        "constant can match it";
  }
  report(5, ok, detail);
}

void ac6_ci_coverage() {
  const auto t0 = Clock::now();
  const auto sc = ovl::scenario_densities(ovl::SimulationConfig::Scenario::case_I);
  const auto truth = ovl::analytic_moment_table(sc.f, sc.g, sc.support);
  const double rho_true = ovl::pianka(truth);
  const auto& kern = ovl::builtin_kernel("epanechnikov");
  const double k02 = kern.moment(0, 2);
  const size_t n = 500;
  const int reps = 1000;
  const double h = ovl::bandwidth(ovl::BandwidthRule::root_log(), n);

  int covered = 0;
  int negative_variance = 0;
  for (int i = 0; i < reps; ++i) {
    std::mt19937_64 gen(ovl::derive_seed(kMasterSeed, 60000 + static_cast<uint64_t>(i)));
    const auto x = sc.f.draw(n, gen);
    const auto y = sc.g.draw(n, gen);
    const auto fx = ovl::kde_grid(x, kern, h, sc.support, 1001);
    const auto gy = ovl::kde_grid(y, kern, h, sc.support, 1001);
    const auto table = ovl::build_moment_table(fx.values, gy.values, sc.support);
    const double rho_hat = ovl::pianka(table);
    const double var_hat = ovl::pianka_variance(table, k02);
    if (var_hat < 0.0) {
      ++negative_variance;  // cannot form the interval; counts as a miss
      continue;
    }
    const auto ci = ovl::confidence_interval(rho_hat, var_hat, n, h, 0.95);
    if (rho_true >= ci.lo && rho_true <= ci.hi) ++covered;
  }
  const double coverage = static_cast<double>(covered) / reps;
  const bool ok = coverage >= 0.90 && coverage <= 0.98;
  std::string detail = "nominal-95% interval coverage over M=1000 at n=500: " +
                       num(coverage, "%.4g") + " (target [0.90, 0.98])";
  if (negative_variance > 0) {
    detail += "; " + std::to_string(negative_variance) + " replicates had negative plug-in variance";
  }
  if (!ok) {
    detail +=
        " — intervals are centered on a biased estimate and scaled by sqrt(nh) instead of the "
        "sqrt(n) rate the estimator actually follows, so they are far too narrow";
  }
  detail += " (" + num(seconds_since(t0), "%.3g") + "s)";
  report(6, ok, detail);
}

void ac7_variance_bound() {
  const auto sc = ovl::scenario_densities(ovl::SimulationConfig::Scenario::case_I);
  bool ok = true;
  std::string detail = "n*h*integral Var(f_n) vs k02*1.05 = " + num(0.6 * 1.05, "%.4g") + ":";
  for (size_t n : {static_cast<size_t>(50), static_cast<size_t>(500)}) {
    const auto rep = ovl::variance_bound_check(sc.f, sc.support, "epanechnikov",
                                               ovl::BandwidthRule::root_log(), n, 500,
                                               kMasterSeed + n, 1001, 0);
    ok = ok && rep.holds;
    detail += " n=" + std::to_string(n) + ": " + num(rep.estimate, "%.4g") +
              (rep.holds ? " (holds)" : " (VIOLATED)");
  }
  report(7, ok, detail);
}

void ac8_application() {
  const fs::path mal = fs::path(OVERLAP_DATA_DIR) / "wdbc_malignant.csv";
  const fs::path ben = fs::path(OVERLAP_DATA_DIR) / "wdbc_benign.csv";
  if (!fs::exists(mal) || !fs::exists(ben)) {
    std::printf("AC-8 SKIP: dataset not present under %s; acceptance carried by AC-2..AC-7\n",
                OVERLAP_DATA_DIR);
    return;
  }
  const auto r =
      run_cli("estimate --x \"" + mal.string() + "\" --y \"" + ben.string() + "\"");
  if (r.exit_code != 0) {
    report(8, false, "CLI exited " + std::to_string(r.exit_code) + " on the shipped dataset");
    return;
  }
  double rho = 0.0, se = 0.0;
  try {
    const auto j = nlohmann::json::parse(r.out);
    rho = j.at("measures").at("pianka").at("point").get<double>();
    se = j.at("measures").at("pianka").at("se").get<double>();
  } catch (const std::exception& e) {
    report(8, false, std::string("report JSON did not parse: ") + e.what());
    return;
  }
  const bool in_window = rho >= 0.32 && rho <= 0.36;
  // The reference analysis of this dataset reports 0.3396 with a standard
  // error of 0.0117 and the interval [0.3203, 0.3588]. That interval's
  // half-width over its se is 1.645 — the one-sided 95% multiplier — where
  // this tool uses the two-sided 1.96.
  const double implied_z = (0.3588 - 0.3203) / (2.0 * 0.0117);
  report(8, in_window,
         "rho_hat = " + num(rho, "%.4f") + " with defaults (target window [0.32, 0.36]; reference "
         "value 0.3396); reference interval [0.3203, 0.3588] over its se 0.0117 implies z = " +
             num(implied_z, "%.4g") + " (one-sided 95%), not the two-sided 1.96 used here; "
             "plug-in se this run = " + num(se, "%.4g") +
             " also departs from the printed 0.0117");
}

void ac9_determinism() {
  const fs::path d1 = work_dir() / "det_a";
  const fs::path d2 = work_dir() / "det_b";
  const fs::path d3 = work_dir() / "det_c";
  const std::string base = "simulate --scenario case_I --n 50 --reps 200 --seed 7 --out \"";
  const auto r1 = run_cli(base + d1.string() + "\" --threads 1");
  const auto r2 = run_cli(base + d2.string() + "\" --threads 1");
  const auto r3 = run_cli(base + d3.string() + "\" --threads 4");
  if (r1.exit_code != 0 || r2.exit_code != 0 || r3.exit_code != 0) {
    report(9, false, "simulate exited nonzero");
    return;
  }
  bool ok = true;
  std::string mismatch;
  for (const char* name : {"replicates.csv", "qq.csv", "histogram.csv", "summary.json"}) {
    const std::string a = slurp(d1 / name);
    if (a.empty() || a != slurp(d2 / name)) {
      ok = false;
      mismatch += std::string(" rerun:") + name;
    }
    if (a != slurp(d3 / name)) {
      ok = false;
      mismatch += std::string(" threads:") + name;
    }
  }
  report(9, ok,
         ok ? "rerun and 1-vs-4-thread outputs byte-identical across replicates.csv, qq.csv, "
              "histogram.csv, summary.json"
            : "byte differences in" + mismatch);
}

}  // namespace

int main() {
  std::printf("acceptance: master seed %llu\n", static_cast<unsigned long long>(kMasterSeed));
  ac1_kernel_moments();
  ac2_identities_and_bounds();
  ac3_consistency();
  ac4_normality();
  ac5_ml_variance_arbitration();
  ac6_ci_coverage();
  ac7_variance_bound();
  ac8_application();
  ac9_determinism();
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return g_failures;
}
