#include "overlap/overlap.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "core/distributions.hpp"
#include "core/montecarlo.hpp"
#include "core/overlap_measures.hpp"
#include "core/report_json.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Runs `fn`, translating C++ exceptions into status codes and the
// thread-local error text.
template <typename Fn>
ovl_status guarded(Fn&& fn) {
  try {
    fn();
    return OVL_OK;
  } catch (const ovl::validation_error& e) {
    set_error(e.what());
    return OVL_E_VALIDATION;
  } catch (const ovl::degenerate_error& e) {
    set_error(e.what());
    return OVL_E_DEGENERATE;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return OVL_E_NOMEM;
  } catch (const std::exception& e) {
    set_error(e.what());
    return OVL_E_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct ovl_config {
  ovl::AnalysisConfig cfg;
};

struct ovl_report {
  ovl::OverlapReport rep;
};

struct ovl_sim {
  ovl::ReplicationSet set;
  ovl::NormalityDiagnostics diag;
};

extern "C" {

int ovl_abi_version(void) { return 1; }

const char* ovl_last_error(void) { return g_last_error.c_str(); }

ovl_config* ovl_config_new(void) { return new (std::nothrow) ovl_config(); }

void ovl_config_free(ovl_config* cfg) { delete cfg; }

ovl_status ovl_config_set_kernel(ovl_config* cfg, const char* name) {
  if (!cfg || !name) {
    set_error("null argument");
    return OVL_E_VALIDATION;
  }
  return guarded([&] {
    ovl::builtin_kernel(name);  // validates the name
    cfg->cfg.kernel = name;
  });
}

ovl_status ovl_config_set_bandwidth(ovl_config* cfg, const char* rule, double p1, double p2) {
  if (!cfg || !rule) {
    set_error("null argument");
    return OVL_E_VALIDATION;
  }
  return guarded([&] {
    const std::string r = rule;
    if (r == "two_thirds") {
      cfg->cfg.bandwidth_rule = ovl::BandwidthRule::two_thirds();
    } else if (r == "root_log") {
      cfg->cfg.bandwidth_rule = ovl::BandwidthRule::root_log();
    } else if (r == "power") {
      cfg->cfg.bandwidth_rule = ovl::BandwidthRule::power(p1);
    } else if (r == "scaled_log") {
      cfg->cfg.bandwidth_rule = ovl::BandwidthRule::scaled_log(p1, p2);
    } else if (r == "fixed") {
      cfg->cfg.bandwidth_rule = ovl::BandwidthRule::fixed(p1);
    } else {
      throw ovl::validation_error("unknown bandwidth rule '" + r +
                                  "'; expected two_thirds, root_log, power, scaled_log, or fixed");
    }
  });
}

ovl_status ovl_config_set_support_auto(ovl_config* cfg) {
  if (!cfg) {
    set_error("null argument");
    return OVL_E_VALIDATION;
  }
  cfg->cfg.support_policy = ovl::AnalysisConfig::SupportPolicy::automatic;
  return OVL_OK;
}

ovl_status ovl_config_set_support_explicit(ovl_config* cfg, double lo, double hi) {
  if (!cfg) {
    set_error("null argument");
    return OVL_E_VALIDATION;
  }
  return guarded([&] {
    ovl::make_support(lo, hi);  // validates
    cfg->cfg.support_policy = ovl::AnalysisConfig::SupportPolicy::explicit_interval;
    cfg->cfg.support_lo = lo;
    cfg->cfg.support_hi = hi;
  });
}

ovl_status ovl_config_set_support_quantile(ovl_config* cfg, double q) {
  if (!cfg) {
    set_error("null argument");
    return OVL_E_VALIDATION;
  }
  return guarded([&] {
    if (!(q > 0.5 && q < 1.0)) {
      throw ovl::validation_error("support quantile must lie in (0.5, 1)");
    }
    cfg->cfg.support_policy = ovl::AnalysisConfig::SupportPolicy::quantile;
    cfg->cfg.support_q = q;
  });
}

ovl_status ovl_config_set_grid(ovl_config* cfg, int m) {
  if (!cfg) {
    set_error("null argument");
    return OVL_E_VALIDATION;
  }
  return guarded([&] {
    if (m < 3 || m % 2 == 0) {
      throw ovl::validation_error("grid size must be odd and >= 3");
    }
    cfg->cfg.grid = m;
  });
}

ovl_status ovl_config_set_level(ovl_config* cfg, double level) {
  if (!cfg) {
    set_error("null argument");
    return OVL_E_VALIDATION;
  }
  return guarded([&] {
    if (!(level > 0.0 && level < 1.0)) {
      throw ovl::validation_error("confidence level must lie in (0, 1)");
    }
    cfg->cfg.level = level;
  });
}

ovl_report* ovl_estimate(const ovl_config* cfg, const double* x, size_t nx, const double* y,
                         size_t ny, ovl_status* status) {
  ovl_report* out = nullptr;
  const ovl_status st = guarded([&] {
    if (!cfg || !x || !y) throw ovl::validation_error("null argument");
    const ovl::Sample sx = ovl::make_sample(std::vector<double>(x, x + nx));
    const ovl::Sample sy = ovl::make_sample(std::vector<double>(y, y + ny));
    auto rep = std::make_unique<ovl_report>();
    rep->rep = ovl::estimate_overlap(sx, sy, cfg->cfg);
    out = rep.release();
  });
  if (status) *status = st;
  return out;
}

void ovl_report_free(ovl_report* rep) { delete rep; }

char* ovl_report_json(const ovl_report* rep) {
  if (!rep) return nullptr;
  return dup_string(ovl::report_to_json(rep->rep));
}

ovl_status ovl_report_value(const ovl_report* rep, const char* key, double* out) {
  if (!rep || !key || !out) {
    set_error("null argument");
    return OVL_E_VALIDATION;
  }
  const ovl::OverlapReport& r = rep->rep;
  const std::string k = key;
  if (k == "pianka") *out = r.pianka.point;
  else if (k == "pianka_variance") *out = r.pianka.variance;
  else if (k == "pianka_se") *out = r.pianka.se;
  else if (k == "pianka_ci_lo") *out = r.pianka.ci.lo;
  else if (k == "pianka_ci_hi") *out = r.pianka.ci.hi;
  else if (k == "ml_fg") *out = r.ml_fg.point;
  else if (k == "ml_fg_variance") *out = r.ml_fg.variance;
  else if (k == "ml_fg_variance_as_printed") *out = r.ml_fg_variance_as_printed;
  else if (k == "ml_gf") *out = r.ml_gf.point;
  else if (k == "ml_gf_variance") *out = r.ml_gf.variance;
  else if (k == "ml_gf_variance_as_printed") *out = r.ml_gf_variance_as_printed;
  else if (k == "h") *out = r.h;
  else if (k == "k02") *out = r.k02;
  else if (k == "n_common") *out = static_cast<double>(r.n_common);
  else if (k == "support_lo") *out = r.support.lo;
  else if (k == "support_hi") *out = r.support.hi;
  else if (k == "level") *out = r.level;
  else if (k == "z") *out = r.pianka.ci.z;
  else {
    set_error("unknown report key '" + k + "'");
    return OVL_E_VALIDATION;
  }
  return OVL_OK;
}

size_t ovl_report_warning_count(const ovl_report* rep) {
  return rep ? rep->rep.warnings.size() : 0;
}

const char* ovl_report_warning(const ovl_report* rep, size_t i) {
  if (!rep || i >= rep->rep.warnings.size()) return nullptr;
  return rep->rep.warnings[i].c_str();
}

ovl_sim* ovl_simulate(const char* scenario, const char* measure, size_t n, size_t reps,
                      uint64_t seed, const char* kernel, int grid, unsigned threads,
                      ovl_status* status) {
  ovl_sim* out = nullptr;
  const ovl_status st = guarded([&] {
    if (!scenario || !measure) throw ovl::validation_error("null argument");
    ovl::SimulationConfig cfg;
    const std::string sc = scenario;
    if (sc == "case_I") {
      cfg.scenario = ovl::SimulationConfig::Scenario::case_I;
    } else if (sc == "case_II") {
      cfg.scenario = ovl::SimulationConfig::Scenario::case_II;
    } else {
      throw ovl::validation_error("unknown scenario '" + sc + "'; expected case_I or case_II");
    }
    const std::string ms = measure;
    if (ms == "pianka") {
      cfg.measure = ovl::SimulationConfig::Measure::pianka;
    } else if (ms == "macarthur_levins") {
      cfg.measure = ovl::SimulationConfig::Measure::macarthur_levins;
    } else {
      throw ovl::validation_error("unknown measure '" + ms +
                                  "'; expected pianka or macarthur_levins");
    }
    cfg.n = n;
    cfg.reps = reps;
    cfg.seed = seed;
    if (kernel) cfg.kernel = kernel;
    if (grid != 0) cfg.grid = grid;
    cfg.threads = threads;
    auto sim = std::make_unique<ovl_sim>();
    sim->set = ovl::run_replications(cfg);
    sim->diag = ovl::normality_diagnostics(sim->set);
    out = sim.release();
  });
  if (status) *status = st;
  return out;
}

void ovl_sim_free(ovl_sim* sim) { delete sim; }

size_t ovl_sim_count(const ovl_sim* sim) { return sim ? sim->set.values.size() : 0; }

double ovl_sim_value(const ovl_sim* sim, size_t i) {
  if (!sim || i >= sim->set.values.size()) return 0.0;
  return sim->set.values[i];
}

uint64_t ovl_sim_replicate_seed(const ovl_sim* sim, size_t i) {
  if (!sim || i >= sim->set.replicate_seeds.size()) return 0;
  return sim->set.replicate_seeds[i];
}

ovl_status ovl_sim_stat(const ovl_sim* sim, const char* key, double* out) {
  if (!sim || !key || !out) {
    set_error("null argument");
    return OVL_E_VALIDATION;
  }
  const std::string k = key;
  if (k == "h") *out = sim->set.h;
  else if (k == "true_measure") *out = sim->set.true_measure;
  else if (k == "sigma2_theory") *out = sim->set.sigma2_theory;
  else if (k == "sigma2_theory_as_printed") *out = sim->set.sigma2_theory_as_printed;
  else if (k == "empirical_variance") *out = sim->diag.empirical_variance;
  else if (k == "empirical_mean") *out = sim->diag.empirical_mean;
  else if (k == "ks_stat") *out = sim->diag.ks_stat;
  else if (k == "ks_threshold_1pct") *out = sim->diag.ks_threshold_1pct;
  else if (k == "support_lo") *out = sim->set.support.lo;
  else if (k == "support_hi") *out = sim->set.support.hi;
  else {
    set_error("unknown simulation key '" + k + "'");
    return OVL_E_VALIDATION;
  }
  return OVL_OK;
}

size_t ovl_sim_qq_count(const ovl_sim* sim) { return sim ? sim->diag.qq.size() : 0; }

ovl_status ovl_sim_qq_pair(const ovl_sim* sim, size_t i, double* theoretical, double* empirical) {
  if (!sim || !theoretical || !empirical || i >= sim->diag.qq.size()) {
    set_error("bad q-q index or null argument");
    return OVL_E_VALIDATION;
  }
  *theoretical = sim->diag.qq[i].first;
  *empirical = sim->diag.qq[i].second;
  return OVL_OK;
}

size_t ovl_sim_histogram_count(const ovl_sim* sim) {
  return sim ? sim->diag.histogram.size() : 0;
}

ovl_status ovl_sim_histogram_bin(const ovl_sim* sim, size_t i, double* lo, double* hi,
                                 size_t* count) {
  if (!sim || !lo || !hi || !count || i >= sim->diag.histogram.size()) {
    set_error("bad histogram index or null argument");
    return OVL_E_VALIDATION;
  }
  *lo = sim->diag.histogram[i].lo;
  *hi = sim->diag.histogram[i].hi;
  *count = sim->diag.histogram[i].count;
  return OVL_OK;
}

char* ovl_sim_summary_json(const ovl_sim* sim) {
  if (!sim) return nullptr;
  return dup_string(ovl::summary_to_json(sim->set, sim->diag));
}

char* ovl_kernels_json(void) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& name : ovl::builtin_kernel_names()) {
    const ovl::Kernel& k = ovl::builtin_kernel(name);
    arr.push_back({{"name", name},
                   {"k01", k.moment(0, 1)},
                   {"k11", k.moment(1, 1)},
                   {"k21", k.moment(2, 1)},
                   {"k02", k.moment(0, 2)}});
  }
  return dup_string(arr.dump(2));
}

void ovl_string_free(char* s) { std::free(s); }

}  // extern "C"
