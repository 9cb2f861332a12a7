// overlap — command-line front end for the overlap estimation library.
//
// Subcommands:
//   estimate   two-sample overlap analysis -> JSON report
//   simulate   seeded replication experiment -> CSV/JSON files
//   kernels    list built-in kernels and their moment constants
//
// Exit codes: 0 success, 2 input/validation error, 3 numerical degeneracy.
// This translation unit speaks only the C API of the shared library; all
// file I/O and formatting lives here.

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "overlap/overlap.h"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitDegenerate = 3;

int exit_code_for(ovl_status st) {
  switch (st) {
    case OVL_OK:
      return 0;
    case OVL_E_DEGENERATE:
      return kExitDegenerate;
    default:
      return kExitValidation;
  }
}

[[noreturn]] void fail(int code, const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(code);
}

// Owned wrapper for strings handed out by the library.
std::string take_string(char* s) {
  if (!s) return {};
  std::string out = s;
  ovl_string_free(s);
  return out;
}

bool parse_double(const std::string& text, double& out) {
  try {
    size_t used = 0;
    out = std::stod(text, &used);
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
    return used == text.size();
  } catch (...) {
    return false;
  }
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    size_t b = cell.find_first_not_of(" \t\r");
    size_t e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

// Reads one numeric sample from a CSV file. Accepts a single numeric column
// (optional header) or a two-column (value, group) layout; for the latter a
// group label must be supplied so the reader knows which rows belong to the
// sample. Any malformed numeric cell aborts with its row and column.
std::vector<double> read_sample_csv(const std::string& path,
                                    const std::optional<std::string>& group) {
  std::ifstream in(path);
  if (!in) fail(kExitValidation, "cannot open input file '" + path + "'");
  std::vector<double> values;
  std::string line;
  size_t row = 0;
  bool header_allowed = true;
  size_t ncols = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_row(line);
    if (ncols == 0) ncols = cells.size();
    if (cells.size() != ncols) {
      fail(kExitValidation, path + ":" + std::to_string(row) + ": expected " +
                                std::to_string(ncols) + " columns, found " +
                                std::to_string(cells.size()));
    }
    if (ncols > 2) {
      fail(kExitValidation,
           path + ": files must have one numeric column or two columns (value, group); found " +
               std::to_string(ncols));
    }
    double v = 0.0;
    if (!parse_double(cells[0], v)) {
      // A non-numeric first row is tolerated once as a header.
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      fail(kExitValidation, path + ":" + std::to_string(row) +
                                ": column 1: cannot parse '" + cells[0] + "' as a number");
    }
    header_allowed = false;
    if (ncols == 2) {
      if (!group) {
        fail(kExitValidation, path + ": has a group column; pass the group label to select rows "
                                     "(--x-group / --y-group)");
      }
      if (cells[1] != *group) continue;
    }
    values.push_back(v);
  }
  if (values.empty()) {
    fail(kExitValidation, path + ": no usable rows" + (group ? " for group '" + *group + "'" : ""));
  }
  return values;
}

// --bandwidth grammar: two_thirds | root_log | power:A | scaled_log:C,P | fixed:H
void apply_bandwidth_flag(ovl_config* cfg, const std::string& spec) {
  std::string rule = spec;
  double p1 = 0.0, p2 = 0.0;
  const size_t colon = spec.find(':');
  if (colon != std::string::npos) {
    rule = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);
    const size_t comma = args.find(',');
    const std::string first = comma == std::string::npos ? args : args.substr(0, comma);
    if (!parse_double(first, p1)) {
      fail(kExitValidation, "bad bandwidth parameter '" + first + "' in '" + spec + "'");
    }
    if (comma != std::string::npos && !parse_double(args.substr(comma + 1), p2)) {
      fail(kExitValidation, "bad bandwidth parameter in '" + spec + "'");
    }
  }
  if (ovl_config_set_bandwidth(cfg, rule.c_str(), p1, p2) != OVL_OK) {
    fail(kExitValidation, ovl_last_error());
  }
}

// --support grammar: auto | LO,HI | quantile:Q
void apply_support_flag(ovl_config* cfg, const std::string& spec) {
  if (spec == "auto") {
    ovl_config_set_support_auto(cfg);
    return;
  }
  if (spec.rfind("quantile:", 0) == 0) {
    double q = 0.0;
    if (!parse_double(spec.substr(9), q)) {
      fail(kExitValidation, "bad quantile in '" + spec + "'");
    }
    if (ovl_config_set_support_quantile(cfg, q) != OVL_OK) {
      fail(kExitValidation, ovl_last_error());
    }
    return;
  }
  const size_t comma = spec.find(',');
  double lo = 0.0, hi = 0.0;
  if (comma == std::string::npos || !parse_double(spec.substr(0, comma), lo) ||
      !parse_double(spec.substr(comma + 1), hi)) {
    fail(kExitValidation, "--support expects 'auto', 'lo,hi', or 'quantile:q'; got '" + spec + "'");
  }
  if (ovl_config_set_support_explicit(cfg, lo, hi) != OVL_OK) {
    fail(kExitValidation, ovl_last_error());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(kExitValidation, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(kExitValidation, "short write to '" + path + "'");
}

// %.17g round-trips doubles exactly and keeps the files byte-stable.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int cmd_estimate(const std::string& x_path, const std::string& y_path,
                 const std::optional<std::string>& x_group,
                 const std::optional<std::string>& y_group, const std::string& kernel,
                 const std::string& bw_spec, const std::string& support_spec, int grid,
                 double level, const std::string& out_path) {
  ovl_config* cfg = ovl_config_new();
  if (!cfg) fail(kExitValidation, "out of memory");
  if (ovl_config_set_kernel(cfg, kernel.c_str()) != OVL_OK) {
    fail(kExitValidation, ovl_last_error());
  }
  apply_bandwidth_flag(cfg, bw_spec);
  apply_support_flag(cfg, support_spec);
  if (ovl_config_set_grid(cfg, grid) != OVL_OK) fail(kExitValidation, ovl_last_error());
  if (ovl_config_set_level(cfg, level) != OVL_OK) fail(kExitValidation, ovl_last_error());

  const std::vector<double> x = read_sample_csv(x_path, x_group);
  const std::vector<double> y = read_sample_csv(y_path, y_group);

  ovl_status st = OVL_OK;
  ovl_report* rep = ovl_estimate(cfg, x.data(), x.size(), y.data(), y.size(), &st);
  ovl_config_free(cfg);
  if (!rep) fail(exit_code_for(st), ovl_last_error());

  const std::string json = take_string(ovl_report_json(rep));
  ovl_report_free(rep);
  if (out_path.empty()) {
    std::cout << json << "\n";
  } else {
    write_text_file(out_path, json + "\n");
    std::cout << "report written to " << out_path << "\n";
  }
  return 0;
}

int cmd_simulate(const std::string& scenario, const std::string& measure, size_t n, size_t reps,
                 uint64_t seed, const std::string& kernel, int grid, unsigned threads,
                 const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(kExitValidation, "cannot create output directory '" + out_dir + "': " + ec.message());

  ovl_status st = OVL_OK;
  ovl_sim* sim = ovl_simulate(scenario.c_str(), measure.c_str(), n, reps, seed, kernel.c_str(),
                              grid, threads, &st);
  if (!sim) fail(exit_code_for(st), ovl_last_error());

  const auto path = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  {
    std::ostringstream os;
    os << "replicate,seed,value\n";
    for (size_t i = 0; i < ovl_sim_count(sim); ++i) {
      char seed_buf[32];
      std::snprintf(seed_buf, sizeof(seed_buf), "%" PRIu64, ovl_sim_replicate_seed(sim, i));
      os << i << "," << seed_buf << "," << fmt(ovl_sim_value(sim, i)) << "\n";
    }
    write_text_file(path("replicates.csv"), os.str());
  }
  {
    std::ostringstream os;
    os << "theoretical_quantile,order_statistic\n";
    for (size_t i = 0; i < ovl_sim_qq_count(sim); ++i) {
      double t = 0.0, e = 0.0;
      ovl_sim_qq_pair(sim, i, &t, &e);
      os << fmt(t) << "," << fmt(e) << "\n";
    }
    write_text_file(path("qq.csv"), os.str());
  }
  {
    std::ostringstream os;
    os << "bin_lo,bin_hi,count\n";
    for (size_t i = 0; i < ovl_sim_histogram_count(sim); ++i) {
      double lo = 0.0, hi = 0.0;
      size_t count = 0;
      ovl_sim_histogram_bin(sim, i, &lo, &hi, &count);
      os << fmt(lo) << "," << fmt(hi) << "," << count << "\n";
    }
    write_text_file(path("histogram.csv"), os.str());
  }
  write_text_file(path("summary.json"), take_string(ovl_sim_summary_json(sim)) + "\n");
  ovl_sim_free(sim);
  std::cout << "simulation outputs written to " << out_dir << "\n";
  return 0;
}

int cmd_kernels(bool as_json) {
  const std::string json = take_string(ovl_kernels_json());
  if (as_json) {
    std::cout << json << "\n";
    return 0;
  }
  nlohmann::json rows;
  try {
    rows = nlohmann::json::parse(json);
  } catch (const std::exception& e) {
    fail(kExitValidation, std::string("kernel listing is not valid JSON: ") + e.what());
  }
  std::printf("%-14s %8s %8s %10s %10s\n", "kernel", "k01", "k11", "k21", "k02");
  for (const auto& row : rows) {
    std::printf("%-14s %8g %8g %10g %10g\n", row.at("name").get<std::string>().c_str(),
                row.at("k01").get<double>(), row.at("k11").get<double>(),
                row.at("k21").get<double>(), row.at("k02").get<double>());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"overlap — nonparametric overlap measures for two univariate samples"};
  app.require_subcommand(1);

  // estimate
  std::string x_path, y_path, out_path;
  std::string x_group_raw, y_group_raw;
  std::string kernel = "epanechnikov";
  std::string bw_spec = "two_thirds";
  std::string support_spec = "auto";
  int grid = 1001;
  double level = 0.95;
  auto* est = app.add_subcommand("estimate", "estimate overlap measures between two samples");
  est->add_option("--x", x_path, "CSV file with the first sample")->required();
  est->add_option("--y", y_path, "CSV file with the second sample")->required();
  est->add_option("--x-group", x_group_raw, "group label selecting rows of --x (two-column files)");
  est->add_option("--y-group", y_group_raw, "group label selecting rows of --y (two-column files)");
  est->add_option("--kernel", kernel, "epanechnikov|triangular|biweight|box (default epanechnikov)");
  est->add_option("--bandwidth", bw_spec,
                  "two_thirds|root_log|power:A|scaled_log:C,P|fixed:H (default two_thirds)");
  est->add_option("--support", support_spec, "auto | lo,hi | quantile:q (default auto)");
  est->add_option("--grid", grid, "grid size, odd >= 3 (default 1001)");
  est->add_option("--level", level, "confidence level in (0,1) (default 0.95)");
  est->add_option("--out", out_path, "write the JSON report here instead of stdout");

  // simulate
  std::string scenario, sim_out_dir;
  std::string sim_measure = "pianka";
  std::string sim_kernel = "epanechnikov";
  size_t sim_n = 500, sim_reps = 500;
  uint64_t sim_seed = 0;
  int sim_grid = 1001;
  unsigned sim_threads = 0;
  auto* sim = app.add_subcommand("simulate", "replicate the scaled estimator under a scenario");
  sim->add_option("--scenario", scenario, "case_I | case_II")->required();
  sim->add_option("--n", sim_n, "sample size per replicate")->required();
  sim->add_option("--reps", sim_reps, "number of replicates")->required();
  sim->add_option("--seed", sim_seed, "master seed")->required();
  sim->add_option("--out", sim_out_dir, "output directory")->required();
  sim->add_option("--measure", sim_measure, "pianka | macarthur_levins (default pianka)");
  sim->add_option("--kernel", sim_kernel, "kernel name (default epanechnikov)");
  sim->add_option("--grid", sim_grid, "grid size, odd >= 3 (default 1001)");
  sim->add_option("--threads", sim_threads, "worker threads, 0 = auto (results identical)");

  // kernels
  bool kernels_json = false;
  auto* ker = app.add_subcommand("kernels", "list built-in kernels and moment constants");
  ker->add_flag("--json", kernels_json, "emit JSON instead of a table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  if (est->parsed()) {
    std::optional<std::string> xg, yg;
    if (!x_group_raw.empty()) xg = x_group_raw;
    if (!y_group_raw.empty()) yg = y_group_raw;
    return cmd_estimate(x_path, y_path, xg, yg, kernel, bw_spec, support_spec, grid, level,
                        out_path);
  }
  if (sim->parsed()) {
    return cmd_simulate(scenario, sim_measure, sim_n, sim_reps, sim_seed, sim_kernel, sim_grid,
                        sim_threads, sim_out_dir);
  }
  return cmd_kernels(kernels_json);
}
