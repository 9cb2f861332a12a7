#include "core/quadrature.hpp"

#include <cmath>
#include <string>

#include "core/kernels.hpp"

namespace ovl {

SupportInterval make_support(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw validation_error("support interval requires finite lo < hi, got [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return SupportInterval{lo, hi};
}

double integrate(const std::vector<double>& values, const SupportInterval& support) {
  const size_t m = values.size();
  if (m < 3 || m % 2 == 0) {
    throw validation_error("Simpson integration needs an odd point count >= 3, got " +
                           std::to_string(m));
  }
  const double step = support.length() / static_cast<double>(m - 1);
  double acc = values.front() + values.back();
  for (size_t i = 1; i + 1 < m; ++i) {
    acc += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
  }
  return acc * step / 3.0;
}

namespace {

// x^p with clamp-to-zero for negative bases and the conventions 0^0 = 1,
// integer powers evaluated by multiplication to avoid pow() cost in the hot
// table-building loop.
double clamped_pow(double x, double p) {
  if (x < 0.0) x = 0.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  if (p == 3.0) return x * x * x;
  return std::pow(x, p);
}

bool is_half_integer(double v) {
  return v >= 0.0 && std::abs(v * 2.0 - std::round(v * 2.0)) < 1e-12;
}

}  // namespace

double moment_integral(const std::vector<double>& fvals, const std::vector<double>& gvals,
                       double r, double s, const SupportInterval& support) {
  if (fvals.size() != gvals.size()) {
    throw validation_error("moment integral requires both densities on the same grid (" +
                           std::to_string(fvals.size()) + " vs " + std::to_string(gvals.size()) +
                           " points)");
  }
  if (!is_half_integer(r) || !is_half_integer(s)) {
    throw validation_error("moment exponents must be nonnegative multiples of 1/2");
  }
  std::vector<double> prod(fvals.size());
  for (size_t i = 0; i < fvals.size(); ++i) {
    prod[i] = clamped_pow(fvals[i], r) * clamped_pow(gvals[i], s);
  }
  return integrate(prod, support);
}

MomentTable::MomentTable(SupportInterval support, int grid_size)
    : support_(support), grid_size_(grid_size) {}

std::pair<int, int> MomentTable::key(double r, double s) {
  if (!is_half_integer(r) || !is_half_integer(s)) {
    throw validation_error("moment exponents must be nonnegative multiples of 1/2");
  }
  return {static_cast<int>(std::lround(r * 2.0)), static_cast<int>(std::lround(s * 2.0))};
}

void MomentTable::set(double r, double s, double value) { entries_[key(r, s)] = value; }

bool MomentTable::has(double r, double s) const { return entries_.count(key(r, s)) > 0; }

double MomentTable::at(double r, double s) const {
  auto it = entries_.find(key(r, s));
  if (it == entries_.end()) {
    throw validation_error("moment table has no entry I(" + std::to_string(r) + ", " +
                           std::to_string(s) + ")");
  }
  return it->second;
}

MomentTable MomentTable::swapped() const {
  MomentTable out(support_, grid_size_);
  for (const auto& [k, v] : entries_) {
    out.entries_[{k.second, k.first}] = v;
  }
  return out;
}

MomentTable build_moment_table(const std::vector<double>& fvals,
                               const std::vector<double>& gvals,
                               const SupportInterval& support) {
  static const double pairs[][2] = {
      {0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0},                            // bookkeeping
      {1.0, 1.0}, {2.0, 0.0}, {0.0, 2.0}, {3.0, 0.0}, {0.0, 3.0},    // variance inputs
      {2.0, 1.0}, {1.0, 2.0}, {2.5, 0.5}, {0.5, 2.5},
  };
  MomentTable t(support, static_cast<int>(fvals.size()));
  for (const auto& p : pairs) {
    t.set(p[0], p[1], moment_integral(fvals, gvals, p[0], p[1], support));
  }
  return t;
}

}  // namespace ovl
