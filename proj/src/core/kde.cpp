#include "core/kde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ovl {

Sample make_sample(std::vector<double> values) {
  if (values.size() < 2) {
    throw validation_error("a sample needs at least 2 observations, got " +
                           std::to_string(values.size()));
  }
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw validation_error("sample value at index " + std::to_string(i) + " is not finite");
    }
  }
  return Sample{std::move(values)};
}

BandwidthRule BandwidthRule::power(double alpha) {
  if (!(alpha > 1.0 / 3.0 && alpha < 1.0)) {
    throw validation_error(
        "power-rule exponent must lie in (1/3, 1) so that n*h^3 -> 0 while n*h -> infinity; got " +
        std::to_string(alpha));
  }
  BandwidthRule r;
  r.kind = Kind::power;
  r.alpha = alpha;
  return r;
}

BandwidthRule BandwidthRule::scaled_log(double c, double p) {
  if (!(c > 0.0)) throw validation_error("scaled_log constant must be positive");
  if (!(p > 1.0 / 3.0 && p < 1.0)) {
    throw validation_error("scaled_log exponent must lie in (1/3, 1); got " + std::to_string(p));
  }
  BandwidthRule r;
  r.kind = Kind::scaled_log;
  r.c = c;
  r.p = p;
  return r;
}

BandwidthRule BandwidthRule::root_log() {
  BandwidthRule r;
  r.kind = Kind::root_log;
  return r;
}

BandwidthRule BandwidthRule::two_thirds() {
  BandwidthRule r;
  r.kind = Kind::two_thirds;
  return r;
}

BandwidthRule BandwidthRule::fixed(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw validation_error("fixed bandwidth must be a positive finite number");
  }
  BandwidthRule r;
  r.kind = Kind::fixed;
  r.h = h;
  return r;
}

std::string BandwidthRule::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::power:
      os << "power(" << alpha << "): h = n^(-" << alpha << ")";
      break;
    case Kind::scaled_log:
      os << "scaled_log(" << c << ", " << p << "): h = sqrt(log n)/(" << c << "*n^" << p << ")";
      break;
    case Kind::root_log:
      os << "root_log: h = sqrt(log n)/(0.45*n^(2/3))";
      break;
    case Kind::two_thirds:
      os << "two_thirds: h = 4.2/n^(2/3)";
      break;
    case Kind::fixed:
      os << "fixed: h = " << h;
      break;
  }
  return os.str();
}

double bandwidth(const BandwidthRule& rule, size_t n) {
  if (n < 2) throw validation_error("bandwidth rules need n >= 2");
  const double dn = static_cast<double>(n);
  switch (rule.kind) {
    case BandwidthRule::Kind::power:
      return std::pow(dn, -rule.alpha);
    case BandwidthRule::Kind::scaled_log:
      return std::sqrt(std::log(dn)) / (rule.c * std::pow(dn, rule.p));
    case BandwidthRule::Kind::root_log:
      return std::sqrt(std::log(dn)) / (0.45 * std::pow(dn, 2.0 / 3.0));
    case BandwidthRule::Kind::two_thirds:
      return 4.2 / std::pow(dn, 2.0 / 3.0);
    case BandwidthRule::Kind::fixed:
      return rule.h;
  }
  throw validation_error("unreachable bandwidth rule kind");
}

double kde_eval(const Sample& s, const Kernel& k, double h, double x) {
  if (!(h > 0.0)) throw validation_error("bandwidth must be positive");
  const double w = k.half_width() * h;
  double acc = 0.0;
  for (double xi : s.values) {
    const double d = x - xi;
    if (d > w || d < -w) continue;  // compact support: early exit
    acc += k(d / h);
  }
  return acc / (static_cast<double>(s.n()) * h);
}

DensityEstimate kde_grid(const Sample& s, const Kernel& k, double h,
                         const SupportInterval& support, int m) {
  if (m < 3 || m % 2 == 0) {
    throw validation_error("grid size must be odd and >= 3, got " + std::to_string(m));
  }
  if (!(h > 0.0)) throw validation_error("bandwidth must be positive");
  DensityEstimate est;
  est.support = support;
  est.h = h;
  est.kernel = k.name();
  est.n = s.n();
  est.values.resize(m);
  const double step = support.length() / static_cast<double>(m - 1);
  // Sorting the sample turns each grid evaluation into a contiguous window
  // scan: only observations within h*half_width of x can contribute.
  std::vector<double> sorted = s.values;
  std::sort(sorted.begin(), sorted.end());
  const double w = k.half_width() * h;
  const double inv_nh = 1.0 / (static_cast<double>(s.n()) * h);
  for (int i = 0; i < m; ++i) {
    const double x = support.lo + step * i;
    auto first = std::lower_bound(sorted.begin(), sorted.end(), x - w);
    double acc = 0.0;
    for (auto it = first; it != sorted.end() && *it <= x + w; ++it) {
      acc += k((x - *it) / h);
    }
    est.values[i] = acc * inv_nh;
  }
  return est;
}

SupportInterval default_support(const Sample& s, const Kernel& k, double h) {
  const auto [mn, mx] = std::minmax_element(s.values.begin(), s.values.end());
  const double pad = k.half_width() * h;
  return make_support(*mn - pad, *mx + pad);
}

AssumptionDiagnostics assumption_diagnostics(const DensityEstimate& d, double threshold) {
  if (d.values.empty()) throw validation_error("diagnostics need a non-empty estimate");
  AssumptionDiagnostics out;
  out.threshold = threshold;
  const auto [mn, mx] = std::minmax_element(d.values.begin(), d.values.end());
  out.min_value = *mn;
  out.max_value = *mx;
  out.low_density_warning = (out.min_value <= threshold);
  return out;
}

}  // namespace ovl
