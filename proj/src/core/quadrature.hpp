#pragma once

#include <map>
#include <utility>
#include <vector>

namespace ovl {

// A finite integration interval [lo, hi], lo < hi.
struct SupportInterval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
};

SupportInterval make_support(double lo, double hi);

// Composite Simpson rule over a uniform grid of values on `support`.
// Requires an odd point count >= 3.
double integrate(const std::vector<double>& values, const SupportInterval& support);

// Simpson integral of f^r * g^s for density values tabulated on a shared
// uniform grid. Negative inputs are clamped to zero before fractional powers
// (kernel estimates are nonnegative by construction; the clamp only guards
// user-supplied grids). r and s must be nonnegative multiples of 1/2.
double moment_integral(const std::vector<double>& fvals, const std::vector<double>& gvals,
                       double r, double s, const SupportInterval& support);

// The collection of moment integrals I(r,s) = integral of f^r * g^s that the
// variance formulas consume. Keys are stored as the exact integer pair
// (2r, 2s) to keep rational exponents out of float-keyed maps.
class MomentTable {
 public:
  MomentTable() = default;
  MomentTable(SupportInterval support, int grid_size);

  void set(double r, double s, double value);
  double at(double r, double s) const;  // throws validation_error if absent
  bool has(double r, double s) const;

  // The same table with the roles of f and g exchanged: I(r,s) <-> I(s,r).
  MomentTable swapped() const;

  const SupportInterval& support() const { return support_; }
  int grid_size() const { return grid_size_; }
  const std::map<std::pair<int, int>, double>& entries() const { return entries_; }

 private:
  static std::pair<int, int> key(double r, double s);

  SupportInterval support_{};
  int grid_size_ = 0;
  std::map<std::pair<int, int>, double> entries_;
};

// Builds the full table needed by the variance formulas — the nine pairs
// (1,1),(2,0),(0,2),(3,0),(0,3),(2,1),(1,2),(5/2,1/2),(1/2,5/2) plus the
// bookkeeping entries (0,0),(1,0),(0,1) — from density values tabulated on a
// shared uniform grid over `support`.
MomentTable build_moment_table(const std::vector<double>& fvals,
                               const std::vector<double>& gvals,
                               const SupportInterval& support);

}  // namespace ovl
