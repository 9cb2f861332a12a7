#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ovl {

// Thrown when an argument violates a documented precondition.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a density is numerically degenerate (zero norm, zero variance
// denominator) and the requested quantity is undefined.
class degenerate_error : public std::runtime_error {
 public:
  explicit degenerate_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A symmetric probability kernel with compact support [-half_width, half_width].
// Built-ins are standardized to half_width = 1. The moment constants
// k_ij = integral of u^i * K(u)^j over the support feed every variance formula,
// so they are cached after first computation (closed forms for built-ins,
// quadrature for custom kernels).
class Kernel {
 public:
  Kernel(std::string name, double half_width, std::function<double(double)> eval);

  const std::string& name() const { return name_; }
  double half_width() const { return half_width_; }

  // K(u); exactly zero outside [-half_width, half_width].
  double operator()(double u) const;

  // k_ij for 0 <= i <= 4, 1 <= j <= 2. Out-of-range pairs throw.
  double moment(int i, int j) const;

  // Registers an exact value so moment() never falls back to quadrature.
  void set_closed_form_moment(int i, int j, double value);

 private:
  static constexpr int kMaxI = 4;
  static constexpr int kMaxJ = 2;
  int slot(int i, int j) const;

  std::string name_;
  double half_width_;
  std::function<double(double)> eval_;
  mutable std::mutex cache_mutex_;
  mutable std::vector<std::optional<double>> moment_cache_;
};

// The built-in kernel family: epanechnikov (default), triangular, biweight,
// box. All have compact support; a Gaussian kernel is deliberately absent
// because the asymptotic theory implemented here requires compact support.
const Kernel& builtin_kernel(const std::string& name);
std::vector<std::string> builtin_kernel_names();

}  // namespace ovl
