#include "core/kernels.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <utility>

namespace ovl {
namespace {

// Composite Simpson with 2001 points over [-w, w]; used only for kernels
// without a registered closed form.
double simpson_moment(const std::function<double(double)>& k, double w, int i, int j) {
  const int m = 2001;
  const double step = 2.0 * w / (m - 1);
  double acc = 0.0;
  for (int idx = 0; idx < m; ++idx) {
    const double u = -w + step * idx;
    double term = std::pow(u, i) * std::pow(k(u), j);
    const double coef = (idx == 0 || idx == m - 1) ? 1.0 : (idx % 2 == 1 ? 4.0 : 2.0);
    acc += coef * term;
  }
  return acc * step / 3.0;
}

}  // namespace

Kernel::Kernel(std::string name, double half_width, std::function<double(double)> eval)
    : name_(std::move(name)),
      half_width_(half_width),
      eval_(std::move(eval)),
      moment_cache_((kMaxI + 1) * kMaxJ) {
  if (!(half_width_ > 0.0)) {
    throw validation_error("kernel half_width must be positive");
  }
}

double Kernel::operator()(double u) const {
  if (std::abs(u) > half_width_) return 0.0;
  return eval_(u);
}

int Kernel::slot(int i, int j) const {
  if (i < 0 || i > kMaxI || j < 1 || j > kMaxJ) {
    throw validation_error("kernel moment k_" + std::to_string(i) + std::to_string(j) +
                           " is outside the supported range (i <= 4, j <= 2)");
  }
  return i * kMaxJ + (j - 1);
}

double Kernel::moment(int i, int j) const {
  const int s = slot(i, j);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (!moment_cache_[s]) {
    moment_cache_[s] = simpson_moment(eval_, half_width_, i, j);
  }
  return *moment_cache_[s];
}

void Kernel::set_closed_form_moment(int i, int j, double value) {
  const int s = slot(i, j);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  moment_cache_[s] = value;
}

namespace {

std::unique_ptr<Kernel> make_builtin(const std::string& name) {
  if (name == "epanechnikov") {
    auto k = std::make_unique<Kernel>(name, 1.0, [](double u) { return 0.75 * (1.0 - u * u); });
    k->set_closed_form_moment(0, 1, 1.0);
    k->set_closed_form_moment(1, 1, 0.0);
    k->set_closed_form_moment(2, 1, 1.0 / 5.0);
    k->set_closed_form_moment(3, 1, 0.0);
    k->set_closed_form_moment(4, 1, 3.0 / 35.0);
    k->set_closed_form_moment(0, 2, 3.0 / 5.0);
    k->set_closed_form_moment(1, 2, 0.0);
    k->set_closed_form_moment(2, 2, 3.0 / 35.0);
    return k;
  }
  if (name == "triangular") {
    auto k = std::make_unique<Kernel>(name, 1.0, [](double u) { return 1.0 - std::abs(u); });
    k->set_closed_form_moment(0, 1, 1.0);
    k->set_closed_form_moment(1, 1, 0.0);
    k->set_closed_form_moment(2, 1, 1.0 / 6.0);
    k->set_closed_form_moment(3, 1, 0.0);
    k->set_closed_form_moment(4, 1, 1.0 / 15.0);
    k->set_closed_form_moment(0, 2, 2.0 / 3.0);
    k->set_closed_form_moment(1, 2, 0.0);
    k->set_closed_form_moment(2, 2, 1.0 / 15.0);
    return k;
  }
  if (name == "biweight") {
    auto k = std::make_unique<Kernel>(name, 1.0, [](double u) {
      const double t = 1.0 - u * u;
      return (15.0 / 16.0) * t * t;
    });
    k->set_closed_form_moment(0, 1, 1.0);
    k->set_closed_form_moment(1, 1, 0.0);
    k->set_closed_form_moment(2, 1, 1.0 / 7.0);
    k->set_closed_form_moment(3, 1, 0.0);
    k->set_closed_form_moment(4, 1, 1.0 / 21.0);
    k->set_closed_form_moment(0, 2, 5.0 / 7.0);
    k->set_closed_form_moment(1, 2, 0.0);
    k->set_closed_form_moment(2, 2, 5.0 / 77.0);
    return k;
  }
  if (name == "box") {
    auto k = std::make_unique<Kernel>(name, 1.0, [](double) { return 0.5; });
    k->set_closed_form_moment(0, 1, 1.0);
    k->set_closed_form_moment(1, 1, 0.0);
    k->set_closed_form_moment(2, 1, 1.0 / 3.0);
    k->set_closed_form_moment(3, 1, 0.0);
    k->set_closed_form_moment(4, 1, 1.0 / 5.0);
    k->set_closed_form_moment(0, 2, 1.0 / 2.0);
    k->set_closed_form_moment(1, 2, 0.0);
    k->set_closed_form_moment(2, 2, 1.0 / 6.0);
    return k;
  }
  return nullptr;
}

}  // namespace

const Kernel& builtin_kernel(const std::string& name) {
  static std::mutex registry_mutex;
  static std::map<std::string, std::unique_ptr<Kernel>> registry;
  std::lock_guard<std::mutex> lock(registry_mutex);
  auto it = registry.find(name);
  if (it == registry.end()) {
    auto k = make_builtin(name);
    if (!k) {
      throw validation_error("unknown kernel '" + name +
                             "'; built-ins: epanechnikov, triangular, biweight, box");
    }
    it = registry.emplace(name, std::move(k)).first;
  }
  return *it->second;
}

std::vector<std::string> builtin_kernel_names() {
  return {"epanechnikov", "triangular", "biweight", "box"};
}

}  // namespace ovl
