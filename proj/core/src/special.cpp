#include "noisy_amp/special.hpp"

#include <cmath>

namespace noisy_amp::special {
namespace {

constexpr std::size_t kTableSize = 4096;

const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kTableSize);
    t[0] = 0.0;
    for (std::size_t n = 1; n < kTableSize; ++n) {
      t[n] = t[n - 1] + std::log(static_cast<double>(n));
    }
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(std::size_t n) {
  const auto& table = log_factorial_table();
  if (n < table.size()) return table[n];
  double acc = table.back();
  for (std::size_t j = table.size(); j <= n; ++j) acc += std::log(static_cast<double>(j));
  return acc;
}

double log_binomial(std::size_t n, std::size_t k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

std::vector<double> laguerre_sequence(std::size_t k, double x, std::size_t count) {
  std::vector<double> out(count);
  if (count == 0) return out;
  const double kd = static_cast<double>(k);
  out[0] = 1.0;
  if (count == 1) return out;
  out[1] = 1.0 + kd - x;
  for (std::size_t j = 1; j + 1 < count; ++j) {
    const double jd = static_cast<double>(j);
    out[j + 1] = ((2.0 * jd + 1.0 + kd - x) * out[j] - (jd + kd) * out[j - 1]) / (jd + 1.0);
  }
  return out;
}

}  // namespace noisy_amp::special
