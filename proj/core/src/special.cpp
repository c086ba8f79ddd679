#include "adet/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "adet/error.hpp"

namespace adet {

double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_factorial_ratio(int n, int k) { return std::lgamma(static_cast<double>(n)) - std::lgamma(static_cast<double>(n + k)); }

double incomplete_gamma_reg(int k_plus_1, double a) {
  if (k_plus_1 < 1) throw_invalid("incomplete_gamma_reg: order must be >= 1");
  if (!(a >= 0.0)) throw_invalid("incomplete_gamma_reg: argument must be >= 0");
  if (a == 0.0) return 1.0;
  if (std::isinf(a)) return 0.0;
  const double log_a = std::log(a);
  // Largest term sits at m = min(k, floor(a)); sum relative to it.
  std::vector<double> log_terms(static_cast<std::size_t>(k_plus_1));
  double log_term = -a;
  for (int m = 0; m < k_plus_1; ++m) {
    if (m > 0) log_term += log_a - std::log(static_cast<double>(m));
    log_terms[static_cast<std::size_t>(m)] = log_term;
  }
  const double peak = *std::max_element(log_terms.begin(), log_terms.end());
  double sum = 0.0;
  // Smallest terms first.
  std::sort(log_terms.begin(), log_terms.end());
  for (double lt : log_terms) sum += std::exp(lt - peak);
  return std::min(1.0, std::exp(peak + std::log(sum)));
}

double incomplete_gamma_reg_complement(int k_plus_1, double a) {
  if (k_plus_1 < 1) throw_invalid("incomplete_gamma_reg_complement: order must be >= 1");
  if (!(a >= 0.0)) throw_invalid("incomplete_gamma_reg_complement: argument must be >= 0");
  if (a == 0.0) return 0.0;
  if (a >= k_plus_1) return 1.0 - incomplete_gamma_reg(k_plus_1, a);
  // e^{-a} sum_{m > k} a^m / m!; terms decrease once m >= a, and a < k+1 here.
  const double log_a = std::log(a);
  double log_term = -a + k_plus_1 * log_a - std::lgamma(k_plus_1 + 1.0);
  const double first = log_term;
  double sum = 0.0;
  for (int m = k_plus_1; m < k_plus_1 + 1000; ++m) {
    const double t = std::exp(log_term - first);
    sum += t;
    if (t < 1e-17 * sum) break;
    log_term += log_a - std::log(m + 1.0);
  }
  return std::min(1.0, std::exp(first) * sum);
}

}  // namespace adet
