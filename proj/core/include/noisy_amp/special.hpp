#pragma once

#include <cstddef>
#include <vector>

namespace noisy_amp::special {

/// ln(n!) from a cumulative table of logarithms; exact up to rounding for any n.
double log_factorial(std::size_t n);

/// ln C(n, k).
double log_binomial(std::size_t n, std::size_t k);

/// Generalized Laguerre polynomials L_0^{(k)}(x) ... L_{count-1}^{(k)}(x),
/// evaluated by the three-term recurrence in the degree.
std::vector<double> laguerre_sequence(std::size_t k, double x, std::size_t count);

}  // namespace noisy_amp::special
