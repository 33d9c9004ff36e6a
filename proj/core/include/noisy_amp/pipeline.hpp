#pragma once

// Amplifier -> heralded operation pipeline with adaptive truncation.

#include <cstddef>
#include <optional>

#include "noisy_amp/channels.hpp"
#include "noisy_amp/errors.hpp"
#include "noisy_amp/fock.hpp"

namespace noisy_amp {

struct PipelineOptions {
  /// Fixed truncation dimension. When unset the dimension is chosen adaptively.
  std::optional<std::size_t> dim;
  /// Multiplies the chosen dimension; 2 is the convergence check.
  std::size_t dim_scale = 1;
  std::size_t max_dim = 4096;
  double trunc_tol = kDefaultTruncTol;
  double num_tol = kDefaultNumTol;
};

/// Starting truncation max(20, ceil(4 (sqrt(G)|alpha| + sqrt(G-1) + m + 2)^2)).
std::size_t initial_dimension(double amplitude, double gain, int order);

/// Retries `build` with doubled dimension while it throws TruncationError.
/// `build` receives a HilbertSpec and returns any value.
template <class Build>
auto with_adaptive_dim(std::size_t start, const PipelineOptions& options, Build&& build) {
  std::size_t dim = (options.dim ? *options.dim : start) * options.dim_scale;
  for (;;) {
    const HilbertSpec spec(dim, options.trunc_tol, options.num_tol);
    try {
      return build(spec);
    } catch (const TruncationError&) {
      if (options.dim || 2 * dim > options.max_dim * options.dim_scale) throw;
      dim *= 2;
    }
  }
}

struct PipelineState {
  DensityOperator state;  // normalized
  double weight;          // Tr(O rho_G O^dagger); 1 without an operation
  double trunc_deficit;   // 1 - Tr(rho_G) at the chosen dimension
};

/// |alpha> -> amplifier of gain G -> optional heralded operation -> normalize.
PipelineState run_pipeline(cplx alpha, double gain, const std::optional<PhotonicOp>& op, const HilbertSpec& spec);

}  // namespace noisy_amp
