#include "noisy_amp/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "noisy_amp/errors.hpp"

namespace noisy_amp {

std::size_t initial_dimension(double amplitude, double gain, int order) {
  const double reach = std::sqrt(gain) * amplitude + std::sqrt(std::max(gain - 1.0, 0.0)) + order + 2.0;
  return std::max<std::size_t>(20, static_cast<std::size_t>(std::ceil(4.0 * reach * reach)));
}

PipelineState run_pipeline(cplx alpha, double gain, const std::optional<PhotonicOp>& op, const HilbertSpec& spec) {
  const DensityOperator amplified = pila_coherent(alpha, gain, spec);
  const double deficit = std::max(0.0, 1.0 - amplified.weight());
  if (!op) {
    auto [state, weight] = normalize(amplified);
    return {std::move(state), weight, deficit};
  }
  const DensityOperator branch = apply_operation(amplified, build_operator(*op, spec));
  auto [state, weight] = normalize(branch);
  return {std::move(state), weight, deficit};
}

}  // namespace noisy_amp
