#include "noisy_amp/scissor.hpp"

#include <cmath>

#include "noisy_amp/channels.hpp"
#include "noisy_amp/errors.hpp"
#include "noisy_amp/multimode.hpp"
#include "noisy_amp/special.hpp"

namespace noisy_amp {
namespace {

using Index = Eigen::Index;

ScissorOutcome finish(const CVector& out, const ScissorConfig& cfg, double canonical_probability) {
  const double norm2 = out.squaredNorm();
  if (!(norm2 > cfg.spec().num_tol() * cfg.spec().num_tol())) {
    throw ZeroTrace("scissor: filtered state vanishes");
  }
  const Ket ket(out / std::sqrt(norm2), cfg.spec());
  return {DensityOperator::from_ket(ket), canonical_probability * detection_multiplicity(cfg.arms()),
          canonical_probability};
}

}  // namespace

ScissorConfig::ScissorConfig(int arms, double gain, HilbertSpec spec) : arms_(arms), gain_(gain), spec_(spec) {
  if (arms < 1) throw InvalidInput("ScissorConfig: number of scissors must be >= 1");
  if (!std::isfinite(gain) || gain <= 0.0) throw InvalidInput("ScissorConfig: gain must be > 0");
}

double detection_multiplicity(int arms) { return std::pow(2.0, arms); }

FockOperator scissor_filter(const ScissorConfig& cfg) {
  const std::size_t dim = cfg.spec().dim();
  const auto arms = static_cast<std::size_t>(cfg.arms());
  CMatrix m = CMatrix::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  const double log_arms = std::log(static_cast<double>(arms));
  for (std::size_t n = 0; n <= arms && n < dim; ++n) {
    const double nd = static_cast<double>(n);
    const double log_comb = special::log_factorial(arms) - special::log_factorial(arms - n) - nd * log_arms;
    m(static_cast<Index>(n), static_cast<Index>(n)) = std::pow(cfg.gain(), nd) * std::exp(log_comb);
  }
  return FockOperator(std::move(m), cfg.spec());
}

ScissorOutcome scissor_amplify(const Ket& psi, const ScissorConfig& cfg) {
  const CVector filtered = scissor_filter(cfg).apply(psi);
  const double p = filtered.squaredNorm() / std::pow(1.0 + cfg.gain() * cfg.gain(), cfg.arms()) /
                   detection_multiplicity(cfg.arms());
  return finish(filtered, cfg, p);
}

ScissorOutcome circuit_oracle(const Ket& psi, const ScissorConfig& cfg) {
  const int arms = cfg.arms();
  if (arms > 3) throw InvalidInput("circuit_oracle: supports at most 3 scissors");
  if (psi.dim() != cfg.spec().dim()) throw DimensionMismatch("circuit_oracle: ket and config dimensions differ");
  const std::size_t n_arms = static_cast<std::size_t>(arms);
  const std::size_t dim = psi.dim();
  const HilbertSpec arm_spec = psi.spec();
  const HilbertSpec photon_spec = arm_spec.with_dim(2);
  // After recombination at most N photons share one mode.
  const HilbertSpec out_spec = arm_spec.with_dim(n_arms + 1);
  if (dim < n_arms + 1) throw DimensionMismatch("circuit_oracle: spec too small for the recombined output");

  std::vector<double> split_t;
  for (std::size_t j = 0; j + 1 < n_arms; ++j) split_t.push_back(1.0 / static_cast<double>(n_arms - j));

  MultiModeKet state(psi);
  for (std::size_t j = 1; j < n_arms; ++j) state = state.with_mode(dim, 0);
  for (std::size_t j = 0; j + 1 < n_arms; ++j) {
    state = state.applied(beam_splitter(split_t[j], arm_spec, arm_spec), j, j + 1);
  }

  const TwoModeOperator ancilla_bs = beam_splitter(cfg.ancilla_transmittance(), photon_spec, out_spec);
  const TwoModeOperator mixer = beam_splitter(0.5, arm_spec, photon_spec);
  for (std::size_t j = 0; j < n_arms; ++j) {
    // The unprocessed arm is always mode 0; processed outputs collect at the end.
    const std::size_t c = state.modes();
    const std::size_t b = c + 1;
    state = state.with_mode(2, 1).with_mode(n_arms + 1, 0);
    state = state.applied(ancilla_bs, c, b);
    state = state.applied(mixer, 0, c);
    state = state.projected(c, 1).projected(0, 0);
  }

  for (std::size_t j = n_arms - 1; j-- > 0;) {
    state = state.applied(beam_splitter(split_t[j], out_spec, out_spec).adjoint(), j, j + 1);
  }
  for (std::size_t j = n_arms; j-- > 1;) state = state.projected(j, 0);

  const CVector small = state.single_mode();
  CVector out = CVector::Zero(static_cast<Index>(dim));
  out.head(small.size()) = small;
  return finish(out, cfg, out.squaredNorm() / psi.norm2());
}

}  // namespace noisy_amp
