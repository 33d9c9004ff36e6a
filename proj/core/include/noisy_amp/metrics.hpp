#pragma once

// Figures of merit for the amplified, heralded output state.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noisy_amp/channels.hpp"
#include "noisy_amp/fock.hpp"
#include "noisy_amp/pipeline.hpp"

namespace noisy_amp {

/// Metrics for one parameter point. holevo_variance may be +inf.
struct MetricReport {
  double gain = 1.0;
  double effective_gain = 0.0;
  double fidelity = 0.0;
  double holevo_variance = 0.0;
  std::optional<double> success_probability;
  /// Scissor schemes: P_s of the single canonical detection pattern.
  std::optional<double> canonical_success_probability;
  std::string scheme;
  cplx alpha{};

  // provenance
  std::size_t dim = 0;
  double trunc_deficit = 0.0;
  double wall_seconds = 0.0;
  std::string error;  // non-empty when the point failed

  bool ok() const noexcept { return error.empty(); }
};

/// Tr(a rho) / (Tr(rho) alpha). Throws InvalidInput for alpha == 0.
cplx amplitude_gain(const DensityOperator& rho_op, cplx alpha);

/// |Tr(a rho) / alpha|^2 for the normalized state.
double effective_gain(const DensityOperator& rho_op, cplx alpha);

/// sqrt(<beta|rho|beta>) with beta = sqrt(G_e) alpha. Throws TruncationError
/// if |beta> does not fit in rho's space.
double fidelity_to_target(const DensityOperator& rho_op, cplx alpha, double effective_gain);

/// Canonical-phase sharpness sum_n <n+1|rho|n> of the normalized state.
cplx phase_sharpness(const DensityOperator& rho);

/// 1/|mu|^2 - 1; +inf when |mu| <= num_tol.
double holevo_variance(const DensityOperator& rho);

/// W(beta) = (2/pi) Tr[rho D(beta) P D^dagger(beta)], P the parity, at each grid point.
/// Evaluated as (2/pi) Tr[rho D(2 beta) P].
std::vector<double> wigner(const DensityOperator& rho, std::span<const cplx> grid);

/// Runs the amplifier/operation pipeline with adaptive truncation and fills
/// G_e, F, V plus provenance. Errors propagate.
MetricReport evaluate_pipeline(cplx alpha, double gain, const std::optional<PhotonicOp>& op,
                               const PipelineOptions& options = {});

enum class PhaseMetric {
  Gain,           // mean of G_e(phi)
  AmplitudeGain,  // |mean of Tr(a rho)/alpha|^2
  Fidelity,       // mean of F(phi), each against its own G_e(phi)
  Holevo,         // mean of V(phi)
};

struct PhaseAverages {
  double gain = 0.0;            // mean of G_e(phi)
  double amplitude_gain = 0.0;  // |mean of Tr(a rho)/alpha|^2
  double fidelity = 0.0;
  double holevo_variance = 0.0;
  std::size_t max_dim = 0;      // largest truncation used over the phases
};

/// All phase averages from one pass over the n_phases input phases.
PhaseAverages phase_average_all(double mod_alpha, const PhotonicOp& op, double gain, int n_phases = 64,
                                const PipelineOptions& options = {});

/// Average of `metric` over the input phases 2 pi k / n_phases, k = 0 .. n_phases-1.
double phase_averaged(PhaseMetric metric, double mod_alpha, const PhotonicOp& op, double gain, int n_phases = 64,
                      const PipelineOptions& options = {});

}  // namespace noisy_amp
