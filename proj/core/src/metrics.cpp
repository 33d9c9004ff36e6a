#include "noisy_amp/metrics.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "noisy_amp/errors.hpp"

namespace noisy_amp {
namespace {

using Index = Eigen::Index;

double trace_of(const DensityOperator& rho) {
  const double tr = rho.matrix().trace().real();
  if (!(tr > rho.spec().num_tol())) throw ZeroTrace("metrics: state has vanishing trace");
  return tr;
}

struct PhasePoint {
  cplx amplitude_gain;
  double effective_gain;
  double fidelity;
  double holevo;
  std::size_t dim;
};

PhasePoint evaluate_phase_point(cplx alpha, double gain, const PhotonicOp& op, const PipelineOptions& options) {
  const std::size_t start = initial_dimension(std::abs(alpha), gain, op.order());
  return with_adaptive_dim(start, options, [&](const HilbertSpec& spec) {
    const PipelineState p = run_pipeline(alpha, gain, op, spec);
    const cplx g = amplitude_gain(p.state, alpha);
    const double ge = std::norm(g);
    return PhasePoint{g, ge, fidelity_to_target(p.state, alpha, ge), holevo_variance(p.state), spec.dim()};
  });
}

}  // namespace

cplx amplitude_gain(const DensityOperator& rho_op, cplx alpha) {
  if (alpha == cplx(0.0)) throw InvalidInput("effective gain is undefined for alpha = 0");
  const CMatrix& m = rho_op.matrix();
  cplx mean = 0.0;
  for (Index n = 0; n + 1 < m.rows(); ++n) mean += std::sqrt(static_cast<double>(n + 1)) * m(n + 1, n);
  return mean / trace_of(rho_op) / alpha;
}

double effective_gain(const DensityOperator& rho_op, cplx alpha) { return std::norm(amplitude_gain(rho_op, alpha)); }

double fidelity_to_target(const DensityOperator& rho_op, cplx alpha, double effective_gain) {
  if (!std::isfinite(effective_gain) || effective_gain < 0.0) {
    throw InvalidInput("fidelity_to_target: effective gain must be >= 0");
  }
  const Ket target = coherent_ket(std::sqrt(effective_gain) * alpha, rho_op.spec());
  const CVector& c = target.amplitudes();
  const double overlap = (c.adjoint() * rho_op.matrix() * c)(0, 0).real() / trace_of(rho_op);
  return std::sqrt(std::max(0.0, overlap));
}

cplx phase_sharpness(const DensityOperator& rho) {
  const CMatrix& m = rho.matrix();
  cplx mu = 0.0;
  for (Index n = 0; n + 1 < m.rows(); ++n) mu += m(n + 1, n);
  return mu / trace_of(rho);
}

double holevo_variance(const DensityOperator& rho) {
  const double mu = std::abs(phase_sharpness(rho));
  if (mu <= rho.spec().num_tol()) return std::numeric_limits<double>::infinity();
  return 1.0 / (mu * mu) - 1.0;
}

std::vector<double> wigner(const DensityOperator& rho, std::span<const cplx> grid) {
  const double tr = trace_of(rho);
  const Index dim = static_cast<Index>(rho.dim());
  Eigen::VectorXd parity(dim);
  for (Index n = 0; n < dim; ++n) parity(n) = (n % 2 == 0) ? 1.0 : -1.0;

  std::vector<double> out;
  out.reserve(grid.size());
  for (const cplx beta : grid) {
    const FockOperator d = displacement_operator(2.0 * beta, rho.spec());
    // sum_{n,m} rho(n, m) D(m, n) (-1)^n
    const Eigen::VectorXcd rows = rho.matrix().cwiseProduct(d.matrix().transpose()).rowwise().sum();
    out.push_back(2.0 / std::numbers::pi * (rows.dot(parity.cast<cplx>())).real() / tr);
  }
  return out;
}

MetricReport evaluate_pipeline(cplx alpha, double gain, const std::optional<PhotonicOp>& op,
                               const PipelineOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const std::size_t start = initial_dimension(std::abs(alpha), gain, op ? op->order() : 0);
  MetricReport report = with_adaptive_dim(start, options, [&](const HilbertSpec& spec) {
    const PipelineState p = run_pipeline(alpha, gain, op, spec);
    MetricReport r;
    r.effective_gain = effective_gain(p.state, alpha);
    r.fidelity = fidelity_to_target(p.state, alpha, r.effective_gain);
    r.holevo_variance = holevo_variance(p.state);
    r.dim = spec.dim();
    r.trunc_deficit = p.trunc_deficit;
    return r;
  });
  report.gain = gain;
  report.alpha = alpha;
  report.scheme = op ? op->label() : "pila";
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

PhaseAverages phase_average_all(double mod_alpha, const PhotonicOp& op, double gain, int n_phases,
                                const PipelineOptions& options) {
  if (n_phases < 8) throw InvalidInput("phase_averaged: n_phases must be at least 8");
  if (!(mod_alpha > 0.0)) throw InvalidInput("phase_averaged: mod_alpha must be positive");
  PhaseAverages avg;
  cplx amp_sum = 0.0;
  for (int k = 0; k < n_phases; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / n_phases;
    const PhasePoint p = evaluate_phase_point(std::polar(mod_alpha, phi), gain, op, options);
    avg.gain += p.effective_gain;
    amp_sum += p.amplitude_gain;
    avg.fidelity += p.fidelity;
    avg.holevo_variance += p.holevo;
    avg.max_dim = std::max(avg.max_dim, p.dim);
  }
  const double n = static_cast<double>(n_phases);
  avg.gain /= n;
  avg.amplitude_gain = std::norm(amp_sum / n);
  avg.fidelity /= n;
  avg.holevo_variance /= n;
  return avg;
}

double phase_averaged(PhaseMetric metric, double mod_alpha, const PhotonicOp& op, double gain, int n_phases,
                      const PipelineOptions& options) {
  const PhaseAverages avg = phase_average_all(mod_alpha, op, gain, n_phases, options);
  switch (metric) {
    case PhaseMetric::Gain:
      return avg.gain;
    case PhaseMetric::AmplitudeGain:
      return avg.amplitude_gain;
    case PhaseMetric::Fidelity:
      return avg.fidelity;
    case PhaseMetric::Holevo:
      return avg.holevo_variance;
  }
  throw InvalidInput("phase_averaged: unknown metric");
}

}  // namespace noisy_amp
