#pragma once

// Calibration and sweep drivers that turn the library into figure datasets.

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "noisy_amp/channels.hpp"
#include "noisy_amp/metrics.hpp"
#include "noisy_amp/pipeline.hpp"

namespace noisy_amp {

/// What follows (or replaces) the amplifier. The tuned parameter is the
/// amplifier gain G for every kind except Scissor, where it is the scissor
/// amplitude gain g.
class Scheme {
 public:
  enum class Kind { PilaOnly, PilaThen, PilaThenBsSubtraction, Scissor };

  static Scheme pila_only() { return Scheme(Kind::PilaOnly); }
  static Scheme pila_then(PhotonicOp op);
  static Scheme pila_then_bs_subtraction(double transmittance);
  static Scheme scissor(int arms);

  Kind kind() const noexcept { return kind_; }
  const std::optional<PhotonicOp>& op() const noexcept { return op_; }
  double transmittance() const noexcept { return transmittance_; }
  int arms() const noexcept { return arms_; }

  /// True for schemes backed by a measurement model with a physical P_s.
  bool heralded() const noexcept { return kind_ == Kind::PilaThenBsSubtraction || kind_ == Kind::Scissor; }
  std::string label() const;

 private:
  explicit Scheme(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::optional<PhotonicOp> op_;
  double transmittance_ = 0.99;
  int arms_ = 1;
};

/// Output state of a scheme with provenance.
struct SchemeState {
  DensityOperator state;  // normalized
  std::optional<double> success_probability;
  std::optional<double> canonical_success_probability;
  double trunc_deficit = 0.0;
};

SchemeState scheme_state(const Scheme& scheme, cplx alpha, double parameter, const HilbertSpec& spec);

/// Effective gain, fidelity, Holevo variance and (for heralded schemes) P_s of
/// one parameter point, with adaptive truncation.
MetricReport evaluate_scheme(const Scheme& scheme, cplx alpha, double parameter, const PipelineOptions& options = {});

/// Bisection for the parameter in [lo, hi] at which the measured effective
/// gain equals target_ge. Throws NoBracket with the gains reached at lo and hi.
double calibrate_gain(const Scheme& scheme, cplx alpha, double target_ge, double lo, double hi,
                      const PipelineOptions& options = {});

/// Generic bisection used by calibrate_gain: at most 60 halvings, stops once
/// |f(x)| <= ftol. Requires f(lo) and f(hi) of opposite sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, double ftol = 1e-10);

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepVar { Gain, Ratio, Phase, Grid };
enum class Output { EffectiveGain, Fidelity, Holevo, SuccessProbability, Wigner };

struct SweepRange {
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;
  /// steps equally spaced points, both ends included.
  std::vector<double> points() const;
};

struct SweepPlan {
  Scheme scheme = Scheme::pila_only();
  double alpha_mod = 0.2;
  SweepVar sweep_var = SweepVar::Gain;
  SweepRange range;
  std::set<Output> outputs{Output::EffectiveGain, Output::Fidelity, Output::Holevo};
  double gain = 1.2;    // fixed amplifier gain for Ratio, Phase and Grid sweeps
  double phase = 0.0;   // input phase for Gain and Grid sweeps
  int n_phases = 64;    // phase-average resolution for Ratio sweeps
  PipelineOptions options;

  /// Throws InvalidInput on inconsistent plans.
  void validate() const;
};

struct SweepRow {
  double value = 0.0;  // sweep coordinate (G, g, r or phi); x for Grid rows
  MetricReport report;
  /// Ratio sweeps: |phase average of Tr(a rho)/alpha|^2.
  std::optional<double> amplitude_gain_average;
  /// Grid sweeps: phase-space point and W there.
  std::optional<cplx> point;
  std::optional<double> wigner;
};

/// Rows in plan order regardless of how many worker threads ran. Per-point
/// library errors are stored in report.error and do not stop the sweep.
std::vector<SweepRow> run_sweep(const SweepPlan& plan);

/// Worker threads for sweeps: NOISY_AMP_THREADS if set to a positive integer,
/// otherwise the number of hardware threads.
std::size_t sweep_threads();

/// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------------------
// Scissor vs. subtraction comparison at a common target gain

enum class ScissorTarget {
  Nominal,   // g = sqrt(target), fidelity against |sqrt(target) alpha>
  Measured,  // g calibrated so the measured effective gain hits the target
};

struct SubtractionAtTarget {
  double pila_gain = 0.0;
  MetricReport report;
};

struct ScissorAtTarget {
  int arms = 0;
  double scissor_gain = 0.0;
  MetricReport report;  // report.fidelity is taken against the target amplitude
};

/// Amplifier + beam-splitter subtraction with an on-off detector, with G
/// calibrated so the measured effective gain equals target_ge.
SubtractionAtTarget subtraction_at_target(cplx alpha, double target_ge, double transmittance,
                                          const PipelineOptions& options = {});

/// N-scissor output at the target gain. With ScissorTarget::Measured and an
/// unreachable target, report.error is set instead of throwing.
ScissorAtTarget scissor_at_target(cplx alpha, int arms, double target_ge, ScissorTarget mode,
                                  const PipelineOptions& options = {});

}  // namespace noisy_amp
