#include "noisy_amp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "noisy_amp/errors.hpp"
#include "noisy_amp/scissor.hpp"

namespace noisy_amp {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxBisections = 60;

std::size_t start_dimension(const Scheme& scheme, double amplitude, double parameter) {
  switch (scheme.kind()) {
    case Scheme::Kind::PilaOnly:
      return initial_dimension(amplitude, parameter, 0);
    case Scheme::Kind::PilaThen:
      return initial_dimension(amplitude, parameter, scheme.op()->order());
    case Scheme::Kind::PilaThenBsSubtraction:
      return initial_dimension(amplitude, parameter, 1);
    case Scheme::Kind::Scissor:
      // The output lives in n <= N; the fidelity target grows the space on demand.
      return initial_dimension(amplitude, 1.0, scheme.arms());
  }
  return 20;
}

void mark_failed(MetricReport& report, const std::exception& e) {
  report.error = e.what();
  report.effective_gain = kNaN;
  report.fidelity = kNaN;
  report.holevo_variance = kNaN;
  report.success_probability.reset();
  report.canonical_success_probability.reset();
}

}  // namespace

// ---------------------------------------------------------------------------

Scheme Scheme::pila_then(PhotonicOp op) {
  Scheme s(Kind::PilaThen);
  s.op_ = op;
  return s;
}

Scheme Scheme::pila_then_bs_subtraction(double transmittance) {
  if (!(transmittance > 0.0 && transmittance < 1.0)) {
    throw InvalidInput("Scheme: transmittance must be in (0, 1)");
  }
  Scheme s(Kind::PilaThenBsSubtraction);
  s.transmittance_ = transmittance;
  return s;
}

Scheme Scheme::scissor(int arms) {
  if (arms < 1) throw InvalidInput("Scheme: number of scissors must be >= 1");
  Scheme s(Kind::Scissor);
  s.arms_ = arms;
  return s;
}

std::string Scheme::label() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::PilaOnly:
      return "pila";
    case Kind::PilaThen:
      return op_->label();
    case Kind::PilaThenBsSubtraction:
      os << "bs(T=" << transmittance_ << ")";
      return os.str();
    case Kind::Scissor:
      os << "scissor(N=" << arms_ << ")";
      return os.str();
  }
  return {};
}

SchemeState scheme_state(const Scheme& scheme, cplx alpha, double parameter, const HilbertSpec& spec) {
  switch (scheme.kind()) {
    case Scheme::Kind::PilaOnly:
    case Scheme::Kind::PilaThen: {
      PipelineState p = run_pipeline(alpha, parameter, scheme.op(), spec);
      return {std::move(p.state), std::nullopt, std::nullopt, p.trunc_deficit};
    }
    case Scheme::Kind::PilaThenBsSubtraction: {
      const DensityOperator amplified = pila_coherent(alpha, parameter, spec);
      HeraldedState h = bs_subtraction(amplified, scheme.transmittance(), OnOff{});
      return {std::move(h.state), h.success_probability, std::nullopt, std::max(0.0, 1.0 - amplified.weight())};
    }
    case Scheme::Kind::Scissor: {
      const Ket input = coherent_ket(alpha, spec);
      ScissorOutcome out = scissor_amplify(input, ScissorConfig(scheme.arms(), parameter, spec));
      return {std::move(out.state), out.success_probability, out.canonical_success_probability,
              std::max(0.0, 1.0 - input.norm2())};
    }
  }
  throw InvalidInput("scheme_state: unknown scheme");
}

MetricReport evaluate_scheme(const Scheme& scheme, cplx alpha, double parameter, const PipelineOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  MetricReport report =
      with_adaptive_dim(start_dimension(scheme, std::abs(alpha), parameter), options, [&](const HilbertSpec& spec) {
        const SchemeState s = scheme_state(scheme, alpha, parameter, spec);
        MetricReport r;
        r.effective_gain = effective_gain(s.state, alpha);
        r.fidelity = fidelity_to_target(s.state, alpha, r.effective_gain);
        r.holevo_variance = holevo_variance(s.state);
        r.success_probability = s.success_probability;
        r.canonical_success_probability = s.canonical_success_probability;
        r.dim = spec.dim();
        r.trunc_deficit = s.trunc_deficit;
        return r;
      });
  report.gain = parameter;
  report.alpha = alpha;
  report.scheme = scheme.label();
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double ftol) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (std::abs(f_lo) <= ftol) return lo;
  if (std::abs(f_hi) <= ftol) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) throw NoBracket("bisect: root is not bracketed", f_lo, f_hi);
  for (int i = 0; i < kMaxBisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (std::abs(f_mid) <= ftol || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
      return mid;
    }
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double calibrate_gain(const Scheme& scheme, cplx alpha, double target_ge, double lo, double hi,
                      const PipelineOptions& options) {
  if (!(lo < hi)) throw InvalidInput("calibrate_gain: bounds must satisfy lo < hi");
  if (!(target_ge > 0.0)) throw InvalidInput("calibrate_gain: target gain must be positive");
  const auto f = [&](double x) { return evaluate_scheme(scheme, alpha, x, options).effective_gain - target_ge; };
  try {
    return bisect(f, lo, hi);
  } catch (const NoBracket& e) {
    std::ostringstream os;
    os << "calibrate_gain: target G_e = " << target_ge << " not bracketed for " << scheme.label() << "; G_e ranges over ["
       << e.value_lo() + target_ge << ", " << e.value_hi() + target_ge << "] on [" << lo << ", " << hi << "]";
    throw NoBracket(os.str(), e.value_lo() + target_ge, e.value_hi() + target_ge);
  }
}

// ---------------------------------------------------------------------------

std::vector<double> SweepRange::points() const {
  std::vector<double> out(static_cast<std::size_t>(std::max(steps, 0)));
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] = (i == steps - 1) ? hi : lo + (hi - lo) * i / (steps - 1);
  }
  return out;
}

void SweepPlan::validate() const {
  if (range.steps < 2) throw InvalidInput("SweepPlan: steps must be >= 2");
  if (!(range.lo < range.hi)) throw InvalidInput("SweepPlan: range needs lo < hi");
  if (!(alpha_mod > 0.0) || !std::isfinite(alpha_mod)) throw InvalidInput("SweepPlan: alpha_mod must be positive");
  if (outputs.contains(Output::SuccessProbability) && !scheme.heralded()) {
    throw InvalidInput("SweepPlan: P_s is only defined for beam-splitter subtraction and scissor schemes");
  }
  if ((sweep_var == SweepVar::Grid) != outputs.contains(Output::Wigner)) {
    throw InvalidInput("SweepPlan: Wigner output goes with (and only with) grid sweeps");
  }
  if (sweep_var == SweepVar::Ratio) {
    if (scheme.kind() != Scheme::Kind::PilaThen) {
      throw InvalidInput("SweepPlan: ratio sweeps apply the coherent operation after the amplifier");
    }
    if (range.lo < 0.0 || range.hi > 1.0) throw InvalidInput("SweepPlan: ratio range must lie in [0, 1]");
    if (n_phases < 8) throw InvalidInput("SweepPlan: n_phases must be >= 8");
  }
  if (sweep_var == SweepVar::Grid && scheme.kind() == Scheme::Kind::Scissor) {
    throw InvalidInput("SweepPlan: grid sweeps are defined for amplifier-based schemes");
  }
  if (sweep_var != SweepVar::Gain && scheme.kind() != Scheme::Kind::Scissor && gain < 1.0) {
    throw InvalidInput("SweepPlan: amplifier gain must be >= 1");
  }
  if (sweep_var == SweepVar::Gain && scheme.kind() != Scheme::Kind::Scissor && range.lo < 1.0) {
    throw InvalidInput("SweepPlan: amplifier gain must be >= 1");
  }
}

std::size_t sweep_threads() {
  if (const char* env = std::getenv("NOISY_AMP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            const std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<SweepRow> run_sweep(const SweepPlan& plan) {
  plan.validate();
  const std::vector<double> xs = plan.range.points();
  const std::size_t threads = sweep_threads();

  if (plan.sweep_var == SweepVar::Grid) {
    const std::size_t n = xs.size();
    std::vector<SweepRow> rows(n * n);
    const cplx alpha = std::polar(plan.alpha_mod, plan.phase);
    const std::size_t start = start_dimension(plan.scheme, plan.alpha_mod, plan.gain);
    std::optional<SchemeState> state;
    MetricReport base;
    base.gain = plan.gain;
    base.alpha = alpha;
    base.scheme = plan.scheme.label();
    try {
      state = with_adaptive_dim(start, plan.options, [&](const HilbertSpec& spec) {
        return scheme_state(plan.scheme, alpha, plan.gain, spec);
      });
      base.dim = state->state.dim();
      base.trunc_deficit = state->trunc_deficit;
      base.success_probability = state->success_probability;
    } catch (const Error& e) {
      mark_failed(base, e);
    }
    parallel_for(n, threads, [&](std::size_t i) {
      std::vector<cplx> line(n);
      for (std::size_t j = 0; j < n; ++j) line[j] = cplx(xs[i], xs[j]);
      const std::vector<double> w = state ? wigner(state->state, line) : std::vector<double>(n, kNaN);
      for (std::size_t j = 0; j < n; ++j) {
        SweepRow& row = rows[i * n + j];
        row.value = xs[i];
        row.report = base;
        row.point = line[j];
        row.wigner = w[j];
      }
    });
    return rows;
  }

  std::vector<SweepRow> rows(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.value = xs[i];
    try {
      switch (plan.sweep_var) {
        case SweepVar::Gain:
          row.report = evaluate_scheme(plan.scheme, std::polar(plan.alpha_mod, plan.phase), xs[i], plan.options);
          break;
        case SweepVar::Phase:
          row.report = evaluate_scheme(plan.scheme, std::polar(plan.alpha_mod, xs[i]), plan.gain, plan.options);
          break;
        case SweepVar::Ratio: {
          const auto started = std::chrono::steady_clock::now();
          const PhotonicOp op = PhotonicOp::coherent_ratio(xs[i]);
          const PhaseAverages avg = phase_average_all(plan.alpha_mod, op, plan.gain, plan.n_phases, plan.options);
          row.report.gain = plan.gain;
          row.report.alpha = plan.alpha_mod;
          row.report.scheme = op.label();
          row.report.effective_gain = avg.gain;
          row.report.fidelity = avg.fidelity;
          row.report.holevo_variance = avg.holevo_variance;
          row.report.dim = avg.max_dim;
          row.report.wall_seconds =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
          row.amplitude_gain_average = avg.amplitude_gain;
          break;
        }
        case SweepVar::Grid:
          break;
      }
    } catch (const Error& e) {
      row.report.scheme = plan.scheme.label();
      mark_failed(row.report, e);
    }
  });
  return rows;
}

// ---------------------------------------------------------------------------

SubtractionAtTarget subtraction_at_target(cplx alpha, double target_ge, double transmittance,
                                          const PipelineOptions& options) {
  const Scheme scheme = Scheme::pila_then_bs_subtraction(transmittance);
  double hi = 2.5;
  for (int i = 0; i < 8 && evaluate_scheme(scheme, alpha, hi, options).effective_gain < target_ge; ++i) hi *= 2.0;
  const double g = calibrate_gain(scheme, alpha, target_ge, 1.0, hi, options);
  return {g, evaluate_scheme(scheme, alpha, g, options)};
}

ScissorAtTarget scissor_at_target(cplx alpha, int arms, double target_ge, ScissorTarget mode,
                                  const PipelineOptions& options) {
  const Scheme scheme = Scheme::scissor(arms);
  ScissorAtTarget out;
  out.arms = arms;
  if (mode == ScissorTarget::Nominal) {
    out.scissor_gain = std::sqrt(target_ge);
    out.report = evaluate_scheme(scheme, alpha, out.scissor_gain, options);
    const double measured = out.report.effective_gain;
    out.report.fidelity = with_adaptive_dim(
        start_dimension(scheme, std::abs(alpha), out.scissor_gain), options, [&](const HilbertSpec& spec) {
          const SchemeState s = scheme_state(scheme, alpha, out.scissor_gain, spec);
          return fidelity_to_target(s.state, alpha, target_ge);
        });
    out.report.effective_gain = measured;
    return out;
  }

  // G_e(g) rises from 0, peaks and falls again; take the first crossing on a
  // geometric scan and refine it by bisection.
  constexpr int kScan = 96;
  const double g_min = 0.05;
  const double g_max = 20.0;
  double prev_g = g_min;
  double prev_ge = evaluate_scheme(scheme, alpha, prev_g, options).effective_gain;
  double best = prev_ge;
  for (int i = 1; i <= kScan; ++i) {
    const double g = g_min * std::pow(g_max / g_min, static_cast<double>(i) / kScan);
    const double ge = evaluate_scheme(scheme, alpha, g, options).effective_gain;
    best = std::max(best, ge);
    if ((prev_ge - target_ge) * (ge - target_ge) <= 0.0) {
      out.scissor_gain = calibrate_gain(scheme, alpha, target_ge, prev_g, g, options);
      out.report = evaluate_scheme(scheme, alpha, out.scissor_gain, options);
      return out;
    }
    prev_g = g;
    prev_ge = ge;
  }
  std::ostringstream os;
  os << "scissor N=" << arms << " cannot reach G_e = " << target_ge << " (largest measured G_e " << best << ")";
  out.report.scheme = scheme.label();
  out.report.alpha = alpha;
  mark_failed(out.report, NoBracket(os.str(), 0.0, best));
  return out;
}

}  // namespace noisy_amp
