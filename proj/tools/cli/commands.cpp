#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>

#include "noisy_amp/errors.hpp"
#include "noisy_amp/experiments.hpp"

namespace noisy_amp::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Check = std::function<std::string(const std::string&)>;

ParamSpec real(std::string key, std::string def, std::string help, Check check = {}) {
  return {std::move(key), ParamType::Real, std::move(def), std::move(help), std::move(check)};
}

ParamSpec integer(std::string key, std::string def, std::string help, Check check = {}) {
  return {std::move(key), ParamType::Integer, std::move(def), std::move(help), std::move(check)};
}

ParamSpec text(std::string key, std::string def, std::string help, Check check = {}) {
  return {std::move(key), ParamType::Text, std::move(def), std::move(help), std::move(check)};
}

Check op_check(bool allow_none) {
  return [allow_none](const std::string& v) -> std::string {
    if (allow_none && v == "none") return {};
    try {
      PhotonicOp::parse(v);
      return {};
    } catch (const Error& e) {
      return e.what();
    }
  };
}

std::vector<ParamSpec> with_common(std::vector<ParamSpec> params) {
  params.push_back(text("output", "-", "output file, - for standard output"));
  params.push_back(text("format", "csv", "csv or json", checks::one_of({"csv", "json"})));
  params.push_back(integer("dim", "0", "fixed Fock truncation, 0 for adaptive", checks::non_negative()));
  params.push_back(integer("dim_scale", "1", "multiplier on the chosen truncation", checks::at_least(1)));
  params.push_back(integer("max_dim", "4096", "largest adaptive truncation", checks::at_least(2)));
  params.push_back(real("trunc_tol", "1e-10", "tolerated probability mass beyond the truncation", checks::non_negative()));
  params.push_back(real("num_tol", "1e-9", "numerical comparison tolerance", checks::non_negative()));
  return params;
}

PipelineOptions options_from(const Params& p) {
  PipelineOptions o;
  if (p.integer("dim") > 0) {
    if (p.integer("dim") < 2) throw ConfigError("key 'dim': must be 0 or >= 2");
    o.dim = static_cast<std::size_t>(p.integer("dim"));
  }
  o.dim_scale = static_cast<std::size_t>(p.integer("dim_scale"));
  o.max_dim = static_cast<std::size_t>(p.integer("max_dim"));
  o.trunc_tol = p.real("trunc_tol");
  o.num_tol = p.real("num_tol");
  return o;
}

void require_ordered(const Params& p, const std::string& lo, const std::string& hi) {
  if (!(p.real(lo) < p.real(hi))) throw ConfigError("keys '" + lo + "' and '" + hi + "': need " + lo + " < " + hi);
}

void validate_plan(const SweepPlan& plan) {
  try {
    plan.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

double metric(const MetricReport& r, Output out) {
  switch (out) {
    case Output::EffectiveGain:
      return r.effective_gain;
    case Output::Fidelity:
      return r.fidelity;
    case Output::Holevo:
      return r.holevo_variance;
    case Output::SuccessProbability:
      return r.success_probability.value_or(kNaN);
    case Output::Wigner:
      break;
  }
  return kNaN;
}

std::string describe(const MetricReport& r, double at) {
  return r.scheme + " at " + format_real(at) + ": " + r.error;
}

const std::vector<std::string> kOps = {"sub1", "sub2", "add1", "add2"};

// Gain sweeps over the four operations (plus the bare amplifier for fig8).
CommandResult gain_figure(const Params& p, Output out, const std::string& prefix, bool with_pila) {
  require_ordered(p, "g_min", "g_max");
  std::vector<Scheme> schemes;
  if (with_pila) schemes.push_back(Scheme::pila_only());
  for (const auto& op : kOps) schemes.push_back(Scheme::pila_then(PhotonicOp::parse(op)));

  std::vector<SweepPlan> plans;
  for (const auto& s : schemes) {
    SweepPlan plan;
    plan.scheme = s;
    plan.alpha_mod = p.real("alpha_mod");
    plan.sweep_var = SweepVar::Gain;
    plan.range = {p.real("g_min"), p.real("g_max"), static_cast<int>(p.integer("steps"))};
    plan.outputs = {out};
    plan.options = options_from(p);
    validate_plan(plan);
    plans.push_back(plan);
  }

  CommandResult result;
  result.table.columns = {"G"};
  for (const auto& s : schemes) result.table.columns.push_back(prefix + (s.op() ? s.op()->label() : "pila"));
  result.table.columns.insert(result.table.columns.end(), {"dim", "trunc_deficit"});

  std::vector<std::vector<SweepRow>> sweeps;
  for (const auto& plan : plans) sweeps.push_back(run_sweep(plan));
  for (std::size_t i = 0; i < sweeps.front().size(); ++i) {
    std::vector<Cell> row{sweeps.front()[i].value};
    std::size_t dim = 0;
    double deficit = 0.0;
    for (const auto& sweep : sweeps) {
      const MetricReport& r = sweep[i].report;
      row.emplace_back(metric(r, out));
      dim = std::max(dim, r.dim);
      deficit = std::max(deficit, r.trunc_deficit);
      if (!r.ok()) result.errors.push_back(describe(r, sweep[i].value));
    }
    row.emplace_back(static_cast<long>(dim));
    row.emplace_back(deficit);
    result.table.rows.push_back(std::move(row));
  }
  return result;
}

// Phase-averaged coherent operation over r with the pure-operation references.
enum class RatioFigure { Gain, Fidelity, Holevo };

CommandResult ratio_figure(const Params& p, RatioFigure which) {
  require_ordered(p, "r_min", "r_max");
  SweepPlan plan;
  plan.scheme = Scheme::pila_then(PhotonicOp::coherent_ratio(0.0));
  plan.alpha_mod = p.real("alpha_mod");
  plan.sweep_var = SweepVar::Ratio;
  plan.range = {p.real("r_min"), p.real("r_max"), static_cast<int>(p.integer("steps"))};
  plan.gain = p.real("g");
  plan.n_phases = static_cast<int>(p.integer("n_phases"));
  plan.options = options_from(p);
  validate_plan(plan);

  const cplx alpha = plan.alpha_mod;
  const MetricReport sub = evaluate_pipeline(alpha, plan.gain, PhotonicOp::subtract(1), plan.options);
  const MetricReport add = evaluate_pipeline(alpha, plan.gain, PhotonicOp::add(1), plan.options);

  CommandResult result;
  std::vector<Cell> refs;
  switch (which) {
    case RatioFigure::Gain:
      result.table.columns = {"r", "Gavg", "Gavg_amplitude", "Ge_sub1", "Ge_add1"};
      refs = {sub.effective_gain, add.effective_gain};
      break;
    case RatioFigure::Fidelity:
      result.table.columns = {"r", "Favg", "F_sub1", "F_add1"};
      refs = {sub.fidelity, add.fidelity};
      break;
    case RatioFigure::Holevo: {
      const MetricReport pila = evaluate_pipeline(alpha, plan.gain, std::nullopt, plan.options);
      const MetricReport input = evaluate_pipeline(alpha, 1.0, std::nullopt, plan.options);
      result.table.columns = {"r", "Vavg", "V_sub1", "V_add1", "V_pila", "V_input"};
      refs = {sub.holevo_variance, add.holevo_variance, pila.holevo_variance, input.holevo_variance};
      break;
    }
  }
  result.table.columns.push_back("dim");

  for (const SweepRow& row : run_sweep(plan)) {
    const MetricReport& r = row.report;
    if (!r.ok()) result.errors.push_back(describe(r, row.value));
    std::vector<Cell> cells{row.value};
    switch (which) {
      case RatioFigure::Gain:
        cells.emplace_back(r.effective_gain);
        cells.emplace_back(row.amplitude_gain_average.value_or(kNaN));
        break;
      case RatioFigure::Fidelity:
        cells.emplace_back(r.fidelity);
        break;
      case RatioFigure::Holevo:
        cells.emplace_back(r.holevo_variance);
        break;
    }
    cells.insert(cells.end(), refs.begin(), refs.end());
    cells.emplace_back(static_cast<long>(r.dim));
    result.table.rows.push_back(std::move(cells));
  }
  return result;
}

CommandResult fig3b(const Params& p) {
  require_ordered(p, "ge_min", "ge_max");
  const int steps = static_cast<int>(p.integer("steps"));
  const std::vector<double> targets = SweepRange{p.real("ge_min"), p.real("ge_max"), steps}.points();
  const cplx alpha = p.real("alpha_mod");
  const PipelineOptions options = options_from(p);
  const Scheme sub1 = Scheme::pila_then(PhotonicOp::subtract(1));
  const Scheme sub2 = Scheme::pila_then(PhotonicOp::subtract(2));

  CommandResult result;
  result.table.columns = {"Ge", "F_pila", "F_sub1", "F_sub2", "G_sub1", "G_sub2", "dim"};
  result.table.rows.resize(targets.size());
  std::vector<std::string> errors(targets.size());
  parallel_for(targets.size(), sweep_threads(), [&](std::size_t i) {
    const double ge = targets[i];
    std::vector<Cell> row{ge, kNaN, kNaN, kNaN, kNaN, kNaN, 0L};
    try {
      const MetricReport pila = evaluate_scheme(Scheme::pila_only(), alpha, ge, options);
      const double g1 = calibrate_gain(sub1, alpha, ge, 1.0, ge, options);
      const double g2 = calibrate_gain(sub2, alpha, ge, 1.0, ge, options);
      const MetricReport r1 = evaluate_scheme(sub1, alpha, g1, options);
      const MetricReport r2 = evaluate_scheme(sub2, alpha, g2, options);
      row = {ge, pila.fidelity, r1.fidelity, r2.fidelity, g1, g2, static_cast<long>(std::max({pila.dim, r1.dim, r2.dim}))};
    } catch (const Error& e) {
      errors[i] = "G_e " + format_real(ge) + ": " + e.what();
    }
    result.table.rows[i] = std::move(row);
  });
  for (auto& e : errors) {
    if (!e.empty()) result.errors.push_back(std::move(e));
  }
  return result;
}

CommandResult fig4(const Params& p) {
  const cplx alpha = p.real("alpha_mod");
  const double target = p.real("target_ge");
  const double transmittance = p.real("transmittance");
  const long n_max = p.integer("n_max");
  const ScissorTarget mode = p.text("scissor_gain") == "measured" ? ScissorTarget::Measured : ScissorTarget::Nominal;
  const PipelineOptions options = options_from(p);

  CommandResult result;
  result.table.columns = {"N",     "g_scissor", "F_scissor", "Ps_scissor", "Ps_scissor_canonical", "Ge_scissor_measured",
                          "F_sub", "Ps_sub",    "G_sub"};
  double f_sub = kNaN;
  double ps_sub = kNaN;
  double g_sub = kNaN;
  try {
    const SubtractionAtTarget sub = subtraction_at_target(alpha, target, transmittance, options);
    f_sub = sub.report.fidelity;
    ps_sub = sub.report.success_probability.value_or(kNaN);
    g_sub = sub.pila_gain;
  } catch (const Error& e) {
    result.errors.push_back(std::string("subtraction scheme: ") + e.what());
  }

  result.table.rows.resize(static_cast<std::size_t>(n_max));
  std::vector<std::string> errors(result.table.rows.size());
  parallel_for(result.table.rows.size(), sweep_threads(), [&](std::size_t i) {
    const int arms = static_cast<int>(i) + 1;
    std::vector<Cell> row{static_cast<long>(arms), kNaN, kNaN, kNaN, kNaN, kNaN, f_sub, ps_sub, g_sub};
    try {
      const ScissorAtTarget sc = scissor_at_target(alpha, arms, target, mode, options);
      if (sc.report.ok()) {
        row[1] = sc.scissor_gain;
        row[2] = sc.report.fidelity;
        row[3] = sc.report.success_probability.value_or(kNaN);
        row[4] = sc.report.canonical_success_probability.value_or(kNaN);
        row[5] = sc.report.effective_gain;
      } else {
        errors[i] = sc.report.error;
      }
    } catch (const Error& e) {
      errors[i] = "scissor N=" + std::to_string(arms) + ": " + e.what();
    }
    result.table.rows[i] = std::move(row);
  });
  for (auto& e : errors) {
    if (!e.empty()) result.errors.push_back(std::move(e));
  }
  return result;
}

int grid_steps(const Params& p) {
  require_ordered(p, "grid_min", "grid_max");
  const double span = (p.real("grid_max") - p.real("grid_min")) / p.real("grid_step");
  const long steps = std::lround(span) + 1;
  if (std::abs(span - std::round(span)) > 1e-9 * std::max(1.0, span)) {
    throw ConfigError("key 'grid_step': must divide grid_max - grid_min");
  }
  if (steps > 4001) throw ConfigError("key 'grid_step': grid would exceed 4001 points per axis");
  return static_cast<int>(steps);
}

Scheme scheme_for_op(const std::string& op) {
  return op == "none" ? Scheme::pila_only() : Scheme::pila_then(PhotonicOp::parse(op));
}

CommandResult grid_table(const SweepPlan& plan) {
  CommandResult result;
  result.table.columns = {"x", "p", "W"};
  const std::vector<SweepRow> rows = run_sweep(plan);
  if (!rows.empty() && !rows.front().report.ok()) result.errors.push_back(rows.front().report.error);
  for (const SweepRow& row : rows) {
    result.table.rows.push_back({row.point->real(), row.point->imag(), row.wigner.value_or(kNaN)});
  }
  return result;
}

CommandResult wigner_command(const Params& p) {
  SweepPlan plan;
  plan.scheme = scheme_for_op(p.text("op"));
  plan.alpha_mod = p.real("alpha_mod");
  plan.sweep_var = SweepVar::Grid;
  plan.range = {p.real("grid_min"), p.real("grid_max"), grid_steps(p)};
  plan.outputs = {Output::Wigner};
  plan.gain = p.real("g");
  plan.phase = p.real("phase");
  plan.options = options_from(p);
  validate_plan(plan);
  return grid_table(plan);
}

CommandResult custom(const Params& p) {
  SweepPlan plan;
  const std::string& scheme = p.text("scheme");
  if (scheme == "bs") {
    plan.scheme = Scheme::pila_then_bs_subtraction(p.real("transmittance"));
  } else if (scheme == "scissor") {
    plan.scheme = Scheme::scissor(static_cast<int>(p.integer("arms")));
  } else {
    plan.scheme = scheme_for_op(scheme == "pila" ? "none" : scheme);
  }
  const std::string& sweep = p.text("sweep");
  plan.sweep_var = sweep == "gain"    ? SweepVar::Gain
                   : sweep == "ratio" ? SweepVar::Ratio
                   : sweep == "phase" ? SweepVar::Phase
                                      : SweepVar::Grid;
  plan.alpha_mod = p.real("alpha_mod");
  plan.range = {p.real("lo"), p.real("hi"), static_cast<int>(p.integer("steps"))};
  plan.gain = p.real("g");
  plan.phase = p.real("phase");
  plan.n_phases = static_cast<int>(p.integer("n_phases"));
  plan.options = options_from(p);

  static const std::map<std::string, Output> names = {{"ge", Output::EffectiveGain},
                                                     {"f", Output::Fidelity},
                                                     {"v", Output::Holevo},
                                                     {"ps", Output::SuccessProbability},
                                                     {"wigner", Output::Wigner}};
  plan.outputs.clear();
  std::string list = p.text("outputs");
  for (std::size_t start = 0; start <= list.size();) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const std::string name = list.substr(start, comma - start);
    const auto it = names.find(name);
    if (it == names.end()) throw ConfigError("key 'outputs': unknown output '" + name + "' (ge, f, v, ps, wigner)");
    plan.outputs.insert(it->second);
    start = comma + 1;
  }
  validate_plan(plan);
  if (plan.sweep_var == SweepVar::Grid) return grid_table(plan);

  static const std::map<SweepVar, std::string> axis = {
      {SweepVar::Gain, "G"}, {SweepVar::Ratio, "r"}, {SweepVar::Phase, "phi"}};
  static const std::map<Output, std::string> column = {{Output::EffectiveGain, "Ge"},
                                                      {Output::Fidelity, "F"},
                                                      {Output::Holevo, "V"},
                                                      {Output::SuccessProbability, "Ps"}};
  CommandResult result;
  result.table.columns = {plan.sweep_var == SweepVar::Gain && scheme == "scissor" ? "g" : axis.at(plan.sweep_var)};
  for (const Output o : plan.outputs) result.table.columns.push_back(column.at(o));
  const bool canonical = scheme == "scissor" && plan.outputs.contains(Output::SuccessProbability);
  if (canonical) result.table.columns.push_back("Ps_canonical");
  result.table.columns.insert(result.table.columns.end(), {"dim", "trunc_deficit"});

  for (const SweepRow& row : run_sweep(plan)) {
    const MetricReport& r = row.report;
    if (!r.ok()) result.errors.push_back(describe(r, row.value));
    std::vector<Cell> cells{row.value};
    for (const Output o : plan.outputs) cells.emplace_back(metric(r, o));
    if (canonical) cells.emplace_back(r.canonical_success_probability.value_or(kNaN));
    cells.emplace_back(static_cast<long>(r.dim));
    cells.emplace_back(r.trunc_deficit);
    result.table.rows.push_back(std::move(cells));
  }
  return result;
}

std::vector<ParamSpec> gain_sweep_params() {
  return with_common({real("alpha_mod", "0.2", "input amplitude |alpha|", checks::positive()),
                      real("g_min", "1", "smallest amplifier gain G", checks::at_least(1)),
                      real("g_max", "2.5", "largest amplifier gain G", checks::at_least(1)),
                      integer("steps", "31", "number of gain points", checks::at_least(2))});
}

std::vector<ParamSpec> ratio_sweep_params() {
  return with_common({real("alpha_mod", "0.2", "input amplitude |alpha|", checks::positive()),
                      real("g", "1.2", "amplifier gain G", checks::at_least(1)),
                      real("r_min", "0", "smallest ratio r", checks::in_range(0, 1)),
                      real("r_max", "1", "largest ratio r", checks::in_range(0, 1)),
                      integer("steps", "21", "number of r points", checks::at_least(2)),
                      integer("n_phases", "64", "input phases in the average", checks::at_least(8))});
}

std::vector<ParamSpec> grid_params() {
  return {real("grid_min", "-3", "lower grid bound for x and p"),
          real("grid_max", "3", "upper grid bound for x and p"),
          real("grid_step", "0.05", "grid spacing", checks::positive())};
}

std::vector<Command> build_commands() {
  std::vector<Command> out;
  out.push_back({"fig1", "effective gain of a, a^2, a^dagger, a^dagger^2 after the amplifier versus G",
                 gain_sweep_params(), [](const Params& p) { return gain_figure(p, Output::EffectiveGain, "Ge_", false); }});
  out.push_back({"fig2", "phase-averaged effective gain of t a + r a^dagger versus r", ratio_sweep_params(),
                 [](const Params& p) { return ratio_figure(p, RatioFigure::Gain); }});
  out.push_back({"fig3a", "fidelity of the four operated states versus G", gain_sweep_params(),
                 [](const Params& p) { return gain_figure(p, Output::Fidelity, "F_", false); }});
  out.push_back({"fig3b", "fidelity at a fixed effective gain: amplifier alone, a, a^2",
                 with_common({real("alpha_mod", "0.2", "input amplitude |alpha|", checks::positive()),
                              real("ge_min", "1.1", "smallest effective gain", checks::greater_than(1)),
                              real("ge_max", "4", "largest effective gain", checks::greater_than(1)),
                              integer("steps", "30", "number of effective-gain points", checks::at_least(2))}),
                 fig3b});
  out.push_back({"fig4", "N-scissor amplifier versus amplifier + beam-splitter subtraction at a target gain",
                 with_common({real("alpha_mod", "0.2", "input amplitude |alpha|", checks::positive()),
                              integer("n_max", "5", "largest number of scissors", checks::in_range(1, 24)),
                              real("transmittance", "0.99", "subtraction beam-splitter transmittance",
                                   checks::in_range(1e-6, 1 - 1e-12)),
                              real("target_ge", "2", "target effective gain", checks::greater_than(1)),
                              text("scissor_gain", "nominal",
                                   "nominal: g = sqrt(target_ge); measured: g calibrated on the measured gain",
                                   checks::one_of({"nominal", "measured"}))}),
                 fig4});
  out.push_back({"fig7", "phase-averaged fidelity of t a + r a^dagger versus r", ratio_sweep_params(),
                 [](const Params& p) { return ratio_figure(p, RatioFigure::Fidelity); }});
  out.push_back({"fig8", "Holevo phase variance of the amplifier alone and the four operated states versus G",
                 gain_sweep_params(), [](const Params& p) { return gain_figure(p, Output::Holevo, "V_", true); }});
  out.push_back({"fig9", "phase-averaged Holevo variance of t a + r a^dagger versus r", ratio_sweep_params(),
                 [](const Params& p) { return ratio_figure(p, RatioFigure::Holevo); }});

  std::vector<ParamSpec> wigner = {text("op", "add1", "operation after the amplifier: none, sub<m>, add<m>, coh:<r>",
                                        op_check(true)),
                                   real("g", "1.2", "amplifier gain G", checks::at_least(1)),
                                   real("alpha_mod", "0.2", "input amplitude |alpha|", checks::positive()),
                                   real("phase", "0", "input phase in radians")};
  for (auto& g : grid_params()) wigner.push_back(std::move(g));
  out.push_back({"wigner", "Wigner function of an amplified and operated state on an (x, p) grid",
                 with_common(std::move(wigner)), wigner_command});

  std::vector<ParamSpec> cust = {
      text("scheme", "pila", "pila, sub<m>, add<m>, coh:<r>, bs or scissor",
           [](const std::string& v) {
             return (v == "pila" || v == "bs" || v == "scissor") ? std::string() : op_check(false)(v);
           }),
      text("sweep", "gain", "gain, ratio, phase or grid", checks::one_of({"gain", "ratio", "phase", "grid"})),
      real("lo", "1", "sweep start"),
      real("hi", "2.5", "sweep end"),
      integer("steps", "16", "number of sweep points", checks::at_least(2)),
      text("outputs", "ge,f,v", "comma-separated subset of ge, f, v, ps, wigner"),
      real("alpha_mod", "0.2", "input amplitude |alpha|", checks::positive()),
      real("g", "1.2", "fixed gain when G is not swept (scissor gain g for scissor)", checks::positive()),
      real("phase", "0", "input phase in radians"),
      integer("n_phases", "64", "input phases in ratio averages", checks::at_least(8)),
      real("transmittance", "0.99", "beam-splitter transmittance for bs", checks::in_range(1e-6, 1 - 1e-12)),
      integer("arms", "1", "number of scissors", checks::in_range(1, 24))};
  out.push_back({"custom", "any scheme swept over G, r, phase or a Wigner grid", with_common(std::move(cust)), custom});
  return out;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> all = build_commands();
  return all;
}

}  // namespace noisy_amp::cli
