#include "noisy_amp/channels.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <tuple>
#include <utility>

#include "noisy_amp/errors.hpp"
#include "noisy_amp/special.hpp"

namespace noisy_amp {
namespace {

using Index = Eigen::Index;
Index idx(std::size_t n) { return static_cast<Index>(n); }

void require_gain(double gain, const char* what) {
  if (!std::isfinite(gain) || gain < 1.0) {
    std::ostringstream os;
    os << what << ": gain must be >= 1 (got " << gain << ")";
    throw InvalidInput(os.str());
  }
}

int parse_order(std::string_view digits, std::string_view text) {
  int m = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), m);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || m < 1) {
    throw InvalidInput("PhotonicOp::parse: bad operation '" + std::string(text) + "'");
  }
  return m;
}

/// Coefficients of <k|_idler S|0>_idler on |n>, for n = 0 .. dim-1-k.
std::vector<double> squeezer_coefficients(double gain, std::size_t k, std::size_t dim) {
  std::vector<double> c(dim > k ? dim - k : 0, 0.0);
  const double log_cosh = 0.5 * std::log(gain);
  const double log_tanh = 0.5 * std::log((gain - 1.0) / gain);
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double tanh_part = (k == 0) ? 0.0 : static_cast<double>(k) * log_tanh;
    c[n] = std::exp(-static_cast<double>(n + 1) * log_cosh + 0.5 * special::log_binomial(n + k, k) + tanh_part);
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------

PhotonicOp PhotonicOp::subtract(int m) {
  if (m < 1) throw InvalidInput("PhotonicOp::subtract: m must be positive");
  return PhotonicOp(Kind::Subtract, m, 1.0, 0.0);
}

PhotonicOp PhotonicOp::add(int m) {
  if (m < 1) throw InvalidInput("PhotonicOp::add: m must be positive");
  return PhotonicOp(Kind::Add, m, 0.0, 1.0);
}

PhotonicOp PhotonicOp::coherent(double t, double r, double num_tol) {
  if (!std::isfinite(t) || !std::isfinite(r) || std::abs(t * t + r * r - 1.0) > num_tol) {
    throw InvalidInput("PhotonicOp::coherent: t^2 + r^2 must equal 1");
  }
  return PhotonicOp(Kind::Coherent, 1, t, r);
}

PhotonicOp PhotonicOp::coherent_ratio(double r) {
  if (!std::isfinite(r) || r < 0.0 || r > 1.0) throw InvalidInput("PhotonicOp::coherent_ratio: r must be in [0, 1]");
  return PhotonicOp(Kind::Coherent, 1, std::sqrt(1.0 - r * r), r);
}

PhotonicOp PhotonicOp::parse(std::string_view text) {
  if (text.starts_with("sub")) return subtract(parse_order(text.substr(3), text));
  if (text.starts_with("add")) return add(parse_order(text.substr(3), text));
  if (text.starts_with("coh:")) {
    const std::string value(text.substr(4));
    char* end = nullptr;
    const double r = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size()) {
      throw InvalidInput("PhotonicOp::parse: bad coherent ratio in '" + std::string(text) + "'");
    }
    return coherent_ratio(r);
  }
  throw InvalidInput("PhotonicOp::parse: unknown operation '" + std::string(text) +
                     "' (expected sub<m>, add<m> or coh:<r>)");
}

std::string PhotonicOp::label() const {
  switch (kind_) {
    case Kind::Subtract:
      return "sub" + std::to_string(order_);
    case Kind::Add:
      return "add" + std::to_string(order_);
    case Kind::Coherent: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "coh:%.12g", r_);
      return buf;
    }
  }
  return {};
}

FockOperator build_operator(const PhotonicOp& op, const HilbertSpec& spec) {
  const FockOperator a = annihilation(spec);
  switch (op.kind()) {
    case PhotonicOp::Kind::Subtract:
    case PhotonicOp::Kind::Add: {
      const FockOperator base = op.kind() == PhotonicOp::Kind::Subtract ? a : a.adjoint();
      FockOperator out = base;
      for (int i = 1; i < op.order(); ++i) out = out * base;
      return out;
    }
    case PhotonicOp::Kind::Coherent:
      return cplx(op.t()) * a + cplx(op.r()) * a.adjoint();
  }
  throw InvalidInput("build_operator: unknown operation kind");
}

// ---------------------------------------------------------------------------

DensityOperator pila_coherent(cplx alpha, double gain, const HilbertSpec& spec) {
  require_gain(gain, "pila_coherent");
  if (gain == 1.0) return DensityOperator::from_ket(coherent_ket(alpha, spec));

  const DensityOperator thermal = thermal_density(gain - 1.0, spec);
  const FockOperator d = displacement_operator(std::sqrt(gain) * alpha, spec);
  const DensityOperator out = sandwich(d, thermal);
  const double deficit = 1.0 - out.weight();
  if (deficit > spec.trunc_tol()) {
    std::ostringstream os;
    os << "pila_coherent: trace deficit " << deficit << " at dim " << spec.dim() << " exceeds trunc_tol";
    throw TruncationError(os.str(), deficit);
  }
  return out;
}

FockOperator squeezer_idler_kraus(double gain, std::size_t idler_photons, const HilbertSpec& spec) {
  require_gain(gain, "squeezer_idler_kraus");
  const std::size_t dim = spec.dim();
  CMatrix k = CMatrix::Zero(idx(dim), idx(dim));
  if (gain == 1.0) {
    if (idler_photons == 0) k.setIdentity();
    return FockOperator(std::move(k), spec);
  }
  const auto c = squeezer_coefficients(gain, idler_photons, dim);
  for (std::size_t n = 0; n < c.size(); ++n) k(idx(n + idler_photons), idx(n)) = c[n];
  return FockOperator(std::move(k), spec);
}

DensityOperator pila_channel(const DensityOperator& rho, double gain) {
  require_gain(gain, "pila_channel");
  if (gain == 1.0) return rho;

  const HilbertSpec& spec = rho.spec();
  const std::size_t dim = spec.dim();
  const CMatrix& in = rho.matrix();
  CMatrix out = CMatrix::Zero(idx(dim), idx(dim));
  // Each idler number state k contributes A_k rho A_k^dagger with A_k a shifted diagonal.
  for (std::size_t k = 0; k < dim; ++k) {
    const auto c = squeezer_coefficients(gain, k, dim);
    const std::size_t len = c.size();
    for (std::size_t j = 0; j < len; ++j) {
      for (std::size_t i = 0; i < len; ++i) {
        out(idx(i + k), idx(j + k)) += c[i] * c[j] * in(idx(i), idx(j));
      }
    }
  }
  out = 0.5 * (out + out.adjoint()).eval();
  DensityOperator result(std::move(out), spec);
  const double deficit = rho.weight() - result.weight();
  if (deficit > spec.trunc_tol()) {
    std::ostringstream os;
    os << "pila_channel: trace leak " << deficit << " at dim " << dim << " exceeds trunc_tol";
    throw TruncationError(os.str(), deficit);
  }
  return result;
}

TwoModeOperator beam_splitter(double transmittance, const HilbertSpec& mode0, const HilbertSpec& mode1) {
  if (!std::isfinite(transmittance) || transmittance < 0.0 || transmittance > 1.0) {
    throw InvalidInput("beam_splitter: transmittance must be in [0, 1]");
  }
  const TwoModeSpec spec{mode0, mode1};
  const std::size_t d0 = mode0.dim();
  const std::size_t d1 = mode1.dim();
  const double t = std::sqrt(transmittance);
  const double r = std::sqrt(1.0 - transmittance);
  CMatrix u = CMatrix::Zero(idx(spec.size()), idx(spec.size()));
  for (std::size_t n = 0; n < d0; ++n) {
    for (std::size_t m = 0; m < d1; ++m) {
      const std::size_t total = n + m;
      const double in_norm = special::log_factorial(n) + special::log_factorial(m);
      for (std::size_t p = 0; p < d0 && p <= total; ++p) {
        const std::size_t q = total - p;
        if (q >= d1) continue;
        const double out_norm = 0.5 * (special::log_factorial(p) + special::log_factorial(q) - in_norm);
        // j photons of the a-input and p - j of the b-input end up in mode 0.
        const std::size_t j_lo = p > m ? p - m : 0;
        const std::size_t j_hi = std::min(n, p);
        double acc = 0.0;
        for (std::size_t j = j_lo; j <= j_hi; ++j) {
          const double mag = std::exp(special::log_binomial(n, j) + special::log_binomial(m, p - j) + out_norm) *
                             std::pow(t, static_cast<double>(2 * j + m - p)) *
                             std::pow(r, static_cast<double>(n + p - 2 * j));
          acc += ((n - j) % 2 == 0) ? mag : -mag;
        }
        u(idx(spec.index(p, q)), idx(spec.index(n, m))) = acc;
      }
    }
  }
  return TwoModeOperator(std::move(u), spec);
}

DensityOperator apply_operation(const DensityOperator& rho, const FockOperator& op) {
  DensityOperator out = sandwich(op, rho);
  if (!(out.weight() > rho.spec().num_tol())) {
    std::ostringstream os;
    os << "apply_operation: heralding weight " << out.weight() << " is at or below num_tol";
    throw ZeroTrace(os.str());
  }
  return out;
}

HeraldedState bs_subtraction(const DensityOperator& rho, double transmittance, const Detector& detector,
                             std::optional<std::size_t> ancilla_dim) {
  if (!(transmittance > 0.0 && transmittance < 1.0)) {
    throw InvalidInput("bs_subtraction: transmittance must be in (0, 1)");
  }
  const HilbertSpec& spec = rho.spec();
  const auto* projection = std::get_if<FockProjection>(&detector);
  if (projection && projection->photons >= spec.dim()) {
    throw InvalidInput("bs_subtraction: projected photon number outside the truncated space");
  }
  const std::size_t dim = spec.dim();

  // Returns the heralded branch and the trace lost to the ancilla cut.
  const auto herald = [&](std::size_t ancilla_levels) {
    const HilbertSpec ancilla = spec.with_dim(ancilla_levels);
    const TwoModeOperator u = beam_splitter(transmittance, spec, ancilla);
    CMatrix clicked = CMatrix::Zero(idx(dim), idx(dim));
    double retained = 0.0;
    for (std::size_t k = 0; k < ancilla.dim(); ++k) {
      const CMatrix kraus = u.conditional_map(0, k).matrix();
      const CMatrix branch = kraus * rho.matrix() * kraus.adjoint();
      retained += branch.trace().real();
      if (projection ? k == projection->photons : k > 0) clicked += branch;
    }
    return std::pair{std::move(clicked), rho.weight() - retained};
  };

  // Photons in the ancilla never outnumber those in the signal, so a cut at
  // the signal dimension loses nothing that the signal space could hold.
  std::size_t levels = ancilla_dim.value_or(std::min(dim, projection ? projection->photons + 6 : std::size_t{8}));
  if (projection && projection->photons >= levels) {
    throw InvalidInput("bs_subtraction: projected photon number outside the ancilla space");
  }
  auto [clicked, leak] = herald(levels);
  while (!ancilla_dim && leak > spec.trunc_tol() && levels < dim) {
    levels = std::min(dim, 2 * levels);
    std::tie(clicked, leak) = herald(levels);
  }
  if (leak > spec.trunc_tol()) {
    std::ostringstream os;
    os << "bs_subtraction: ancilla truncation at dim " << levels << " leaks " << leak;
    throw TruncationError(os.str(), leak);
  }
  clicked = 0.5 * (clicked + clicked.adjoint()).eval();
  const DensityOperator branch(std::move(clicked), spec);
  const double p_success = branch.weight() / rho.weight();
  if (!(p_success > spec.num_tol())) throw ZeroTrace("bs_subtraction: success probability vanishes");
  return {normalize(branch).first, p_success};
}

HeraldedState ndpa_addition(const DensityOperator& rho, double gain, std::size_t photons) {
  if (!std::isfinite(gain) || gain <= 1.0) throw InvalidInput("ndpa_addition: gain must be > 1");
  if (photons < 1) throw InvalidInput("ndpa_addition: photons must be positive");
  const HilbertSpec& spec = rho.spec();
  const std::size_t dim = spec.dim();
  if (photons >= dim) throw DimensionMismatch("ndpa_addition: photons exceed the truncated space");

  const auto c = squeezer_coefficients(gain, photons, dim);
  // Population mapped past the truncation: |n> with n + photons >= dim.
  const auto c_full = squeezer_coefficients(gain, photons, dim + photons);
  double lost = 0.0;
  for (std::size_t n = c.size(); n < dim; ++n) lost += c_full[n] * c_full[n] * rho(n, n).real();
  if (lost > spec.trunc_tol()) {
    std::ostringstream os;
    os << "ndpa_addition: " << lost << " of the heralded branch falls beyond dim " << dim;
    throw TruncationError(os.str(), lost);
  }

  const DensityOperator branch = sandwich(squeezer_idler_kraus(gain, photons, spec), rho);
  const double p_success = branch.weight() / rho.weight();
  if (!(p_success > spec.num_tol())) throw ZeroTrace("ndpa_addition: success probability vanishes");
  return {normalize(branch).first, p_success};
}

}  // namespace noisy_amp
