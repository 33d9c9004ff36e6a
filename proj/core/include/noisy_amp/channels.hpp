#pragma once

// Quantum-limited phase-insensitive amplifier, the ideal heralded photonic
// operations, and their detector-based realizations.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "noisy_amp/fock.hpp"

namespace noisy_amp {

/// One of a^m, (a^dagger)^m or t a + r a^dagger with real t, r and t^2 + r^2 = 1.
class PhotonicOp {
 public:
  enum class Kind { Subtract, Add, Coherent };

  static PhotonicOp subtract(int m);
  static PhotonicOp add(int m);
  /// Throws InvalidInput unless t^2 + r^2 = 1 within num_tol.
  static PhotonicOp coherent(double t, double r, double num_tol = kDefaultNumTol);
  /// Coherent operation with t = sqrt(1 - r^2), r in [0, 1].
  static PhotonicOp coherent_ratio(double r);

  /// Accepts "sub<m>", "add<m>" and "coh:<r>".
  static PhotonicOp parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  /// Number of field operators applied (1 for the coherent operation).
  int order() const noexcept { return order_; }
  double t() const noexcept { return t_; }
  double r() const noexcept { return r_; }

  /// True for a^m and (a^dagger)^m, which commute with phase rotations.
  bool phase_covariant() const noexcept { return kind_ != Kind::Coherent; }

  std::string label() const;

  bool operator==(const PhotonicOp&) const = default;

 private:
  PhotonicOp(Kind kind, int order, double t, double r) : kind_(kind), order_(order), t_(t), r_(r) {}

  Kind kind_;
  int order_;
  double t_;
  double r_;
};

FockOperator build_operator(const PhotonicOp& op, const HilbertSpec& spec);

/// Amplifier output for a coherent input: D(sqrt(G) alpha) rho_th(G - 1) D^dagger(sqrt(G) alpha).
/// gain == 1 returns |alpha><alpha|.
DensityOperator pila_coherent(cplx alpha, double gain, const HilbertSpec& spec);

/// Amplifier channel for an arbitrary input: the signal is paired with an idler
/// in vacuum, the two-mode squeezer with cosh^2(xi) = gain acts through its
/// closed form on |n, 0>, and the idler is traced out in its number basis.
/// Throws TruncationError when more than trunc_tol of the trace is lost.
DensityOperator pila_channel(const DensityOperator& rho, double gain);

/// Signal-mode map <k|_idler S(xi) |0>_idler with cosh^2(xi) = gain:
///   |n> -> cosh^-(n+1)(xi) sqrt(C(n+k, k)) tanh^k(xi) |n+k>.
FockOperator squeezer_idler_kraus(double gain, std::size_t idler_photons, const HilbertSpec& spec);

/// Two-mode beam splitter U with U a^dagger U^dagger = t a^dagger - r b^dagger and
/// U b^dagger U^dagger = r a^dagger + t b^dagger, t = sqrt(T), r = sqrt(1 - T);
/// equivalently U = exp(theta (a^dagger b - a b^dagger)) with cos(theta) = t.
/// Matrix elements come from the finite binomial (Jacobi) sum and are exact
/// for every retained pair of number states.
TwoModeOperator beam_splitter(double transmittance, const HilbertSpec& mode0, const HilbertSpec& mode1);

/// O rho O^dagger with weight N = Tr(O rho O^dagger). Throws ZeroTrace if N <= num_tol.
DensityOperator apply_operation(const DensityOperator& rho, const FockOperator& op);

/// Click detector: projects onto I - |0><0|.
struct OnOff {};
/// Photon-number-resolving projection onto |photons>.
struct FockProjection {
  std::size_t photons;
};
using Detector = std::variant<OnOff, FockProjection>;

/// Normalized conditional state and the probability of the heralding outcome.
struct HeraldedState {
  DensityOperator state;
  double success_probability;
};

/// Beam splitter of transmittance T with a vacuum ancilla, heralded by the
/// detector on the ancilla output. The ancilla is truncated at `ancilla_dim`;
/// by default the cut starts at photons + 6 (FockProjection) or 8 (OnOff) and
/// doubles, up to the signal dimension, until less than trunc_tol leaks.
HeraldedState bs_subtraction(const DensityOperator& rho, double transmittance, const Detector& detector,
                             std::optional<std::size_t> ancilla_dim = std::nullopt);

/// Nondegenerate parametric amplifier (gain > 1) with an idler in vacuum,
/// heralded by `photons` counts on the idler.
HeraldedState ndpa_addition(const DensityOperator& rho, double gain, std::size_t photons);

}  // namespace noisy_amp
