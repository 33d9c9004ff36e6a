#pragma once

// N-scissor noiseless amplifier: split the input over N arms, truncate each
// arm with a single-photon quantum scissor of amplitude gain g, recombine and
// keep the events with vacuum in the N-1 unused recombiner outputs.

#include <cstddef>

#include "noisy_amp/fock.hpp"

namespace noisy_amp {

class ScissorConfig {
 public:
  ScissorConfig(int arms, double gain, HilbertSpec spec);

  int arms() const noexcept { return arms_; }
  double gain() const noexcept { return gain_; }
  const HilbertSpec& spec() const noexcept { return spec_; }

  /// Transmittance eta of the ancilla beam splitter, g^2 = (1 - eta) / eta.
  double ancilla_transmittance() const noexcept { return 1.0 / (1.0 + gain_ * gain_); }

 private:
  int arms_;
  double gain_;
  HilbertSpec spec_;
};

/// Number of single-photon detection patterns that herald success: two per
/// scissor (either detector may fire, the other pattern being corrected by a
/// pi phase shift). success_probability counts all of them; the circuit
/// simulation post-selects only the canonical one.
double detection_multiplicity(int arms);

/// diag_n g^n N! / (N^n (N-n)!) for n <= N, zero above.
FockOperator scissor_filter(const ScissorConfig& cfg);

struct ScissorOutcome {
  DensityOperator state;                 // normalized
  double success_probability;            // all heralding patterns: |M psi|^2 / (1 + g^2)^N
  double canonical_success_probability;  // one fixed pattern per scissor
};

/// Throws ZeroTrace when the filtered state vanishes.
ScissorOutcome scissor_amplify(const Ket& psi, const ScissorConfig& cfg);

/// Explicit multimode simulation of the network (N <= 3): balanced splitter,
/// per arm an ancilla photon on a beam splitter of transmittance eta mixed with
/// the arm on a 50:50 beam splitter and post-selected on vacuum at the arm
/// port and one click at the ancilla port, then the inverse splitter and vacuum
/// post-selection on modes 1..N-1. The returned success_probability is the
/// canonical-pattern probability times detection_multiplicity(N).
ScissorOutcome circuit_oracle(const Ket& psi, const ScissorConfig& cfg);

}  // namespace noisy_amp
