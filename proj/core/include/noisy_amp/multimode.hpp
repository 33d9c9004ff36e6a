#pragma once

#include <cstddef>
#include <vector>

#include "noisy_amp/fock.hpp"

namespace noisy_amp {

/// Pure state of several truncated modes, mode 0 slowest. Used for small
/// explicit circuit simulations (3 to 8 modes of low dimension).
class MultiModeKet {
 public:
  explicit MultiModeKet(const Ket& first_mode);

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t modes() const noexcept { return dims_.size(); }
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  double norm2() const { return amplitudes_.squaredNorm(); }

  /// Tensor a new last mode prepared in |n>.
  MultiModeKet with_mode(std::size_t dim, std::size_t n) const;

  /// Apply u with its mode 0 on `mode_a` and its mode 1 on `mode_b`.
  MultiModeKet applied(const TwoModeOperator& u, std::size_t mode_a, std::size_t mode_b) const;

  /// Contract `mode` with <n| and drop it. The result is subnormalized.
  MultiModeKet projected(std::size_t mode, std::size_t n) const;

  /// Amplitudes of the single remaining mode.
  CVector single_mode() const;

 private:
  MultiModeKet(std::vector<std::size_t> dims, CVector amplitudes);
  std::vector<std::size_t> strides() const;

  std::vector<std::size_t> dims_;
  CVector amplitudes_;
};

}  // namespace noisy_amp
