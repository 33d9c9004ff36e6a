#include "noisy_amp/multimode.hpp"

#include "noisy_amp/errors.hpp"

namespace noisy_amp {
namespace {
using Index = Eigen::Index;
}

MultiModeKet::MultiModeKet(const Ket& first_mode)
    : dims_{first_mode.dim()}, amplitudes_(first_mode.amplitudes()) {}

MultiModeKet::MultiModeKet(std::vector<std::size_t> dims, CVector amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {}

std::vector<std::size_t> MultiModeKet::strides() const {
  std::vector<std::size_t> s(dims_.size(), 1);
  for (std::size_t i = dims_.size(); i-- > 1;) s[i - 1] = s[i] * dims_[i];
  return s;
}

MultiModeKet MultiModeKet::with_mode(std::size_t dim, std::size_t n) const {
  if (n >= dim) throw DimensionMismatch("MultiModeKet::with_mode: n outside the new mode");
  CVector out = CVector::Zero(amplitudes_.size() * static_cast<Index>(dim));
  for (Index i = 0; i < amplitudes_.size(); ++i) out(i * static_cast<Index>(dim) + static_cast<Index>(n)) = amplitudes_(i);
  auto dims = dims_;
  dims.push_back(dim);
  return MultiModeKet(std::move(dims), std::move(out));
}

MultiModeKet MultiModeKet::applied(const TwoModeOperator& u, std::size_t mode_a, std::size_t mode_b) const {
  if (mode_a >= modes() || mode_b >= modes() || mode_a == mode_b) {
    throw InvalidInput("MultiModeKet::applied: bad mode indices");
  }
  const std::size_t da = dims_[mode_a];
  const std::size_t db = dims_[mode_b];
  if (u.spec().mode0.dim() != da || u.spec().mode1.dim() != db) {
    throw DimensionMismatch("MultiModeKet::applied: operator dimensions differ from the modes");
  }
  const auto st = strides();
  const std::size_t total = static_cast<std::size_t>(amplitudes_.size());
  CVector out = amplitudes_;
  CVector block(static_cast<Index>(da * db));
  for (std::size_t base = 0; base < total; ++base) {
    if ((base / st[mode_a]) % da != 0 || (base / st[mode_b]) % db != 0) continue;
    for (std::size_t i = 0; i < da; ++i) {
      for (std::size_t j = 0; j < db; ++j) {
        block(static_cast<Index>(i * db + j)) = amplitudes_(static_cast<Index>(base + i * st[mode_a] + j * st[mode_b]));
      }
    }
    const CVector mapped = u.matrix() * block;
    for (std::size_t i = 0; i < da; ++i) {
      for (std::size_t j = 0; j < db; ++j) {
        out(static_cast<Index>(base + i * st[mode_a] + j * st[mode_b])) = mapped(static_cast<Index>(i * db + j));
      }
    }
  }
  return MultiModeKet(dims_, std::move(out));
}

MultiModeKet MultiModeKet::projected(std::size_t mode, std::size_t n) const {
  if (mode >= modes() || n >= dims_[mode]) throw InvalidInput("MultiModeKet::projected: bad mode or level");
  if (modes() == 1) throw InvalidInput("MultiModeKet::projected: cannot remove the last mode");
  const auto st = strides();
  auto dims = dims_;
  dims.erase(dims.begin() + static_cast<std::ptrdiff_t>(mode));
  const std::size_t inner = st[mode];
  const std::size_t span = dims_[mode] * inner;
  const std::size_t outer = static_cast<std::size_t>(amplitudes_.size()) / span;
  CVector out(static_cast<Index>(outer * inner));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      out(static_cast<Index>(o * inner + i)) = amplitudes_(static_cast<Index>(o * span + n * inner + i));
    }
  }
  return MultiModeKet(std::move(dims), std::move(out));
}

CVector MultiModeKet::single_mode() const {
  if (modes() != 1) throw InvalidInput("MultiModeKet::single_mode: more than one mode remains");
  return amplitudes_;
}

}  // namespace noisy_amp
