#pragma once

// Truncated Fock-space states and operators.
//
// A single mode keeps the number states |0>, ..., |dim-1>. Two-mode objects
// use row-major mode ordering: basis index = n0 * dim1 + n1 (mode 0 is the
// slow index).

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <utility>

namespace noisy_amp {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kDefaultTruncTol = 1e-10;
inline constexpr double kDefaultNumTol = 1e-9;

/// Truncation dimension plus the two tolerances that govern every numeric check.
class HilbertSpec {
 public:
  explicit HilbertSpec(std::size_t dim, double trunc_tol = kDefaultTruncTol,
                       double num_tol = kDefaultNumTol);

  std::size_t dim() const noexcept { return dim_; }
  double trunc_tol() const noexcept { return trunc_tol_; }
  double num_tol() const noexcept { return num_tol_; }

  HilbertSpec with_dim(std::size_t dim) const { return HilbertSpec(dim, trunc_tol_, num_tol_); }

  bool operator==(const HilbertSpec&) const = default;

 private:
  std::size_t dim_;
  double trunc_tol_;
  double num_tol_;
};

/// Pure state in the Fock basis. Norm^2 may be below one (conditional branches).
class Ket {
 public:
  Ket(CVector amplitudes, HilbertSpec spec);

  const CVector& amplitudes() const noexcept { return amplitudes_; }
  const HilbertSpec& spec() const noexcept { return spec_; }
  std::size_t dim() const noexcept { return spec_.dim(); }
  double norm2() const { return amplitudes_.squaredNorm(); }
  cplx operator[](std::size_t n) const { return amplitudes_(static_cast<Eigen::Index>(n)); }

 private:
  CVector amplitudes_;
  HilbertSpec spec_;
};

/// Hermitian PSD matrix. weight() is the trace at construction: 1 for a
/// normalized state, the heralding weight for a conditional one.
class DensityOperator {
 public:
  /// Throws InvalidInput if the matrix is not square, does not match spec, or
  /// is not Hermitian within num_tol. Debug builds also reject eigenvalues
  /// below -num_tol.
  DensityOperator(CMatrix matrix, HilbertSpec spec);

  static DensityOperator from_ket(const Ket& ket);

  const CMatrix& matrix() const noexcept { return matrix_; }
  const HilbertSpec& spec() const noexcept { return spec_; }
  std::size_t dim() const noexcept { return spec_.dim(); }
  double weight() const noexcept { return weight_; }
  cplx operator()(std::size_t row, std::size_t col) const {
    return matrix_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  double min_eigenvalue() const;

 private:
  CMatrix matrix_;
  HilbertSpec spec_;
  double weight_;
};

/// General (not necessarily Hermitian or unitary) single-mode operator.
class FockOperator {
 public:
  FockOperator(CMatrix matrix, HilbertSpec spec);

  const CMatrix& matrix() const noexcept { return matrix_; }
  const HilbertSpec& spec() const noexcept { return spec_; }
  std::size_t dim() const noexcept { return spec_.dim(); }

  FockOperator adjoint() const { return FockOperator(matrix_.adjoint(), spec_); }

  /// Unnormalized O|psi>; the result keeps the input spec and may exceed unit norm,
  /// so it is returned as a raw vector.
  CVector apply(const Ket& ket) const;

  friend FockOperator operator*(const FockOperator& lhs, const FockOperator& rhs);
  friend FockOperator operator+(const FockOperator& lhs, const FockOperator& rhs);
  friend FockOperator operator*(cplx scale, const FockOperator& op);

 private:
  CMatrix matrix_;
  HilbertSpec spec_;
};

// ---------------------------------------------------------------------------
// Two-mode containers

struct TwoModeSpec {
  HilbertSpec mode0;
  HilbertSpec mode1;

  std::size_t size() const noexcept { return mode0.dim() * mode1.dim(); }
  std::size_t index(std::size_t n0, std::size_t n1) const noexcept { return n0 * mode1.dim() + n1; }
  bool operator==(const TwoModeSpec&) const = default;
};

class TwoModeKet {
 public:
  TwoModeKet(CVector amplitudes, TwoModeSpec spec);
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  const TwoModeSpec& spec() const noexcept { return spec_; }

 private:
  CVector amplitudes_;
  TwoModeSpec spec_;
};

class TwoModeDensity {
 public:
  TwoModeDensity(CMatrix matrix, TwoModeSpec spec);
  static TwoModeDensity from_ket(const TwoModeKet& ket);

  const CMatrix& matrix() const noexcept { return matrix_; }
  const TwoModeSpec& spec() const noexcept { return spec_; }
  double weight() const noexcept { return weight_; }

 private:
  CMatrix matrix_;
  TwoModeSpec spec_;
  double weight_;
};

class TwoModeOperator {
 public:
  TwoModeOperator(CMatrix matrix, TwoModeSpec spec);
  const CMatrix& matrix() const noexcept { return matrix_; }
  const TwoModeSpec& spec() const noexcept { return spec_; }

  TwoModeOperator adjoint() const { return TwoModeOperator(matrix_.adjoint(), spec_); }
  TwoModeKet apply(const TwoModeKet& ket) const;
  /// U rho U^dagger.
  TwoModeDensity apply(const TwoModeDensity& rho) const;

  /// Single-mode map |n> -> sum_i <i, out|U|n, in>|i> obtained by feeding |in>
  /// into mode 1 and projecting mode 1 onto |out>.
  FockOperator conditional_map(std::size_t ancilla_in, std::size_t ancilla_out) const;

 private:
  CMatrix matrix_;
  TwoModeSpec spec_;
};

// ---------------------------------------------------------------------------
// Constructors

/// |alpha> truncated to spec.dim(). Throws TruncationError when the discarded
/// tail mass exceeds spec.trunc_tol().
Ket coherent_ket(cplx alpha, const HilbertSpec& spec);

Ket fock_ket(std::size_t n, const HilbertSpec& spec);

/// Bose-Einstein state with mean occupation nbar. Throws TruncationError when
/// the trace deficit exceeds spec.trunc_tol().
DensityOperator thermal_density(double nbar, const HilbertSpec& spec);

/// D(beta) from the associated-Laguerre closed form,
///   <m|D(beta)|n> = sqrt(n!/m!) beta^(m-n) exp(-|beta|^2/2) L_n^(m-n)(|beta|^2),  m >= n,
/// and <n|D(beta)|m> = conj(<m|D(-beta)|n>) for the upper triangle.
/// Every retained element is exact; unitarity only fails through truncation leakage.
FockOperator displacement_operator(cplx beta, const HilbertSpec& spec);

/// a with <n-1|a|n> = sqrt(n). The truncated creation operator is its
/// adjoint, so a^dagger|dim-1> = 0.
FockOperator annihilation(const HilbertSpec& spec);
FockOperator creation(const HilbertSpec& spec);
FockOperator number_operator(const HilbertSpec& spec);
FockOperator parity_operator(const HilbertSpec& spec);
FockOperator identity_operator(const HilbertSpec& spec);

// ---------------------------------------------------------------------------
// Multilinear algebra

TwoModeKet tensor(const Ket& a, const Ket& b);
TwoModeDensity tensor(const DensityOperator& a, const DensityOperator& b);
TwoModeOperator tensor(const FockOperator& a, const FockOperator& b);

/// Trace out the mode that is not `keep` (0 or 1).
DensityOperator partial_trace(const TwoModeDensity& rho, std::size_t keep);

/// O rho O^dagger, unnormalized.
DensityOperator sandwich(const FockOperator& op, const DensityOperator& rho);

/// Divide by the trace. Returns the normalized state and the prior trace.
/// Throws ZeroTrace when the trace is at or below num_tol.
std::pair<DensityOperator, double> normalize(const DensityOperator& rho);

/// Tr(op rho) / Tr(rho). Throws ZeroTrace when the trace is at or below num_tol.
cplx expectation(const DensityOperator& rho, const FockOperator& op);

}  // namespace noisy_amp
