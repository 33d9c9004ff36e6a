#include "noisy_amp/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "noisy_amp/errors.hpp"
#include "noisy_amp/special.hpp"

namespace noisy_amp {
namespace {

using Index = Eigen::Index;

Index idx(std::size_t n) { return static_cast<Index>(n); }

void require_square(const CMatrix& m, std::size_t dim, const char* what) {
  if (m.rows() != idx(dim) || m.cols() != idx(dim)) {
    std::ostringstream os;
    os << what << ": matrix is " << m.rows() << "x" << m.cols() << ", spec expects " << dim << "x" << dim;
    throw DimensionMismatch(os.str());
  }
}

void require_same(const HilbertSpec& a, const HilbertSpec& b, const char* what) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << what << ": dimensions " << a.dim() << " and " << b.dim() << " differ";
    throw DimensionMismatch(os.str());
  }
}

double hermitian_defect(const CMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

CMatrix kronecker(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

HilbertSpec::HilbertSpec(std::size_t dim, double trunc_tol, double num_tol)
    : dim_(dim), trunc_tol_(trunc_tol), num_tol_(num_tol) {
  if (dim < 2) throw InvalidInput("HilbertSpec: dim must be at least 2");
  if (!std::isfinite(trunc_tol) || trunc_tol < 0.0) {
    throw InvalidInput("HilbertSpec: trunc_tol must be finite and nonnegative");
  }
  if (!std::isfinite(num_tol) || num_tol < 0.0) {
    throw InvalidInput("HilbertSpec: num_tol must be finite and nonnegative");
  }
}

// ---------------------------------------------------------------------------

Ket::Ket(CVector amplitudes, HilbertSpec spec) : amplitudes_(std::move(amplitudes)), spec_(spec) {
  if (amplitudes_.size() != idx(spec_.dim())) {
    throw DimensionMismatch("Ket: amplitude vector length does not match spec.dim()");
  }
  if (amplitudes_.squaredNorm() > 1.0 + spec_.num_tol()) {
    throw InvalidInput("Ket: norm^2 exceeds 1 + num_tol");
  }
}

DensityOperator::DensityOperator(CMatrix matrix, HilbertSpec spec)
    : matrix_(std::move(matrix)), spec_(spec), weight_(0.0) {
  require_square(matrix_, spec_.dim(), "DensityOperator");
  if (hermitian_defect(matrix_) > spec_.num_tol()) {
    throw InvalidInput("DensityOperator: matrix is not Hermitian within num_tol");
  }
  weight_ = matrix_.trace().real();
#ifndef NDEBUG
  if (min_eigenvalue() < -spec_.num_tol()) {
    throw InvalidInput("DensityOperator: matrix has a negative eigenvalue below -num_tol");
  }
#endif
}

DensityOperator DensityOperator::from_ket(const Ket& ket) {
  const CVector& v = ket.amplitudes();
  return DensityOperator(v * v.adjoint(), ket.spec());
}

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

FockOperator::FockOperator(CMatrix matrix, HilbertSpec spec) : matrix_(std::move(matrix)), spec_(spec) {
  require_square(matrix_, spec_.dim(), "FockOperator");
}

CVector FockOperator::apply(const Ket& ket) const {
  require_same(spec_, ket.spec(), "FockOperator::apply");
  return matrix_ * ket.amplitudes();
}

FockOperator operator*(const FockOperator& lhs, const FockOperator& rhs) {
  require_same(lhs.spec_, rhs.spec_, "FockOperator product");
  return FockOperator(lhs.matrix_ * rhs.matrix_, lhs.spec_);
}

FockOperator operator+(const FockOperator& lhs, const FockOperator& rhs) {
  require_same(lhs.spec_, rhs.spec_, "FockOperator sum");
  return FockOperator(lhs.matrix_ + rhs.matrix_, lhs.spec_);
}

FockOperator operator*(cplx scale, const FockOperator& op) { return FockOperator(scale * op.matrix_, op.spec_); }

// ---------------------------------------------------------------------------

TwoModeKet::TwoModeKet(CVector amplitudes, TwoModeSpec spec) : amplitudes_(std::move(amplitudes)), spec_(spec) {
  if (amplitudes_.size() != idx(spec_.size())) {
    throw DimensionMismatch("TwoModeKet: amplitude vector length does not match spec");
  }
}

TwoModeDensity::TwoModeDensity(CMatrix matrix, TwoModeSpec spec)
    : matrix_(std::move(matrix)), spec_(spec), weight_(0.0) {
  require_square(matrix_, spec_.size(), "TwoModeDensity");
  const double tol = std::min(spec_.mode0.num_tol(), spec_.mode1.num_tol());
  if (hermitian_defect(matrix_) > tol) {
    throw InvalidInput("TwoModeDensity: matrix is not Hermitian within num_tol");
  }
  weight_ = matrix_.trace().real();
}

TwoModeDensity TwoModeDensity::from_ket(const TwoModeKet& ket) {
  const CVector& v = ket.amplitudes();
  return TwoModeDensity(v * v.adjoint(), ket.spec());
}

TwoModeOperator::TwoModeOperator(CMatrix matrix, TwoModeSpec spec) : matrix_(std::move(matrix)), spec_(spec) {
  require_square(matrix_, spec_.size(), "TwoModeOperator");
}

TwoModeKet TwoModeOperator::apply(const TwoModeKet& ket) const {
  if (!(ket.spec().mode0.dim() == spec_.mode0.dim() && ket.spec().mode1.dim() == spec_.mode1.dim())) {
    throw DimensionMismatch("TwoModeOperator::apply: ket dimensions differ");
  }
  return TwoModeKet(matrix_ * ket.amplitudes(), spec_);
}

TwoModeDensity TwoModeOperator::apply(const TwoModeDensity& rho) const {
  if (!(rho.spec().mode0.dim() == spec_.mode0.dim() && rho.spec().mode1.dim() == spec_.mode1.dim())) {
    throw DimensionMismatch("TwoModeOperator::apply: density dimensions differ");
  }
  CMatrix out = matrix_ * rho.matrix() * matrix_.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return TwoModeDensity(std::move(out), spec_);
}

FockOperator TwoModeOperator::conditional_map(std::size_t ancilla_in, std::size_t ancilla_out) const {
  const std::size_t d0 = spec_.mode0.dim();
  const std::size_t d1 = spec_.mode1.dim();
  if (ancilla_in >= d1 || ancilla_out >= d1) {
    throw DimensionMismatch("TwoModeOperator::conditional_map: ancilla index outside mode 1");
  }
  CMatrix k(idx(d0), idx(d0));
  for (std::size_t i = 0; i < d0; ++i) {
    for (std::size_t n = 0; n < d0; ++n) {
      k(idx(i), idx(n)) = matrix_(idx(spec_.index(i, ancilla_out)), idx(spec_.index(n, ancilla_in)));
    }
  }
  return FockOperator(std::move(k), spec_.mode0);
}

// ---------------------------------------------------------------------------

Ket coherent_ket(cplx alpha, const HilbertSpec& spec) {
  const std::size_t dim = spec.dim();
  CVector c = CVector::Zero(idx(dim));
  const double mod = std::abs(alpha);
  if (mod == 0.0) {
    c(0) = 1.0;
    return Ket(std::move(c), spec);
  }
  const double log_mod = std::log(mod);
  const double phase = std::arg(alpha);
  const double half_mod2 = 0.5 * mod * mod;
  for (std::size_t n = 0; n < dim; ++n) {
    const double nd = static_cast<double>(n);
    const double log_mag = -half_mod2 + nd * log_mod - 0.5 * special::log_factorial(n);
    c(idx(n)) = std::polar(std::exp(log_mag), nd * phase);
  }
  const double deficit = 1.0 - c.squaredNorm();
  if (deficit > spec.trunc_tol()) {
    std::ostringstream os;
    os << "coherent_ket: tail mass " << deficit << " beyond dim " << dim << " exceeds trunc_tol "
       << spec.trunc_tol();
    throw TruncationError(os.str(), deficit);
  }
  // Roundoff can push the norm a hair above one.
  if (c.squaredNorm() > 1.0) c /= std::sqrt(c.squaredNorm());
  return Ket(std::move(c), spec);
}

Ket fock_ket(std::size_t n, const HilbertSpec& spec) {
  if (n >= spec.dim()) throw DimensionMismatch("fock_ket: n outside the truncated space");
  CVector c = CVector::Zero(idx(spec.dim()));
  c(idx(n)) = 1.0;
  return Ket(std::move(c), spec);
}

DensityOperator thermal_density(double nbar, const HilbertSpec& spec) {
  if (!std::isfinite(nbar) || nbar < 0.0) throw InvalidInput("thermal_density: nbar must be >= 0");
  const std::size_t dim = spec.dim();
  CMatrix m = CMatrix::Zero(idx(dim), idx(dim));
  if (nbar == 0.0) {
    m(0, 0) = 1.0;
    return DensityOperator(std::move(m), spec);
  }
  const double ratio = nbar / (1.0 + nbar);
  double p = 1.0 / (1.0 + nbar);
  for (std::size_t n = 0; n < dim; ++n) {
    m(idx(n), idx(n)) = p;
    p *= ratio;
  }
  const double deficit = std::pow(ratio, static_cast<double>(dim));
  if (deficit > spec.trunc_tol()) {
    std::ostringstream os;
    os << "thermal_density: trace deficit " << deficit << " at dim " << dim << " exceeds trunc_tol "
       << spec.trunc_tol();
    throw TruncationError(os.str(), deficit);
  }
  return DensityOperator(std::move(m), spec);
}

FockOperator displacement_operator(cplx beta, const HilbertSpec& spec) {
  const std::size_t dim = spec.dim();
  const double mod = std::abs(beta);
  if (mod == 0.0) return identity_operator(spec);

  CMatrix d(idx(dim), idx(dim));
  const double x = mod * mod;
  const double log_mod = std::log(mod);
  const double theta = std::arg(beta);
  for (std::size_t k = 0; k < dim; ++k) {
    // Diagonal band m - n = k.
    const std::size_t count = dim - k;
    const std::vector<double> lag = special::laguerre_sequence(k, x, count);
    const double kd = static_cast<double>(k);
    const cplx lower_phase = std::polar(1.0, kd * theta);
    const cplx upper_phase = (k % 2 == 0 ? 1.0 : -1.0) * std::conj(lower_phase);
    for (std::size_t n = 0; n < count; ++n) {
      const std::size_t m = n + k;
      const double log_pref =
          0.5 * (special::log_factorial(n) - special::log_factorial(m)) + kd * log_mod - 0.5 * x;
      const double mag = std::exp(log_pref) * lag[n];
      d(idx(m), idx(n)) = mag * lower_phase;
      if (k > 0) d(idx(n), idx(m)) = mag * upper_phase;
    }
  }
  return FockOperator(std::move(d), spec);
}

FockOperator annihilation(const HilbertSpec& spec) {
  const std::size_t dim = spec.dim();
  CMatrix a = CMatrix::Zero(idx(dim), idx(dim));
  for (std::size_t n = 1; n < dim; ++n) a(idx(n - 1), idx(n)) = std::sqrt(static_cast<double>(n));
  return FockOperator(std::move(a), spec);
}

FockOperator creation(const HilbertSpec& spec) { return annihilation(spec).adjoint(); }

FockOperator number_operator(const HilbertSpec& spec) {
  CMatrix n = CMatrix::Zero(idx(spec.dim()), idx(spec.dim()));
  for (std::size_t k = 0; k < spec.dim(); ++k) n(idx(k), idx(k)) = static_cast<double>(k);
  return FockOperator(std::move(n), spec);
}

FockOperator parity_operator(const HilbertSpec& spec) {
  CMatrix p = CMatrix::Zero(idx(spec.dim()), idx(spec.dim()));
  for (std::size_t k = 0; k < spec.dim(); ++k) p(idx(k), idx(k)) = (k % 2 == 0) ? 1.0 : -1.0;
  return FockOperator(std::move(p), spec);
}

FockOperator identity_operator(const HilbertSpec& spec) {
  return FockOperator(CMatrix::Identity(idx(spec.dim()), idx(spec.dim())), spec);
}

// ---------------------------------------------------------------------------

TwoModeKet tensor(const Ket& a, const Ket& b) {
  const TwoModeSpec spec{a.spec(), b.spec()};
  CVector v(idx(spec.size()));
  for (std::size_t i = 0; i < a.dim(); ++i) {
    v.segment(idx(i * b.dim()), idx(b.dim())) = a[i] * b.amplitudes();
  }
  return TwoModeKet(std::move(v), spec);
}

TwoModeDensity tensor(const DensityOperator& a, const DensityOperator& b) {
  return TwoModeDensity(kronecker(a.matrix(), b.matrix()), TwoModeSpec{a.spec(), b.spec()});
}

TwoModeOperator tensor(const FockOperator& a, const FockOperator& b) {
  return TwoModeOperator(kronecker(a.matrix(), b.matrix()), TwoModeSpec{a.spec(), b.spec()});
}

DensityOperator partial_trace(const TwoModeDensity& rho, std::size_t keep) {
  if (keep > 1) throw InvalidInput("partial_trace: keep must be 0 or 1");
  const TwoModeSpec& s = rho.spec();
  const std::size_t d0 = s.mode0.dim();
  const std::size_t d1 = s.mode1.dim();
  const CMatrix& m = rho.matrix();
  if (keep == 0) {
    CMatrix out = CMatrix::Zero(idx(d0), idx(d0));
    for (std::size_t i = 0; i < d0; ++i) {
      for (std::size_t j = 0; j < d0; ++j) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < d1; ++k) acc += m(idx(s.index(i, k)), idx(s.index(j, k)));
        out(idx(i), idx(j)) = acc;
      }
    }
    return DensityOperator(std::move(out), s.mode0);
  }
  CMatrix out = CMatrix::Zero(idx(d1), idx(d1));
  for (std::size_t k = 0; k < d0; ++k) {
    out += m.block(idx(k * d1), idx(k * d1), idx(d1), idx(d1));
  }
  return DensityOperator(std::move(out), s.mode1);
}

DensityOperator sandwich(const FockOperator& op, const DensityOperator& rho) {
  require_same(op.spec(), rho.spec(), "sandwich");
  CMatrix out = op.matrix() * rho.matrix() * op.matrix().adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityOperator(std::move(out), rho.spec());
}

std::pair<DensityOperator, double> normalize(const DensityOperator& rho) {
  const double tr = rho.matrix().trace().real();
  if (!(tr > rho.spec().num_tol())) {
    std::ostringstream os;
    os << "normalize: trace " << tr << " is at or below num_tol " << rho.spec().num_tol();
    throw ZeroTrace(os.str());
  }
  return {DensityOperator(rho.matrix() / tr, rho.spec()), tr};
}

cplx expectation(const DensityOperator& rho, const FockOperator& op) {
  require_same(op.spec(), rho.spec(), "expectation");
  const double tr = rho.matrix().trace().real();
  if (!(tr > rho.spec().num_tol())) throw ZeroTrace("expectation: trace is at or below num_tol");
  return (op.matrix() * rho.matrix()).trace() / tr;
}

}  // namespace noisy_amp
