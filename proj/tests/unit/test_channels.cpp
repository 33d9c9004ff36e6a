#include "doctest.h"

#include <cmath>

#include "noisy_amp/channels.hpp"
#include "noisy_amp/errors.hpp"
#include "noisy_amp/metrics.hpp"
#include "noisy_amp/multimode.hpp"
#include "oracles.hpp"

using namespace noisy_amp;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

DensityOperator coherent_density(cplx alpha, std::size_t dim) {
  return DensityOperator::from_ket(coherent_ket(alpha, HilbertSpec(dim)));
}

}  // namespace

TEST_CASE("PhotonicOp construction and parsing") {
  CHECK(PhotonicOp::parse("sub2") == PhotonicOp::subtract(2));
  CHECK(PhotonicOp::parse("add1") == PhotonicOp::add(1));
  CHECK(PhotonicOp::parse("coh:0.6").r() == doctest::Approx(0.6));
  CHECK(PhotonicOp::parse("coh:0.6").t() == doctest::Approx(0.8));
  CHECK(PhotonicOp::subtract(1).label() == "sub1");
  CHECK_THROWS_AS(PhotonicOp::parse("sub0"), InvalidInput);
  CHECK_THROWS_AS(PhotonicOp::parse("mul1"), InvalidInput);
  CHECK_THROWS_AS(PhotonicOp::parse("coh:1.5"), InvalidInput);
  CHECK_THROWS_AS(PhotonicOp::coherent(0.5, 0.5), InvalidInput);
  CHECK(PhotonicOp::subtract(2).phase_covariant());
  CHECK_FALSE(PhotonicOp::coherent_ratio(0.5).phase_covariant());
}

TEST_CASE("build_operator") {
  const HilbertSpec spec(8);
  CHECK(max_abs(build_operator(PhotonicOp::subtract(1), spec).matrix() - annihilation(spec).matrix()) == 0.0);
  CHECK(max_abs(build_operator(PhotonicOp::coherent(1, 0), spec).matrix() - annihilation(spec).matrix()) < 1e-15);
  CHECK(max_abs(build_operator(PhotonicOp::coherent(0, 1), spec).matrix() - creation(spec).matrix()) < 1e-15);
  const CVector two = build_operator(PhotonicOp::add(2), spec).apply(fock_ket(0, spec));
  CHECK(std::abs(two(2) - std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("apply_operation") {
  const HilbertSpec spec(30);
  const DensityOperator vac = DensityOperator::from_ket(fock_ket(0, spec));
  CHECK_THROWS_AS(apply_operation(vac, annihilation(spec)), ZeroTrace);

  const DensityOperator one = apply_operation(vac, creation(spec));
  CHECK(one.weight() == doctest::Approx(1.0));
  CHECK(std::abs(one(1, 1) - 1.0) < 1e-15);

  const cplx alpha(0.3, 0.1);
  const DensityOperator rho = coherent_density(alpha, 30);
  const DensityOperator out = apply_operation(rho, annihilation(spec));
  CHECK(out.weight() == doctest::Approx(std::norm(alpha)).epsilon(1e-10));
  CHECK(max_abs(normalize(out).first.matrix() - rho.matrix()) < 1e-10);

  // weight = <O^dagger O> Tr(rho)
  const DensityOperator th = pila_coherent(alpha, 1.4, spec);
  const FockOperator op = build_operator(PhotonicOp::coherent_ratio(0.6), spec);
  const double expected = expectation(th, op.adjoint() * op).real() * th.weight();
  CHECK(std::abs(apply_operation(th, op).weight() - expected) < spec.num_tol());
}

TEST_CASE("pila_coherent moments") {
  const HilbertSpec spec(40);
  SUBCASE("unit gain is the identity") {
    CHECK(max_abs(pila_coherent(0.2, 1.0, spec).matrix() - coherent_density(0.2, 40).matrix()) < 1e-14);
  }
  SUBCASE("first and second moments") {
    const DensityOperator rho = pila_coherent(0.2, 1.2, spec);
    CHECK(std::abs(expectation(rho, annihilation(spec)) - std::sqrt(1.2) * 0.2) < 1e-8);
    CHECK(std::abs(expectation(rho, number_operator(spec)).real() - 0.248) < 1e-8);
  }
  SUBCASE("matches a matrix-exponential displaced thermal state") {
    const cplx alpha = std::polar(0.9, 1.1);
    const DensityOperator rho = pila_coherent(alpha, 1.7, spec);
    CHECK(max_abs(rho.matrix() - oracle::displaced_thermal(std::sqrt(1.7) * alpha, 0.7, 40, 160)) < 1e-10);
  }
  SUBCASE("gain below one is rejected") { CHECK_THROWS_AS(pila_coherent(0.2, 0.9, spec), InvalidInput); }
}

TEST_CASE("pila_channel") {
  SUBCASE("unit gain leaves the state unchanged") {
    const DensityOperator rho = coherent_density(cplx(0.3, 0.4), 30);
    CHECK(max_abs(pila_channel(rho, 1.0).matrix() - rho.matrix()) < 1e-12);
  }
  SUBCASE("vacuum goes to the thermal state") {
    const HilbertSpec spec(40);
    const DensityOperator out = pila_channel(DensityOperator::from_ket(fock_ket(0, spec)), 1.2);
    CHECK(max_abs(out.matrix() - thermal_density(0.2, spec).matrix()) < 1e-8);
  }
  SUBCASE("coherent inputs agree with the displaced thermal construction") {
    for (const double a : {0.2, 1.0}) {
      for (const double g : {1.2, 2.0}) {
        const HilbertSpec spec(80);
        const DensityOperator out = pila_channel(coherent_density(a, 80), g);
        CHECK(max_abs(out.matrix() - pila_coherent(a, g, spec).matrix()) < 1e-8);
        CHECK(std::abs(out.weight() - 1.0) < spec.num_tol());
      }
    }
  }
  SUBCASE("matches the explicit two-mode squeezer and partial trace") {
    const std::size_t d = 30;
    const double gain = 1.3;
    const double xi = std::acosh(std::sqrt(gain));
    const oracle::Matrix s = oracle::two_mode_squeezer(xi, d);
    CVector in = CVector::Zero(static_cast<Eigen::Index>(d));
    in(1) = cplx(0.6, 0.0);
    in(2) = cplx(0.0, 0.8);
    const CVector joint_in = oracle::kron(in, oracle::Vector::Unit(static_cast<Eigen::Index>(d), 0));
    const CVector joint_out = s * joint_in;
    const oracle::Matrix reduced = oracle::trace_mode1(joint_out * joint_out.adjoint(), d, d);
    const DensityOperator out = pila_channel(DensityOperator::from_ket(Ket(in, HilbertSpec(d))), gain);
    CHECK(max_abs(out.matrix().topLeftCorner(15, 15) - reduced.topLeftCorner(15, 15)) < 1e-8);
  }
  SUBCASE("composition law") {
    const HilbertSpec spec(80);
    const DensityOperator rho = coherent_density(cplx(0.5, -0.2), 80);
    const DensityOperator twice = pila_channel(pila_channel(rho, 1.3), 1.4);
    CHECK(max_abs(twice.matrix() - pila_channel(rho, 1.3 * 1.4).matrix()) < 1e-7);
  }
  SUBCASE("leakage is reported") {
    CHECK_THROWS_AS(pila_channel(coherent_density(2.0, 30), 3.0), TruncationError);
  }
}

TEST_CASE("beam splitter") {
  const std::size_t d = 6;
  const HilbertSpec spec(d);
  const double T = 0.7;
  const TwoModeOperator u = beam_splitter(T, spec, spec);
  const oracle::Matrix ref = oracle::beam_splitter(T, d);
  const TwoModeSpec ts{spec, spec};
  double worst = 0.0;
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t q = 0; p + q < d; ++q) {
      for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t m = 0; n + m < d; ++m) {
          const auto row = static_cast<Eigen::Index>(ts.index(p, q));
          const auto col = static_cast<Eigen::Index>(ts.index(n, m));
          worst = std::max(worst, std::abs(u.matrix()(row, col) - ref(row, col)));
        }
      }
    }
  }
  CHECK(worst < 1e-12);

  SUBCASE("coherent inputs split into coherent outputs") {
    const HilbertSpec big(30);
    const cplx alpha(0.7, 0.2);
    const TwoModeKet out = beam_splitter(0.8, big, big).apply(tensor(coherent_ket(alpha, big), fock_ket(0, big)));
    const TwoModeKet expected = tensor(coherent_ket(std::sqrt(0.8) * alpha, big),
                                       coherent_ket(-std::sqrt(0.2) * alpha, big));
    CHECK((out.amplitudes() - expected.amplitudes()).norm() < 1e-9);
  }
  SUBCASE("unitary where the photon number fits") {
    const TwoModeOperator v = beam_splitter(0.3, spec, HilbertSpec(4));
    const TwoModeKet k = tensor(fock_ket(2, spec), fock_ket(1, HilbertSpec(4)));
    CHECK(v.apply(k).amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(beam_splitter(1.2, spec, spec), InvalidInput);
}

TEST_CASE("beam-splitter subtraction") {
  const HilbertSpec spec(40);
  SUBCASE("vacuum never clicks") {
    CHECK_THROWS_AS(bs_subtraction(DensityOperator::from_ket(fock_ket(0, spec)), 0.9, OnOff{}), ZeroTrace);
  }
  SUBCASE("coherent input closed form") {
    const cplx alpha(0.8, 0.3);
    for (const double T : {0.5, 0.9, 0.99}) {
      const HeraldedState h = bs_subtraction(coherent_density(alpha, 40), T, OnOff{});
      CHECK(h.success_probability == doctest::Approx(1.0 - std::exp(-(1.0 - T) * std::norm(alpha))).epsilon(1e-9));
      CHECK(max_abs(h.state.matrix() - coherent_density(std::sqrt(T) * alpha, 40).matrix()) < 1e-9);
    }
  }
  SUBCASE("high transmittance approaches ideal subtraction") {
    const DensityOperator rho = pila_coherent(0.2, 1.2, spec);
    const HeraldedState h = bs_subtraction(rho, 0.9999, FockProjection{1});
    const DensityOperator ideal = normalize(apply_operation(rho, annihilation(spec))).first;
    CHECK(max_abs(h.state.matrix() - ideal.matrix()) < 1e-4);
  }
  SUBCASE("explicit circuit with a multimode ket") {
    // Pure input, single-photon projection, compared against a direct simulation.
    const HilbertSpec s(20);
    const Ket in = coherent_ket(cplx(0.5, 0.5), s);
    const MultiModeKet joint = MultiModeKet(in).with_mode(6, 0).applied(beam_splitter(0.8, s, HilbertSpec(6)), 0, 1);
    const CVector branch = joint.projected(1, 1).single_mode();
    const HeraldedState h = bs_subtraction(DensityOperator::from_ket(in), 0.8, FockProjection{1});
    CHECK(h.success_probability == doctest::Approx(branch.squaredNorm()).epsilon(1e-10));
    const CMatrix expected = branch * branch.adjoint() / branch.squaredNorm();
    CHECK(max_abs(h.state.matrix() - expected) < 1e-10);
  }
}

TEST_CASE("parametric-amplifier addition") {
  const HilbertSpec spec(30);
  SUBCASE("vacuum input yields one photon") {
    for (const double g : {1.01, 1.5, 3.0}) {
      const HeraldedState h = ndpa_addition(DensityOperator::from_ket(fock_ket(0, spec)), g, 1);
      CHECK(std::abs(h.state(1, 1) - 1.0) < 1e-12);
      CHECK(h.success_probability == doctest::Approx((g - 1.0) / (g * g)).epsilon(1e-10));
    }
  }
  SUBCASE("weak gain approaches ideal addition") {
    const double xi = 0.01;
    const double g = std::cosh(xi) * std::cosh(xi);
    const DensityOperator rho = pila_coherent(0.2, 1.2, spec);
    const HeraldedState h = ndpa_addition(rho, g, 1);
    const DensityOperator ideal = normalize(apply_operation(rho, creation(spec))).first;
    CHECK(max_abs(h.state.matrix() - ideal.matrix()) < 1e-4);
  }
  SUBCASE("idler Kraus operators match the two-mode squeezer") {
    const std::size_t d = 24;
    const double gain = 1.2;
    const oracle::Matrix s = oracle::two_mode_squeezer(std::acosh(std::sqrt(gain)), d);
    const FockOperator a2 = squeezer_idler_kraus(gain, 2, HilbertSpec(d));
    for (Eigen::Index n = 0; n < 8; ++n) {
      for (Eigen::Index m = 0; m < 10; ++m) {
        CHECK(std::abs(a2.matrix()(m, n) - s(m * static_cast<Eigen::Index>(d) + 2, n * static_cast<Eigen::Index>(d))) < 1e-9);
      }
    }
  }
  CHECK_THROWS_AS(ndpa_addition(DensityOperator::from_ket(fock_ket(0, spec)), 1.0, 1), InvalidInput);
}

TEST_CASE("multimode kets") {
  const HilbertSpec s(3);
  const MultiModeKet k = MultiModeKet(fock_ket(1, s)).with_mode(2, 1).with_mode(4, 0);
  CHECK(k.modes() == 3);
  CHECK(k.dims() == std::vector<std::size_t>{3, 2, 4});
  CHECK(k.norm2() == doctest::Approx(1.0));
  CHECK(k.projected(1, 0).norm2() == 0.0);
  const MultiModeKet r = k.projected(2, 0).projected(1, 1);
  CHECK(std::abs(r.single_mode()(1) - 1.0) < 1e-15);
}
