#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "noisy_amp/channels.hpp"
#include "noisy_amp/errors.hpp"
#include "noisy_amp/metrics.hpp"
#include "oracles.hpp"

using namespace noisy_amp;

namespace {

// Moments of a displaced thermal state with mean amplitude mu0 and thermal
// occupation nbar, summed directly over a large matrix built by the oracle.
struct Moments {
  cplx a;      // <a>
  cplx ada_a;  // <a^dagger a a>
  double n;    // <a^dagger a>
  cplx aad;    // <a a a^dagger>
  double nn;   // <a a^dagger>
};

Moments brute_force_moments(cplx mu0, double nbar, std::size_t dim) {
  const oracle::Matrix rho = oracle::displaced_thermal(mu0, nbar, dim, 3 * dim);
  const oracle::Matrix a = oracle::lowering(dim);
  const oracle::Matrix ad = a.adjoint();
  Moments m;
  m.a = (a * rho).trace();
  m.ada_a = (ad * a * a * rho).trace();
  m.n = (ad * a * rho).trace().real();
  m.aad = (a * a * ad * rho).trace();
  m.nn = (a * ad * rho).trace().real();
  return m;
}

}  // namespace

TEST_CASE("effective gain closed forms re-derived by brute force") {
  const double G = 1.2;
  const double a = 0.2;
  const cplx mu0 = std::sqrt(G) * a;
  const Moments m = brute_force_moments(mu0, G - 1.0, 60);
  // Subtraction: Tr(a a rho a^dagger) / Tr(a rho a^dagger) = <a^dagger a a> / <a^dagger a>.
  const double sqrt_ge_sub = std::abs(m.ada_a / m.n) / a;
  // Addition: Tr(a a^dagger rho a) / Tr(a^dagger rho a) = <a a a^dagger> / <a a^dagger>.
  const double sqrt_ge_add = std::abs(m.aad / m.nn) / a;
  const double closed_sub = std::sqrt(G) * (G * a * a + 2 * (G - 1)) / (G * a * a + G - 1);
  const double closed_add = std::sqrt(G) * (G * a * a + 2 * G) / (G * a * a + G);
  CHECK(sqrt_ge_sub == doctest::Approx(closed_sub).epsilon(1e-10));
  CHECK(sqrt_ge_add == doctest::Approx(closed_add).epsilon(1e-10));
  CHECK(closed_sub * closed_sub == doctest::Approx(3.916).epsilon(1e-3));
  CHECK(closed_add * closed_add == doctest::Approx(4.617).epsilon(1e-3));

  const MetricReport sub = evaluate_pipeline(a, G, PhotonicOp::subtract(1));
  const MetricReport add = evaluate_pipeline(a, G, PhotonicOp::add(1));
  CHECK(std::abs(sub.effective_gain - closed_sub * closed_sub) < 1e-8);
  CHECK(std::abs(add.effective_gain - closed_add * closed_add) < 1e-8);
}

TEST_CASE("effective gain and fidelity of the bare amplifier") {
  for (const double G : {1.0, 1.2, 2.0}) {
    const HilbertSpec spec(60);
    const DensityOperator rho = pila_coherent(0.2, G, spec);
    CHECK(std::abs(effective_gain(rho, 0.2) - G) < 1e-7);
    CHECK(std::abs(fidelity_to_target(rho, 0.2, G) - 1.0 / std::sqrt(G)) < 1e-6);
  }
  const MetricReport r = evaluate_pipeline(0.2, 1.2, std::nullopt);
  CHECK(r.fidelity == doctest::Approx(0.91287).epsilon(1e-5));
  CHECK(r.dim >= 20);
  CHECK_THROWS_AS(effective_gain(pila_coherent(0.2, 1.2, HilbertSpec(40)), 0.0), InvalidInput);
}

TEST_CASE("fidelity of pure states") {
  const HilbertSpec spec(30);
  const DensityOperator coh = DensityOperator::from_ket(coherent_ket(0.3, spec));
  CHECK(fidelity_to_target(coh, 0.3, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  const DensityOperator one = DensityOperator::from_ket(fock_ket(1, spec));
  const double ge = 2.5;
  const cplx alpha = 0.1;
  const double beta = std::sqrt(ge) * 0.1;
  CHECK(fidelity_to_target(one, alpha, ge) == doctest::Approx(beta * std::exp(-beta * beta / 2)).epsilon(1e-12));
  // <a> vanishes for a number state.
  CHECK(effective_gain(one, alpha) == doctest::Approx(0.0));
}

TEST_CASE("Holevo variance") {
  const HilbertSpec spec(30);
  SUBCASE("number states have no phase information") {
    for (std::size_t n : {0, 1, 4}) {
      CHECK(std::isinf(holevo_variance(DensityOperator::from_ket(fock_ket(n, spec)))));
    }
  }
  SUBCASE("coherent state series") {
    const cplx mu = oracle::coherent_sharpness(0.2, 40);
    CHECK(std::abs(mu) == doctest::Approx(0.19768).epsilon(1e-4));
    const double v = holevo_variance(DensityOperator::from_ket(coherent_ket(0.2, spec)));
    CHECK(std::abs(v - (1.0 / std::norm(mu) - 1.0)) < 1e-8);
    CHECK(v == doctest::Approx(24.59).epsilon(1e-3));
  }
  SUBCASE("addition without amplification sharpens the phase") {
    const MetricReport in = evaluate_pipeline(0.2, 1.0, std::nullopt);
    const MetricReport added = evaluate_pipeline(0.2, 1.0, PhotonicOp::add(1));
    CHECK(added.holevo_variance < in.holevo_variance);
  }
}

TEST_CASE("Wigner function") {
  const HilbertSpec spec(30);
  const std::vector<cplx> origin{0.0};
  CHECK(wigner(DensityOperator::from_ket(fock_ket(0, spec)), origin)[0] ==
        doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-12));
  CHECK(wigner(DensityOperator::from_ket(fock_ket(1, spec)), origin)[0] ==
        doctest::Approx(-2.0 / std::numbers::pi).epsilon(1e-12));

  SUBCASE("coherent state Gaussian") {
    const cplx alpha(0.5, -0.3);
    const DensityOperator rho = DensityOperator::from_ket(coherent_ket(alpha, HilbertSpec(40)));
    const std::vector<cplx> pts{cplx(0.1, 0.2), cplx(1.0, -1.0), cplx(-2.5, 2.5)};
    const std::vector<double> w = wigner(rho, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(w[i] == doctest::Approx(2.0 / std::numbers::pi * std::exp(-2.0 * std::norm(pts[i] - alpha))).epsilon(1e-10));
    }
  }
  SUBCASE("signs of the operated states") {
    std::vector<cplx> grid;
    for (int i = -60; i <= 60; i += 3) {
      for (int j = -60; j <= 60; j += 3) grid.emplace_back(0.05 * i, 0.05 * j);
    }
    const PipelineState sub = run_pipeline(0.2, 1.2, PhotonicOp::subtract(1), HilbertSpec(60));
    const PipelineState add = run_pipeline(0.2, 1.2, PhotonicOp::add(1), HilbertSpec(60));
    const auto ws = wigner(sub.state, grid);
    const auto wa = wigner(add.state, grid);
    CHECK(*std::min_element(ws.begin(), ws.end()) >= -1e-9);
    CHECK(wigner(add.state, origin)[0] < 0.0);
    CHECK(*std::min_element(wa.begin(), wa.end()) < 0.0);
  }
}

TEST_CASE("phase covariance") {
  for (const char* name : {"sub1", "sub2", "add1", "add2"}) {
    const PhotonicOp op = PhotonicOp::parse(name);
    const MetricReport ref = evaluate_pipeline(0.2, 1.2, op);
    for (const double phi : {std::numbers::pi / 4, std::numbers::pi / 2, std::numbers::pi, 2.0}) {
      const MetricReport r = evaluate_pipeline(std::polar(0.2, phi), 1.2, op);
      CHECK(std::abs(r.effective_gain - ref.effective_gain) < 1e-8);
      CHECK(std::abs(r.fidelity - ref.fidelity) < 1e-8);
      CHECK(std::abs(r.holevo_variance - ref.holevo_variance) < 1e-8);
    }
    CHECK(std::abs(phase_averaged(PhaseMetric::Gain, 0.2, op, 1.2, 16) - ref.effective_gain) < 1e-8);
  }
  SUBCASE("the coherent superposition is not covariant") {
    const PhotonicOp op = PhotonicOp::coherent_ratio(std::sqrt(0.5));
    const MetricReport a = evaluate_pipeline(0.2, 1.2, op);
    const MetricReport b = evaluate_pipeline(std::polar(0.2, std::numbers::pi / 2), 1.2, op);
    CHECK(std::abs(a.effective_gain - b.effective_gain) > 1e-3);
  }
}

TEST_CASE("phase averages of the coherent superposition") {
  const double gain = 1.2;
  const MetricReport sub = evaluate_pipeline(0.2, gain, PhotonicOp::subtract(1));
  const MetricReport add = evaluate_pipeline(0.2, gain, PhotonicOp::add(1));
  const PhaseAverages r0 = phase_average_all(0.2, PhotonicOp::coherent_ratio(0.0), gain);
  const PhaseAverages r1 = phase_average_all(0.2, PhotonicOp::coherent_ratio(1.0), gain);
  CHECK(std::abs(r0.gain - sub.effective_gain) < 1e-10);
  CHECK(std::abs(r0.fidelity - sub.fidelity) < 1e-10);
  CHECK(std::abs(r1.holevo_variance - add.holevo_variance) < 1e-10);

  // The amplitude-averaged gain is non-monotonic in r and largest at r = 1.
  std::vector<double> amp;
  for (int i = 0; i <= 20; ++i) amp.push_back(phase_average_all(0.2, PhotonicOp::coherent_ratio(0.05 * i), gain).amplitude_gain);
  CHECK(std::max_element(amp.begin(), amp.end()) == amp.end() - 1);
  bool dips = false;
  for (std::size_t i = 1; i < amp.size(); ++i) dips = dips || amp[i] < amp[i - 1];
  CHECK(dips);

  CHECK_THROWS_AS(phase_averaged(PhaseMetric::Gain, 0.2, PhotonicOp::subtract(1), gain, 4), InvalidInput);
  CHECK_THROWS_AS(phase_averaged(PhaseMetric::Gain, 0.0, PhotonicOp::subtract(1), gain), InvalidInput);
}

TEST_CASE("orderings with the number of operations") {
  for (const double G : {1.05, 1.2, 1.8, 2.5}) {
    const MetricReport s1 = evaluate_pipeline(0.2, G, PhotonicOp::subtract(1));
    const MetricReport s2 = evaluate_pipeline(0.2, G, PhotonicOp::subtract(2));
    const MetricReport a1 = evaluate_pipeline(0.2, G, PhotonicOp::add(1));
    const MetricReport a2 = evaluate_pipeline(0.2, G, PhotonicOp::add(2));
    CHECK(s2.effective_gain > s1.effective_gain);
    CHECK(a2.effective_gain > a1.effective_gain);
    CHECK(s2.holevo_variance < s1.holevo_variance);
    CHECK(a2.holevo_variance < a1.holevo_variance);
  }
}
