#include <doctest.h>

#include "oracles.hpp"
#include "qmem/estimators.hpp"
#include "qmem/runner.hpp"

using namespace qmem;

namespace {

struct QubitInstance {
  std::shared_ptr<const LayerPropagator> memory;
  DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  PovmSet povm = povm_action_subsystem(1, 2);
  ControlVector h;
};

QubitInstance qubit_instance(int controls, std::uint64_t seed) {
  RngStream rng(seed, 0);
  const auto [h1, h2] = case_I_hamiltonians(2, rng);
  QubitInstance q;
  q.memory = std::make_shared<const LayerPropagator>(HamiltonianStack::alternating(h1, h2, controls));
  CVector psi(2);
  psi << 0.8, Complex(0.36, 0.48);
  q.rho = DensityMatrix::pure(psi);
  q.h = ControlVector(controls);
  for (int k = 0; k < controls; ++k) q.h(k) = rng.normal();
  return q;
}

}  // namespace

TEST_CASE("fd_gradient_expectation") {
  SUBCASE("constant probability") {
    const ProbabilityFn p = [](const ControlVector&) { return 0.3; };
    CHECK(fd_gradient_expectation(p, ControlVector::Zero(5), 1e-3).isZero(0));
  }
  SUBCASE("agrees with the analytic gradient and converges at first order") {
    RngStream rng(2, 0);
    const auto [h1, h2] = case_I_hamiltonians(4, rng);
    auto mem = std::make_shared<const LayerPropagator>(HamiltonianStack::alternating(h1, h2, 6));
    std::mt19937_64 g(2);
    const DensityMatrix rho(oracle::random_density(4, g));
    const CMatrix pi = povm_action_subsystem(2, 2).effect(0);
    ControlVector h(6);
    for (int k = 0; k < 6; ++k) h(k) = rng.normal();
    const RVector exact = mem->gradient(mem->forward(h, rho), pi);
    const auto p = measurement_probability(mem, rho, pi);
    CHECK((fd_gradient_expectation(p, h, 1e-5) - exact).cwiseAbs().maxCoeff() < 1e-4);
    const double e1 = (fd_gradient_expectation(p, h, 1e-2) - exact).norm();
    const double e2 = (fd_gradient_expectation(p, h, 5e-3) - exact).norm();
    CHECK(e1 / e2 > 1.7);
    CHECK(e1 / e2 < 2.3);
  }
}

TEST_CASE("fd_gradient_samples") {
  SUBCASE("deterministic oracle gives zero") {
    const BinaryOutcomeOracle always = [](const ControlVector&, RngStream& r) {
      r.uniform();
      return +1;
    };
    RngStream rng(3, 0);
    CHECK(fd_gradient_samples(always, ControlVector::Zero(3), 0.1, 50, rng).isZero(0));
  }
  SUBCASE("large samples converge to the analytic gradient") {
    const auto q = qubit_instance(1, 4);
    const auto oracle_fn = measurement_oracle(q.memory, q.rho, q.povm, 0);
    const double delta = 0.01;
    const int m = 100000;
    RngStream rng(4, 1);
    const RVector est = fd_gradient_samples(oracle_fn, q.h, delta, m, rng);
    const RVector exact = q.memory->gradient(q.memory->forward(q.h, q.rho), q.povm.effect(0));
    ControlVector hp = q.h;
    hp(0) += delta;
    const double p0 = q.memory->probability(q.memory->forward(q.h, q.rho), q.povm.effect(0));
    const double p1 = q.memory->probability(q.memory->forward(hp, q.rho), q.povm.effect(0));
    const double dp = std::abs(p1 - p0);
    const double se = std::sqrt((dp - dp * dp) / m) / delta;
    CHECK(std::abs(est(0) - exact(0)) < 3 * se);
  }
  SUBCASE("fixed seed is reproducible") {
    const auto q = qubit_instance(3, 5);
    const auto oracle_fn = measurement_oracle(q.memory, q.rho, q.povm, 1);
    RngStream a(5, 0), b(5, 0);
    CHECK(fd_gradient_samples(oracle_fn, q.h, 0.05, 200, a) == fd_gradient_samples(oracle_fn, q.h, 0.05, 200, b));
  }
  SUBCASE("mean equals the expectation-based forward difference") {
    const auto q = qubit_instance(2, 6);
    const auto oracle_fn = measurement_oracle(q.memory, q.rho, q.povm, 0);
    const auto p = measurement_probability(q.memory, q.rho, q.povm.effect(0));
    const double delta = 0.05;
    const int m = 10000;
    RngStream rng(6, 0);
    const RVector est = fd_gradient_samples(oracle_fn, q.h, delta, m, rng);
    const RVector fd = fd_gradient_expectation(p, q.h, delta);
    for (int k = 0; k < 2; ++k) {
      ControlVector hp = q.h;
      hp(k) += delta;
      const double dp = std::abs(p(hp) - p(q.h));
      const double se = std::sqrt((dp - dp * dp) / m) / delta;
      CHECK(std::abs(est(k) - fd(k)) < 3 * se);
    }
  }
}

TEST_CASE("neural_gas_difference") {
  RngStream rng(7, 0);
  SUBCASE("constant oracle averages to zero") {
    const BinaryOutcomeOracle always = [](const ControlVector&, RngStream&) { return +1; };
    const CloudConfig cfg{10000, 1.0, 1.0};
    const RVector d = neural_gas_difference(always, ControlVector::Constant(4, 3.0), cfg, rng);
    CHECK(d.norm() < 5 * std::sqrt(4.0 / 10000));
  }
  SUBCASE("sign oracle aligns with its axis") {
    const ControlVector c = ControlVector::Constant(3, -1.0);
    const BinaryOutcomeOracle sign = [c](const ControlVector& h, RngStream&) { return h(0) > c(0) ? +1 : -1; };
    const RVector d = neural_gas_difference(sign, c, CloudConfig{10000, 1.0, 1.0}, rng);
    CHECK(d(0) / d.norm() > 0.9);
  }
  SUBCASE("linear probability landscape") {
    RVector gdir(4);
    gdir << 0.5, -0.3, 0.2, 0.7;
    const ControlVector c = ControlVector::Constant(4, 0.2);
    const BinaryOutcomeOracle lin = [gdir, c](const ControlVector& h, RngStream& r) {
      const double p = std::clamp(0.5 + gdir.dot(h - c), 0.0, 1.0);
      return r.uniform() < p ? +1 : -1;
    };
    double cos_sum = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const RVector d = neural_gas_difference(lin, c, CloudConfig{100, 0.1, 1.0}, rng);
      cos_sum += d.dot(gdir) / (d.norm() * gdir.norm());
    }
    CHECK(cos_sum / 100 > 0.3);
  }
  SUBCASE("cloud decay") {
    CloudConfig cfg{10, 0.4, 0.97};
    for (int t = 0; t < 200; ++t) cfg.decay();
    CHECK(cfg.sigma == doctest::Approx(0.4 * std::pow(0.97, 200)).epsilon(1e-13));
  }
  SUBCASE("config validation") {
    CHECK_THROWS_AS((CloudConfig{1, 0.1, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((CloudConfig{10, 0.0, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((CloudConfig{10, 0.1, 1.5}.validate()), InvalidArgument);
    CHECK_THROWS_AS((CloudConfig{10, 0.1, 0.0}.validate()), InvalidArgument);
  }
}

TEST_CASE("finite-difference agents learn like analytic agents") {
  ExperimentConfig cfg = preset("fig5a");
  RunSpec analytic = cfg.curves[3];  // 4 controls
  REQUIRE(analytic.controls == 4);
  RunSpec fd = analytic;
  fd.label = "fd";
  fd.estimator.source = GradientSource::finite_difference;
  fd.estimator.delta = 1e-4;
  cfg.curves = {analytic, fd};
  cfg.budget = 4000;
  cfg.record_every = 1000;
  const auto result = run_ensemble(cfg);
  for (const auto& rec_pair : {std::pair{0, 1000}, std::pair{3, 4000}}) {
    const auto& a = result.curves[0].records[rec_pair.first];
    const auto& b = result.curves[1].records[rec_pair.first];
    REQUIRE(a.x == rec_pair.second);
    CHECK(std::abs(a.mean[0] - b.mean[0]) < 2 * a.sem[0] + 2 * b.sem[0]);
  }
  CHECK(result.ledger.internal > 0);
}
