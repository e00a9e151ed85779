#include <doctest.h>

#include <cmath>

#include "qmem/baselines.hpp"
#include "qmem/policy.hpp"

using namespace qmem;

TEST_CASE("ps_update single rewarded visit") {
  EdgeTable t(2, 3, 0.0, 1.0, 1.0);
  ps_update(t, 1, 2, 0.75);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Ones(2, 3);
  expect(1, 2) += 0.75;
  CHECK((t.h - expect).norm() == 0);
  CHECK(t.g.isZero(0));
}

TEST_CASE("ps_update relaxes to h_eq without rewards") {
  EdgeTable t(1, 2, 0.1, 2.0, 1.0);
  t.h << 10.0, -4.0;
  for (int k = 1; k <= 60; ++k) {
    ps_update(t, 0, 0, 0.0);
    CHECK(std::abs(t.h(0, 0) - (2.0 + 8.0 * std::pow(0.9, k))) < 1e-12);
    CHECK(std::abs(t.h(0, 1) - (2.0 - 6.0 * std::pow(0.9, k))) < 1e-12);
  }
}

TEST_CASE("ps_update matches the backward-discounted closed form") {
  RngStream rng(1, 0);
  for (double gamma : {0.0, 0.02, 0.4}) {
    for (double eta : {1.0, 0.5, 0.1}) {
      EdgeTable t(2, 2, gamma, 1.0, eta);
      std::vector<double> excitation;  // g * reward seen by edge (0, 0)
      double glow = 0;
      for (int step = 0; step < 80; ++step) {
        const bool visit = step == 0 || rng.uniform() < 0.2;
        const int s = visit ? 0 : 1;
        const double r = rng.uniform() < 0.5 ? rng.uniform() : 0.0;
        if (visit) glow = 1.0;
        excitation.push_back(glow * r);
        glow *= 1.0 - eta;
        ps_update(t, s, 0, r);
        double closed = 1.0;
        const auto n = excitation.size();
        for (std::size_t k = 0; k < n; ++k) closed += std::pow(1.0 - gamma, static_cast<double>(k)) * excitation[n - 1 - k];
        REQUIRE(std::abs(t.h(0, 0) - closed) < 1e-12);
      }
    }
  }
}

TEST_CASE("PS strengths stay non-negative under non-negative rewards") {
  RngStream rng(2, 0);
  EdgeTable t(4, 3, 0.05, 0.5, 0.3);
  for (int k = 0; k < 100000; ++k) {
    const int s = static_cast<int>(rng.index(4));
    const auto a = static_cast<int>(sample_action(ps_policy(t, s), rng));
    ps_update(t, s, a, rng.uniform() < 0.2 ? 3 * rng.uniform() : 0.0);
    if (k % 1000 == 0) REQUIRE(t.h.minCoeff() >= 0);
  }
  CHECK(t.h.minCoeff() >= 0);
}

TEST_CASE("ps_policy") {
  EdgeTable t(1, 4, 0.0, 1.0, 1.0);
  for (double p : ps_policy(t, 0)) CHECK(p == 0.25);
  Eigen::MatrixXd h(1, 2);
  h << 1.0, 3.0;
  auto d = row_policy(h, PolicyKind::linear, 0);
  CHECK(d[0] == doctest::Approx(0.25));
  CHECK(d[1] == doctest::Approx(0.75));
  h << 0.0, std::log(3.0);
  d = row_policy(h, PolicyKind::softmax, 0);
  CHECK(std::abs(d[0] - 0.25) < 1e-15);
  CHECK(std::abs(d[1] - 0.75) < 1e-15);
  h << 0.0, 0.0;
  CHECK_THROWS_AS(row_policy(h, PolicyKind::linear, 0), DegenerateInput);
}

TEST_CASE("sarsa_lambda_update") {
  SUBCASE("lambda = 0 touches only the visited pair") {
    ValueTable t(3, 2, 0.5, 0.9, 0.0);
    t.q.setConstant(0.1);
    sarsa_lambda_update(t, 1, 0, 1.0, 2, 1, false);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Constant(3, 2, 0.1);
    expect(1, 0) = 0.1 + 0.5 * (1.0 + 0.9 * 0.1 - 0.1);
    CHECK((t.q - expect).norm() < 1e-15);
    CHECK(t.e.isZero(0));
  }
  SUBCASE("gamma = 0 gives (1 - alpha e) U + alpha e r") {
    ValueTable t(2, 2, 0.3, 0.0, 0.5);
    t.q << 1.0, 2.0, 3.0, 4.0;
    sarsa_lambda_update(t, 0, 1, 5.0, 1, 1, false);
    CHECK(t.q(0, 1) == doctest::Approx((1 - 0.3) * 2.0 + 0.3 * 5.0));
    sarsa_lambda_update(t, 1, 0, -1.0, 0, 0, false);
    // Trace of (0,1) decayed to gamma lambda = 0 before the second update.
    CHECK(t.q(1, 0) == doctest::Approx((1 - 0.3) * 3.0 + 0.3 * -1.0));
  }
  SUBCASE("two-state chain, hand iteration") {
    ValueTable t(2, 1, 0.5, 1.0, 0.0);
    const double q00[] = {0.0, 0.25, 0.5};
    const double q10[] = {0.5, 0.75, 0.875};
    for (int ep = 0; ep < 3; ++ep) {
      t.reset_traces();
      sarsa_lambda_update(t, 0, 0, 0.0, 1, 0, false);
      sarsa_lambda_update(t, 1, 0, 1.0, 0, 0, true);
      CHECK(t.q(0, 0) == doctest::Approx(q00[ep]));
      CHECK(t.q(1, 0) == doctest::Approx(q10[ep]));
    }
  }
  SUBCASE("replacing traces") {
    ValueTable t(1, 1, 0.1, 1.0, 1.0, TraceKind::replacing);
    sarsa_lambda_update(t, 0, 0, 0.0, 0, 0, false);
    sarsa_lambda_update(t, 0, 0, 0.0, 0, 0, false);
    CHECK(t.e(0, 0) == 1.0);
  }
}

TEST_CASE("gradient_rl_update") {
  SUBCASE("one-hot features reproduce tabular SARSA(lambda)") {
    RngStream rng(3, 0);
    const int S = 5, A = 2;
    {
      ValueTable table(S, A, 0.15, 0.95, 0.6);
      RVector theta = RVector::Zero(S * A), e = RVector::Zero(S * A);
      int s = 0, a = 0;
      double worst = 0;
      for (int step = 0; step < 5000; ++step) {
        const int s2 = static_cast<int>(rng.index(S)), a2 = static_cast<int>(rng.index(A));
        const double r = rng.normal();
        const bool terminal = rng.uniform() < 0.05;
        const double u = theta(s * A + a);
        const double u2 = terminal ? 0.0 : theta(s2 * A + a2);
        sarsa_lambda_update(table, s, a, r, s2, a2, terminal);
        RVector grad = RVector::Zero(S * A);
        grad(s * A + a) = 1;
        gradient_rl_update(theta, e, grad, r, u, u2, 0.15, 0.95, 0.6);
        if (terminal) {
          table.reset_traces();
          e.setZero();
        }
        for (int i = 0; i < S; ++i)
          for (int j = 0; j < A; ++j) worst = std::max(worst, std::abs(table.q(i, j) - theta(i * A + j)));
        s = s2;
        a = a2;
      }
      CHECK(worst < 1e-12);
    }
  }
  SUBCASE("zero gradient never moves theta") {
    RVector theta = RVector::Constant(3, 0.5), e = RVector::Zero(3);
    for (int i = 0; i < 10; ++i) gradient_rl_update(theta, e, RVector::Zero(3), 1.0, 0.0, 2.0, 0.3, 0.9, 0.9);
    CHECK((theta - RVector::Constant(3, 0.5)).norm() == 0);
  }
  SUBCASE("single linear parameter, two hand steps") {
    // U = theta x, alpha 0.5, gamma 1, lambda 0.5.
    RVector theta(1), e = RVector::Zero(1), x(1);
    theta << 1.0;
    x << 2.0;
    gradient_rl_update(theta, e, x, 1.0, 2.0, 3.0, 0.5, 1.0, 0.5);
    // e = 2, delta = 1 + 3 - 2 = 2, theta = 1 + 0.5*2*2 = 3
    CHECK(theta(0) == doctest::Approx(3.0));
    gradient_rl_update(theta, e, x, 0.0, 6.0, 5.0, 0.5, 1.0, 0.5);
    // e = 0.5*2 + 2 = 3, delta = 0 + 5 - 6 = -1, theta = 3 - 1.5 = 1.5
    CHECK(theta(0) == doctest::Approx(1.5));
  }
  SUBCASE("length mismatch") {
    RVector theta = RVector::Zero(2), e = RVector::Zero(3);
    CHECK_THROWS_AS(gradient_rl_update(theta, e, RVector::Zero(2), 0, 0, 0, 0.1, 1, 1), InvalidArgument);
  }
}

TEST_CASE("tabular_pg_trace") {
  RngStream rng(4, 0);
  SUBCASE("zero-sum over transitions") {
    for (auto kind : {PolicyKind::linear, PolicyKind::softmax}) {
      Eigen::MatrixXd h = Eigen::MatrixXd::NullaryExpr(3, 4, [&] { return 0.2 + rng.uniform(); });
      Eigen::MatrixXd total = Eigen::MatrixXd::Zero(3, 4);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) total += tabular_pg_trace(h, kind, i, j);
      CHECK(total.cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("uniform two-action row") {
    Eigen::MatrixXd h = Eigen::MatrixXd::Constant(1, 2, 1.5);
    const double c = 3.0;
    const auto e = tabular_pg_trace(h, PolicyKind::linear, 0, 0);
    CHECK(e(0, 0) == doctest::Approx(1 / (2 * c)));
    CHECK(e(0, 1) == doctest::Approx(-1 / (2 * c)));
  }
  SUBCASE("finite differences of the row policy") {
    for (auto kind : {PolicyKind::linear, PolicyKind::softmax}) {
      Eigen::MatrixXd h = Eigen::MatrixXd::NullaryExpr(2, 3, [&] { return 0.5 + rng.uniform(); });
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) {
          const auto e = tabular_pg_trace(h, kind, i, j);
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 3; ++l) {
              Eigen::MatrixXd up = h, dn = h;
              const double d = 1e-6;
              up(k, l) += d;
              dn(k, l) -= d;
              const double fd = (row_policy(up, kind, i)[j] - row_policy(dn, kind, i)[j]) / (2 * d);
              CHECK(std::abs(fd - e(k, l)) < 1e-8);
            }
        }
    }
  }
  SUBCASE("rewarded linear update weakens siblings and spares other rows") {
    Eigen::MatrixXd h = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return 0.5 + rng.uniform(); });
    const auto e = tabular_pg_trace(h, PolicyKind::linear, 1, 2);
    CHECK(e(1, 2) > 0);
    CHECK(e(1, 0) < 0);
    CHECK(e(1, 1) < 0);
    CHECK(e.row(0).isZero(0));
    CHECK(e.row(2).isZero(0));
  }
  SUBCASE("degenerate row") {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(1, 2);
    CHECK_THROWS_AS(tabular_pg_trace(h, PolicyKind::linear, 0, 0), DegenerateInput);
  }
}

TEST_CASE("random_walk_policy") {
  for (double p : random_walk_policy(4)) CHECK(p == 0.25);
}

TEST_CASE("epsilon_greedy") {
  Eigen::MatrixXd q(1, 3);
  q << 0.0, 2.0, 1.0;
  RngStream rng(5, 0);
  for (int i = 0; i < 100; ++i) CHECK(epsilon_greedy(q, 0, 0.0, rng) == 1);
  int greedy = 0;
  const int n = 30000;
  for (int i = 0; i < n; ++i) greedy += epsilon_greedy(q, 0, 0.3, rng) == 1;
  CHECK(std::abs(greedy / static_cast<double>(n) - (0.7 + 0.1)) < 0.015);
}
