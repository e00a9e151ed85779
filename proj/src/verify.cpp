#include "qmem/verify.hpp"

#include <cmath>
#include <sstream>

#include "qmem/agent.hpp"
#include "qmem/baselines.hpp"
#include "qmem/environments.hpp"
#include "qmem/metrics.hpp"
#include "qmem/navigation.hpp"

namespace qmem {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

CheckResult bound_check(std::string name, double worst, double tol) {
  return {std::move(name), worst < tol, "max error " + fmt(worst) + " (tol " + fmt(tol) + ")"};
}

DensityMatrix random_density(int n, RngStream& rng) {
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

PovmSet random_projective_povm(int n, int outcomes, RngStream& rng) {
  const CMatrix v = random_unitary(n, rng);
  std::vector<CMatrix> effects(outcomes, CMatrix::Zero(n, n));
  std::vector<std::string> labels;
  for (int a = 0; a < outcomes; ++a) labels.push_back(std::to_string(a));
  for (int i = 0; i < n; ++i) effects[i % outcomes] += v.col(i) * v.col(i).adjoint();
  return PovmSet(labels, effects);
}

CheckResult check_expm_unitary(RngStream& rng) {
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + static_cast<int>(rng.index(7));
    const CMatrix u = herm_expm(random_hermitian(n, rng), 20 * rng.uniform() - 10);
    worst = std::max(worst, (u.adjoint() * u - CMatrix::Identity(n, n)).norm());
  }
  return bound_check("qmath.expm_unitary", worst, 1e-10);
}

CheckResult check_expm_group(RngStream& rng) {
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const CMatrix h = random_hermitian(4, rng);
    const double t1 = 4 * rng.uniform() - 2, t2 = 4 * rng.uniform() - 2;
    worst = std::max(worst, frobenius_distance(herm_expm(h, t1) * herm_expm(h, t2), herm_expm(h, t1 + t2)));
  }
  return bound_check("qmath.expm_group", worst, 1e-9);
}

CheckResult check_kron(RngStream& rng) {
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    CMatrix m[4];
    for (auto& x : m) x = CMatrix::NullaryExpr(2, 2, [&] { return rng.complex_normal(); });
    worst = std::max(worst, frobenius_distance(kron(m[0], m[1]) * kron(m[2], m[3]),
                                               kron(m[0] * m[2], m[1] * m[3])));
  }
  return bound_check("qmath.kron_mixed_product", worst, 1e-10);
}

CheckResult check_partial_trace(RngStream& rng) {
  double worst = 0;
  bool positive = true;
  const int dims[] = {2, 3, 2};
  for (int i = 0; i < 200; ++i) {
    const DensityMatrix rho = random_density(12, rng);
    for (int keep : {0, 1, 2}) {
      const int k[] = {keep};
      const CMatrix r = partial_trace(rho.matrix(), dims, k);
      worst = std::max(worst, std::abs(r.trace() - Complex(1.0)));
      Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
      positive = positive && es.eigenvalues().minCoeff() > -1e-12;
    }
  }
  auto res = bound_check("qmath.partial_trace", worst, 1e-12);
  res.passed = res.passed && positive;
  return res;
}

CheckResult check_rng_determinism() {
  RngStream a(42, 7), b(42, 7);
  bool same = true;
  for (int i = 0; i < 10000; ++i) same = same && a.uniform() == b.uniform() && a.normal() == b.normal();
  return {"qmath.rng_determinism", same, same ? "identical streams" : "streams diverged"};
}

struct GradInstance {
  HamiltonianStack stack;
  ControlVector h;
  DensityMatrix rho;
  PovmSet povm;
};

GradInstance random_instance(RngStream& rng, int dim, int controls) {
  auto [h1, h2] = case_I_hamiltonians(dim, rng);
  HamiltonianStack stack = HamiltonianStack::alternating(h1, h2, controls);
  ControlVector h(controls);
  for (int k = 0; k < controls; ++k) h(k) = 2 * rng.normal();
  return {std::move(stack), h, random_density(dim, rng), random_projective_povm(dim, 2 + static_cast<int>(rng.index(3)), rng)};
}

CheckResult check_gradient(RngStream& rng) {
  double worst = 0;
  for (int i = 0; i < 60; ++i) {
    const int dim = i % 2 ? 8 : 4;
    auto inst = random_instance(rng, dim, 1 + static_cast<int>(rng.index(16)));
    const auto snap = build_snapshot(inst.stack, inst.h);
    const CMatrix& pi = inst.povm.effect(0);
    const RVector g = gradient_fixed_layers(snap, inst.stack, inst.rho, pi);
    auto p = [&](const ControlVector& h) {
      const CMatrix u = build_snapshot(inst.stack, h).unitary;
      return (u * inst.rho.matrix() * u.adjoint() * pi).trace().real();
    };
    for (int k = 0; k < inst.h.size(); ++k) {
      ControlVector hp = inst.h, hm = inst.h;
      hp(k) += 1e-5;
      hm(k) -= 1e-5;
      worst = std::max(worst, std::abs(g(k) - (p(hp) - p(hm)) / 2e-5));
    }
  }
  return bound_check("memory.gradient_vs_central_differences", worst, 1e-6);
}

CheckResult check_zero_sum(RngStream& rng) {
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    auto inst = random_instance(rng, i % 2 ? 8 : 4, 8);
    LayerPropagator prop(inst.stack);
    const auto pass = prop.forward(inst.h, inst.rho);
    RVector sum = RVector::Zero(8);
    for (std::size_t a = 0; a < inst.povm.size(); ++a) sum += prop.gradient(pass, inst.povm.effect(a));
    worst = std::max(worst, sum.cwiseAbs().maxCoeff());
  }
  return bound_check("memory.gradient_zero_sum", worst, 1e-12);
}

CheckResult check_distribution(RngStream& rng) {
  double worst = 0;
  bool bounded = true;
  for (int i = 0; i < 1000; ++i) {
    auto inst = random_instance(rng, 4, 4);
    CMatrix sum = CMatrix::Zero(4, 4);
    for (std::size_t a = 0; a < inst.povm.size(); ++a) sum += inst.povm.effect(a);
    worst = std::max(worst, (sum - CMatrix::Identity(4, 4)).norm());
    const auto snap = build_snapshot(inst.stack, inst.h);
    worst = std::max(worst, (snap.unitary.adjoint() * snap.unitary - CMatrix::Identity(4, 4)).norm());
    const auto d = action_distribution(snap, inst.rho, inst.povm);
    double total = 0;
    for (double p : d) {
      bounded = bounded && p >= 0 && p <= 1;
      total += p;
    }
    worst = std::max(worst, std::abs(total - 1));
    // (VU, V Pi V^dagger) gives the same distribution.
    const CMatrix v = random_unitary(4, rng);
    MemorySnapshot rotated{v * snap.unitary, {}};
    const auto d2 = action_distribution(rotated, inst.rho, inst.povm.conjugated(v));
    for (std::size_t a = 0; a < d.size(); ++a) worst = std::max(worst, std::abs(d[a] - d2[a]));
  }
  auto res = bound_check("policy.povm_and_normalization", worst, 1e-10);
  res.passed = res.passed && bounded;
  return res;
}

CheckResult check_glow_closed_form(RngStream& rng) {
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto [h1, h2] = case_I_hamiltonians(4, rng);
    auto mem = std::make_shared<const LayerPropagator>(HamiltonianStack::alternating(h1, h2, 5));
    const double eta = rng.uniform();
    const double alpha = 0.1;
    GlowAgent agent(mem, GlowParams{alpha, eta, 0.0});
    std::vector<RVector> grads;
    std::vector<double> rewards;
    for (int t = 0; t < 30; ++t) {
      grads.push_back(RVector::NullaryExpr(5, [&] { return rng.normal(); }));
      rewards.push_back(rng.uniform() < 0.5 ? 0.0 : rng.normal());
      agent.observe_gradient(grads.back());
      agent.apply_reward(rewards.back());
    }
    RVector h = RVector::Zero(5);
    for (int t = 0; t < 30; ++t) {
      RVector e = RVector::Zero(5);
      for (int k = 0; k <= t; ++k) e += std::pow(1 - eta, t - k) * grads[k];
      h += alpha * rewards[t] * e;
    }
    worst = std::max(worst, (h - agent.controls()).cwiseAbs().maxCoeff());
  }
  return bound_check("agent.glow_closed_form", worst, 1e-12);
}

CheckResult check_ps_closed_form(RngStream& rng) {
  double worst = 0;
  for (double gamma : {0.0, 0.05, 0.3}) {
    EdgeTable t(1, 2, gamma, 1.0, 1.0);
    std::vector<double> r;
    for (int k = 0; k < 50; ++k) {
      r.push_back(rng.uniform());
      ps_update(t, 0, 0, r.back());
    }
    double closed = 1.0;
    for (int k = 0; k < 50; ++k) closed += std::pow(1 - gamma, k) * r[49 - k];
    worst = std::max(worst, std::abs(closed - t.h(0, 0)));
    worst = std::max(worst, std::abs(t.h(0, 1) - 1.0));
  }
  bool non_negative = true;
  EdgeTable t(3, 3, 0.01, 1.0, 0.2);
  for (int k = 0; k < 100000; ++k) {
    const int s = static_cast<int>(rng.index(3));
    const auto a = static_cast<int>(sample_action(ps_policy(t, s), rng));
    ps_update(t, s, a, rng.uniform() < 0.3 ? rng.uniform() : 0.0);
    if (k % 97 == 0) non_negative = non_negative && t.h.minCoeff() >= 0;
  }
  non_negative = non_negative && t.h.minCoeff() >= 0;
  auto res = bound_check("baselines.ps_closed_form_and_non_negativity", worst, 1e-12);
  res.passed = res.passed && non_negative;
  return res;
}

CheckResult check_pg_zero_sum(RngStream& rng) {
  double worst = 0;
  for (auto kind : {PolicyKind::linear, PolicyKind::softmax}) {
    Eigen::MatrixXd h = Eigen::MatrixXd::NullaryExpr(3, 4, [&] { return 0.1 + rng.uniform(); });
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(3, 4);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) total += tabular_pg_trace(h, kind, i, j);
    worst = std::max(worst, total.cwiseAbs().maxCoeff());
  }
  return bound_check("baselines.tabular_pg_zero_sum", worst, 1e-12);
}

CheckResult check_sarsa_vs_gradient_rl(RngStream& rng) {
  const int S = 4, A = 3;
  ValueTable table(S, A, 0.2, 0.9, 0.7);
  RVector theta = RVector::Zero(S * A), e = RVector::Zero(S * A);
  double worst = 0;
  int s = 0, a = 0;
  for (int step = 0; step < 2000; ++step) {
    const int s2 = static_cast<int>(rng.index(S)), a2 = static_cast<int>(rng.index(A));
    const double r = rng.normal();
    const bool terminal = rng.uniform() < 0.1;
    const double u = theta(s * A + a);
    const double u2 = terminal ? 0.0 : theta(s2 * A + a2);
    sarsa_lambda_update(table, s, a, r, s2, a2, terminal);
    RVector grad = RVector::Zero(S * A);
    grad(s * A + a) = 1;
    gradient_rl_update(theta, e, grad, r, u, u2, 0.2, 0.9, 0.7);
    if (terminal) {
      table.reset_traces();
      e.setZero();
    }
    for (int i = 0; i < S; ++i)
      for (int j = 0; j < A; ++j) worst = std::max(worst, std::abs(table.q(i, j) - theta(i * A + j)));
    s = s2;
    a = a2;
  }
  return bound_check("baselines.sarsa_equals_gradient_rl", worst, 1e-12);
}

CheckResult check_metrics(RngStream& rng) {
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const CMatrix u = random_unitary(4, rng), ut = random_unitary(4, rng);
    worst = std::max(worst, std::abs(subspace_fidelity(u, ut, CMatrix::Identity(4, 4)) - avg_fidelity(u, ut)));
    std::vector<CMatrix> ops;
    const double w[] = {0.5, 0.3, 0.2};
    for (double x : w) ops.push_back(std::sqrt(x) * random_unitary(4, rng));
    const CMatrix v = random_unitary(3, rng);
    std::vector<CMatrix> remixed(3, CMatrix::Zero(4, 4));
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) remixed[k] += v(k, j) * ops[j];
    worst = std::max(worst, std::abs(channel_fidelity(KrausChannel(ops), ut) -
                                     channel_fidelity(KrausChannel(remixed), ut)));
  }
  return bound_check("metrics.identities", worst, 1e-12);
}

CheckResult check_grid(RngStream& rng) {
  const GridWorld gw;
  bool closed = true;
  Cell c = gw.start;
  for (int i = 0; i < 1000000; ++i) {
    c = grid_step(gw, c, static_cast<int>(rng.index(kGridActions))).next;
    closed = closed && gw.is_free(c);
    if (c == gw.goal) c = gw.start;
  }
  const int path = grid_shortest_path(gw, gw.start);
  return {"environments.grid_closure_and_shortest_path", closed && path == 4,
          "shortest path " + std::to_string(path)};
}

CheckResult check_hitting_time() {
  const GridWorld gw;
  const double t = grid_hitting_times(gw)[gw.index_of(gw.start)];
  return {"environments.random_walk_hitting_time_54.1", std::abs(t - 54.1) <= 0.05,
          "exact " + fmt(t) + " for the selected layout"};
}

CheckResult navigation_check(NavigationCase c, std::uint64_t seed) {
  NavigationDemoConfig cfg;
  cfg.case_id = c;
  cfg.seed = seed;
  const auto rep = run_navigation_demo(cfg);
  bool ok = false;
  switch (c) {
    case NavigationCase::single_state:
      ok = rep.achieved > 0.99 && rep.gradient_norm < 1e-2;
      break;
    case NavigationCase::single_basis:
      ok = rep.achieved > 0.99 && rep.freedom_residual < 0.1 * std::sqrt(rep.distance_sq);
      break;
    case NavigationCase::random_bases:
      ok = rep.achieved >= 0.99;
      break;
  }
  return {std::string("navigation.case_") + navigation_case_name(c), ok,
          navigation_csv_header() + "\n" + navigation_csv_row(rep)};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed,
                                             const std::function<void(const CheckResult&)>& on_result) {
  std::vector<CheckResult> out;
  auto record = [&](CheckResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  RngStream rng(seed, 99);
  record(check_expm_unitary(rng));
  record(check_expm_group(rng));
  record(check_kron(rng));
  record(check_partial_trace(rng));
  record(check_rng_determinism());
  record(check_gradient(rng));
  record(check_zero_sum(rng));
  record(check_distribution(rng));
  record(check_glow_closed_form(rng));
  record(check_ps_closed_form(rng));
  record(check_pg_zero_sum(rng));
  record(check_sarsa_vs_gradient_rl(rng));
  record(check_metrics(rng));
  record(check_grid(rng));
  record(check_hitting_time());
  for (auto c : {NavigationCase::single_state, NavigationCase::single_basis, NavigationCase::random_bases})
    record(navigation_check(c, seed));
  return out;
}

}  // namespace qmem
