#include "qmem/navigation.hpp"

#include <cmath>
#include <sstream>

#include "qmem/agent.hpp"
#include "qmem/environments.hpp"
#include "qmem/metrics.hpp"

namespace qmem {

const char* navigation_case_name(NavigationCase c) {
  switch (c) {
    case NavigationCase::single_state: return "i";
    case NavigationCase::single_basis: return "ii";
    case NavigationCase::random_bases: return "iii";
  }
  return "?";
}

double stationary_point_check(const MemorySnapshot& snap, const HamiltonianStack& stack,
                              const DensityMatrix& rho, const CMatrix& pi) {
  const RVector g = gradient_fixed_layers(snap, stack, rho, pi);
  return g.size() == 0 ? 0.0 : g.cwiseAbs().maxCoeff();
}

namespace {

Complex phase_of(Complex z) {
  const double r = std::abs(z);
  return r > 0 ? z / r : Complex(1.0, 0.0);
}

}  // namespace

double basis_freedom_check(const CMatrix& u, const CMatrix& u_target, const CMatrix& basis_s,
                           const CMatrix& basis_a) {
  const auto n = u.rows();
  if (u.cols() != n || u_target.rows() != n || basis_s.rows() != n || basis_a.rows() != n ||
      basis_s.cols() != n || basis_a.cols() != n)
    throw InvalidArgument("basis_freedom_check: dimension mismatch");
  if (!is_unitary(basis_s) || !is_unitary(basis_a) || !is_unitary(u_target))
    throw InvalidArgument("basis_freedom_check: bases and target must be unitary");
  // ||U - U_T B_A D2 W D1 B_S^dagger|| = ||M - D2 W D1||, M = (U_T B_A)^dagger U B_S.
  const CMatrix m = (u_target * basis_a).adjoint() * u * basis_s;
  const CMatrix w = basis_a.adjoint() * basis_s;
  CVector d1 = CVector::Ones(n);
  CVector d2 = CVector::Ones(n);
  auto overlap = [&] {
    double s = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) s += std::real(std::conj(m(i, j)) * d2(i) * w(i, j) * d1(j));
    return s;
  };
  double best = overlap();
  for (int iter = 0; iter < 500; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex acc = 0;
      for (Eigen::Index j = 0; j < n; ++j) acc += m(i, j) * std::conj(w(i, j) * d1(j));
      d2(i) = phase_of(acc);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      Complex acc = 0;
      for (Eigen::Index i = 0; i < n; ++i) acc += m(i, j) * std::conj(d2(i) * w(i, j));
      d1(j) = phase_of(acc);
    }
    const double next = overlap();
    const bool done = next - best <= 1e-15 * std::max(1.0, std::abs(best));
    best = std::max(best, next);
    if (done) break;
  }
  return (m - d2.asDiagonal() * w * d1.asDiagonal()).norm();
}

namespace {

struct DemoTask {
  std::shared_ptr<const LayerPropagator> memory;
  CMatrix u_target;
};

NavigationReport single_state_demo(const NavigationDemoConfig& cfg) {
  RngStream target_rng(cfg.seed, 0);
  RngStream ham_rng(cfg.seed, 1);
  RngStream run_rng(cfg.seed, 2);
  const CMatrix ut = random_unitary(4, target_rng);
  auto [h1, h2] = case_I_hamiltonians(4, ham_rng);
  const int controls = cfg.controls > 0 ? cfg.controls : 16;
  auto memory = std::make_shared<const LayerPropagator>(HamiltonianStack::alternating(h1, h2, controls));

  const CVector s = CVector::Unit(4, 0);
  const CVector a = ut * s;
  const CMatrix hit = a * a.adjoint();
  const PovmSet povm({"hit", "miss"}, {hit, CMatrix::Identity(4, 4) - hit});
  const DensityMatrix rho = DensityMatrix::pure(s);

  GlowAgent agent(memory, GlowParams{cfg.alpha > 0 ? cfg.alpha : 1e-2, 1.0, 0.0});
  const long cycles = cfg.cycles > 0 ? cfg.cycles : 6000;
  for (long t = 0; t < cycles; ++t) {
    const auto out = agent.step(rho, povm, run_rng);
    agent.apply_reward(out.action == 0 ? 1.0 : -1.0);
  }
  NavigationReport rep;
  rep.case_id = NavigationCase::single_state;
  rep.cycles = cycles;
  rep.achieved = agent.policy(rho, povm)[0];
  rep.gradient_norm = agent.gradient(rho, hit).cwiseAbs().maxCoeff();
  const CMatrix u = agent.unitary();
  rep.distance_sq = distance_sq(u, ut);
  rep.avg_fidelity = avg_fidelity(u, ut);
  // Only the first column is constrained; report its misalignment.
  rep.freedom_residual = std::sqrt(std::max(0.0, 1.0 - std::norm(a.dot(u * s))));
  return rep;
}

NavigationReport invasion_demo(const NavigationDemoConfig& cfg, BasisMode mode) {
  RngStream target_rng(cfg.seed, 0);
  RngStream ham_rng(cfg.seed, 1);
  RngStream run_rng(cfg.seed, 2);
  InvasionConfig ic;
  ic.variant = InvasionVariant::four_percept_4act;
  ic.reward_wrong = -10.0;
  ic.basis_mode = mode;
  ic.u_target = random_unitary(4, target_rng);
  const InvasionGame game(ic);
  auto [h1, h2] = case_II_hamiltonians(2, 2, ham_rng);
  const int controls = cfg.controls > 0 ? cfg.controls : 32;
  auto memory = std::make_shared<const LayerPropagator>(HamiltonianStack::alternating(h1, h2, controls));

  GlowAgent agent(memory, GlowParams{cfg.alpha > 0 ? cfg.alpha : 1e-2, 1.0, 0.0});
  const long cycles = cfg.cycles > 0 ? cfg.cycles : 20000;
  for (long t = 0; t < cycles; ++t) {
    const auto p = game.percept(t, run_rng);
    const auto out = agent.step(p.state, *p.povm, run_rng);
    agent.apply_reward(game.reward(t, out.action, p));
  }

  NavigationReport rep;
  rep.case_id = mode == BasisMode::single_onb ? NavigationCase::single_basis
                                              : NavigationCase::random_bases;
  rep.cycles = cycles;
  const CMatrix u = agent.unitary();
  const CMatrix& ut = *ic.u_target;
  double success = 0;
  double grad = 0;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const auto p = game.make_percept(j, k, nullptr, nullptr);
      const auto a = invasion_correct_action(ic, cycles, invasion_percept_index(ic, j, k));
      success += agent.policy(p.state, *p.povm)[a] / 4;
      grad = std::max(grad, agent.gradient(p.state, p.povm->effect(a)).cwiseAbs().maxCoeff());
    }
  }
  rep.distance_sq = distance_sq(u, ut);
  rep.avg_fidelity = avg_fidelity(u, ut);
  rep.achieved = mode == BasisMode::single_onb ? success : rep.avg_fidelity;
  rep.gradient_norm = grad;
  const CMatrix eye = CMatrix::Identity(4, 4);
  rep.freedom_residual = basis_freedom_check(u, ut, eye, eye);
  return rep;
}

}  // namespace

NavigationReport run_navigation_demo(const NavigationDemoConfig& cfg) {
  if (cfg.controls < 0) throw InvalidArgument("navigation demo: controls must be non-negative");
  if (cfg.cycles < 0) throw InvalidArgument("navigation demo: cycles must be non-negative");
  switch (cfg.case_id) {
    case NavigationCase::single_state: return single_state_demo(cfg);
    case NavigationCase::single_basis: return invasion_demo(cfg, BasisMode::single_onb);
    case NavigationCase::random_bases: return invasion_demo(cfg, BasisMode::random_onb_per_cycle);
  }
  throw InvalidArgument("navigation demo: unknown case");
}

std::string navigation_csv_header() {
  return "case,achieved,gradient_norm,cycles,freedom_residual,distance_sq,avg_fidelity";
}

std::string navigation_csv_row(const NavigationReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << navigation_case_name(r.case_id) << ',' << r.achieved << ',' << r.gradient_norm << ','
     << r.cycles << ',' << r.freedom_residual << ',' << r.distance_sq << ',' << r.avg_fidelity;
  return os.str();
}

}  // namespace qmem
