// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qmem/estimators.hpp"
#include "qmem/metrics.hpp"
#include "qmem/runner.hpp"

using namespace qmem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DensityMatrix random_density(int n, RngStream& rng) {
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

struct Instance {
  HamiltonianStack stack;
  ControlVector h;
  DensityMatrix rho;
  PovmSet povm;
};

Instance random_instance(RngStream& rng, int dim, int controls) {
  auto [h1, h2] = case_I_hamiltonians(dim, rng);
  ControlVector h(controls);
  for (int k = 0; k < controls; ++k) h(k) = rng.normal();
  const int outcomes = 2 + static_cast<int>(rng.index(3));
  const CMatrix v = random_unitary(dim, rng);
  std::vector<CMatrix> effects(outcomes, CMatrix::Zero(dim, dim));
  std::vector<std::string> labels;
  for (int a = 0; a < outcomes; ++a) labels.push_back(std::to_string(a));
  for (int i = 0; i < dim; ++i) effects[i % outcomes] += v.col(i) * v.col(i).adjoint();
  return {HamiltonianStack::alternating(h1, h2, controls), h, random_density(dim, rng),
          PovmSet(labels, effects)};
}

const CurveRecord& record_at(const CurveResult& c, long x) {
  for (const auto& r : c.records)
    if (r.x == x) return r;
  throw std::runtime_error("no record at x = " + std::to_string(x));
}

// Sequential k-of-n seed vote; stops as soon as the outcome is settled.
struct Vote {
  int wins = 0;
  int losses = 0;
  std::string log;
};

Vote seed_vote(int seeds, int needed, const std::function<bool(std::uint64_t, std::string&)>& trial) {
  Vote v;
  for (int s = 1; s <= seeds; ++s) {
    if (v.wins >= needed || v.losses > seeds - needed) break;
    std::string note;
    const bool ok = trial(static_cast<std::uint64_t>(s), note);
    (ok ? v.wins : v.losses) += 1;
    v.log += " s" + std::to_string(s) + ":" + note;
  }
  return v;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  RngStream rng(1001, 0);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const int dim = i % 2 ? 8 : 4;
    const auto inst = random_instance(rng, dim, 1 + static_cast<int>(rng.index(16)));
    const LayerPropagator prop(inst.stack);
    const CMatrix& pi = inst.povm.effect(0);
    const RVector g = prop.gradient(prop.forward(inst.h, inst.rho), pi);
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
  const double secs = seconds_since(t0);
  return {worst < 1e-6 && secs < 10,
          "max error " + num(worst, 3) + " (< 1e-6), " + num(secs, 3) + " s (< 10 s)"};
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  RngStream rng(1002, 0);
  double completeness = 0, normalization = 0, unitarity = 0, zero_sum = 0;
  bool bounded = true;
  for (int i = 0; i < 1000; ++i) {
    const int dim = i % 2 ? 8 : 4;
    const auto inst = random_instance(rng, dim, 1 + static_cast<int>(rng.index(8)));
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (std::size_t a = 0; a < inst.povm.size(); ++a) sum += inst.povm.effect(a);
    completeness = std::max(completeness, (sum - CMatrix::Identity(dim, dim)).norm());
    const LayerPropagator prop(inst.stack);
    const CMatrix u = prop.unitary(inst.h);
    unitarity = std::max(unitarity, (u.adjoint() * u - CMatrix::Identity(dim, dim)).norm());
    const auto pass = prop.forward(inst.h, inst.rho);
    const auto d = action_distribution(prop, pass, inst.povm);
    double total = 0;
    RVector gsum = RVector::Zero(inst.h.size());
    for (std::size_t a = 0; a < d.size(); ++a) {
      bounded = bounded && d[a] >= 0 && d[a] <= 1;
      total += d[a];
      gsum += prop.gradient(pass, inst.povm.effect(a));
    }
    normalization = std::max(normalization, std::abs(total - 1));
    zero_sum = std::max(zero_sum, gsum.cwiseAbs().maxCoeff());
  }
  const double secs = seconds_since(t0);
  const bool ok = completeness < 1e-10 && normalization < 1e-12 && unitarity < 1e-10 &&
                  zero_sum < 1e-10 && bounded && secs < 30;
  return {ok, "completeness " + num(completeness, 2) + ", normalization " + num(normalization, 2) +
                  ", unitarity " + num(unitarity, 2) + ", zero-sum " + num(zero_sum, 2) + ", " +
                  num(secs, 3) + " s"};
}

Outcome criterion3() {
  auto cfg = preset("fig5a");
  cfg.curves = {cfg.curves[0], cfg.curves[3], cfg.curves[5]};  // 1, 4, 16 controls
  cfg.record_every = cfg.budget;
  const auto res = run_ensemble(cfg);
  const double m1 = res.curves[0].records.back().mean[0];
  const double m4 = res.curves[1].records.back().mean[0];
  const double m16 = res.curves[2].records.back().mean[0];
  const bool ok = m1 <= m4 && m4 <= m16 && m16 > 0.8 && m1 < 0.5;
  return {ok, "final mean reward 1/4/16 controls = " + num(m1) + " / " + num(m4) + " / " + num(m16) +
                  " (need monotone, 16 > 0.8, 1 < 0.5)"};
}

Outcome criterion4() {
  auto cfg = preset("fig5b");
  cfg.curves = {cfg.curves[0]};
  if (cfg.curves[0].invasion.p_coh != 0.0) throw std::runtime_error("fig5b curve 0 is not p_coh = 0");
  cfg.record_every = 100;
  const auto res = run_ensemble(cfg);
  double worst = 0;
  for (const auto& r : res.curves[0].records) worst = std::max(worst, std::abs(r.mean[0]));

  RngStream rng(cfg.seed, 8);
  const auto [h1, h2] = case_I_hamiltonians(4, rng);
  const LayerPropagator prop(HamiltonianStack::alternating(h1, h2, 16));
  const auto povm = povm_action_subsystem(2, 2);
  double g0 = 0;
  for (int s = 0; s < 2; ++s)
    for (std::size_t a = 0; a < 2; ++a)
      g0 = std::max(g0, prop.gradient(prop.forward(ControlVector::Zero(16), encode_invasion_2x2(s, 0.0)),
                                      povm.effect(a)).cwiseAbs().maxCoeff());
  return {worst < 0.05 && g0 == 0.0,
          "max |mean reward| " + num(worst, 3) + " (< 0.05), gradient at h = 0 max " + num(g0, 3) + " (== 0)"};
}

Outcome criterion5() {
  auto cfg = preset("fig5b");
  cfg.curves = {cfg.curves.back()};
  if (cfg.curves[0].invasion.p_coh != 1.0) throw std::runtime_error("fig5b last curve is not p_coh = 1");
  const long rev = *cfg.curves[0].invasion.reversal_cycle;
  cfg.budget = rev + 2000;
  cfg.record_every = 1;
  const auto res = run_ensemble(cfg);
  const auto& c = res.curves[0];
  const double before = record_at(c, rev).mean[0];
  const double at = record_at(c, rev + 1).mean[0];
  long recovered = -1;
  for (const auto& r : c.records)
    if (r.x > rev + 1 && r.mean[0] > 0.5) {
      recovered = r.x;
      break;
    }
  const bool ok = at < 0 && recovered > 0 && recovered <= rev + 2000;
  return {ok, "mean reward " + num(before) + " before reversal, " + num(at) + " at reversal, > 0.5 again at cycle " +
                  (recovered > 0 ? std::to_string(recovered) : std::string("never")) + " (limit " +
                  std::to_string(rev + 2000) + ")"};
}

Outcome criterion6() {
  auto cfg = preset("fig8");
  cfg.record_every = 100;
  const auto res = run_ensemble(cfg);
  const auto& single = res.curves[0];
  const auto& multi = res.curves[1];
  const double r_max = cfg.curves[0].invasion.reward_correct;
  auto first_above = [](const CurveResult& c, std::size_t m, double level) -> long {
    for (const auto& r : c.records)
      if (r.mean[m] > level) return r.x;
    return -1;
  };
  const long t_single = first_above(single, 0, 0.9 * r_max);
  const long t_multi = first_above(multi, 1, 0.9);
  const auto& ls = single.records.back();
  const auto& lm = multi.records.back();
  const bool ok = ls.mean[0] > 0.9 * r_max && t_single > 0 && t_multi > t_single;
  return {ok, "single ONB: final reward " + num(ls.mean[0]) + ", F " + num(ls.mean[1]) + ", D " +
                  num(ls.mean[2]) + ", reward > 0.9 r_max at " + std::to_string(t_single) +
                  "; multi ONB: final reward " + num(lm.mean[0]) + ", F " + num(lm.mean[1]) + ", D " +
                  num(lm.mean[2]) + ", F > 0.9 at " + std::to_string(t_multi) + " (-1: never)"};
}

Outcome criterion7() {
  const GridWorld gw;
  const double exact = grid_hitting_times(gw)[gw.index_of(gw.start)];
  RngStream rng(1007, 0);
  const int walks = 100000;
  double sum = 0, sq = 0;
  for (int w = 0; w < walks; ++w) {
    Cell c = gw.start;
    double n = 0;
    for (;;) {
      const auto s = grid_step(gw, c, static_cast<int>(rng.index(kGridActions)));
      ++n;
      if (s.terminal) break;
      c = s.next;
    }
    sum += n;
    sq += n * n;
  }
  const double mean = sum / walks;
  const double se = std::sqrt((sq / walks - mean * mean) / (walks - 1));
  const bool paper = std::abs(exact - 54.1) <= 0.05;
  const bool mc = std::abs(mean - exact) < 3 * se;
  return {paper && mc, "exact hitting time " + num(exact, 6) + " vs 54.1 +- 0.05 (" + (paper ? "ok" : "off") +
                           "); Monte Carlo " + num(mean, 6) + " +- " + num(se, 3) + " (" +
                           (mc ? "within" : "outside") + " 3 SE)"};
}

std::map<std::uint64_t, AgentTrace> glow_runs;  // fig10 preset by seed

const AgentTrace& fig10_run(std::uint64_t seed) {
  auto it = glow_runs.find(seed);
  if (it == glow_runs.end()) {
    const auto cfg = preset("fig10");
    it = glow_runs.emplace(seed, run_agent(cfg.curves[0], cfg.budget, cfg.budget, seed, 0)).first;
  }
  return it->second;
}

Outcome criterion8() {
  const auto a = seed_vote(10, 7, [](std::uint64_t seed, std::string& note) {
    const double tail = glow_tail_average(fig10_run(seed).episode_lengths);
    note = num(tail, 3);
    return tail < 10;
  });
  const auto eta1 = preset("fig11a").curves[0];
  const auto eta001 = preset("fig11b").curves[0];
  const long budget = preset("fig11a").budget;
  const auto b = seed_vote(10, 7, [&](std::uint64_t seed, std::string& note) {
    const double t1 = glow_tail_average(run_agent(eta1, budget, budget, seed, 0).episode_lengths);
    const double t2 = glow_tail_average(run_agent(eta001, budget, budget, seed, 0).episode_lengths);
    note = num(t1, 3) + ">" + num(t2, 3);
    return t1 > t2;
  });
  const bool ok = a.wins >= 7 && b.wins >= 7;
  return {ok, "eta 0.7 + penalty: last-500 < 10 in " + std::to_string(a.wins) + " of " +
                  std::to_string(a.wins + a.losses) + " seeds run [" + a.log + " ]; eta 1 above eta 0.01 in " +
                  std::to_string(b.wins) + " of " + std::to_string(b.wins + b.losses) + " paired seeds [" +
                  b.log + " ] (need 7 of 10 each)"};
}

double optimal_mass(const Eigen::MatrixXd& table, const GridWorld& gw, Cell c) {
  const auto opt = grid_optimal_actions(gw)[gw.index_of(c)];
  double m = 0;
  for (int a : opt) m += table(gw.index_of(c), a);
  return m;
}

Outcome criterion9() {
  const GridWorld gw;
  const auto& table = *fig10_run(1).grid_policy;
  double on_path = 1;
  std::string cells;
  for (Cell c : {Cell{2, 0}, Cell{1, 0}, Cell{1, 1}, Cell{1, 2}}) {
    const double m = optimal_mass(table, gw, c);
    on_path = std::min(on_path, m);
    cells += " (" + std::to_string(c.row) + "," + std::to_string(c.col) + ")=" + num(m, 3);
  }
  auto rs = preset("fig10_random_start");
  const auto trace = run_agent(rs.curves[0], 20000, 20000, 1, 0);
  double everywhere = 1;
  for (const Cell& c : gw.free_cells())
    if (!(c == gw.goal)) everywhere = std::min(everywhere, optimal_mass(*trace.grid_policy, gw, c));
  return {on_path >= 0.9 && everywhere >= 0.9,
          "optimal mass on path" + cells + "; random-start run (2e4 episodes) minimum over free cells " +
              num(everywhere, 3) + " (need >= 0.9)"};
}

Outcome criterion10() {
  RngStream rng(1010, 0);
  // SARSA(lambda) and gradient-ascent RL with one-hot features.
  const int S = 5, A = 3;
  ValueTable table(S, A, 0.3, 0.95, 0.6);
  RVector theta = RVector::Zero(S * A), e = RVector::Zero(S * A);
  double sarsa = 0;
  int s = 0, a = 0;
  for (int step = 0; step < 5000; ++step) {
    const int s2 = static_cast<int>(rng.index(S)), a2 = static_cast<int>(rng.index(A));
    const double r = rng.normal();
    const bool terminal = rng.uniform() < 0.05;
    const double u = theta(s * A + a);
    const double u2 = terminal ? 0.0 : theta(s2 * A + a2);
    sarsa_lambda_update(table, s, a, r, s2, a2, terminal);
    RVector grad = RVector::Zero(S * A);
    grad(s * A + a) = 1;
    gradient_rl_update(theta, e, grad, r, u, u2, 0.3, 0.95, 0.6);
    if (terminal) {
      table.reset_traces();
      e.setZero();
    }
    for (int i = 0; i < S; ++i)
      for (int j = 0; j < A; ++j) sarsa = std::max(sarsa, std::abs(table.q(i, j) - theta(i * A + j)));
    s = s2;
    a = a2;
  }

  // PS recursion against its closed forms, starting from h_eq.
  double ps = 0;
  for (double gamma : {0.0, 0.01, 0.2}) {
    const double h_eq = 1.5;
    EdgeTable t(1, 2, gamma, h_eq, 1.0);
    std::vector<double> r;
    for (int k = 0; k < 200; ++k) {
      r.push_back(rng.uniform() < 0.5 ? rng.uniform() : 0.0);
      ps_update(t, 0, 0, r.back());
      double closed = h_eq;
      for (int j = 0; j <= k; ++j) closed += std::pow(1 - gamma, j) * r[k - j];
      ps = std::max(ps, std::abs(closed - t.h(0, 0)));
    }
  }

  // Tabular policy gradient: rows of the transition table sum to zero.
  double pg = 0;
  for (auto kind : {PolicyKind::linear, PolicyKind::softmax})
    for (int rep = 0; rep < 20; ++rep) {
      const Eigen::MatrixXd h = Eigen::MatrixXd::NullaryExpr(4, 3, [&] { return 0.05 + 2 * rng.uniform(); });
      for (int i = 0; i < 4; ++i) {
        Eigen::MatrixXd total = Eigen::MatrixXd::Zero(4, 3);
        for (int j = 0; j < 3; ++j) total += tabular_pg_trace(h, kind, i, j);
        pg = std::max(pg, total.cwiseAbs().maxCoeff());
      }
    }

  bool non_negative = true;
  EdgeTable t(4, 3, 0.02, 1.0, 0.3);
  for (int k = 0; k < 100000; ++k) {
    const int st = static_cast<int>(rng.index(4));
    const auto act = static_cast<int>(sample_action(ps_policy(t, st), rng));
    ps_update(t, st, act, rng.uniform() < 0.3 ? 5 * rng.uniform() : 0.0);
    non_negative = non_negative && t.h.minCoeff() >= 0;
  }
  const bool ok = sarsa < 1e-12 && ps < 1e-12 && pg < 1e-12 && non_negative;
  return {ok, "SARSA vs gradient RL " + num(sarsa, 2) + ", PS closed form " + num(ps, 2) + ", PG zero-sum " +
                  num(pg, 2) + ", PS non-negative over 1e5 steps: " + (non_negative ? "yes" : "no")};
}

Outcome criterion11() {
  RngStream rng(1011, 0);
  double subspace = 0, remix = 0;
  for (int i = 0; i < 200; ++i) {
    const CMatrix u = random_unitary(4, rng), ut = random_unitary(4, rng);
    subspace = std::max(subspace, std::abs(subspace_fidelity(u, ut, CMatrix::Identity(4, 4)) - avg_fidelity(u, ut)));
    std::vector<CMatrix> ops;
    for (double w : {0.5, 0.3, 0.2}) ops.push_back(std::sqrt(w) * random_unitary(4, rng));
    const CMatrix v = random_unitary(3, rng);
    std::vector<CMatrix> mixed(3, CMatrix::Zero(4, 4));
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) mixed[k] += v(k, j) * ops[j];
    remix = std::max(remix, std::abs(channel_fidelity(KrausChannel(ops), ut) - channel_fidelity(KrausChannel(mixed), ut)));
  }
  const int n = 4, draws = 10000;
  const CMatrix target = random_unitary(n, rng);
  double sum = 0, sq = 0;
  for (int i = 0; i < draws; ++i) {
    const double c = cos_sq(random_unitary(n, rng), target);
    sum += c;
    sq += c * c;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sq / draws - mean * mean) / (draws - 1));
  const bool haar = std::abs(mean - 1.0 / n) < 3 * se;
  return {subspace < 1e-12 && remix < 1e-12 && haar,
          "subspace(d = n) vs avg " + num(subspace, 2) + ", Kraus remix " + num(remix, 2) +
              ", Haar mean |cos|^2 at n = 4: " + num(mean, 5) + " +- " + num(se, 2) + " vs 1/n = 0.25 (" +
              (haar ? "within" : "outside") + " 3 SE)"};
}

Outcome criterion12() {
  // Finite differences from binary outcomes on a 2-control qubit.
  RngStream ham(1012, 0);
  const auto [h1, h2] = case_I_hamiltonians(2, ham);
  auto mem = std::make_shared<const LayerPropagator>(HamiltonianStack::alternating(h1, h2, 2));
  CVector psi(2);
  psi << 0.6, Complex(0.0, 0.8);
  const auto rho = DensityMatrix::pure(psi);
  const auto povm = povm_action_subsystem(1, 2);
  ControlVector h(2);
  h << 0.4, -0.9;
  const double delta = 0.01;
  const int m = 10000;
  RngStream rng(1012, 1);
  const RVector est = fd_gradient_samples(measurement_oracle(mem, rho, povm, 0), h, delta, m, rng);
  const RVector exact = mem->gradient(mem->forward(h, rho), povm.effect(0));
  const auto p = measurement_probability(mem, rho, povm.effect(0));
  bool fd_ok = true;
  std::string fd_note;
  for (int k = 0; k < 2; ++k) {
    ControlVector hp = h;
    hp(k) += delta;
    const double dp = std::abs(p(hp) - p(h));
    const double se = std::sqrt(std::max(dp - dp * dp, 0.0) / m) / delta;
    const bool ok = std::abs(est(k) - exact(k)) < 3 * se;
    fd_ok = fd_ok && ok;
    fd_note += " [" + num(est(k)) + " vs " + num(exact(k)) + ", SE " + num(se, 3) + "]";
  }

  // Neural-gas differences on a synthetic linear landscape.
  RVector g(4);
  g << 0.5, -0.3, 0.2, 0.7;
  const ControlVector c = ControlVector::Constant(4, 0.2);
  const BinaryOutcomeOracle lin = [g, c](const ControlVector& x, RngStream& r) {
    const double pr = std::clamp(0.5 + g.dot(x - c), 0.0, 1.0);
    return r.uniform() < pr ? +1 : -1;
  };
  double dot = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const RVector d = neural_gas_difference(lin, c, CloudConfig{100, 0.1, 1.0}, rng);
    dot += d.dot(g) / (d.norm() * g.norm());
  }
  dot /= 100;
  return {fd_ok && dot > 0.5, "sampled differences (m = 1e4, delta 0.01)" + fd_note +
                                  "; neural-gas mean normalized dot " + num(dot, 3) + " (> 0.5)"};
}

std::map<std::string, std::string> read_dir(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    std::ifstream f(e.path(), std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    out[e.path().filename().string()] = os.str();
  }
  return out;
}

Outcome criterion13() {
  const auto root = std::filesystem::temp_directory_path() / "qmem_acceptance_determinism";
  std::filesystem::remove_all(root);
  int presets = 0, mismatches = 0;
  std::string bad;
  for (auto cfg : preset_catalog()) {
    const bool grid = cfg.curves.front().task == TaskKind::grid;
    cfg.agents = std::min(cfg.agents, 3);
    cfg.budget = grid ? 4 : 60;
    cfg.record_every = grid ? 1 : 10;
    std::vector<std::map<std::string, std::string>> runs;
    for (int workers : {1, 4, 1}) {
      cfg.workers = workers;
      const auto dir = root / (cfg.name + "_" + std::to_string(runs.size()));
      write_outputs(cfg, run_ensemble(cfg), dir);
      runs.push_back(read_dir(dir));
    }
    ++presets;
    if (runs[0] != runs[1] || runs[0] != runs[2]) {
      ++mismatches;
      bad += " " + cfg.name;
    }
  }
  std::filesystem::remove_all(root);
  return {mismatches == 0 && presets > 0, std::to_string(presets) + " presets re-run with 1, 4, 1 workers, " +
                                              std::to_string(mismatches) + " differ" + bad};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"gradient correctness", criterion1},
      {"POVM and normalization suite", criterion2},
      {"control-count ordering", criterion3},
      {"vanishing gradient without coherence", criterion4},
      {"relearning after reversal", criterion5},
      {"single versus random bases", criterion6},
      {"random-walk hitting time", criterion7},
      {"glow benefit on the grid", criterion8},
      {"grid policy reconstruction", criterion9},
      {"baseline identities", criterion10},
      {"metric identities", criterion11},
      {"estimator consistency", criterion12},
      {"determinism", criterion13},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s criterion %zu: %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
