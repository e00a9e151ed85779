#include "qmem/baselines.hpp"

#include <cmath>
#include <string>

namespace qmem {

namespace {

void check_index(const Eigen::MatrixXd& m, int s, int a, const char* what) {
  if (s < 0 || s >= m.rows() || a < 0 || a >= m.cols())
    throw InvalidArgument(std::string(what) + ": state/action index out of range");
}

double policy_fn(PolicyKind kind, double x) { return kind == PolicyKind::linear ? x : std::exp(x); }

}  // namespace

EdgeTable::EdgeTable(int states, int actions, double gamma_damp_, double h_eq_, double eta_,
                     PolicyKind kind_)
    : h(Eigen::MatrixXd::Constant(states, actions, h_eq_)),
      g(Eigen::MatrixXd::Zero(states, actions)),
      gamma_damp(gamma_damp_),
      h_eq(h_eq_),
      eta(eta_),
      kind(kind_) {
  if (states < 1 || actions < 1) throw InvalidArgument("EdgeTable: empty table");
  if (!(gamma_damp >= 0 && gamma_damp <= 1)) throw InvalidArgument("EdgeTable: gamma range");
  if (!(eta >= 0 && eta <= 1)) throw InvalidArgument("EdgeTable: eta range");
}

void ps_update(EdgeTable& t, int s, int a, double reward) {
  check_index(t.h, s, a, "ps_update");
  t.g(s, a) = 1.0;
  t.h = (1.0 - t.gamma_damp) * t.h + reward * t.g;
  t.h.array() += t.gamma_damp * t.h_eq;
  t.g *= (1.0 - t.eta);
}

std::vector<double> row_policy(const Eigen::MatrixXd& h, PolicyKind kind, int s) {
  if (s < 0 || s >= h.rows()) throw InvalidArgument("row_policy: state out of range");
  std::vector<double> p(h.cols());
  // Shifting by the row maximum leaves the softmax unchanged.
  const double shift = kind == PolicyKind::softmax ? h.row(s).maxCoeff() : 0.0;
  double c = 0;
  for (Eigen::Index a = 0; a < h.cols(); ++a) {
    const double v = policy_fn(kind, h(s, a) - shift);
    if (v < 0) throw DegenerateInput("row_policy: negative strength under a linear policy");
    p[a] = v;
    c += v;
  }
  if (!(c > 0)) throw DegenerateInput("row_policy: all-zero row");
  for (double& v : p) v /= c;
  return p;
}

std::vector<double> ps_policy(const EdgeTable& t, int s) { return row_policy(t.h, t.kind, s); }

ValueTable::ValueTable(int states, int actions, double alpha_, double gamma_, double lambda_,
                       TraceKind kind)
    : q(Eigen::MatrixXd::Zero(states, actions)),
      e(Eigen::MatrixXd::Zero(states, actions)),
      alpha(alpha_),
      gamma(gamma_),
      lambda(lambda_),
      trace_kind(kind) {
  if (states < 1 || actions < 1) throw InvalidArgument("ValueTable: empty table");
}

void sarsa_lambda_update(ValueTable& t, int s, int a, double r, int s_next, int a_next,
                         bool terminal) {
  check_index(t.q, s, a, "sarsa_lambda_update");
  if (!terminal) check_index(t.q, s_next, a_next, "sarsa_lambda_update");
  if (t.trace_kind == TraceKind::accumulating)
    t.e(s, a) += 1.0;
  else
    t.e(s, a) = 1.0;
  const double next = terminal ? 0.0 : t.q(s_next, a_next);
  const double td = r + t.gamma * next - t.q(s, a);
  t.q += (t.alpha * td) * t.e;
  t.e *= t.gamma * t.lambda;
}

void gradient_rl_update(RVector& theta, RVector& e, const RVector& grad_u, double r, double u,
                        double u_next, double alpha, double gamma, double lambda) {
  if (theta.size() != e.size() || theta.size() != grad_u.size())
    throw InvalidArgument("gradient_rl_update: length mismatch");
  e = (gamma * lambda) * e + grad_u;
  theta += (alpha * (r + gamma * u_next - u)) * e;
}

Eigen::MatrixXd tabular_pg_trace(const Eigen::MatrixXd& h, PolicyKind kind, int i, int j) {
  check_index(h, i, j, "tabular_pg_trace");
  double c = 0;
  for (Eigen::Index l = 0; l < h.cols(); ++l) c += policy_fn(kind, h(i, l));
  if (!(c != 0.0)) throw DegenerateInput("tabular_pg_trace: row normaliser is zero");
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  const double pi_ij = policy_fn(kind, h(i, j));
  for (Eigen::Index l = 0; l < h.cols(); ++l) {
    // Pi'(x) is 1 for the linear policy and exp(x) for softmax.
    const double deriv = kind == PolicyKind::linear ? 1.0 : std::exp(h(i, l));
    e(i, l) = deriv * ((l == j ? c : 0.0) - pi_ij) / (c * c);
  }
  return e;
}

std::vector<double> random_walk_policy(int actions) {
  if (actions < 1) throw InvalidArgument("random_walk_policy: need at least one action");
  return std::vector<double>(actions, 1.0 / actions);
}

std::size_t epsilon_greedy(const Eigen::MatrixXd& q, int s, double epsilon, RngStream& rng) {
  const auto n = static_cast<std::size_t>(q.cols());
  if (rng.uniform() < epsilon) return rng.index(n);
  const double best = q.row(s).maxCoeff();
  std::vector<std::size_t> ties;
  for (std::size_t a = 0; a < n; ++a)
    if (q(s, a) == best) ties.push_back(a);
  return ties[rng.index(ties.size())];
}

}  // namespace qmem
