#pragma once

// Classical tabular comparison methods: basic projective simulation (PS),
// SARSA(lambda), gradient-ascent RL, the tabular policy gradient and a
// uniform random walk.

#include <Eigen/Dense>

#include <vector>

#include "qmem/qmath.hpp"

namespace qmem {

enum class PolicyKind { linear, softmax };

/// Edge strengths h(s, a) and glow g(s, a) of a two-layer PS network.
struct EdgeTable {
  EdgeTable(int states, int actions, double gamma_damp, double h_eq, double eta,
            PolicyKind kind = PolicyKind::linear);

  Eigen::MatrixXd h;
  Eigen::MatrixXd g;
  double gamma_damp;
  double h_eq;
  double eta;
  PolicyKind kind;
};

/// g(s,a) <- 1; h <- (1 - gamma) h + reward * g + gamma h_eq; g <- (1 - eta) g.
void ps_update(EdgeTable& table, int s, int a, double reward);

/// p(a|s) = Pi(h_sa) / sum_a Pi(h_sa) with Pi the identity or exp.
std::vector<double> ps_policy(const EdgeTable& table, int s);

/// Row-normalised policy for an arbitrary strength table.
std::vector<double> row_policy(const Eigen::MatrixXd& h, PolicyKind kind, int s);

enum class TraceKind { accumulating, replacing };

struct ValueTable {
  ValueTable(int states, int actions, double alpha, double gamma, double lambda,
             TraceKind kind = TraceKind::accumulating);

  void reset_traces() { e.setZero(); }

  Eigen::MatrixXd q;
  Eigen::MatrixXd e;
  double alpha;
  double gamma;
  double lambda;
  TraceKind trace_kind;
};

/// One SARSA(lambda) backup for (s, a, r, s', a'); Q(s', a') counts as zero on
/// terminal transitions.
void sarsa_lambda_update(ValueTable& table, int s, int a, double r, int s_next, int a_next,
                         bool terminal);

/// e <- gamma lambda e + grad_U; theta <- theta + alpha [r + gamma U' - U] e.
void gradient_rl_update(RVector& theta, RVector& e, const RVector& grad_u, double r, double u,
                        double u_next, double alpha, double gamma, double lambda);

/// Full table of d p_ij / d h_kl for the transition (i, j).
Eigen::MatrixXd tabular_pg_trace(const Eigen::MatrixXd& h, PolicyKind kind, int i, int j);

std::vector<double> random_walk_policy(int actions);

/// Greedy action with ties broken uniformly; epsilon-greedy wrapper for SARSA.
std::size_t epsilon_greedy(const Eigen::MatrixXd& q, int s, double epsilon, RngStream& rng);

}  // namespace qmem
