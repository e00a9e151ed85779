#pragma once

// Layered unitary memory U(h) = U_n ... U_1 with U_k = exp(-i h_k H_k).

#include <memory>
#include <utility>
#include <vector>

#include "qmem/qmath.hpp"

namespace qmem {

using ControlVector = RVector;

/// Ordered Hamiltonian layers. Layers index into a small set of distinct
/// generators; the alternating scheme uses generator 0 on odd layers
/// (1-based) and generator 1 on even layers.
class HamiltonianStack {
 public:
  HamiltonianStack(std::vector<CMatrix> generators, std::vector<int> layer_generator);

  static HamiltonianStack alternating(const CMatrix& h1, const CMatrix& h2, int layers);

  int dim() const { return static_cast<int>(generators_.front().rows()); }
  int size() const { return static_cast<int>(layer_generator_.size()); }
  /// 0-based layer index.
  const CMatrix& layer(int k) const { return generators_[layer_generator_[k]]; }
  int generator_of(int k) const { return layer_generator_[k]; }
  const std::vector<CMatrix>& generators() const { return generators_; }

 private:
  std::vector<CMatrix> generators_;
  std::vector<int> layer_generator_;
};

/// Full product and the prefix products P_k = U_k ... U_1 (prefixes[k-1]).
struct MemorySnapshot {
  CMatrix unitary;
  std::vector<CMatrix> prefixes;
};

/// Two independent random Hermitians on the full space.
std::pair<CMatrix, CMatrix> case_I_hamiltonians(int dim, RngStream& rng);

/// H1 = H_S1 (x) I + I (x) H_A1,  H2 = H_S2 (x) H_A2.
std::pair<CMatrix, CMatrix> case_II_hamiltonians(int dim_s, int dim_a, RngStream& rng);

/// Gram-Schmidt under Tr(A^dagger B); both outputs scaled to ||H||_F = sqrt(n).
/// Throws DegenerateInput when H2 is parallel to H1.
std::pair<CMatrix, CMatrix> schmidt_orthonormalize(const CMatrix& h1, const CMatrix& h2);

MemorySnapshot build_snapshot(const HamiltonianStack& stack, const ControlVector& h);

/// dp(a|s)/dh_k = 2 Im Tr[rho U^dagger Pi U P_k^dagger H_k P_k].
RVector gradient_fixed_layers(const MemorySnapshot& snap, const HamiltonianStack& stack,
                              const DensityMatrix& rho, const CMatrix& pi);

/// Derivative with respect to a new layer exp(-i dh H) multiplied onto U from
/// the left, at dh = 0: 2 Im Tr[rho U^dagger Pi H U].
double gradient_add_layer(const CMatrix& u, const CMatrix& h_k, const DensityMatrix& rho,
                          const CMatrix& pi);

/// Throws unless 0 <= Pi <= I.
void check_effect_operator(const CMatrix& pi, int dim);

/// Vector-level propagation through a stack, used on the training hot path.
///
/// Every generator is diagonalised once. A state is carried in the eigenbasis
/// of the current layer's generator, so a layer costs one phase multiply and
/// one basis change, and <chi|H_k|phi> is a weighted dot product.
class LayerPropagator {
 public:
  explicit LayerPropagator(HamiltonianStack stack);

  const HamiltonianStack& stack() const { return stack_; }
  int dim() const { return stack_.dim(); }
  int size() const { return stack_.size(); }

  /// States of one pure component after each layer, in that layer's
  /// generator eigenbasis, plus the output state in the computational basis.
  struct Trace {
    double weight = 0;
    Eigen::MatrixXcd layer_states;  // dim x n
    CVector output;
  };

  struct Forward {
    ControlVector controls;
    Eigen::MatrixXcd phases;  // dim x n, exp(-i h_k lambda_j)
    std::vector<Trace> traces;
  };

  Forward forward(const ControlVector& h, const DensityMatrix& rho) const;
  /// Tr[U rho U^dagger Pi] from a forward pass.
  double probability(const Forward& pass, const CMatrix& pi) const;
  /// Gradient of Tr[U rho U^dagger Pi] with respect to h.
  RVector gradient(const Forward& pass, const CMatrix& pi) const;

  CVector apply(const ControlVector& h, const CVector& psi) const;
  CMatrix unitary(const ControlVector& h) const;

 private:
  void check_controls(const ControlVector& h) const;

  HamiltonianStack stack_;
  std::vector<CMatrix> eigvecs_;                 // per generator
  std::vector<RVector> eigvals_;                 // per generator
  std::vector<std::vector<CMatrix>> transfer_;   // transfer_[to][from] = V_to^dagger V_from
};

}  // namespace qmem
