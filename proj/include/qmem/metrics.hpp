#pragma once

// Distances and fidelities between the memory unitary and a target.

#include <vector>

#include "qmem/qmath.hpp"

namespace qmem {

/// Kraus representation of a channel; validated trace preserving.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<CMatrix> ops);

  int dim() const { return static_cast<int>(ops_.front().rows()); }
  const std::vector<CMatrix>& ops() const { return ops_; }
  CMatrix apply(const CMatrix& rho) const;

 private:
  std::vector<CMatrix> ops_;
};

/// ||U - U_T||_F^2 = 2n - 2 Re Tr(U_T^dagger U).
double distance_sq(const CMatrix& u, const CMatrix& u_target);

/// (n + |Tr(U_T^dagger U)|^2) / (n (n + 1)).
double avg_fidelity(const CMatrix& u, const CMatrix& u_target);

/// |Tr(U_T^dagger U)|^2 / n^2, the squared modulus of the complex cosine.
double cos_sq(const CMatrix& u, const CMatrix& u_target);

/// Average fidelity restricted to the range of projector P.
double subspace_fidelity(const CMatrix& u, const CMatrix& u_target, const CMatrix& p);

/// (n + sum_k |Tr(U_T^dagger G_k)|^2) / (n (n + 1)).
double channel_fidelity(const KrausChannel& channel, const CMatrix& u_target);

struct WeightedInput {
  CVector state;
  double weight;
};

/// sum_k p_k <psi_k| U_T^dagger M(|psi_k><psi_k|) U_T |psi_k>.
double percept_fidelity(const KrausChannel& channel, const CMatrix& u_target,
                        const std::vector<WeightedInput>& inputs);

}  // namespace qmem
