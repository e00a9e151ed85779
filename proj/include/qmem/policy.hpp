#pragma once

#include <string>
#include <vector>

#include "qmem/memory.hpp"

namespace qmem {

/// Complete set of effect operators, one per action, in a fixed order.
class PovmSet {
 public:
  /// Validates positivity and completeness (sum = I within 1e-10).
  PovmSet(std::vector<std::string> labels, std::vector<CMatrix> effects);

  std::size_t size() const { return effects_.size(); }
  int dim() const { return static_cast<int>(effects_.front().rows()); }
  const CMatrix& effect(std::size_t a) const { return effects_[a]; }
  const std::string& label(std::size_t a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// V Pi V^dagger for every element.
  PovmSet conjugated(const CMatrix& v) const;

 private:
  std::vector<std::string> labels_;
  std::vector<CMatrix> effects_;
};

/// |s><s| (x) [p_coh |phi><phi| + (1 - p_coh) I/d_A], |phi> the uniform
/// superposition of action states.
DensityMatrix encode_symbol_action(int symbol, int dim_s, int dim_a, double p_coh);

/// Two-symbol invasion percept on S (x) A with d_S = d_A = 2.
DensityMatrix encode_invasion_2x2(int symbol, double p_coh);

/// |j><j| (x) |k><k| on a 4-dimensional space (symbol j, colour k).
DensityMatrix encode_invasion_4(int symbol, int color);

/// |s><s| (x) rho_C (x) |phi><phi| on 2 x 2 x 2.
DensityMatrix encode_neverending(int symbol, const DensityMatrix& rho_c);

/// I_S (x) |a><a| for each action a.
PovmSet povm_action_subsystem(int dim_s, int dim_a);

/// U_T rho_jk U_T^dagger for the four (symbol, colour) projectors, or the two
/// colour-merged sums when merge_colors is set.
PovmSet povm_rotated(const CMatrix& u_target, bool merge_colors);

/// p(a|s) = Tr[U rho U^dagger Pi(a)], clipped at -1e-12 and renormalised.
std::vector<double> action_distribution(const MemorySnapshot& snap, const DensityMatrix& rho,
                                        const PovmSet& povm);

/// Same contract, from a propagated forward pass.
std::vector<double> action_distribution(const LayerPropagator& prop,
                                        const LayerPropagator::Forward& pass,
                                        const PovmSet& povm);

/// Clip roundoff negatives and renormalise; throws when the raw values are
/// not a distribution within tolerance.
std::vector<double> normalize_distribution(std::vector<double> raw);

/// Inverse-CDF sampling in listed order.
std::size_t sample_action(const std::vector<double>& dist, RngStream& rng);

}  // namespace qmem
