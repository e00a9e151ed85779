#pragma once

// Model-free replacements for the analytic gradient: the memory is treated
// as a black box that can be prepared in the last percept state and measured.

#include <functional>
#include <memory>

#include "qmem/policy.hpp"

namespace qmem {

/// p(a_t | s_t; h) evaluated as an expectation value.
using ProbabilityFn = std::function<double(const ControlVector&)>;

/// One binary measurement "given s_t, detect a_t": returns +1 when the
/// outcome is a_t, -1 otherwise. Implementations draw exactly one uniform
/// from the stream per query, so a copied stream replays the same draw.
using BinaryOutcomeOracle = std::function<int(const ControlVector&, RngStream&)>;

struct CloudConfig {
  int n_samples = 100;
  double sigma = 0.1;
  double sigma_decay = 1.0;  // per external cycle, in (0, 1]

  void validate() const;
  /// Applies one external cycle of decay.
  void decay() { sigma *= sigma_decay; }
};

/// Forward differences [p(h + delta e_k) - p(h)] / delta.
RVector fd_gradient_expectation(const ProbabilityFn& p, const ControlVector& h, double delta);

/// Per component, the mean over m paired draws of [s(h + delta e_k) - s(h)] / 2,
/// divided by delta. Each pair shares its random draw.
RVector fd_gradient_samples(const BinaryOutcomeOracle& oracle, const ControlVector& h,
                            double delta, int m, RngStream& rng);

/// Running mean of s_k (h_k - center) over a Gaussian cloud h_k ~ N(center, sigma^2 I).
RVector neural_gas_difference(const BinaryOutcomeOracle& oracle, const ControlVector& center,
                              const CloudConfig& cfg, RngStream& rng);

ProbabilityFn measurement_probability(std::shared_ptr<const LayerPropagator> memory,
                                      DensityMatrix rho, CMatrix effect);

/// Prepares rho, applies U(h), samples the full POVM by inverse CDF and
/// reports whether the outcome equals `action`.
BinaryOutcomeOracle measurement_oracle(std::shared_ptr<const LayerPropagator> memory,
                                       DensityMatrix rho, PovmSet povm, std::size_t action);

}  // namespace qmem
