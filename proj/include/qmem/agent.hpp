#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qmem/estimators.hpp"

namespace qmem {

struct GlowParams {
  double alpha = 1e-3;  // learning rate
  double eta = 1.0;     // glow; 1 - eta is the backward discount of the trace
  double kappa = 0.0;   // relaxation rate towards h_inf

  void validate() const;
};

/// Where the difference vector D_t fed into the trace comes from.
enum class GradientSource { analytic, finite_difference, sampled_difference, neural_gas };

struct EstimatorSettings {
  GradientSource source = GradientSource::analytic;
  double delta = 1e-4;  // finite_difference, sampled_difference
  int samples = 100;    // sampled_difference: paired draws per component
  CloudConfig cloud;    // neural_gas
};

struct StepOutcome {
  std::size_t action = 0;
  std::vector<double> distribution;
};

/// Gradient agent with an eligibility trace over the control vector:
///   e <- (1 - eta) e + D_t
///   h <- h + alpha r e + kappa (h_inf - h)
class GlowAgent {
 public:
  /// h starts at zero (U = I) and h_inf defaults to the start point.
  GlowAgent(std::shared_ptr<const LayerPropagator> memory, GlowParams params);
  GlowAgent(std::shared_ptr<const LayerPropagator> memory, GlowParams params, ControlVector h0,
            ControlVector h_inf);

  void observe_gradient(const RVector& grad);
  void apply_reward(double r);

  /// Evaluates the policy for rho, samples an action, and feeds the
  /// difference vector for the sampled (s, a) into the trace.
  StepOutcome step(const DensityMatrix& rho, const PovmSet& povm, RngStream& rng);

  /// Clears the trace at an episode boundary.
  void reset_episode();

  std::vector<double> policy(const DensityMatrix& rho, const PovmSet& povm) const;
  RVector gradient(const DensityMatrix& rho, const CMatrix& effect) const;
  CMatrix unitary() const { return memory_->unitary(h_); }

  void set_estimator(EstimatorSettings settings);
  const EstimatorSettings& estimator() const { return estimator_; }

  const ControlVector& controls() const { return h_; }
  const RVector& trace() const { return e_; }
  const GlowParams& params() const { return params_; }
  const LayerPropagator& memory() const { return *memory_; }
  std::shared_ptr<const LayerPropagator> memory_ptr() const { return memory_; }
  /// Black-box queries spent by model-free estimators.
  std::uint64_t internal_cycles() const { return internal_cycles_; }

 private:
  RVector difference_vector(const LayerPropagator::Forward& pass, const DensityMatrix& rho,
                            const PovmSet& povm, std::size_t action, RngStream& rng);

  std::shared_ptr<const LayerPropagator> memory_;
  GlowParams params_;
  ControlVector h_;
  ControlVector h_inf_;
  RVector e_;
  EstimatorSettings estimator_;
  std::uint64_t internal_cycles_ = 0;
};

}  // namespace qmem
