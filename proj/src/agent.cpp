#include "qmem/agent.hpp"

namespace qmem {

void GlowParams::validate() const {
  if (!(alpha >= 0)) throw InvalidArgument("GlowParams: alpha must be >= 0");
  if (!(eta >= 0 && eta <= 1)) throw InvalidArgument("GlowParams: eta must lie in [0, 1]");
  if (!(kappa >= 0 && kappa <= 1)) throw InvalidArgument("GlowParams: kappa must lie in [0, 1]");
}

GlowAgent::GlowAgent(std::shared_ptr<const LayerPropagator> memory, GlowParams params)
    : GlowAgent(memory, params, ControlVector::Zero(memory ? memory->size() : 0),
                ControlVector::Zero(memory ? memory->size() : 0)) {}

GlowAgent::GlowAgent(std::shared_ptr<const LayerPropagator> memory, GlowParams params,
                     ControlVector h0, ControlVector h_inf)
    : memory_(std::move(memory)), params_(params), h_(std::move(h0)), h_inf_(std::move(h_inf)) {
  if (!memory_) throw InvalidArgument("GlowAgent: memory is null");
  params_.validate();
  if (h_.size() != memory_->size() || h_inf_.size() != memory_->size())
    throw InvalidArgument("GlowAgent: control vectors must match the layer count");
  e_ = RVector::Zero(memory_->size());
}

void GlowAgent::observe_gradient(const RVector& grad) {
  if (grad.size() != e_.size()) throw InvalidArgument("observe_gradient: length mismatch");
  e_ = (1.0 - params_.eta) * e_ + grad;
}

void GlowAgent::apply_reward(double r) {
  if (params_.kappa != 0.0) {
    h_ = h_ + (params_.alpha * r) * e_ + params_.kappa * (h_inf_ - h_);
  } else if (r != 0.0) {
    h_ += (params_.alpha * r) * e_;
  }
}

void GlowAgent::reset_episode() { e_.setZero(); }

void GlowAgent::set_estimator(EstimatorSettings settings) {
  if (settings.source == GradientSource::neural_gas) settings.cloud.validate();
  if (!(settings.delta > 0)) throw InvalidArgument("EstimatorSettings: delta must be positive");
  if (settings.samples < 1) throw InvalidArgument("EstimatorSettings: samples must be >= 1");
  estimator_ = settings;
}

std::vector<double> GlowAgent::policy(const DensityMatrix& rho, const PovmSet& povm) const {
  return action_distribution(*memory_, memory_->forward(h_, rho), povm);
}

RVector GlowAgent::gradient(const DensityMatrix& rho, const CMatrix& effect) const {
  return memory_->gradient(memory_->forward(h_, rho), effect);
}

RVector GlowAgent::difference_vector(const LayerPropagator::Forward& pass,
                                     const DensityMatrix& rho, const PovmSet& povm,
                                     std::size_t action, RngStream& rng) {
  switch (estimator_.source) {
    case GradientSource::analytic:
      return memory_->gradient(pass, povm.effect(action));
    case GradientSource::finite_difference: {
      internal_cycles_ += static_cast<std::uint64_t>(h_.size()) + 1;
      return fd_gradient_expectation(measurement_probability(memory_, rho, povm.effect(action)),
                                     h_, estimator_.delta);
    }
    case GradientSource::sampled_difference: {
      internal_cycles_ += 2ULL * static_cast<std::uint64_t>(h_.size()) * estimator_.samples;
      return fd_gradient_samples(measurement_oracle(memory_, rho, povm, action), h_,
                                 estimator_.delta, estimator_.samples, rng);
    }
    case GradientSource::neural_gas: {
      internal_cycles_ += static_cast<std::uint64_t>(estimator_.cloud.n_samples);
      RVector d = neural_gas_difference(measurement_oracle(memory_, rho, povm, action), h_,
                                        estimator_.cloud, rng);
      estimator_.cloud.decay();
      return d;
    }
  }
  throw InvalidArgument("unknown gradient source");
}

StepOutcome GlowAgent::step(const DensityMatrix& rho, const PovmSet& povm, RngStream& rng) {
  const auto pass = memory_->forward(h_, rho);
  StepOutcome out;
  out.distribution = action_distribution(*memory_, pass, povm);
  out.action = sample_action(out.distribution, rng);
  observe_gradient(difference_vector(pass, rho, povm, out.action, rng));
  return out;
}

}  // namespace qmem
