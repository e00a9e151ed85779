#include "qmem/estimators.hpp"

namespace qmem {

void CloudConfig::validate() const {
  if (n_samples < 2) throw InvalidArgument("CloudConfig: n_samples must be >= 2");
  if (!(sigma > 0)) throw InvalidArgument("CloudConfig: sigma must be positive");
  if (!(sigma_decay > 0 && sigma_decay <= 1))
    throw InvalidArgument("CloudConfig: sigma_decay must lie in (0, 1]");
}

RVector fd_gradient_expectation(const ProbabilityFn& p, const ControlVector& h, double delta) {
  if (!(delta > 0)) throw InvalidArgument("fd_gradient_expectation: delta must be positive");
  const double base = p(h);
  RVector grad(h.size());
  ControlVector shifted = h;
  for (Eigen::Index k = 0; k < h.size(); ++k) {
    shifted(k) = h(k) + delta;
    grad(k) = (p(shifted) - base) / delta;
    shifted(k) = h(k);
  }
  return grad;
}

RVector fd_gradient_samples(const BinaryOutcomeOracle& oracle, const ControlVector& h,
                            double delta, int m, RngStream& rng) {
  if (!(delta > 0)) throw InvalidArgument("fd_gradient_samples: delta must be positive");
  if (m < 1) throw InvalidArgument("fd_gradient_samples: need at least one sample");
  RVector grad(h.size());
  ControlVector shifted = h;
  for (Eigen::Index k = 0; k < h.size(); ++k) {
    shifted(k) = h(k) + delta;
    long sum = 0;
    for (int j = 0; j < m; ++j) {
      RngStream paired = rng;
      const int displaced = oracle(shifted, paired);
      const int base = oracle(h, rng);
      sum += displaced - base;
    }
    grad(k) = static_cast<double>(sum) / (2.0 * m * delta);
    shifted(k) = h(k);
  }
  return grad;
}

RVector neural_gas_difference(const BinaryOutcomeOracle& oracle, const ControlVector& center,
                              const CloudConfig& cfg, RngStream& rng) {
  cfg.validate();
  RVector estimate = RVector::Zero(center.size());
  ControlVector offset(center.size());
  for (int n = 1; n <= cfg.n_samples; ++n) {
    for (Eigen::Index k = 0; k < center.size(); ++k) offset(k) = cfg.sigma * rng.normal();
    const int s = oracle(center + offset, rng);
    const double w = 1.0 / n;
    estimate = (1.0 - w) * estimate + (w * s) * offset;
  }
  return estimate;
}

ProbabilityFn measurement_probability(std::shared_ptr<const LayerPropagator> memory,
                                      DensityMatrix rho, CMatrix effect) {
  return [memory = std::move(memory), rho = std::move(rho),
          effect = std::move(effect)](const ControlVector& h) {
    return memory->probability(memory->forward(h, rho), effect);
  };
}

BinaryOutcomeOracle measurement_oracle(std::shared_ptr<const LayerPropagator> memory,
                                       DensityMatrix rho, PovmSet povm, std::size_t action) {
  if (action >= povm.size()) throw InvalidArgument("measurement_oracle: action out of range");
  return [memory = std::move(memory), rho = std::move(rho), povm = std::move(povm),
          action](const ControlVector& h, RngStream& rng) {
    const auto dist = action_distribution(*memory, memory->forward(h, rho), povm);
    return sample_action(dist, rng) == action ? +1 : -1;
  };
}

}  // namespace qmem
