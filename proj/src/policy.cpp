#include "qmem/policy.hpp"

#include <cmath>

namespace qmem {

namespace {

constexpr double kClipTol = 1e-12;
constexpr double kCompletenessTol = 1e-10;

CVector uniform_superposition(int d) {
  return CVector::Constant(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
}

}  // namespace

PovmSet::PovmSet(std::vector<std::string> labels, std::vector<CMatrix> effects)
    : labels_(std::move(labels)), effects_(std::move(effects)) {
  if (effects_.empty()) throw InvalidArgument("PovmSet: no elements");
  if (labels_.size() != effects_.size()) throw InvalidArgument("PovmSet: label count mismatch");
  const int n = dim();
  CMatrix sum = CMatrix::Zero(n, n);
  for (auto& e : effects_) {
    check_effect_operator(e, n);
    e = 0.5 * (e + e.adjoint());
    sum += e;
  }
  if ((sum - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > kCompletenessTol)
    throw InvalidArgument("PovmSet: elements do not sum to the identity");
}

PovmSet PovmSet::conjugated(const CMatrix& v) const {
  std::vector<CMatrix> out;
  out.reserve(effects_.size());
  for (const auto& e : effects_) out.push_back(v * e * v.adjoint());
  return PovmSet(labels_, std::move(out));
}

DensityMatrix encode_symbol_action(int symbol, int dim_s, int dim_a, double p_coh) {
  if (!(p_coh >= 0.0 && p_coh <= 1.0))
    throw InvalidArgument("encode_symbol_action: p_coh must lie in [0, 1]");
  if (symbol < 0 || symbol >= dim_s) throw InvalidArgument("encode_symbol_action: symbol range");
  const DensityMatrix rho_s = DensityMatrix::pure(CVector::Unit(dim_s, symbol));
  std::vector<PureComponent> action_part;
  if (p_coh > 0) action_part.push_back({p_coh, uniform_superposition(dim_a)});
  if (p_coh < 1)
    for (int a = 0; a < dim_a; ++a)
      action_part.push_back({(1.0 - p_coh) / dim_a, CVector::Unit(dim_a, a)});
  return kron(rho_s, DensityMatrix::mixture(std::move(action_part)));
}

DensityMatrix encode_invasion_2x2(int symbol, double p_coh) {
  return encode_symbol_action(symbol, 2, 2, p_coh);
}

DensityMatrix encode_invasion_4(int symbol, int color) {
  if (symbol < 0 || symbol > 1 || color < 0 || color > 1)
    throw InvalidArgument("encode_invasion_4: symbol and colour must be 0 or 1");
  return DensityMatrix::pure(CVector::Unit(4, 2 * symbol + color));
}

DensityMatrix encode_neverending(int symbol, const DensityMatrix& rho_c) {
  if (symbol < 0 || symbol > 1) throw InvalidArgument("encode_neverending: symbol must be 0 or 1");
  if (rho_c.dim() != 2) throw InvalidArgument("encode_neverending: colour state must be a qubit");
  const DensityMatrix rho_s = DensityMatrix::pure(CVector::Unit(2, symbol));
  const DensityMatrix rho_a = DensityMatrix::pure(uniform_superposition(2));
  return kron(kron(rho_s, rho_c), rho_a);
}

PovmSet povm_action_subsystem(int dim_s, int dim_a) {
  if (dim_s < 1 || dim_a < 1) throw InvalidArgument("povm_action_subsystem: dims must be >= 1");
  std::vector<std::string> labels;
  std::vector<CMatrix> effects;
  for (int a = 0; a < dim_a; ++a) {
    CMatrix proj = CMatrix::Zero(dim_a, dim_a);
    proj(a, a) = 1.0;
    effects.push_back(kron(identity(dim_s), proj));
    labels.push_back(std::to_string(a));
  }
  return PovmSet(std::move(labels), std::move(effects));
}

PovmSet povm_rotated(const CMatrix& u_target, bool merge_colors) {
  if (u_target.rows() != 4 || !is_unitary(u_target))
    throw InvalidArgument("povm_rotated: target must be a 4x4 unitary");
  std::vector<std::string> labels;
  std::vector<CMatrix> effects;
  if (merge_colors) {
    for (int j = 0; j < 2; ++j) {
      CMatrix sum = CMatrix::Zero(4, 4);
      for (int k = 0; k < 2; ++k) sum += encode_invasion_4(j, k).matrix();
      effects.push_back(u_target * sum * u_target.adjoint());
      labels.push_back(std::to_string(j));
    }
  } else {
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        effects.push_back(u_target * encode_invasion_4(j, k).matrix() * u_target.adjoint());
        labels.push_back(std::to_string(j) + std::to_string(k));
      }
  }
  return PovmSet(std::move(labels), std::move(effects));
}

std::vector<double> normalize_distribution(std::vector<double> raw) {
  double total = 0;
  for (double& p : raw) {
    if (p < -kClipTol) throw InvalidArgument("action distribution has a negative probability");
    if (p < 0) p = 0;
    total += p;
  }
  if (std::abs(total - 1.0) > kCompletenessTol)
    throw InvalidArgument("action distribution does not sum to one; POVM incomplete");
  for (double& p : raw) p /= total;
  return raw;
}

std::vector<double> action_distribution(const MemorySnapshot& snap, const DensityMatrix& rho,
                                        const PovmSet& povm) {
  if (rho.dim() != povm.dim() || snap.unitary.rows() != rho.dim())
    throw InvalidArgument("action_distribution: dimension mismatch");
  const CMatrix out = snap.unitary * rho.matrix() * snap.unitary.adjoint();
  std::vector<double> raw(povm.size());
  for (std::size_t a = 0; a < povm.size(); ++a)
    raw[a] = (out * povm.effect(a)).trace().real();
  return normalize_distribution(std::move(raw));
}

std::vector<double> action_distribution(const LayerPropagator& prop,
                                        const LayerPropagator::Forward& pass,
                                        const PovmSet& povm) {
  if (povm.dim() != prop.dim()) throw InvalidArgument("action_distribution: dimension mismatch");
  std::vector<double> raw(povm.size());
  for (std::size_t a = 0; a < povm.size(); ++a) raw[a] = prop.probability(pass, povm.effect(a));
  return normalize_distribution(std::move(raw));
}

std::size_t sample_action(const std::vector<double>& dist, RngStream& rng) {
  if (dist.empty()) throw InvalidArgument("sample_action: empty distribution");
  const double u = rng.uniform();
  double cdf = 0;
  for (std::size_t a = 0; a < dist.size(); ++a) {
    cdf += dist[a];
    if (u < cdf) return a;
  }
  // u landed in the roundoff gap above the last cumulative value.
  for (std::size_t a = dist.size(); a-- > 0;)
    if (dist[a] > 0) return a;
  return dist.size() - 1;
}

}  // namespace qmem
