#include "qmem/metrics.hpp"

#include <cmath>

namespace qmem {

namespace {

void check_pair(const CMatrix& u, const CMatrix& v, const char* who) {
  if (u.rows() != u.cols() || v.rows() != v.cols() || u.rows() != v.rows())
    throw InvalidArgument(std::string(who) + ": dimension mismatch");
}

}  // namespace

KrausChannel::KrausChannel(std::vector<CMatrix> ops) : ops_(std::move(ops)) {
  if (ops_.empty()) throw InvalidArgument("KrausChannel: no operators");
  const auto n = ops_.front().rows();
  CMatrix sum = CMatrix::Zero(n, n);
  for (const auto& g : ops_) {
    if (g.rows() != n || g.cols() != n) throw InvalidArgument("KrausChannel: dimension mismatch");
    sum += g.adjoint() * g;
  }
  if ((sum - CMatrix::Identity(n, n)).norm() > 1e-10)
    throw InvalidArgument("KrausChannel: operators are not trace preserving");
}

CMatrix KrausChannel::apply(const CMatrix& rho) const {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& g : ops_) out += g * rho * g.adjoint();
  return out;
}

double distance_sq(const CMatrix& u, const CMatrix& u_target) {
  check_pair(u, u_target, "distance_sq");
  const double n = static_cast<double>(u.rows());
  return 2 * n - 2 * hs_inner(u_target, u).real();
}

double avg_fidelity(const CMatrix& u, const CMatrix& u_target) {
  check_pair(u, u_target, "avg_fidelity");
  const double n = static_cast<double>(u.rows());
  return (n + std::norm(hs_inner(u_target, u))) / (n * (n + 1));
}

double cos_sq(const CMatrix& u, const CMatrix& u_target) {
  check_pair(u, u_target, "cos_sq");
  const double n = static_cast<double>(u.rows());
  return std::norm(hs_inner(u_target, u)) / (n * n);
}

double subspace_fidelity(const CMatrix& u, const CMatrix& u_target, const CMatrix& p) {
  check_pair(u, u_target, "subspace_fidelity");
  check_pair(u, p, "subspace_fidelity");
  if ((p * p - p).norm() > 1e-10 || !is_hermitian(p, 1e-10))
    throw InvalidArgument("subspace_fidelity: P is not an orthogonal projector");
  const double d = std::round(p.trace().real());
  if (d < 1) throw InvalidArgument("subspace_fidelity: projector has rank zero");
  const CMatrix m = p * u_target.adjoint() * u * p;
  return ((m.adjoint() * m).trace().real() + std::norm(m.trace())) / (d * (d + 1));
}

double channel_fidelity(const KrausChannel& channel, const CMatrix& u_target) {
  if (channel.dim() != u_target.rows())
    throw InvalidArgument("channel_fidelity: dimension mismatch");
  const double n = channel.dim();
  double s = 0;
  for (const auto& g : channel.ops()) s += std::norm(hs_inner(u_target, g));
  return (n + s) / (n * (n + 1));
}

double percept_fidelity(const KrausChannel& channel, const CMatrix& u_target,
                        const std::vector<WeightedInput>& inputs) {
  if (channel.dim() != u_target.rows())
    throw InvalidArgument("percept_fidelity: dimension mismatch");
  double total = 0;
  for (const auto& in : inputs) {
    if (!(in.weight >= 0)) throw InvalidArgument("percept_fidelity: negative weight");
    total += in.weight;
  }
  if (std::abs(total - 1) > 1e-10) throw InvalidArgument("percept_fidelity: weights do not sum to 1");
  double f = 0;
  for (const auto& in : inputs) {
    if (in.weight == 0) continue;
    const CVector psi = in.state.normalized();
    const CVector target = u_target * psi;
    const CMatrix out = channel.apply(psi * psi.adjoint());
    f += in.weight * (target.adjoint() * out * target)(0, 0).real();
  }
  return f;
}

}  // namespace qmem
