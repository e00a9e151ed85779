#include "qmem/memory.hpp"

#include <cmath>
#include <string>

namespace qmem {

HamiltonianStack::HamiltonianStack(std::vector<CMatrix> generators,
                                   std::vector<int> layer_generator)
    : generators_(std::move(generators)), layer_generator_(std::move(layer_generator)) {
  if (generators_.empty()) throw InvalidArgument("HamiltonianStack: no generators");
  const auto n = generators_.front().rows();
  for (const auto& g : generators_) {
    if (g.rows() != n || g.cols() != n)
      throw InvalidArgument("HamiltonianStack: generators must share one dimension");
    if (!is_hermitian(g)) throw InvalidArgument("HamiltonianStack: generator is not Hermitian");
  }
  for (int idx : layer_generator_)
    if (idx < 0 || idx >= static_cast<int>(generators_.size()))
      throw InvalidArgument("HamiltonianStack: layer refers to an unknown generator");
}

HamiltonianStack HamiltonianStack::alternating(const CMatrix& h1, const CMatrix& h2, int layers) {
  if (layers < 1) throw InvalidArgument("HamiltonianStack: need at least one layer");
  std::vector<int> pattern(layers);
  for (int k = 0; k < layers; ++k) pattern[k] = k % 2;  // layer 1, 3, ... -> H1
  return HamiltonianStack({h1, h2}, std::move(pattern));
}

std::pair<CMatrix, CMatrix> case_I_hamiltonians(int dim, RngStream& rng) {
  if (dim < 2) throw InvalidArgument("case_I_hamiltonians: dim must be >= 2");
  CMatrix h1 = random_hermitian(dim, rng);
  CMatrix h2 = random_hermitian(dim, rng);
  return {std::move(h1), std::move(h2)};
}

std::pair<CMatrix, CMatrix> case_II_hamiltonians(int dim_s, int dim_a, RngStream& rng) {
  if (dim_s < 2 || dim_a < 2) throw InvalidArgument("case_II_hamiltonians: dims must be >= 2");
  const CMatrix hs1 = random_hermitian(dim_s, rng);
  const CMatrix ha1 = random_hermitian(dim_a, rng);
  const CMatrix hs2 = random_hermitian(dim_s, rng);
  const CMatrix ha2 = random_hermitian(dim_a, rng);
  CMatrix h1 = kron(hs1, identity(dim_a)) + kron(identity(dim_s), ha1);
  CMatrix h2 = kron(hs2, ha2);
  return {std::move(h1), std::move(h2)};
}

std::pair<CMatrix, CMatrix> schmidt_orthonormalize(const CMatrix& h1, const CMatrix& h2) {
  if (h1.rows() != h2.rows() || h1.cols() != h2.cols())
    throw InvalidArgument("schmidt_orthonormalize: dimension mismatch");
  const double scale = std::sqrt(static_cast<double>(h1.rows()));
  const double n1 = h1.norm();
  if (n1 == 0.0) throw DegenerateInput("schmidt_orthonormalize: first operator is zero");
  CMatrix a = h1 * (scale / n1);
  // Tr(A B) is real for Hermitian A, B.
  const double overlap = hs_inner(a, h2).real() / hs_inner(a, a).real();
  CMatrix b = h2 - overlap * a;
  const double nb = b.norm();
  if (nb <= 1e-10 * std::max(1.0, h2.norm()))
    throw DegenerateInput("schmidt_orthonormalize: operators are parallel");
  b *= scale / nb;
  return {std::move(a), std::move(b)};
}

MemorySnapshot build_snapshot(const HamiltonianStack& stack, const ControlVector& h) {
  if (h.size() != stack.size())
    throw InvalidArgument("build_snapshot: control vector has " + std::to_string(h.size()) +
                          " entries, stack has " + std::to_string(stack.size()) + " layers");
  MemorySnapshot snap;
  snap.prefixes.reserve(stack.size());
  CMatrix acc = identity(stack.dim());
  for (int k = 0; k < stack.size(); ++k) {
    acc = herm_expm(stack.layer(k), h(k)) * acc;
    snap.prefixes.push_back(acc);
  }
  snap.unitary = acc;
  return snap;
}

void check_effect_operator(const CMatrix& pi, int dim) {
  if (pi.rows() != dim || pi.cols() != dim)
    throw InvalidArgument("effect operator has wrong dimension");
  if (!is_hermitian(pi, 1e-10)) throw InvalidArgument("effect operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(pi, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kPositivityTol ||
      eig.eigenvalues().maxCoeff() > 1.0 + kPositivityTol)
    throw InvalidArgument("effect operator must satisfy 0 <= Pi <= I");
}

RVector gradient_fixed_layers(const MemorySnapshot& snap, const HamiltonianStack& stack,
                              const DensityMatrix& rho, const CMatrix& pi) {
  const int n = stack.size();
  if (static_cast<int>(snap.prefixes.size()) != n)
    throw InvalidArgument("gradient_fixed_layers: snapshot does not match stack");
  if (rho.dim() != stack.dim()) throw InvalidArgument("gradient_fixed_layers: rho dimension");
  check_effect_operator(pi, stack.dim());
  const CMatrix heisenberg = snap.unitary.adjoint() * pi * snap.unitary;
  const CMatrix left = rho.matrix() * heisenberg;
  RVector grad(n);
  for (int k = 0; k < n; ++k) {
    const CMatrix& p = snap.prefixes[k];
    const CMatrix rotated = p.adjoint() * stack.layer(k) * p;
    grad(k) = 2.0 * (left.cwiseProduct(rotated.transpose())).sum().imag();
  }
  return grad;
}

double gradient_add_layer(const CMatrix& u, const CMatrix& h_k, const DensityMatrix& rho,
                          const CMatrix& pi) {
  if (u.rows() != rho.dim() || h_k.rows() != rho.dim())
    throw InvalidArgument("gradient_add_layer: dimension mismatch");
  if (!is_hermitian(h_k)) throw InvalidArgument("gradient_add_layer: H_k is not Hermitian");
  check_effect_operator(pi, rho.dim());
  return 2.0 * (rho.matrix() * u.adjoint() * pi * h_k * u).trace().imag();
}

// ---------------------------------------------------------------------------
// LayerPropagator

LayerPropagator::LayerPropagator(HamiltonianStack stack) : stack_(std::move(stack)) {
  const auto& gens = stack_.generators();
  for (const auto& g : gens) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(g);
    CMatrix v = eig.eigenvectors();
    v.colwise().normalize();
    eigvecs_.push_back(std::move(v));
    eigvals_.push_back(eig.eigenvalues());
  }
  transfer_.resize(gens.size());
  for (std::size_t to = 0; to < gens.size(); ++to)
    for (std::size_t from = 0; from < gens.size(); ++from)
      transfer_[to].push_back(eigvecs_[to].adjoint() * eigvecs_[from]);
}

void LayerPropagator::check_controls(const ControlVector& h) const {
  if (h.size() != stack_.size())
    throw InvalidArgument("LayerPropagator: control vector length does not match stack");
}

LayerPropagator::Forward LayerPropagator::forward(const ControlVector& h,
                                                  const DensityMatrix& rho) const {
  check_controls(h);
  if (rho.dim() != dim()) throw InvalidArgument("LayerPropagator: rho dimension");
  const int n = size();
  const bool identity = h.isZero(0.0);
  Forward pass;
  pass.controls = h;
  pass.phases.resize(dim(), n);
  for (int k = 0; k < n; ++k) {
    const RVector& lam = eigvals_[stack_.generator_of(k)];
    for (int j = 0; j < dim(); ++j) pass.phases(j, k) = std::polar(1.0, -h(k) * lam(j));
  }
  pass.traces.reserve(rho.components().size());
  CVector x(dim());
  for (const auto& comp : rho.components()) {
    Trace tr;
    tr.weight = comp.weight;
    tr.layer_states.resize(dim(), n);
    int g = stack_.generator_of(0);
    x.noalias() = eigvecs_[g].adjoint() * comp.state;
    for (int k = 0; k < n; ++k) {
      const int gk = stack_.generator_of(k);
      if (gk != g) {
        CVector y = transfer_[gk][g] * x;
        x.swap(y);
        g = gk;
      }
      x.array() *= pass.phases.col(k).array();
      tr.layer_states.col(k) = x;
    }
    tr.output = identity ? comp.state : CVector(eigvecs_[g] * x);
    pass.traces.push_back(std::move(tr));
  }
  return pass;
}

double LayerPropagator::probability(const Forward& pass, const CMatrix& pi) const {
  double p = 0;
  for (const auto& tr : pass.traces) p += tr.weight * tr.output.dot(pi * tr.output).real();
  return p;
}

RVector LayerPropagator::gradient(const Forward& pass, const CMatrix& pi) const {
  const int n = size();
  RVector grad = RVector::Zero(n);
  if (pass.controls.isZero(0.0)) {
    // U = I: evaluate in the computational basis so symmetric cases cancel exactly.
    for (const auto& tr : pass.traces) {
      const CVector chi0 = pi * tr.output;
      for (int k = 0; k < n; ++k)
        grad(k) += tr.weight * 2.0 * chi0.dot(stack_.layer(k) * tr.output).imag();
    }
    return grad;
  }
  CVector chi(dim());
  for (const auto& tr : pass.traces) {
    int g = stack_.generator_of(n - 1);
    chi.noalias() = eigvecs_[g].adjoint() * (pi * tr.output);
    for (int k = n - 1; k >= 0; --k) {
      const int gk = stack_.generator_of(k);
      if (gk != g) {
        CVector y = transfer_[gk][g] * chi;
        chi.swap(y);
        g = gk;
      }
      const RVector& lam = eigvals_[g];
      // 2 Im <chi_k| H_k |phi_k>
      Complex acc = 0;
      for (int j = 0; j < dim(); ++j) acc += std::conj(chi(j)) * lam(j) * tr.layer_states(j, k);
      grad(k) += tr.weight * 2.0 * acc.imag();
      // chi_{k-1} = U_k^dagger chi_k
      chi.array() *= pass.phases.col(k).array().conjugate();
    }
  }
  return grad;
}

CVector LayerPropagator::apply(const ControlVector& h, const CVector& psi) const {
  check_controls(h);
  if (h.isZero(0.0)) return psi;
  int g = stack_.generator_of(0);
  CVector x = eigvecs_[g].adjoint() * psi;
  for (int k = 0; k < size(); ++k) {
    const int gk = stack_.generator_of(k);
    if (gk != g) {
      CVector y = transfer_[gk][g] * x;
      x.swap(y);
      g = gk;
    }
    for (int j = 0; j < dim(); ++j) x(j) *= std::polar(1.0, -h(k) * eigvals_[g](j));
  }
  return eigvecs_[g] * x;
}

CMatrix LayerPropagator::unitary(const ControlVector& h) const {
  CMatrix u(dim(), dim());
  for (int j = 0; j < dim(); ++j) u.col(j) = apply(h, CVector::Unit(dim(), j));
  return u;
}

}  // namespace qmem
