#include "qmem/qmath.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qmem {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(seeded_engine(seed, stream)) {}

double RngStream::uniform() { return uniform_(engine_); }

double RngStream::normal() { return normal_(engine_); }

Complex RngStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

std::size_t RngStream::index(std::size_t n) {
  if (n == 0) throw InvalidArgument("RngStream::index: empty range");
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol * std::max(1.0, max_abs(m));
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm() < tol;
}

double frobenius_distance(const CMatrix& a, const CMatrix& b) { return (a - b).norm(); }

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidArgument("hs_inner: shape mismatch");
  return (a.adjoint() * b).trace();
}

CMatrix identity(int n) { return CMatrix::Identity(n, n); }

CMatrix herm_expm(const CMatrix& h, double t) {
  if (!is_hermitian(h)) throw InvalidArgument("herm_expm: matrix is not Hermitian");
  if (t == 0.0) return CMatrix::Identity(h.rows(), h.cols());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  CMatrix v = eig.eigenvectors();
  v.colwise().normalize();
  CVector phases(h.rows());
  for (Eigen::Index j = 0; j < h.rows(); ++j)
    phases(j) = std::polar(1.0, -t * eig.eigenvalues()(j));
  return v * phases.asDiagonal() * v.adjoint();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

CMatrix partial_trace(const CMatrix& m, std::span<const int> dims, std::span<const int> keep) {
  if (m.rows() != m.cols()) throw InvalidArgument("partial_trace: matrix is not square");
  const int nsys = static_cast<int>(dims.size());
  long total = 1;
  for (int d : dims) {
    if (d < 1) throw InvalidArgument("partial_trace: subsystem dims must be positive");
    total *= d;
  }
  if (total != m.rows())
    throw InvalidArgument("partial_trace: product of dims " + std::to_string(total) +
                          " != matrix dimension " + std::to_string(m.rows()));
  std::vector<bool> kept(nsys, false);
  for (int k : keep) {
    if (k < 0 || k >= nsys) throw InvalidArgument("partial_trace: keep index out of range");
    kept[k] = true;
  }
  int out_dim = 1;
  for (int s = 0; s < nsys; ++s)
    if (kept[s]) out_dim *= dims[s];

  // Split a full index into (kept index, traced index).
  auto split = [&](long idx) {
    long kept_idx = 0, traced_idx = 0, kept_stride = 1, traced_stride = 1;
    for (int s = nsys - 1; s >= 0; --s) {
      const long digit = idx % dims[s];
      idx /= dims[s];
      if (kept[s]) {
        kept_idx += digit * kept_stride;
        kept_stride *= dims[s];
      } else {
        traced_idx += digit * traced_stride;
        traced_stride *= dims[s];
      }
    }
    return std::pair{kept_idx, traced_idx};
  };

  std::vector<std::pair<long, long>> parts(total);
  for (long i = 0; i < total; ++i) parts[i] = split(i);

  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  for (long i = 0; i < total; ++i)
    for (long j = 0; j < total; ++j)
      if (parts[i].second == parts[j].second) out(parts[i].first, parts[j].first) += m(i, j);
  return out;
}

CMatrix random_hermitian(int n, RngStream& rng) {
  if (n < 1) throw InvalidArgument("random_hermitian: n must be >= 1");
  CMatrix h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = rng.normal();
    for (int j = i + 1; j < n; ++j) {
      const Complex z = rng.complex_normal() / std::sqrt(2.0);
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  const double norm = h.norm();
  if (norm == 0.0) return CMatrix::Identity(n, n);
  return h * (std::sqrt(static_cast<double>(n)) / norm);
}

CMatrix random_unitary(int n, RngStream& rng) {
  if (n < 1) throw InvalidArgument("random_unitary: n must be >= 1");
  CMatrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    const Complex phase = mag > 0 ? r(j, j) / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(CMatrix m, std::vector<PureComponent> components)
    : matrix_(std::move(m)), components_(std::move(components)) {}

DensityMatrix::DensityMatrix(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw InvalidArgument("DensityMatrix: matrix must be square and non-empty");
  if (!is_hermitian(m)) throw InvalidArgument("DensityMatrix: matrix is not Hermitian");
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw InvalidArgument("DensityMatrix: trace " + std::to_string(tr.real()) + " != 1");
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(sym);
  if (eig.eigenvalues().minCoeff() < -kPositivityTol)
    throw InvalidArgument("DensityMatrix: matrix has a negative eigenvalue");
  matrix_ = sym;
  double total = 0;
  for (Eigen::Index j = 0; j < sym.rows(); ++j) {
    const double w = eig.eigenvalues()(j);
    if (w > 1e-15) {
      components_.push_back({w, eig.eigenvectors().col(j)});
      total += w;
    }
  }
  for (auto& c : components_) c.weight /= total;
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const double norm = psi.norm();
  if (psi.size() == 0 || std::abs(norm - 1.0) > 1e-10)
    throw InvalidArgument("DensityMatrix::pure: state must be normalised");
  CVector v = psi / norm;
  CMatrix m = v * v.adjoint();
  return DensityMatrix(std::move(m), {{1.0, std::move(v)}});
}

DensityMatrix DensityMatrix::mixture(std::vector<PureComponent> components) {
  if (components.empty()) throw InvalidArgument("DensityMatrix::mixture: no components");
  const Eigen::Index n = components.front().state.size();
  double total = 0;
  for (const auto& c : components) {
    if (c.state.size() != n) throw InvalidArgument("DensityMatrix::mixture: dimension mismatch");
    if (c.weight < 0) throw InvalidArgument("DensityMatrix::mixture: negative weight");
    if (c.state.norm() == 0.0) throw InvalidArgument("DensityMatrix::mixture: zero state");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kTraceTol)
    throw InvalidArgument("DensityMatrix::mixture: weights must sum to one");
  CMatrix m = CMatrix::Zero(n, n);
  std::vector<PureComponent> kept;
  for (auto& c : components) {
    if (c.weight == 0.0) continue;
    CVector v = c.state / c.state.norm();
    m += c.weight * (v * v.adjoint());
    kept.push_back({c.weight, std::move(v)});
  }
  return DensityMatrix(std::move(m), std::move(kept));
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  std::vector<PureComponent> comps;
  for (int i = 0; i < n; ++i) comps.push_back({1.0 / n, CVector::Unit(n, i)});
  return mixture(std::move(comps));
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

DensityMatrix DensityMatrix::conjugated(const CMatrix& u) const {
  if (u.rows() != matrix_.rows() || u.cols() != matrix_.cols())
    throw InvalidArgument("DensityMatrix::conjugated: dimension mismatch");
  std::vector<PureComponent> comps;
  comps.reserve(components_.size());
  for (const auto& c : components_) comps.push_back({c.weight, u * c.state});
  CMatrix m = u * matrix_ * u.adjoint();
  return DensityMatrix(std::move(m), std::move(comps));
}

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<PureComponent> comps;
  comps.reserve(a.components_.size() * b.components_.size());
  for (const auto& ca : a.components_)
    for (const auto& cb : b.components_)
      comps.push_back({ca.weight * cb.weight, Eigen::kroneckerProduct(ca.state, cb.state).eval()});
  return DensityMatrix(kron(a.matrix_, b.matrix_), std::move(comps));
}

DensityMatrix bloch_state(double x, double y, double z) {
  const double r = std::sqrt(x * x + y * y + z * z);
  if (r > 1.0 + 1e-12) throw InvalidArgument("bloch_state: |r| > 1");
  CMatrix m(2, 2);
  m << Complex(1 + z, 0), Complex(x, -y), Complex(x, y), Complex(1 - z, 0);
  return DensityMatrix(CMatrix(0.5 * m));
}

DensityMatrix random_mixed_qubit(RngStream& rng) {
  double v[3];
  double norm = 0;
  do {
    norm = 0;
    for (double& c : v) {
      c = rng.normal();
      norm += c * c;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  const double radius = std::cbrt(rng.uniform());
  return bloch_state(radius * v[0] / norm, radius * v[1] / norm, radius * v[2] / norm);
}

}  // namespace qmem
