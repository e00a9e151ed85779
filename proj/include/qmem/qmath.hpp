#pragma once

// Dense complex linear algebra used throughout the library. Dimensions are
// small (<= 64) so everything is dense and double precision.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qmem/error.hpp"

namespace qmem {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityTol = 1e-10;

/// Deterministic random stream keyed by (seed, stream id). Copying a stream
/// copies its state, so a copy replays the same draws as the original.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  double uniform();  // [0, 1)
  double normal();   // standard normal
  // Complex Gaussian with E|z|^2 = 1.
  Complex complex_normal();
  // Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

bool is_hermitian(const CMatrix& m, double tol = kHermitianTol);
bool is_unitary(const CMatrix& u, double tol = 1e-10);
// ||A - B||_F
double frobenius_distance(const CMatrix& a, const CMatrix& b);
// Hilbert-Schmidt inner product Tr(A^dagger B).
Complex hs_inner(const CMatrix& a, const CMatrix& b);
CMatrix identity(int n);

/// exp(-i t H) for Hermitian H, via H = V diag(lambda) V^dagger.
CMatrix herm_expm(const CMatrix& h, double t);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Trace out every subsystem not listed in `keep`. Subsystem 0 is the most
/// significant tensor factor, matching kron(A, B) ordering.
CMatrix partial_trace(const CMatrix& m, std::span<const int> dims,
                      std::span<const int> keep);

/// Gaussian-ensemble Hermitian matrix scaled to ||H||_F = sqrt(n).
CMatrix random_hermitian(int n, RngStream& rng);

/// Haar-distributed unitary (QR of a complex Ginibre matrix, R diagonal made
/// positive).
CMatrix random_unitary(int n, RngStream& rng);

/// One pure component of a convex decomposition of a density matrix.
struct PureComponent {
  double weight;
  CVector state;
};

/// A validated density matrix that also carries a convex decomposition into
/// pure states. The decomposition lets vector-level propagation stand in for
/// matrix conjugation.
class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity; the decomposition is
  /// the eigendecomposition.
  explicit DensityMatrix(const CMatrix& m);

  static DensityMatrix pure(const CVector& psi);
  /// Weights must be non-negative and sum to one; states are normalised.
  static DensityMatrix mixture(std::vector<PureComponent> components);
  static DensityMatrix maximally_mixed(int n);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const CMatrix& matrix() const { return matrix_; }
  const std::vector<PureComponent>& components() const { return components_; }

  double purity() const;
  /// U rho U^dagger
  DensityMatrix conjugated(const CMatrix& u) const;

  friend DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b);

 private:
  DensityMatrix(CMatrix m, std::vector<PureComponent> components);

  CMatrix matrix_;
  std::vector<PureComponent> components_;
};

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b);

/// (I + r.sigma)/2 with the Bloch vector uniform in the unit ball.
DensityMatrix random_mixed_qubit(RngStream& rng);
DensityMatrix bloch_state(double x, double y, double z);

}  // namespace qmem
