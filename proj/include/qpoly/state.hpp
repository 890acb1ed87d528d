#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qpoly/rng.hpp"

namespace qpoly {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Validity tolerances. Inputs that fail these are rejected, not repaired.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kReconstructTol = 1e-10;
inline constexpr double kDegenerateGap = 1e-10;
inline constexpr double kProbTol = 1e-12;
inline constexpr double kSupportTol = 1e-10;

/// Ordered list of subsystem dimensions. First subsystem is the most
/// significant index (row-major flattening throughout the library).
class DimVector {
 public:
  DimVector() = default;
  explicit DimVector(std::vector<int> dims);

  int count() const { return static_cast<int>(dims_.size()); }
  int dim(int k) const { return dims_.at(static_cast<std::size_t>(k)); }
  int total() const { return total_; }
  const std::vector<int>& dims() const { return dims_; }

  DimVector appended(int extra_dim) const;
  /// Dimensions of the named subsystems, in the given order.
  DimVector subset(const std::vector<int>& indices) const;

  bool operator==(const DimVector& other) const { return dims_ == other.dims_; }
  std::string to_string() const;

 private:
  std::vector<int> dims_;
  int total_ = 0;
};

/// Row-major strides: stride[k] = product of dims after position k.
std::vector<int> subsystem_strides(const DimVector& dims);
/// Sorted complement of `subset` within {0, ..., dims.count()-1}.
std::vector<int> complement_indices(const DimVector& dims,
                                    const std::vector<int>& subset);

struct ProbabilityDistribution {
  std::vector<double> probs;

  explicit ProbabilityDistribution(std::vector<double> p);
  std::size_t size() const { return probs.size(); }
};

class DensityMatrix;

/// Unit vector on a multi-qudit Hilbert space.
class PureState {
 public:
  PureState(Vector amplitudes, DimVector dims);
  static PureState unchecked(Vector amplitudes, DimVector dims);

  const Vector& amplitudes() const { return amp_; }
  const DimVector& dims() const { return dims_; }
  int total() const { return dims_.total(); }

  DensityMatrix projector() const;

 private:
  PureState() = default;
  Vector amp_;
  DimVector dims_;
};

/// Hermitian, positive semidefinite, trace-one operator with explicit
/// subsystem dimensions.
class DensityMatrix {
 public:
  /// Validates hermiticity (1e-12), spectrum (>= -1e-12) and trace (1 within
  /// 1e-12); throws std::invalid_argument naming the failed property.
  static DensityMatrix checked(Matrix m, DimVector dims);
  /// No validation; for outputs of operations that preserve validity.
  static DensityMatrix unchecked(Matrix m, DimVector dims);

  const Matrix& matrix() const { return mat_; }
  const DimVector& dims() const { return dims_; }
  int total() const { return dims_.total(); }

 private:
  DensityMatrix() = default;
  Matrix mat_;
  DimVector dims_;
};

/// Spectral decomposition with eigenvalues sorted descending and a
/// deterministic eigenbasis (see eigendecompose for the degeneracy rule).
struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // orthonormal columns, same order

  int rank(double tol = 1e-12) const;
};

struct SchmidtDecomposition {
  std::vector<double> coefficients;  // nonnegative, descending
  Matrix left_vectors;               // columns, on the left factor
  Matrix right_vectors;              // columns, on the right factor
  std::vector<int> left;             // subsystem indices of the left factor
  std::vector<int> right;
};

// ---- operations ----

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);
PureState tensor_product(const PureState& a, const PureState& b);

/// Reduced state on the subsystems in `keep` (set semantics, original order
/// preserved). Throws std::out_of_range for bad indices.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep);

/// Purification on system (x) ancilla. The ancilla dimension is the rank of
/// rho, floored at 2 so the result is a valid multi-qudit state (a rank-1
/// input gets a 2-dimensional ancilla with zero weight on its second level).
PureState purify(const DensityMatrix& rho);

/// Hermitian eigendecomposition, eigenvalues descending. Within a degenerate
/// cluster (gap < 1e-10) the basis is re-derived from the computational basis
/// by Gram-Schmidt in index order, and every eigenvector's phase is fixed so
/// its largest-magnitude entry is real positive, making the output a
/// deterministic function of the input bytes.
EigenDecomposition eigendecompose(const DensityMatrix& rho);
EigenDecomposition eigendecompose_hermitian(const Matrix& m);

/// Schmidt decomposition across the bipartition (left | complement).
SchmidtDecomposition schmidt_decompose(const PureState& psi,
                                       const std::vector<int>& left);

/// Eigenvalues (descending) of the marginal across the cut; computed on the
/// smaller side. Tiny negative values are clipped to zero.
std::vector<double> cut_spectrum(const PureState& psi,
                                 const std::vector<int>& left);
/// Same, for an amplitude vector already arranged as (left, right) with the
/// given factor dimensions.
std::vector<double> cut_spectrum_prefix(const Vector& amp, int dim_left,
                                        int dim_right);

PureState haar_random_pure(const DimVector& dims, std::uint64_t seed);
PureState haar_random_pure(const DimVector& dims, Rng& rng);

/// Mixed state of rank <= rank, distributed as the partial trace of a Haar
/// random purification with an ancilla of dimension `rank`.
DensityMatrix random_density(const DimVector& dims, int rank,
                             std::uint64_t seed);
DensityMatrix random_density(const DimVector& dims, int rank, Rng& rng);

/// Zero-pad each subsystem to the target dimensions.
DensityMatrix embed(const DensityMatrix& rho, const DimVector& target);

/// Reorder subsystems; new position k holds old subsystem order[k].
PureState permute_subsystems(const PureState& psi,
                             const std::vector<int>& order);
DensityMatrix permute_subsystems(const DensityMatrix& rho,
                                 const std::vector<int>& order);

// ---- named states ----

PureState basis_pure(const DimVector& dims, int index);
DensityMatrix maximally_mixed(const DimVector& dims);
/// (|0..0> + |1..1>)/sqrt(2) on n qudits of dimension d=2.
PureState ghz_state(int parties);
PureState bell_state();  // ghz_state(2)
PureState w_state(int parties);

}  // namespace qpoly
