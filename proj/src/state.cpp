#include "qpoly/state.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qpoly {

// ---- DimVector ----

DimVector::DimVector(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw std::invalid_argument("dims: must contain at least one subsystem");
  }
  total_ = 1;
  for (int d : dims_) {
    if (d < 2) {
      throw std::invalid_argument("dims: every subsystem dimension must be >= 2");
    }
    total_ *= d;
  }
}

DimVector DimVector::appended(int extra_dim) const {
  std::vector<int> d = dims_;
  d.push_back(extra_dim);
  return DimVector(std::move(d));
}

DimVector DimVector::subset(const std::vector<int>& indices) const {
  std::vector<int> d;
  d.reserve(indices.size());
  for (int k : indices) d.push_back(dim(k));
  return DimVector(std::move(d));
}

std::string DimVector::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) os << ",";
    os << dims_[i];
  }
  os << "]";
  return os.str();
}

std::vector<int> subsystem_strides(const DimVector& dims) {
  const int n = dims.count();
  std::vector<int> s(static_cast<std::size_t>(n), 1);
  for (int k = n - 2; k >= 0; --k) {
    s[static_cast<std::size_t>(k)] =
        s[static_cast<std::size_t>(k + 1)] * dims.dim(k + 1);
  }
  return s;
}

std::vector<int> complement_indices(const DimVector& dims,
                                    const std::vector<int>& subset) {
  std::vector<bool> in(static_cast<std::size_t>(dims.count()), false);
  for (int k : subset) {
    if (k < 0 || k >= dims.count()) {
      throw std::out_of_range("subsystem index " + std::to_string(k) +
                              " out of range for dims " + dims.to_string());
    }
    in[static_cast<std::size_t>(k)] = true;
  }
  std::vector<int> out;
  for (int k = 0; k < dims.count(); ++k) {
    if (!in[static_cast<std::size_t>(k)]) out.push_back(k);
  }
  return out;
}

// Enumerate flat-index offsets of all multi-indices over the named
// subsystems (the remaining positions contribute zero).
static std::vector<int> index_offsets(const DimVector& dims,
                                      const std::vector<int>& subs) {
  const std::vector<int> strides = subsystem_strides(dims);
  std::vector<int> offsets{0};
  for (int k : subs) {
    std::vector<int> next;
    next.reserve(offsets.size() * static_cast<std::size_t>(dims.dim(k)));
    for (int v = 0; v < dims.dim(k); ++v) {
      const int add = v * strides[static_cast<std::size_t>(k)];
      for (int base : offsets) next.push_back(base + add);
    }
    offsets.swap(next);
  }
  return offsets;
}

// ---- ProbabilityDistribution ----

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> p)
    : probs(std::move(p)) {
  double sum = 0.0;
  for (double x : probs) {
    if (x < 0.0) {
      throw std::invalid_argument("probs: entries must be nonnegative");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbTol) {
    throw std::invalid_argument("probs: entries must sum to 1 within 1e-12");
  }
}

// ---- PureState / DensityMatrix ----

PureState::PureState(Vector amplitudes, DimVector dims) {
  if (amplitudes.size() != dims.total()) {
    throw std::invalid_argument("amplitudes: length must equal total_dim " +
                                std::to_string(dims.total()));
  }
  const double n2 = amplitudes.squaredNorm();
  if (std::abs(n2 - 1.0) > kNormTol) {
    throw std::invalid_argument("amplitudes: squared norm must be 1 within 1e-12");
  }
  amp_ = std::move(amplitudes);
  dims_ = std::move(dims);
}

PureState PureState::unchecked(Vector amplitudes, DimVector dims) {
  PureState s;
  s.amp_ = std::move(amplitudes);
  s.dims_ = std::move(dims);
  return s;
}

DensityMatrix PureState::projector() const {
  return DensityMatrix::unchecked(amp_ * amp_.adjoint(), dims_);
}

DensityMatrix DensityMatrix::checked(Matrix m, DimVector dims) {
  if (m.rows() != dims.total() || m.cols() != dims.total()) {
    throw std::invalid_argument("matrix: size must be total_dim x total_dim");
  }
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    throw std::invalid_argument("matrix: not Hermitian within 1e-12");
  }
  if (std::abs(m.trace().real() - 1.0) > kTraceTol ||
      std::abs(m.trace().imag()) > kTraceTol) {
    throw std::invalid_argument("matrix: trace must be 1 within 1e-12");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigenvalueFloor) {
    throw std::invalid_argument("matrix: eigenvalues must be >= -1e-12");
  }
  DensityMatrix rho;
  rho.mat_ = std::move(m);
  rho.dims_ = std::move(dims);
  return rho;
}

DensityMatrix DensityMatrix::unchecked(Matrix m, DimVector dims) {
  DensityMatrix rho;
  rho.mat_ = std::move(m);
  rho.dims_ = std::move(dims);
  return rho;
}

int EigenDecomposition::rank(double tol) const {
  int r = 0;
  for (double v : eigenvalues) {
    if (v > tol) ++r;
  }
  return r;
}

// ---- tensor products ----

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  const int na = a.total();
  const int nb = b.total();
  Matrix out(na * nb, na * nb);
  for (int i = 0; i < na; ++i) {
    for (int k = 0; k < na; ++k) {
      out.block(i * nb, k * nb, nb, nb) = a.matrix()(i, k) * b.matrix();
    }
  }
  std::vector<int> dims = a.dims().dims();
  dims.insert(dims.end(), b.dims().dims().begin(), b.dims().dims().end());
  return DensityMatrix::unchecked(std::move(out), DimVector(std::move(dims)));
}

PureState tensor_product(const PureState& a, const PureState& b) {
  const int na = a.total();
  const int nb = b.total();
  Vector out(na * nb);
  for (int i = 0; i < na; ++i) {
    out.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
  }
  std::vector<int> dims = a.dims().dims();
  dims.insert(dims.end(), b.dims().dims().begin(), b.dims().dims().end());
  return PureState::unchecked(std::move(out), DimVector(std::move(dims)));
}

// ---- partial trace ----

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep) {
  if (keep.empty()) {
    throw std::out_of_range("keep: must name at least one subsystem");
  }
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  const std::vector<int> traced = complement_indices(rho.dims(), kept);

  const std::vector<int> kept_off = index_offsets(rho.dims(), kept);
  const std::vector<int> traced_off = index_offsets(rho.dims(), traced);

  const std::size_t nk = kept_off.size();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(nk),
                            static_cast<Eigen::Index>(nk));
  const Matrix& m = rho.matrix();
  for (std::size_t r = 0; r < nk; ++r) {
    for (std::size_t c = 0; c < nk; ++c) {
      cxd sum = 0.0;
      for (int t : traced_off) {
        sum += m(kept_off[r] + t, kept_off[c] + t);
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sum;
    }
  }
  return DensityMatrix::unchecked(std::move(out), rho.dims().subset(kept));
}

// ---- eigendecomposition with the degeneracy convention ----

static void fix_phase(Eigen::Ref<Vector> v) {
  int arg = 0;
  double best = -1.0;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (best > 0.0) {
    v *= std::conj(v(arg)) / best;
  }
}

EigenDecomposition eigendecompose_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigendecompose: solver failed to converge");
  }
  const int n = static_cast<int>(m.rows());
  EigenDecomposition out;
  out.eigenvalues.resize(static_cast<std::size_t>(n));
  out.eigenvectors.resize(n, n);
  // Eigen returns ascending order; flip to descending.
  for (int i = 0; i < n; ++i) {
    out.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()(n - 1 - i);
    out.eigenvectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }

  // Re-derive the basis of each degenerate cluster from the computational
  // basis by Gram-Schmidt in index order, so the output does not depend on
  // the solver's arbitrary choice inside the eigenspace.
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && out.eigenvalues[static_cast<std::size_t>(end - 1)] -
                              out.eigenvalues[static_cast<std::size_t>(end)] <
                          kDegenerateGap) {
      ++end;
    }
    const int k = end - start;
    if (k > 1) {
      const Matrix basis = out.eigenvectors.middleCols(start, k);
      Matrix proj = basis * basis.adjoint();  // cluster projector
      Matrix replaced(n, k);
      int got = 0;
      for (int e = 0; e < n && got < k; ++e) {
        Vector v = proj.col(e);  // projection of |e>
        for (int j = 0; j < got; ++j) {
          v -= replaced.col(j).dot(v) * replaced.col(j);
        }
        const double norm = v.norm();
        if (norm > 1e-8) {
          replaced.col(got++) = v / norm;
        }
      }
      if (got < k) {
        throw std::runtime_error(
            "eigendecompose: failed to complete degenerate cluster basis");
      }
      out.eigenvectors.middleCols(start, k) = replaced;
    }
    start = end;
  }
  for (int i = 0; i < n; ++i) {
    fix_phase(out.eigenvectors.col(i));
  }
  return out;
}

EigenDecomposition eigendecompose(const DensityMatrix& rho) {
  return eigendecompose_hermitian(rho.matrix());
}

// ---- purification ----

PureState purify(const DensityMatrix& rho) {
  const EigenDecomposition eig = eigendecompose(rho);
  const int r = std::max(eig.rank(), 1);
  const int anc = std::max(r, 2);
  const int n = rho.total();
  Vector amp = Vector::Zero(static_cast<Eigen::Index>(n) * anc);
  for (int a = 0; a < r; ++a) {
    const double lam = std::max(eig.eigenvalues[static_cast<std::size_t>(a)], 0.0);
    const double w = std::sqrt(lam);
    for (int i = 0; i < n; ++i) {
      amp(static_cast<Eigen::Index>(i) * anc + a) = w * eig.eigenvectors(i, a);
    }
  }
  amp /= amp.norm();
  return PureState::unchecked(std::move(amp), rho.dims().appended(anc));
}

// ---- Schmidt decomposition ----

static Matrix cut_matrix(const Vector& amp, const DimVector& dims,
                         const std::vector<int>& left,
                         const std::vector<int>& right) {
  const std::vector<int> loff = index_offsets(dims, left);
  const std::vector<int> roff = index_offsets(dims, right);
  Matrix m(static_cast<Eigen::Index>(loff.size()),
           static_cast<Eigen::Index>(roff.size()));
  for (std::size_t i = 0; i < loff.size(); ++i) {
    for (std::size_t j = 0; j < roff.size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          amp(loff[i] + roff[j]);
    }
  }
  return m;
}

SchmidtDecomposition schmidt_decompose(const PureState& psi,
                                       const std::vector<int>& left) {
  std::vector<int> l = left;
  std::sort(l.begin(), l.end());
  l.erase(std::unique(l.begin(), l.end()), l.end());
  if (l.empty()) {
    throw std::invalid_argument("cut: left side must be nonempty");
  }
  const std::vector<int> r = complement_indices(psi.dims(), l);
  if (r.empty()) {
    throw std::invalid_argument("cut: right side must be nonempty");
  }
  const Matrix m = cut_matrix(psi.amplitudes(), psi.dims(), l, r);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition out;
  const int k = static_cast<int>(svd.singularValues().size());
  out.coefficients.assign(svd.singularValues().data(),
                          svd.singularValues().data() + k);
  out.left_vectors = svd.matrixU();
  out.right_vectors = svd.matrixV().conjugate();
  out.left = l;
  out.right = r;
  return out;
}

std::vector<double> cut_spectrum_prefix(const Vector& amp, int dim_left,
                                        int dim_right) {
  const bool left_small = dim_left <= dim_right;
  const int s = left_small ? dim_left : dim_right;
  Matrix gram = Matrix::Zero(s, s);
  // gram = M M^dag (left) or M^T conj(M) (right) for M[i,j] = amp[i*dr + j]
  if (left_small) {
    for (int i = 0; i < dim_left; ++i) {
      for (int k = i; k < dim_left; ++k) {
        cxd sum = 0.0;
        for (int j = 0; j < dim_right; ++j) {
          sum += amp(static_cast<Eigen::Index>(i) * dim_right + j) *
                 std::conj(amp(static_cast<Eigen::Index>(k) * dim_right + j));
        }
        gram(i, k) = sum;
        gram(k, i) = std::conj(sum);
      }
    }
  } else {
    for (int j = 0; j < dim_right; ++j) {
      for (int l = j; l < dim_right; ++l) {
        cxd sum = 0.0;
        for (int i = 0; i < dim_left; ++i) {
          sum += amp(static_cast<Eigen::Index>(i) * dim_right + j) *
                 std::conj(amp(static_cast<Eigen::Index>(i) * dim_right + l));
        }
        gram(j, l) = sum;
        gram(l, j) = std::conj(sum);
      }
    }
  }
  std::vector<double> ev;
  ev.reserve(static_cast<std::size_t>(s));
  if (s == 2) {
    // closed form for 2x2 Hermitian
    const double a = gram(0, 0).real();
    const double c = gram(1, 1).real();
    const double b2 = std::norm(gram(0, 1));
    const double half = 0.5 * (a + c);
    const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b2);
    ev.push_back(half + disc);
    ev.push_back(half - disc);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    for (int i = s - 1; i >= 0; --i) ev.push_back(es.eigenvalues()(i));
  }
  for (double& v : ev) {
    if (v < 0.0) v = 0.0;
  }
  return ev;
}

std::vector<double> cut_spectrum(const PureState& psi,
                                 const std::vector<int>& left) {
  std::vector<int> l = left;
  std::sort(l.begin(), l.end());
  l.erase(std::unique(l.begin(), l.end()), l.end());
  const std::vector<int> r = complement_indices(psi.dims(), l);
  if (l.empty() || r.empty()) {
    throw std::invalid_argument("cut: both sides must be nonempty");
  }
  // Arrange as (left, right) prefix order, then reuse the prefix path.
  std::vector<int> order = l;
  order.insert(order.end(), r.begin(), r.end());
  int dl = 1, dr = 1;
  for (int k : l) dl *= psi.dims().dim(k);
  for (int k : r) dr *= psi.dims().dim(k);
  const PureState p = permute_subsystems(psi, order);
  return cut_spectrum_prefix(p.amplitudes(), dl, dr);
}

// ---- random states ----

PureState haar_random_pure(const DimVector& dims, Rng& rng) {
  Vector v(dims.total());
  for (int i = 0; i < dims.total(); ++i) {
    v(i) = rng.complex_normal();
  }
  v /= v.norm();
  return PureState::unchecked(std::move(v), dims);
}

PureState haar_random_pure(const DimVector& dims, std::uint64_t seed) {
  Rng rng(seed);
  return haar_random_pure(dims, rng);
}

DensityMatrix random_density(const DimVector& dims, int rank, Rng& rng) {
  const int n = dims.total();
  if (rank < 1 || rank > n) {
    throw std::invalid_argument("rank: must satisfy 1 <= rank <= total_dim");
  }
  Matrix g(n, rank);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < rank; ++j) {
      g(i, j) = rng.complex_normal();
    }
  }
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + Matrix(m.adjoint()));  // scrub rounding asymmetry
  return DensityMatrix::unchecked(std::move(m), dims);
}

DensityMatrix random_density(const DimVector& dims, int rank,
                             std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dims, rank, rng);
}

// ---- embedding and permutation ----

DensityMatrix embed(const DensityMatrix& rho, const DimVector& target) {
  if (target.count() != rho.dims().count()) {
    throw std::invalid_argument("embed: subsystem count mismatch");
  }
  for (int k = 0; k < target.count(); ++k) {
    if (target.dim(k) < rho.dims().dim(k)) {
      throw std::invalid_argument("embed: target dims must not shrink");
    }
  }
  const int n = rho.total();
  const std::vector<int> old_strides = subsystem_strides(rho.dims());
  const std::vector<int> new_strides = subsystem_strides(target);
  std::vector<int> map(static_cast<std::size_t>(n));
  for (int idx = 0; idx < n; ++idx) {
    int rem = idx, out = 0;
    for (int k = 0; k < rho.dims().count(); ++k) {
      const int v = rem / old_strides[static_cast<std::size_t>(k)];
      rem %= old_strides[static_cast<std::size_t>(k)];
      out += v * new_strides[static_cast<std::size_t>(k)];
    }
    map[static_cast<std::size_t>(idx)] = out;
  }
  Matrix big = Matrix::Zero(target.total(), target.total());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      big(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) =
          rho.matrix()(i, j);
    }
  }
  return DensityMatrix::unchecked(std::move(big), target);
}

static std::vector<int> permutation_map(const DimVector& dims,
                                        const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != dims.count()) {
    throw std::invalid_argument("order: must name every subsystem exactly once");
  }
  std::vector<bool> seen(static_cast<std::size_t>(dims.count()), false);
  for (int k : order) {
    if (k < 0 || k >= dims.count() || seen[static_cast<std::size_t>(k)]) {
      throw std::invalid_argument("order: must be a permutation of subsystems");
    }
    seen[static_cast<std::size_t>(k)] = true;
  }
  const std::vector<int> old_strides = subsystem_strides(dims);
  std::vector<int> new_dims;
  for (int k : order) new_dims.push_back(dims.dim(k));
  const std::vector<int> new_strides = subsystem_strides(DimVector(new_dims));

  const int n = dims.total();
  std::vector<int> map(static_cast<std::size_t>(n));
  for (int idx = 0; idx < n; ++idx) {
    int out = 0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const int k = order[pos];
      const int v = (idx / old_strides[static_cast<std::size_t>(k)]) % dims.dim(k);
      out += v * new_strides[pos];
    }
    map[static_cast<std::size_t>(idx)] = out;
  }
  return map;
}

PureState permute_subsystems(const PureState& psi,
                             const std::vector<int>& order) {
  const std::vector<int> map = permutation_map(psi.dims(), order);
  Vector out(psi.total());
  for (int i = 0; i < psi.total(); ++i) {
    out(map[static_cast<std::size_t>(i)]) = psi.amplitudes()(i);
  }
  std::vector<int> nd;
  for (int k : order) nd.push_back(psi.dims().dim(k));
  return PureState::unchecked(std::move(out), DimVector(std::move(nd)));
}

DensityMatrix permute_subsystems(const DensityMatrix& rho,
                                 const std::vector<int>& order) {
  const std::vector<int> map = permutation_map(rho.dims(), order);
  Matrix out(rho.total(), rho.total());
  for (int i = 0; i < rho.total(); ++i) {
    for (int j = 0; j < rho.total(); ++j) {
      out(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) =
          rho.matrix()(i, j);
    }
  }
  std::vector<int> nd;
  for (int k : order) nd.push_back(rho.dims().dim(k));
  return DensityMatrix::unchecked(std::move(out), DimVector(std::move(nd)));
}

// ---- named states ----

PureState basis_pure(const DimVector& dims, int index) {
  if (index < 0 || index >= dims.total()) {
    throw std::out_of_range("basis index out of range");
  }
  Vector v = Vector::Zero(dims.total());
  v(index) = 1.0;
  return PureState::unchecked(std::move(v), dims);
}

DensityMatrix maximally_mixed(const DimVector& dims) {
  return DensityMatrix::unchecked(
      Matrix::Identity(dims.total(), dims.total()) / dims.total(), dims);
}

PureState ghz_state(int parties) {
  DimVector dims(std::vector<int>(static_cast<std::size_t>(parties), 2));
  Vector v = Vector::Zero(dims.total());
  const double a = 1.0 / std::sqrt(2.0);
  v(0) = a;
  v(dims.total() - 1) = a;
  return PureState::unchecked(std::move(v), dims);
}

PureState bell_state() { return ghz_state(2); }

PureState w_state(int parties) {
  DimVector dims(std::vector<int>(static_cast<std::size_t>(parties), 2));
  Vector v = Vector::Zero(dims.total());
  const double a = 1.0 / std::sqrt(static_cast<double>(parties));
  for (int k = 0; k < parties; ++k) {
    v(1 << (parties - 1 - k)) = a;
  }
  return PureState::unchecked(std::move(v), dims);
}

}  // namespace qpoly
