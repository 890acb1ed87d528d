#include "qpoly/ccq.hpp"

#include <cmath>
#include <stdexcept>

namespace qpoly {

static constexpr double kPi = 3.14159265358979323846;

std::pair<WeylPair, FourierBasis> build_weyl(const EigenDecomposition& eig) {
  const Matrix& e = eig.eigenvectors;
  const int d = static_cast<int>(e.cols());
  if (d < 2) {
    throw std::invalid_argument("build_weyl: basis dimension must be >= 2");
  }
  const double ortho = (e.adjoint() * e - Matrix::Identity(d, d)).norm();
  if (ortho > 1e-10) {
    throw std::invalid_argument("build_weyl: basis is not orthonormal");
  }
  WeylPair w;
  w.d = d;
  w.omega = std::polar(1.0, 2.0 * kPi / d);
  w.basis = e;
  Matrix zdiag = Matrix::Zero(d, d);
  Matrix shift = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    zdiag(j, j) = std::pow(w.omega, j);
    shift((j + 1) % d, j) = 1.0;
  }
  w.Z = e * zdiag * e.adjoint();
  w.X = e * shift * e.adjoint();

  FourierBasis f;
  Matrix fmat(d, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < d; ++j) {
      fmat(k, j) = scale * std::polar(1.0, 2.0 * kPi * j * k / d);
    }
  }
  f.vectors = e * fmat;
  return {std::move(w), std::move(f)};
}

static Matrix dephase_in_basis(const Matrix& sigma, const Matrix& basis) {
  const int d = static_cast<int>(basis.cols());
  Matrix out = Matrix::Zero(sigma.rows(), sigma.cols());
  for (int i = 0; i < d; ++i) {
    const Vector v = basis.col(i);
    const cxd w = (v.adjoint() * sigma * v)(0);
    out += w * (v * v.adjoint());
  }
  return out;
}

std::pair<Matrix, Matrix> dephase_channels(const DensityMatrix& sigma,
                                           const WeylPair& weyl) {
  if (sigma.total() != weyl.d) {
    throw std::invalid_argument("dephase_channels: dimension mismatch");
  }
  Matrix fmat(weyl.d, weyl.d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(weyl.d));
  for (int k = 0; k < weyl.d; ++k) {
    for (int j = 0; j < weyl.d; ++j) {
      fmat(k, j) = scale * std::polar(1.0, 2.0 * kPi * j * k / weyl.d);
    }
  }
  const Matrix fourier = weyl.basis * fmat;
  return {dephase_in_basis(sigma.matrix(), weyl.basis),
          dephase_in_basis(sigma.matrix(), fourier)};
}

// ---- CcqState ----

static void validate_ccq_blocks(int d, const DimVector& ab_dims,
                                const std::vector<Matrix>& blocks) {
  if (ab_dims.count() != 2 || ab_dims.dim(0) != d || ab_dims.dim(1) != d) {
    throw std::invalid_argument("ccq: quantum part must be two qudits of dimension d");
  }
  if (static_cast<int>(blocks.size()) != d * d) {
    throw std::invalid_argument("ccq: expected d^2 blocks");
  }
  for (const Matrix& b : blocks) {
    if (b.rows() != d * d || b.cols() != d * d) {
      throw std::invalid_argument("ccq: each block must act on the AB pair");
    }
  }
}

CcqState CcqState::paper_form(int d, DimVector ab_dims,
                              std::vector<Matrix> blocks) {
  validate_ccq_blocks(d, ab_dims, blocks);
  CcqState s;
  s.d_ = d;
  s.form_ = Form::paper;
  s.ab_dims_ = std::move(ab_dims);
  s.blocks_ = std::move(blocks);
  return s;
}

CcqState CcqState::general_form(int d, DimVector ab_dims,
                                std::vector<Matrix> blocks) {
  validate_ccq_blocks(d, ab_dims, blocks);
  CcqState s;
  s.d_ = d;
  s.form_ = Form::general;
  s.ab_dims_ = std::move(ab_dims);
  s.blocks_ = std::move(blocks);
  return s;
}

const Matrix& CcqState::block(int x, int y) const {
  if (x < 0 || x >= d_ || y < 0 || y >= d_) {
    throw std::out_of_range("ccq block index out of range");
  }
  return blocks_[static_cast<std::size_t>(x * d_ + y)];
}

DensityMatrix CcqState::assemble() const {
  const int n = d_ * d_ * d_ * d_;
  const int ab = d_ * d_;
  Matrix out = Matrix::Zero(n, n);
  const double w = 1.0 / ab;
  for (int x = 0; x < d_; ++x) {
    for (int y = 0; y < d_; ++y) {
      const int base = (x * d_ + y) * ab;
      out.block(base, base, ab, ab) = w * block(x, y);
    }
  }
  return DensityMatrix::unchecked(std::move(out),
                                  DimVector({d_, d_, d_, d_}));
}

CcqState random_general_ccq(int d, Rng& rng) {
  const DimVector ab({d, d});
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(d * d));
  for (int i = 0; i < d * d; ++i) {
    blocks.push_back(random_density(ab, d * d, rng).matrix());
  }
  return CcqState::general_form(d, ab, std::move(blocks));
}

// ---- construction from a bipartite state ----

DensityMatrix embed_square(const DensityMatrix& rho_ab) {
  if (rho_ab.dims().count() != 2) {
    throw std::invalid_argument("ccq: input must be bipartite");
  }
  const int d = std::max(rho_ab.dims().dim(0), rho_ab.dims().dim(1));
  if (rho_ab.dims().dim(0) == d && rho_ab.dims().dim(1) == d) {
    return rho_ab;
  }
  return embed(rho_ab, DimVector({d, d}));
}

static Matrix matrix_power(const Matrix& u, int k) {
  Matrix out = Matrix::Identity(u.rows(), u.cols());
  for (int i = 0; i < k; ++i) out = out * u;
  return out;
}

CcqState build_ccq(const DensityMatrix& rho_ab) {
  const DensityMatrix rho = embed_square(rho_ab);
  const int d = rho.dims().dim(0);
  const DensityMatrix rho_b = partial_trace(rho, {1});
  const auto [weyl, fourier] = build_weyl(eigendecompose(rho_b));
  (void)fourier;

  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(d * d));
  for (int x = 0; x < d; ++x) {
    const Matrix xp = matrix_power(weyl.X, x);
    for (int y = 0; y < d; ++y) {
      const Matrix u = xp * matrix_power(weyl.Z, y);
      // I_A (x) U acting on B
      Matrix k = Matrix::Zero(d * d, d * d);
      for (int a = 0; a < d; ++a) {
        k.block(a * d, a * d, d, d) = u;
      }
      blocks.push_back(k * rho.matrix() * k.adjoint());
    }
  }
  return CcqState::paper_form(d, rho.dims(), std::move(blocks));
}

InducedEnsembles induced_ensembles(const DensityMatrix& rho_ab) {
  const DensityMatrix rho = embed_square(rho_ab);
  const int d = rho.dims().dim(0);
  const DensityMatrix rho_b = partial_trace(rho, {1});
  const auto [weyl, fourier] = build_weyl(eigendecompose(rho_b));

  const DimVector adims({d});
  const Matrix& m = rho.matrix();
  auto members_for = [&](const Matrix& basis) {
    std::vector<std::pair<double, DensityMatrix>> members;
    for (int i = 0; i < d; ++i) {
      const Vector v = basis.col(i);
      Matrix t(d, d);
      for (int a = 0; a < d; ++a) {
        for (int ap = 0; ap < d; ++ap) {
          t(a, ap) = (v.adjoint() * m.block(a * d, ap * d, d, d) * v)(0);
        }
      }
      double p = t.trace().real();
      if (p < 1e-13) {
        // zero-probability outcome: keep the slot, fixed placeholder state
        members.emplace_back(0.0, maximally_mixed(adims));
      } else {
        members.emplace_back(p, DensityMatrix::unchecked(t / p, adims));
      }
    }
    // scrub rounding so the weights form an exact distribution
    double sum = 0.0;
    for (auto& [p, s] : members) sum += p;
    for (auto& [p, s] : members) p /= sum;
    return members;
  };

  return InducedEnsembles{Ensemble(members_for(weyl.basis)),
                          Ensemble(members_for(fourier.vectors))};
}

// ---- closed forms ----

IqTriple closed_form_iq(const DensityMatrix& rho_ab,
                        const EntropicParameter& q) {
  if (q.q < 1.0 && !q.limit_branch) {
    throw std::invalid_argument("closed_form_iq: defined for q >= 1 only");
  }
  const DensityMatrix rho = embed_square(rho_ab);
  const int d = rho.dims().dim(0);
  const double s_a = tsallis_quantum(partial_trace(rho, {0}), q);
  const double s_b = tsallis_quantum(partial_trace(rho, {1}), q);
  const double s_ab = tsallis_quantum(rho, q);
  const InducedEnsembles ens = induced_ensembles(rho);
  const double chi0 = tsallis_q_difference(ens.e0, q);
  const double chi1 = tsallis_q_difference(ens.e1, q);

  IqTriple out;
  if (q.limit_branch) {
    const double logd = std::log(static_cast<double>(d));
    out.xy_ab = logd + s_a - s_ab;
    out.x_ab = logd - s_b + chi0;
    out.y_ab = chi1;
  } else {
    const double c = std::pow(static_cast<double>(d), 1.0 - q.q);
    const double h = (c - 1.0) / (1.0 - q.q);  // H_q of the uniform d-point law
    out.xy_ab = h + c * s_a - c * c * s_ab;
    out.x_ab = h - c * s_b + c * chi0;
    out.y_ab = (1.0 - c) * h + c * chi1;
  }
  return out;
}

double verify_closed_forms(const DensityMatrix& rho_ab,
                           const EntropicParameter& q) {
  const IqTriple closed = closed_form_iq(rho_ab, q);
  const CcqState ccq = build_ccq(rho_ab);
  const int d = ccq.d();

  IqTriple direct;
  if (d <= 4) {
    const DensityMatrix omega = ccq.assemble();
    direct.xy_ab = tsallis_mutual(omega, {0, 1}, q);
    direct.x_ab = tsallis_mutual(partial_trace(omega, {0, 2, 3}), {0}, q);
    direct.y_ab = tsallis_mutual(partial_trace(omega, {1, 2, 3}), {0}, q);
  } else {
    // The ccq state is block diagonal in the flags; its entropies follow
    // from the block spectra without assembling the d^4 matrix.
    const double inv_d2 = 1.0 / (d * d);
    std::vector<double> spec_omega;
    Matrix avg = Matrix::Zero(d * d, d * d);
    std::vector<double> spec_xab, spec_yab;
    for (int x = 0; x < d; ++x) {
      Matrix row_sum = Matrix::Zero(d * d, d * d);
      for (int y = 0; y < d; ++y) {
        const Matrix& b = ccq.block(x, y);
        avg += inv_d2 * b;
        row_sum += b / d;
        const EigenDecomposition e = eigendecompose_hermitian(b);
        for (double l : e.eigenvalues) spec_omega.push_back(inv_d2 * l);
      }
      const EigenDecomposition e = eigendecompose_hermitian(row_sum);
      for (double l : e.eigenvalues) spec_xab.push_back(l / d);
    }
    for (int y = 0; y < d; ++y) {
      Matrix col_sum = Matrix::Zero(d * d, d * d);
      for (int x = 0; x < d; ++x) col_sum += ccq.block(x, y) / d;
      const EigenDecomposition e = eigendecompose_hermitian(col_sum);
      for (double l : e.eigenvalues) spec_yab.push_back(l / d);
    }
    const std::vector<double> unif_d(static_cast<std::size_t>(d), 1.0 / d);
    const std::vector<double> unif_d2(static_cast<std::size_t>(d * d), inv_d2);
    const double s_ab = tsallis_of_matrix(avg, q);
    direct.xy_ab = tsallis_of_spectrum(unif_d2, q) + s_ab -
                   tsallis_of_spectrum(spec_omega, q);
    direct.x_ab = tsallis_of_spectrum(unif_d, q) + s_ab -
                  tsallis_of_spectrum(spec_xab, q);
    direct.y_ab = tsallis_of_spectrum(unif_d, q) + s_ab -
                  tsallis_of_spectrum(spec_yab, q);
  }

  double dev = std::abs(closed.xy_ab - direct.xy_ab);
  dev = std::max(dev, std::abs(closed.x_ab - direct.x_ab));
  dev = std::max(dev, std::abs(closed.y_ab - direct.y_ab));
  return dev;
}

}  // namespace qpoly
