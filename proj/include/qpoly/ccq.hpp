#pragma once

#include <utility>
#include <vector>

#include "qpoly/entropy.hpp"
#include "qpoly/state.hpp"

namespace qpoly {

/// Generalized Pauli (clock/shift) pair built in a given orthonormal basis.
/// Z = sum_j w^j |e_j><e_j|, X = sum_j |e_{j+1 mod d}><e_j|, w = exp(2 pi i/d).
struct WeylPair {
  int d = 0;
  Matrix Z;
  Matrix X;
  cxd omega;
  Matrix basis;  // columns |e_j>
};

/// Fourier transform of the basis: |et_j> = d^{-1/2} sum_k w^{jk} |e_k>.
/// Mutually unbiased with the defining basis.
struct FourierBasis {
  Matrix vectors;  // columns |et_j>
};

/// Builds the Weyl pair and Fourier basis from the eigenbasis of a state
/// (the deterministic eigendecompose convention makes this reproducible).
/// Throws if the basis is not orthonormal.
std::pair<WeylPair, FourierBasis> build_weyl(const EigenDecomposition& eig);

/// The two dephasing channels: M0 kills coherences in the defining basis,
/// M1 in the Fourier basis. Equal to the Z- and X-twirls respectively.
std::pair<Matrix, Matrix> dephase_channels(const DensityMatrix& sigma,
                                           const WeylPair& weyl);

/// Four-qudit ccq state: classical flags X, Y correlated with Weyl twirls of
/// a bipartite quantum pair AB. Blocks are stored with unit trace; the
/// assembled state weighs each by 1/d^2.
class CcqState {
 public:
  enum class Form { paper, general };

  static CcqState paper_form(int d, DimVector ab_dims,
                             std::vector<Matrix> blocks);
  static CcqState general_form(int d, DimVector ab_dims,
                               std::vector<Matrix> blocks);

  int d() const { return d_; }
  Form form() const { return form_; }
  const DimVector& ab_dims() const { return ab_dims_; }
  const Matrix& block(int x, int y) const;
  const std::vector<Matrix>& blocks() const { return blocks_; }

  /// Full d^4-dimensional density matrix with dims [d, d, d, d].
  DensityMatrix assemble() const;

 private:
  int d_ = 0;
  Form form_ = Form::paper;
  DimVector ab_dims_;
  std::vector<Matrix> blocks_;  // row-major over (x, y), each trace one
};

/// Random general-form ccq state (independent random blocks), for the
/// subadditivity sweeps.
CcqState random_general_ccq(int d, Rng& rng);

/// Ensembles of subsystem A induced by measuring B in the eigenbasis of
/// rho_B (E0 = {lambda_i, sigma_A^i}) and in its Fourier basis
/// (E1 = {1/d, tau_A^j}). Zero-probability outcomes keep their slot with a
/// maximally mixed placeholder so the cardinality is always d.
struct InducedEnsembles {
  Ensemble e0;
  Ensemble e1;
};

/// Embed a bipartite state into equal local dimensions max(d_A, d_B) by
/// zero-padding. Identity when the dims already agree.
DensityMatrix embed_square(const DensityMatrix& rho_ab);

CcqState build_ccq(const DensityMatrix& rho_ab);

InducedEnsembles induced_ensembles(const DensityMatrix& rho_ab);

struct IqTriple {
  double xy_ab = 0.0;
  double x_ab = 0.0;
  double y_ab = 0.0;
};

/// Closed-form Tsallis-q mutual entropies of the ccq state and its X/Y
/// reductions, expressed through S_q of rho_A, rho_B, rho_AB and the
/// Tsallis-q differences of the induced ensembles. Requires q >= 1.
IqTriple closed_form_iq(const DensityMatrix& rho_ab,
                        const EntropicParameter& q);

/// Assembles the ccq state explicitly, evaluates the three mutual entropies
/// directly with tsallis_mutual, and returns the maximum absolute deviation
/// from the closed forms. For d > 4 the direct route uses the exact
/// block-diagonal spectra instead of the d^4 x d^4 matrix.
double verify_closed_forms(const DensityMatrix& rho_ab,
                           const EntropicParameter& q);

}  // namespace qpoly
