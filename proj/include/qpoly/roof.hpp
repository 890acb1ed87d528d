#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qpoly/ccq.hpp"
#include "qpoly/entropy.hpp"
#include "qpoly/state.hpp"

namespace qpoly {

struct OptimizerBudget {
  int restarts = 64;
  int samples_per_restart = 2;
  int refine_steps = 200;
  std::uint64_t seed = 20240901;
};

/// Pure-state functional evaluated on the Schmidt spectrum across a cut.
struct PureFunctional {
  enum class Kind { tsallis, renyi, tangle };
  Kind kind = Kind::tsallis;
  double param = 2.0;

  static PureFunctional tsallis(double q) { return {Kind::tsallis, q}; }
  static PureFunctional renyi(double alpha) { return {Kind::renyi, alpha}; }
  static PureFunctional tangle() { return {Kind::tangle, 2.0}; }

  /// Value on a pure state whose marginal has the given spectrum.
  double eval_spectrum(const std::vector<double>& lambda) const;
};

/// Certificate for roof values: a finite pure-state decomposition that
/// reassembles the target within 1e-9.
class PureDecomposition {
 public:
  PureDecomposition(std::vector<std::pair<double, PureState>> members,
                    const DensityMatrix& target);
  static PureDecomposition unchecked(
      std::vector<std::pair<double, PureState>> members);

  const std::vector<std::pair<double, PureState>>& members() const {
    return members_;
  }
  /// sum_i p_i f(|psi_i>) across the cut.
  double average_value(const PureFunctional& f,
                       const std::vector<int>& cut) const;
  /// sum_i p_i^q f(|psi_i>) (the q-expectation average).
  double q_expectation_value(const PureFunctional& f,
                             const std::vector<int>& cut,
                             const EntropicParameter& q) const;
  DensityMatrix reassemble() const;

 private:
  PureDecomposition() = default;
  std::vector<std::pair<double, PureState>> members_;
};

/// Rank-1 POVM {M_x = w_x w_x^dag} with sum_x M_x = I.
class RankOneMeasurement {
 public:
  /// From operator list; validates completeness (1e-10) and rank one
  /// (second eigenvalue <= 1e-10 each).
  explicit RankOneMeasurement(const std::vector<Matrix>& operators);
  /// From defining vectors (columns); validates completeness.
  static RankOneMeasurement from_vectors(Matrix vectors);

  int outcomes() const { return static_cast<int>(vectors_.cols()); }
  int dim() const { return static_cast<int>(vectors_.rows()); }
  const Matrix& vectors() const { return vectors_; }
  std::vector<Matrix> operators() const;

 private:
  RankOneMeasurement() = default;
  Matrix vectors_;  // columns w_x
};

enum class BoundDirection { upper, lower };

/// Outcome of a roof optimization. Numerical roof search is one-sided:
/// convex (min) roofs return upper bounds, concave (max) roofs and
/// assistance quantities return lower bounds. The certificate re-evaluates
/// to `value` and is the proof of the bound.
struct RoofResult {
  double value = 0.0;
  BoundDirection bound_direction = BoundDirection::upper;
  std::optional<PureDecomposition> decomposition;
  std::optional<RankOneMeasurement> measurement;
  int restarts_used = 0;
  bool converged = false;
};

/// S_q of the marginal across the cut (the pure-state Tsallis entanglement).
double tsallis_entanglement_pure(const PureState& psi,
                                 const std::vector<int>& cut,
                                 const EntropicParameter& q);
double renyi_entanglement_pure(const PureState& psi,
                               const std::vector<int>& cut,
                               const EntropicParameter& alpha);
/// 4 det(rho_A); the cut side must be a single qubit.
double tangle_pure(const PureState& psi, const std::vector<int>& cut_a);

/// All pure-state decompositions of rho arise as |phi_x> ~ sum_i V_xi
/// sqrt(lambda_i) |e_i> for an m x r isometry V (m >= rank). Members with
/// probability < 1e-12 are dropped.
PureDecomposition decomposition_from_isometry(const EigenDecomposition& eig,
                                              const Matrix& isometry,
                                              const DimVector& dims);

/// Convex roof (minimum average) of the functional over sampled
/// decompositions; returns an upper bound with certificate.
RoofResult convex_roof(const DensityMatrix& rho, const std::vector<int>& cut,
                       const PureFunctional& f, const OptimizerBudget& budget);

/// Concave roof (maximum average): assistance quantities. Lower bound.
RoofResult concave_roof(const DensityMatrix& rho, const std::vector<int>& cut,
                        const PureFunctional& f, const OptimizerBudget& budget);

/// Tsallis-q difference of the ensemble induced on A by the measurement
/// applied to subsystem B of a bipartite state.
double measurement_q_difference(const DensityMatrix& rho_ab,
                                const RankOneMeasurement& m,
                                const EntropicParameter& q);

/// One-way unlocalizable q-entanglement: minimum chi_q over sampled rank-1
/// measurements on B (upper bound, measurement certificate). The eigenbasis
/// and Fourier-basis measurements of rho_B are always included as
/// candidates. Requires q >= 1.
RoofResult unlocalizable_q_entanglement(const DensityMatrix& rho_ab,
                                        const EntropicParameter& q,
                                        const OptimizerBudget& budget);

/// The 2d-outcome measurement {|e_i><e_i|/2, |et_j><et_j|/2} mixing the
/// eigenbasis of rho_B with its Fourier basis (on the square-embedded
/// space).
RankOneMeasurement qb_split_measurement(const DensityMatrix& rho_ab);

/// (chi_q(E0) + chi_q(E1))/2: the bound this measurement certifies on the
/// unlocalizable q-entanglement, via the two projective halves.
double qb_split_chi_average(const DensityMatrix& rho_ab,
                            const EntropicParameter& q);

}  // namespace qpoly
