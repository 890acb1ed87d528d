#pragma once

#include <utility>
#include <vector>

#include "qpoly/state.hpp"

namespace qpoly {

inline constexpr double kLimitBranchTol = 1e-9;

/// Entropic order q (also used as the Renyi order alpha). Within 1e-9 of 1
/// the limit formulas (natural-log entropies) are used instead of the
/// singular quotients.
struct EntropicParameter {
  double q = 1.0;
  bool limit_branch = true;

  explicit EntropicParameter(double q_value);
};

/// Probability-weighted list of density matrices on identical dims.
class Ensemble {
 public:
  explicit Ensemble(std::vector<std::pair<double, DensityMatrix>> entries);

  const std::vector<std::pair<double, DensityMatrix>>& entries() const {
    return entries_;
  }
  std::size_t size() const { return entries_.size(); }
  DensityMatrix average() const;

 private:
  std::vector<std::pair<double, DensityMatrix>> entries_;
};

/// Generalized logarithm (x^(1-q) - 1)/(1-q); natural log on the limit
/// branch. Throws for x <= 0.
double q_log(double x, const EntropicParameter& q);

/// Tsallis entropy of a spectrum or probability vector; entries in
/// [-1e-12, 0] are treated as zero.
double tsallis_of_spectrum(const std::vector<double>& lambda,
                           const EntropicParameter& q);

double tsallis_classical(const ProbabilityDistribution& p,
                         const EntropicParameter& q);

double tsallis_quantum(const DensityMatrix& rho, const EntropicParameter& q);
/// Same, for a raw Hermitian matrix (used on internal block structures).
double tsallis_of_matrix(const Matrix& m, const EntropicParameter& q);

double von_neumann(const DensityMatrix& rho);

double renyi_entropy(const DensityMatrix& rho, const EntropicParameter& alpha);
double renyi_of_spectrum(const std::vector<double>& lambda,
                         const EntropicParameter& alpha);

/// S_q(rho (x) sigma) - S_q(rho) - S_q(sigma) - (1-q) S_q(rho) S_q(sigma).
/// Vanishes identically; the returned value is the numerical residue.
double pseudoadditivity_defect(const DensityMatrix& rho,
                               const DensityMatrix& sigma,
                               const EntropicParameter& q);

/// Both sides of the joint entropy identity for explicitly flagged mixtures:
/// lhs = S_q(sum_i p_i rho_i (x) |i><i|), rhs = sum_i p_i^q S_q(rho_i) +
/// H_q(P). On the limit branch the q-expectation weight p_i^q becomes p_i.
std::pair<double, double> joint_entropy_flagged(
    const ProbabilityDistribution& p, const std::vector<DensityMatrix>& states,
    const EntropicParameter& q);

/// Same identity for states with mutually orthogonal supports; throws if any
/// pair overlaps beyond 1e-10 in Frobenius norm.
std::pair<double, double> orthogonal_support_entropy(
    const ProbabilityDistribution& p, const std::vector<DensityMatrix>& states,
    const EntropicParameter& q);

/// Quantum relative entropy S(rho || sigma) in nats; +infinity when the
/// support of rho leaks outside the support of sigma (threshold 1e-10).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Holevo quantity chi = S(avg) - sum_i p_i S(rho_i).
double holevo_chi(const Ensemble& e);

/// Tsallis-q difference chi_q = S_q(avg) - sum_i p_i^q S_q(rho_i).
/// Nonnegative for q >= 1; no sign contract below q = 1.
double tsallis_q_difference(const Ensemble& e, const EntropicParameter& q);

/// S_q(rho_L) + S_q(rho_R) - S_q(rho) across the cut (left | complement).
/// Defined for q >= 1 only; throws std::invalid_argument otherwise.
double tsallis_mutual(const DensityMatrix& rho, const std::vector<int>& cut,
                      const EntropicParameter& q);

}  // namespace qpoly
