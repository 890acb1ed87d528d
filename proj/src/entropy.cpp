#include "qpoly/entropy.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qpoly {

EntropicParameter::EntropicParameter(double q_value) : q(q_value) {
  if (!(q > 0.0)) {
    throw std::invalid_argument("q: entropic parameter must be positive");
  }
  limit_branch = std::abs(q - 1.0) < kLimitBranchTol;
}

Ensemble::Ensemble(std::vector<std::pair<double, DensityMatrix>> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw std::invalid_argument("ensemble: must contain at least one member");
  }
  std::vector<double> p;
  p.reserve(entries_.size());
  for (const auto& [prob, rho] : entries_) {
    p.push_back(prob);
    if (!(rho.dims() == entries_.front().second.dims())) {
      throw std::invalid_argument("ensemble: members must share dims");
    }
  }
  ProbabilityDistribution check(std::move(p));  // validates
}

DensityMatrix Ensemble::average() const {
  Matrix m = Matrix::Zero(entries_.front().second.total(),
                          entries_.front().second.total());
  for (const auto& [prob, rho] : entries_) {
    m += prob * rho.matrix();
  }
  return DensityMatrix::unchecked(std::move(m), entries_.front().second.dims());
}

double q_log(double x, const EntropicParameter& q) {
  if (!(x > 0.0)) {
    throw std::invalid_argument("q_log: argument must be positive");
  }
  if (q.limit_branch) {
    return std::log(x);
  }
  return (std::pow(x, 1.0 - q.q) - 1.0) / (1.0 - q.q);
}

double tsallis_of_spectrum(const std::vector<double>& lambda,
                           const EntropicParameter& q) {
  if (q.limit_branch) {
    double h = 0.0;
    for (double l : lambda) {
      if (l > 0.0) h -= l * std::log(l);
    }
    return h;
  }
  double sum_q = 0.0;
  for (double l : lambda) {
    if (l > 0.0) sum_q += std::pow(l, q.q);
  }
  return (1.0 - sum_q) / (q.q - 1.0);
}

double tsallis_classical(const ProbabilityDistribution& p,
                         const EntropicParameter& q) {
  return tsallis_of_spectrum(p.probs, q);
}

static std::vector<double> spectrum_of(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(),
                         es.eigenvalues().data() + es.eigenvalues().size());
  return ev;
}

double tsallis_of_matrix(const Matrix& m, const EntropicParameter& q) {
  return tsallis_of_spectrum(spectrum_of(m), q);
}

double tsallis_quantum(const DensityMatrix& rho, const EntropicParameter& q) {
  return tsallis_of_matrix(rho.matrix(), q);
}

double von_neumann(const DensityMatrix& rho) {
  return tsallis_quantum(rho, EntropicParameter(1.0));
}

double renyi_of_spectrum(const std::vector<double>& lambda,
                         const EntropicParameter& alpha) {
  if (alpha.limit_branch) {
    return tsallis_of_spectrum(lambda, alpha);
  }
  double sum_a = 0.0;
  for (double l : lambda) {
    if (l > 0.0) sum_a += std::pow(l, alpha.q);
  }
  return std::log(sum_a) / (1.0 - alpha.q);
}

double renyi_entropy(const DensityMatrix& rho, const EntropicParameter& alpha) {
  return renyi_of_spectrum(spectrum_of(rho.matrix()), alpha);
}

double pseudoadditivity_defect(const DensityMatrix& rho,
                               const DensityMatrix& sigma,
                               const EntropicParameter& q) {
  const double sq_r = tsallis_quantum(rho, q);
  const double sq_s = tsallis_quantum(sigma, q);
  const double sq_rs = tsallis_quantum(tensor_product(rho, sigma), q);
  return sq_rs - sq_r - sq_s - (1.0 - q.q) * sq_r * sq_s;
}

static double q_weight(double p, const EntropicParameter& q) {
  if (p <= 0.0) return 0.0;
  return q.limit_branch ? p : std::pow(p, q.q);
}

std::pair<double, double> joint_entropy_flagged(
    const ProbabilityDistribution& p, const std::vector<DensityMatrix>& states,
    const EntropicParameter& q) {
  if (p.size() != states.size()) {
    throw std::invalid_argument("flagged ensemble: probs/states size mismatch");
  }
  for (const auto& s : states) {
    if (!(s.dims() == states.front().dims())) {
      throw std::invalid_argument("flagged ensemble: states must share dims");
    }
  }
  const int d = states.front().total();
  const int k = static_cast<int>(states.size());
  // sum_i p_i rho_i (x) |i><i| on C^d (x) C^k, flag as the second factor.
  Matrix block = Matrix::Zero(d * k, d * k);
  for (int i = 0; i < k; ++i) {
    const Matrix& s = states[static_cast<std::size_t>(i)].matrix();
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        block(a * k + i, b * k + i) = p.probs[static_cast<std::size_t>(i)] * s(a, b);
      }
    }
  }
  const double lhs = tsallis_of_matrix(block, q);
  double rhs = tsallis_classical(p, q);
  for (int i = 0; i < k; ++i) {
    rhs += q_weight(p.probs[static_cast<std::size_t>(i)], q) *
           tsallis_quantum(states[static_cast<std::size_t>(i)], q);
  }
  return {lhs, rhs};
}

std::pair<double, double> orthogonal_support_entropy(
    const ProbabilityDistribution& p, const std::vector<DensityMatrix>& states,
    const EntropicParameter& q) {
  if (p.size() != states.size()) {
    throw std::invalid_argument("ensemble: probs/states size mismatch");
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      const double overlap =
          (states[i].matrix() * states[j].matrix()).norm();
      if (overlap > kSupportTol) {
        throw std::invalid_argument(
            "states: supports are not mutually orthogonal (||rho_i rho_j|| > 1e-10)");
      }
    }
  }
  Matrix mix = Matrix::Zero(states.front().total(), states.front().total());
  for (std::size_t i = 0; i < states.size(); ++i) {
    mix += p.probs[i] * states[i].matrix();
  }
  const double lhs = tsallis_of_matrix(mix, q);
  double rhs = tsallis_classical(p, q);
  for (std::size_t i = 0; i < states.size(); ++i) {
    rhs += q_weight(p.probs[i], q) * tsallis_quantum(states[i], q);
  }
  return {lhs, rhs};
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (!(rho.dims() == sigma.dims())) {
    throw std::invalid_argument("relative_entropy: dims mismatch");
  }
  const EigenDecomposition er = eigendecompose(rho);
  const EigenDecomposition es = eigendecompose(sigma);

  double tr_rho_log_rho = 0.0;
  for (double l : er.eigenvalues) {
    if (l > 0.0) tr_rho_log_rho += l * std::log(l);
  }
  double tr_rho_log_sigma = 0.0;
  for (std::size_t j = 0; j < es.eigenvalues.size(); ++j) {
    const double mu = es.eigenvalues[j];
    const double w =
        (es.eigenvectors.col(static_cast<Eigen::Index>(j)).adjoint() *
         rho.matrix() * es.eigenvectors.col(static_cast<Eigen::Index>(j)))(0)
            .real();
    if (mu < 1e-12) {
      if (w > kSupportTol) {
        return std::numeric_limits<double>::infinity();
      }
      continue;
    }
    tr_rho_log_sigma += w * std::log(mu);
  }
  return tr_rho_log_rho - tr_rho_log_sigma;
}

double holevo_chi(const Ensemble& e) {
  double s = von_neumann(e.average());
  for (const auto& [prob, rho] : e.entries()) {
    s -= prob * von_neumann(rho);
  }
  return s;
}

double tsallis_q_difference(const Ensemble& e, const EntropicParameter& q) {
  double s = tsallis_quantum(e.average(), q);
  for (const auto& [prob, rho] : e.entries()) {
    s -= q_weight(prob, q) * tsallis_quantum(rho, q);
  }
  return s;
}

double tsallis_mutual(const DensityMatrix& rho, const std::vector<int>& cut,
                      const EntropicParameter& q) {
  if (q.q < 1.0 && !q.limit_branch) {
    throw std::invalid_argument("tsallis_mutual: defined for q >= 1 only");
  }
  const std::vector<int> right = complement_indices(rho.dims(), cut);
  if (cut.empty() || right.empty()) {
    throw std::invalid_argument("tsallis_mutual: cut must split the system");
  }
  const double s_l = tsallis_quantum(partial_trace(rho, cut), q);
  const double s_r = tsallis_quantum(partial_trace(rho, right), q);
  return s_l + s_r - tsallis_quantum(rho, q);
}

}  // namespace qpoly
