#include "qpoly/roof.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qpoly/parallel.hpp"

namespace qpoly {

namespace {

constexpr double kDropProbability = 1e-12;
constexpr double kClimbScaleStart = 20.0;
constexpr double kClimbScaleEnd = 1e-4;
constexpr std::uint64_t kTagRoofMin = 0x726f6f666d696eULL;
constexpr std::uint64_t kTagRoofMax = 0x726f6f666d6178ULL;
constexpr std::uint64_t kTagMeasure = 0x6d6561737572ULL;

std::vector<double> hermitian_spectrum(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<double> ev;
  ev.reserve(static_cast<std::size_t>(n));
  if (n == 2) {
    const double a = m(0, 0).real();
    const double c = m(1, 1).real();
    const double b2 = std::norm(m(0, 1));
    const double half = 0.5 * (a + c);
    const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b2);
    ev.push_back(half + disc);
    ev.push_back(half - disc);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    for (int i = n - 1; i >= 0; --i) ev.push_back(es.eigenvalues()(i));
  }
  for (double& v : ev) {
    if (v < 0.0) v = 0.0;
  }
  return ev;
}

// Functional with its entropic parameter resolved once.
struct Evaluator {
  PureFunctional f;
  EntropicParameter param;

  explicit Evaluator(const PureFunctional& fn)
      : f(fn), param(fn.kind == PureFunctional::Kind::tangle ? 2.0 : fn.param) {}

  double operator()(const std::vector<double>& spectrum) const {
    switch (f.kind) {
      case PureFunctional::Kind::tsallis:
        return tsallis_of_spectrum(spectrum, param);
      case PureFunctional::Kind::renyi:
        return renyi_of_spectrum(spectrum, param);
      case PureFunctional::Kind::tangle:
        return spectrum.size() < 2 ? 0.0 : 4.0 * spectrum[0] * spectrum[1];
    }
    return 0.0;
  }
};

Matrix orthonormal_columns(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

Matrix random_tall_matrix(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      g(i, j) = rng.complex_normal();
    }
  }
  return g;
}

Matrix perturbed(const Matrix& v, double scale, Rng& rng) {
  const double s = scale / std::sqrt(2.0 * static_cast<double>(v.rows()));
  Matrix g(v.rows(), v.cols());
  for (int i = 0; i < v.rows(); ++i) {
    for (int j = 0; j < v.cols(); ++j) {
      g(i, j) = v(i, j) + s * rng.complex_normal();
    }
  }
  return g;
}

struct Candidate {
  double value = 0.0;
  Matrix v;
};

// Greedy climb with geometrically decaying Gaussian perturbations.
template <typename EvalFn>
Candidate climb(Matrix v0, double value0, int steps, bool maximize, Rng& rng,
                const EvalFn& eval, bool rows_are_isometry) {
  Candidate best{value0, std::move(v0)};
  for (int k = 0; k < steps; ++k) {
    const double t =
        steps > 1 ? static_cast<double>(k) / static_cast<double>(steps - 1) : 1.0;
    const double scale =
        kClimbScaleStart * std::pow(kClimbScaleEnd / kClimbScaleStart, t);
    Matrix trial = perturbed(best.v, scale, rng);
    trial = rows_are_isometry
                ? orthonormal_columns(trial)
                : Matrix(orthonormal_columns(trial.adjoint()).adjoint());
    const double val = eval(trial);
    if (maximize ? val > best.value : val < best.value) {
      best.value = val;
      best.v = std::move(trial);
    }
  }
  return best;
}

// Fold: best value wins; ties keep the earlier entry. Also derives the
// convergence flag from the best-so-far trace over restarts.
struct FoldOutcome {
  Candidate best;
  bool converged = false;
};

FoldOutcome fold_candidates(std::vector<Candidate> specials,
                            const std::vector<Candidate>& units, int restarts,
                            int samples, bool maximize) {
  FoldOutcome out;
  bool have = false;
  auto better = [&](double a, double b) { return maximize ? a > b : a < b; };
  for (auto& c : specials) {
    if (!have || better(c.value, out.best.value)) {
      out.best = std::move(c);
      have = true;
    }
  }
  std::vector<double> after(static_cast<std::size_t>(restarts));
  for (int r = 0; r < restarts; ++r) {
    for (int s = 0; s < samples; ++s) {
      const auto& c = units[static_cast<std::size_t>(r * samples + s)];
      if (!have || better(c.value, out.best.value)) {
        out.best = c;
        have = true;
      }
    }
    after[static_cast<std::size_t>(r)] = out.best.value;
  }
  if (restarts <= 1) {
    out.converged = true;
  } else {
    const int cut = (3 * (restarts - 1)) / 4;
    out.converged =
        std::abs(after[static_cast<std::size_t>(restarts - 1)] -
                 after[static_cast<std::size_t>(cut)]) < 1e-7;
  }
  return out;
}

}  // namespace

double PureFunctional::eval_spectrum(const std::vector<double>& lambda) const {
  return Evaluator(*this)(lambda);
}

// ---- PureDecomposition ----

PureDecomposition::PureDecomposition(
    std::vector<std::pair<double, PureState>> members,
    const DensityMatrix& target)
    : members_(std::move(members)) {
  if (members_.empty()) {
    throw std::invalid_argument("decomposition: must have at least one member");
  }
  Matrix acc = Matrix::Zero(target.total(), target.total());
  double psum = 0.0;
  for (const auto& [p, psi] : members_) {
    if (p < 0.0) {
      throw std::invalid_argument("decomposition: negative probability");
    }
    if (!(psi.dims() == target.dims())) {
      throw std::invalid_argument("decomposition: member dims mismatch");
    }
    acc += p * (psi.amplitudes() * psi.amplitudes().adjoint());
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-9 ||
      (acc - target.matrix()).norm() > 1e-9) {
    throw std::invalid_argument(
        "decomposition: members do not reassemble the target within 1e-9");
  }
}

PureDecomposition PureDecomposition::unchecked(
    std::vector<std::pair<double, PureState>> members) {
  PureDecomposition d;
  d.members_ = std::move(members);
  return d;
}

double PureDecomposition::average_value(const PureFunctional& f,
                                        const std::vector<int>& cut) const {
  const Evaluator eval(f);
  double acc = 0.0;
  for (const auto& [p, psi] : members_) {
    if (p < kDropProbability) continue;
    acc += p * eval(cut_spectrum(psi, cut));
  }
  return acc;
}

double PureDecomposition::q_expectation_value(const PureFunctional& f,
                                              const std::vector<int>& cut,
                                              const EntropicParameter& q) const {
  const Evaluator eval(f);
  double acc = 0.0;
  for (const auto& [p, psi] : members_) {
    if (p < kDropProbability) continue;
    const double w = q.limit_branch ? p : std::pow(p, q.q);
    acc += w * eval(cut_spectrum(psi, cut));
  }
  return acc;
}

DensityMatrix PureDecomposition::reassemble() const {
  const auto& first = members_.front().second;
  Matrix acc = Matrix::Zero(first.total(), first.total());
  for (const auto& [p, psi] : members_) {
    acc += p * (psi.amplitudes() * psi.amplitudes().adjoint());
  }
  return DensityMatrix::unchecked(std::move(acc), first.dims());
}

// ---- RankOneMeasurement ----

RankOneMeasurement::RankOneMeasurement(const std::vector<Matrix>& operators) {
  if (operators.empty()) {
    throw std::invalid_argument("measurement: must have at least one outcome");
  }
  const int d = static_cast<int>(operators.front().rows());
  Matrix sum = Matrix::Zero(d, d);
  vectors_.resize(d, static_cast<Eigen::Index>(operators.size()));
  for (std::size_t x = 0; x < operators.size(); ++x) {
    const Matrix& m = operators[x];
    if (m.rows() != d || m.cols() != d) {
      throw std::invalid_argument("measurement: operator size mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const int n = static_cast<int>(es.eigenvalues().size());
    if (n >= 2 && es.eigenvalues()(n - 2) > 1e-10) {
      throw std::invalid_argument("measurement: operator is not rank 1");
    }
    const double top = std::max(es.eigenvalues()(n - 1), 0.0);
    vectors_.col(static_cast<Eigen::Index>(x)) =
        std::sqrt(top) * es.eigenvectors().col(n - 1);
    sum += m;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("measurement: operators do not sum to identity");
  }
}

RankOneMeasurement RankOneMeasurement::from_vectors(Matrix vectors) {
  const int d = static_cast<int>(vectors.rows());
  if ((Matrix(vectors * vectors.adjoint()) - Matrix::Identity(d, d))
          .cwiseAbs()
          .maxCoeff() > 1e-10) {
    throw std::invalid_argument("measurement: vectors do not resolve identity");
  }
  RankOneMeasurement m;
  m.vectors_ = std::move(vectors);
  return m;
}

std::vector<Matrix> RankOneMeasurement::operators() const {
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(vectors_.cols()));
  for (int x = 0; x < vectors_.cols(); ++x) {
    ops.push_back(vectors_.col(x) * vectors_.col(x).adjoint());
  }
  return ops;
}

// ---- pure-state quantities ----

double tsallis_entanglement_pure(const PureState& psi,
                                 const std::vector<int>& cut,
                                 const EntropicParameter& q) {
  return tsallis_of_spectrum(cut_spectrum(psi, cut), q);
}

double renyi_entanglement_pure(const PureState& psi,
                               const std::vector<int>& cut,
                               const EntropicParameter& alpha) {
  return renyi_of_spectrum(cut_spectrum(psi, cut), alpha);
}

double tangle_pure(const PureState& psi, const std::vector<int>& cut_a) {
  int da = 1;
  for (int k : cut_a) da *= psi.dims().dim(k);
  if (da != 2) {
    throw std::invalid_argument("tangle: the A side of the cut must be a qubit");
  }
  const std::vector<double> spec = cut_spectrum(psi, cut_a);
  return 4.0 * spec[0] * spec[1];
}

// ---- decompositions from isometries ----

PureDecomposition decomposition_from_isometry(const EigenDecomposition& eig,
                                              const Matrix& isometry,
                                              const DimVector& dims) {
  const int r = eig.rank();
  if (isometry.cols() != r) {
    throw std::invalid_argument(
        "isometry: column count must equal the rank of the state");
  }
  if (isometry.rows() < r) {
    throw std::invalid_argument("isometry: cardinality m must be >= rank");
  }
  if ((Matrix(isometry.adjoint() * isometry) - Matrix::Identity(r, r))
          .cwiseAbs()
          .maxCoeff() > 1e-10) {
    throw std::invalid_argument("isometry: columns are not orthonormal");
  }
  std::vector<std::pair<double, PureState>> members;
  Matrix target = Matrix::Zero(dims.total(), dims.total());
  for (int i = 0; i < r; ++i) {
    target += eig.eigenvalues[static_cast<std::size_t>(i)] *
              (eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint());
  }
  for (int x = 0; x < isometry.rows(); ++x) {
    Vector member = Vector::Zero(dims.total());
    for (int i = 0; i < r; ++i) {
      member += isometry(x, i) *
                std::sqrt(std::max(eig.eigenvalues[static_cast<std::size_t>(i)], 0.0)) *
                eig.eigenvectors.col(i);
    }
    const double p = member.squaredNorm();
    if (p < kDropProbability) continue;
    members.emplace_back(p, PureState::unchecked(member / std::sqrt(p), dims));
  }
  return PureDecomposition(std::move(members),
                           DensityMatrix::unchecked(std::move(target), dims));
}

// ---- roof optimization ----

namespace {

struct RoofSpace {
  // Problem restated with the cut as the leading factor.
  std::vector<int> order;      // permutation applied (cut first)
  std::vector<int> inverse;    // permutation back to the original order
  DimVector permuted_dims;
  int dim_left = 1;
  int dim_right = 1;
  EigenDecomposition eig;      // of the permuted state
  std::vector<double> sqrt_lambda;
};

RoofSpace make_space(const DensityMatrix& rho, const std::vector<int>& cut) {
  std::vector<int> left = cut;
  std::sort(left.begin(), left.end());
  left.erase(std::unique(left.begin(), left.end()), left.end());
  const std::vector<int> right = complement_indices(rho.dims(), left);
  if (left.empty() || right.empty()) {
    throw std::invalid_argument("cut: must split the system into two parts");
  }
  RoofSpace s;
  s.order = left;
  s.order.insert(s.order.end(), right.begin(), right.end());
  s.inverse.resize(s.order.size());
  for (std::size_t i = 0; i < s.order.size(); ++i) {
    s.inverse[static_cast<std::size_t>(s.order[i])] = static_cast<int>(i);
  }
  for (int k : left) s.dim_left *= rho.dims().dim(k);
  for (int k : right) s.dim_right *= rho.dims().dim(k);
  const DensityMatrix permuted = permute_subsystems(rho, s.order);
  s.permuted_dims = permuted.dims();
  s.eig = eigendecompose(permuted);
  const int r = s.eig.rank();
  s.sqrt_lambda.reserve(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    s.sqrt_lambda.push_back(
        std::sqrt(std::max(s.eig.eigenvalues[static_cast<std::size_t>(i)], 0.0)));
  }
  return s;
}

double decomposition_objective(const RoofSpace& s, const Evaluator& eval,
                               const Matrix& v) {
  double acc = 0.0;
  const int r = static_cast<int>(s.sqrt_lambda.size());
  Vector member(s.eig.eigenvectors.rows());
  for (int x = 0; x < v.rows(); ++x) {
    member.setZero();
    for (int i = 0; i < r; ++i) {
      member += (v(x, i) * s.sqrt_lambda[static_cast<std::size_t>(i)]) *
                s.eig.eigenvectors.col(i);
    }
    const double p = member.squaredNorm();
    if (p < kDropProbability) continue;
    std::vector<double> spec =
        cut_spectrum_prefix(member, s.dim_left, s.dim_right);
    for (double& l : spec) l /= p;
    acc += p * eval(spec);
  }
  return acc;
}

RoofResult roof_optimize(const DensityMatrix& rho, const std::vector<int>& cut,
                         const PureFunctional& f, const OptimizerBudget& budget,
                         bool maximize) {
  if (f.kind == PureFunctional::Kind::tangle) {
    int da = 1;
    std::vector<int> lc = cut;
    std::sort(lc.begin(), lc.end());
    lc.erase(std::unique(lc.begin(), lc.end()), lc.end());
    for (int k : lc) da *= rho.dims().dim(k);
    if (da != 2) {
      throw std::invalid_argument("tangle: the A side of the cut must be a qubit");
    }
  }
  const RoofSpace space = make_space(rho, cut);
  const Evaluator eval(f);
  const int r = static_cast<int>(space.sqrt_lambda.size());
  const std::uint64_t tag = maximize ? kTagRoofMax : kTagRoofMin;

  auto package = [&](const Matrix& v, double value, bool converged,
                     int restarts_used) {
    PureDecomposition permuted =
        decomposition_from_isometry(space.eig, v, space.permuted_dims);
    std::vector<std::pair<double, PureState>> members;
    for (const auto& [p, psi] : permuted.members()) {
      members.emplace_back(p, permute_subsystems(psi, space.inverse));
    }
    RoofResult out;
    out.value = value;
    out.bound_direction = maximize ? BoundDirection::lower : BoundDirection::upper;
    out.decomposition = PureDecomposition(std::move(members), rho);
    out.restarts_used = restarts_used;
    out.converged = converged;
    return out;
  };

  // Pure input: the single-member decomposition is exact.
  if (r == 1) {
    return package(Matrix::Identity(1, 1),
                   decomposition_objective(space, eval, Matrix::Identity(1, 1)),
                   true, 0);
  }

  const int m_min = r;
  const int m_max = r * r;  // Caratheodory-style cardinality cap
  auto objective = [&](const Matrix& v) {
    return decomposition_objective(space, eval, v);
  };

  std::vector<Candidate> specials;
  {
    Matrix eye = Matrix::Identity(r, r);
    specials.push_back({objective(eye), eye});
  }

  const int restarts = std::max(budget.restarts, 1);
  const int samples = std::max(budget.samples_per_restart, 1);
  std::vector<Candidate> units(static_cast<std::size_t>(restarts * samples));
  par::for_index(static_cast<std::size_t>(restarts * samples), [&](std::size_t u) {
    const int rs = static_cast<int>(u) / samples;
    const int sm = static_cast<int>(u) % samples;
    Rng rng = Rng::stream(budget.seed, tag, static_cast<std::uint64_t>(rs),
                          static_cast<std::uint64_t>(sm));
    const int m = m_min + (rs * 7 + sm) % (m_max - m_min + 1);
    Matrix v0 = orthonormal_columns(random_tall_matrix(m, r, rng));
    units[u] = climb(std::move(v0), objective(v0), budget.refine_steps, maximize,
                     rng, objective, true);
  });

  FoldOutcome fold =
      fold_candidates(std::move(specials), units, restarts, samples, maximize);
  return package(fold.best.v, fold.best.value, fold.converged, restarts);
}

}  // namespace

RoofResult convex_roof(const DensityMatrix& rho, const std::vector<int>& cut,
                       const PureFunctional& f, const OptimizerBudget& budget) {
  return roof_optimize(rho, cut, f, budget, /*maximize=*/false);
}

RoofResult concave_roof(const DensityMatrix& rho, const std::vector<int>& cut,
                        const PureFunctional& f, const OptimizerBudget& budget) {
  return roof_optimize(rho, cut, f, budget, /*maximize=*/true);
}

// ---- measurements on B ----

namespace {

struct MeasureSpace {
  int da = 0;
  int db = 0;
  const Matrix* rho = nullptr;
  double s_a = 0.0;  // S_q(rho_A)
};

double chi_of_vectors(const MeasureSpace& ms, const EntropicParameter& q,
                      const Matrix& vectors) {
  double sub = 0.0;
  Matrix t(ms.da, ms.da);
  for (int x = 0; x < vectors.cols(); ++x) {
    const Vector w = vectors.col(x);
    for (int a = 0; a < ms.da; ++a) {
      for (int ap = a; ap < ms.da; ++ap) {
        const cxd val =
            (w.adjoint() * ms.rho->block(a * ms.db, ap * ms.db, ms.db, ms.db) *
             w)(0);
        t(a, ap) = val;
        if (ap != a) t(ap, a) = std::conj(val);
      }
    }
    const double p = t.trace().real();
    if (p < kDropProbability) continue;
    std::vector<double> spec = hermitian_spectrum(t);
    for (double& l : spec) l /= p;
    const double w_q = q.limit_branch ? p : std::pow(p, q.q);
    sub += w_q * tsallis_of_spectrum(spec, q);
  }
  return ms.s_a - sub;
}

}  // namespace

double measurement_q_difference(const DensityMatrix& rho_ab,
                                const RankOneMeasurement& m,
                                const EntropicParameter& q) {
  if (rho_ab.dims().count() != 2) {
    throw std::invalid_argument("measurement_q_difference: input must be bipartite");
  }
  const int da = rho_ab.dims().dim(0);
  const int db = rho_ab.dims().dim(1);
  Matrix vectors = m.vectors();
  if (m.dim() != db) {
    // Accept measurements built on the square-embedded B space: rows beyond
    // the native dimension carry no weight under rho and can be cropped.
    const int d = std::max(da, db);
    if (m.dim() != d) {
      throw std::invalid_argument("measurement_q_difference: dimension mismatch");
    }
    vectors = vectors.topRows(db);
  }
  MeasureSpace ms;
  ms.da = da;
  ms.db = db;
  ms.rho = &rho_ab.matrix();
  ms.s_a = tsallis_quantum(partial_trace(rho_ab, {0}), q);
  return chi_of_vectors(ms, q, vectors);
}

RankOneMeasurement qb_split_measurement(const DensityMatrix& rho_ab) {
  const DensityMatrix rho = embed_square(rho_ab);
  const int d = rho.dims().dim(0);
  const auto [weyl, fourier] = build_weyl(eigendecompose(partial_trace(rho, {1})));
  Matrix vectors(d, 2 * d);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  vectors.leftCols(d) = inv_sqrt2 * weyl.basis;
  vectors.rightCols(d) = inv_sqrt2 * fourier.vectors;
  return RankOneMeasurement::from_vectors(std::move(vectors));
}

double qb_split_chi_average(const DensityMatrix& rho_ab,
                            const EntropicParameter& q) {
  const InducedEnsembles ens = induced_ensembles(rho_ab);
  return 0.5 * (tsallis_q_difference(ens.e0, q) +
                tsallis_q_difference(ens.e1, q));
}

RoofResult unlocalizable_q_entanglement(const DensityMatrix& rho_ab,
                                        const EntropicParameter& q,
                                        const OptimizerBudget& budget) {
  if (q.q < 1.0 && !q.limit_branch) {
    throw std::invalid_argument(
        "unlocalizable_q_entanglement: defined for q >= 1 only");
  }
  if (rho_ab.dims().count() != 2) {
    throw std::invalid_argument(
        "unlocalizable_q_entanglement: input must be bipartite");
  }
  MeasureSpace ms;
  ms.da = rho_ab.dims().dim(0);
  ms.db = rho_ab.dims().dim(1);
  ms.rho = &rho_ab.matrix();
  ms.s_a = tsallis_quantum(partial_trace(rho_ab, {0}), q);
  auto objective = [&](const Matrix& vectors) {
    return chi_of_vectors(ms, q, vectors);
  };

  // The projective eigenbasis and Fourier-basis measurements of rho_B are
  // always candidates, so the returned bound never exceeds min(chi0, chi1).
  const DensityMatrix emb = embed_square(rho_ab);
  const auto [weyl, fourier] =
      build_weyl(eigendecompose(partial_trace(emb, {1})));
  std::vector<Candidate> specials;
  {
    Matrix c0 = weyl.basis.topRows(ms.db);
    Matrix c1 = fourier.vectors.topRows(ms.db);
    specials.push_back({objective(c0), c0});
    specials.push_back({objective(c1), c1});
  }

  const int m_min = ms.db;
  const int m_max = ms.db * ms.db;
  const int restarts = std::max(budget.restarts, 1);
  const int samples = std::max(budget.samples_per_restart, 1);
  std::vector<Candidate> units(static_cast<std::size_t>(restarts * samples));
  par::for_index(static_cast<std::size_t>(restarts * samples), [&](std::size_t u) {
    const int rs = static_cast<int>(u) / samples;
    const int sm = static_cast<int>(u) % samples;
    Rng rng = Rng::stream(budget.seed, kTagMeasure, static_cast<std::uint64_t>(rs),
                          static_cast<std::uint64_t>(sm));
    const int m = m_min + (rs * 7 + sm) % (m_max - m_min + 1);
    // columns w_x with sum w w^dag = I: adjoint is an m x db isometry
    Matrix v0 =
        orthonormal_columns(random_tall_matrix(m, ms.db, rng)).adjoint();
    units[u] = climb(std::move(v0), objective(v0), budget.refine_steps,
                     /*maximize=*/false, rng, objective,
                     /*rows_are_isometry=*/false);
  });

  FoldOutcome fold = fold_candidates(std::move(specials), units, restarts,
                                     samples, /*maximize=*/false);
  RoofResult out;
  out.value = fold.best.value;
  out.bound_direction = BoundDirection::upper;
  out.measurement = RankOneMeasurement::from_vectors(fold.best.v);
  out.restarts_used = restarts;
  out.converged = fold.converged;
  return out;
}

}  // namespace qpoly
