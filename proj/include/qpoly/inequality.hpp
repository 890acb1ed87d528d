#pragma once

#include <string>
#include <vector>

#include "qpoly/ccq.hpp"
#include "qpoly/roof.hpp"

namespace qpoly {

enum class Verdict { verified, violated, inconclusive };
enum class BoundKind { exact, upper, lower };

std::string to_string(Verdict v);
std::string to_string(BoundKind k);

/// Outcome of one inequality evaluation. The verdict is sound by
/// construction: `verified` is issued only when replacing the one-sided
/// bounds by the true values could not flip the inequality, `violated` only
/// in the mirror case, `inconclusive` otherwise.
struct InequalityVerdict {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  BoundKind lhs_kind = BoundKind::exact;
  BoundKind rhs_kind = BoundKind::exact;
  double gap = 0.0;  // slack of the claim (positive = holds)
  Verdict verdict = Verdict::inconclusive;
  std::string note;
};

/// Claim lhs <= rhs. lhs_kind/rhs_kind describe what the numeric values are
/// relative to the true quantities. gap = rhs - lhs.
InequalityVerdict decide_leq(const std::string& name, double lhs,
                             BoundKind lhs_kind, double rhs,
                             BoundKind rhs_kind, double tol,
                             const std::string& note = "");

/// Claim lhs >= rhs. gap = lhs - rhs.
InequalityVerdict decide_geq(const std::string& name, double lhs,
                             BoundKind lhs_kind, double rhs,
                             BoundKind rhs_kind, double tol,
                             const std::string& note = "");

// ---- ccq subadditivity ----

/// I_q(XY:AB) - I_q(X:AB) - I_q(Y:AB) via the closed forms. Positive means
/// the sufficient condition of the conditional polygamy theorem holds for
/// this state and q. Requires q >= 1.
double subadditivity_gap(const DensityMatrix& rho_ab,
                         const EntropicParameter& q);

struct GeneralCcqGap {
  double gap = 0.0;           // I(XY:AB) - I(X:AB) - I(Y:AB), q = 1
  double relent_lhs = 0.0;    // sum_xy S(sigma_xy || rho^y)/d^2
  double relent_rhs = 0.0;    // sum_x S(rho^x || rho)/d
};

/// Subadditivity of quantum mutual information for a general-form ccq state
/// at q = 1, together with both sides of the equivalent joint-convexity
/// inequality. Always nonnegative.
GeneralCcqGap general_ccq_subadditivity_gap(const CcqState& gamma);

// ---- Xi bounds ----

struct XiBounds {
  double xi_b = 0.0;
  double xi_c = 0.0;
};

/// Xi_B and Xi_C of a three-party pure state, computed at the common
/// embedded dimension d = max of the local dims. Requires q > 1 strictly.
XiBounds xi_bounds(const PureState& psi_abc, const EntropicParameter& q);

// ---- theorem checks ----

struct Theorem1Result {
  double lhs = 0.0;        // S_q(rho_A), exact
  double rhs_lower = 0.0;  // sum of TEoA certificates (lower bound)
  double rhs_upper = 0.0;  // concavity cap on the TEoA sum (certified upper)
  double gap_ab = 0.0;     // ccq subadditivity gap for rho_AB
  double gap_ac = 0.0;     // and for rho_AC
  bool condition_holds = false;
  RoofResult teoa_ab;
  RoofResult teoa_ac;
  InequalityVerdict verdict;
};

/// Conditional three-party polygamy: S_q(rho_A) <= TEoA(A|B) + TEoA(A|C).
/// The verdict concerns the inequality itself; the two condition gaps are
/// reported alongside (the theorem only asserts the implication).
Theorem1Result theorem1_check(const PureState& psi_abc,
                              const EntropicParameter& q,
                              const OptimizerBudget& budget, double tol);

struct PolygamyResult {
  int parties = 0;
  double lhs = 0.0;
  BoundKind lhs_kind = BoundKind::exact;  // exact for pure input, else lower
  double lhs_upper = 0.0;                 // certified cap on the LHS roof
  std::vector<double> rhs_terms;          // TEoA lower bounds per partner
  double rhs_lower = 0.0;
  double rhs_upper = 0.0;  // certified concavity caps, summed
  InequalityVerdict verdict;
};

/// n-party polygamy TEoA(A1|A2..An) <= sum_i TEoA(A1|Ai). For mixed input
/// the LHS is itself a max-roof; its sampled value is reported with an
/// explicit `lower` provenance and the sound verdict uses the certified cap.
PolygamyResult polygamy_check_nparty(const DensityMatrix& rho,
                                     const EntropicParameter& q,
                                     const OptimizerBudget& budget, double tol);

struct MonogamyResult {
  int parties = 0;
  double lhs = 0.0;
  BoundKind lhs_kind = BoundKind::exact;
  std::vector<double> rhs_terms;  // convex-roof upper bounds per partner
  double rhs_upper = 0.0;
  InequalityVerdict verdict;
};

/// Multi-qubit monogamy E(A1|A2..An) >= sum_i E(A1|Ai) for E the Tsallis-q
/// entanglement (2 <= q <= 3) or Renyi-alpha entanglement (alpha >= 2).
MonogamyResult monogamy_check_multiqubit(const DensityMatrix& rho,
                                         const PureFunctional& measure,
                                         const OptimizerBudget& budget,
                                         double tol);

struct UeChainReport {
  double gap_ab = 0.0;
  double gap_ac = 0.0;
  XiBounds xi;
  std::vector<InequalityVerdict> links;
  /// Aggregate over the links whose premises hold.
  Verdict overall = Verdict::inconclusive;
};

/// Evaluates the bound chain of the conditional polygamy proof link by link
/// with explicit bound directions: the Q_B upper bounds on the
/// unlocalizable q-entanglement, the conditional closed-form bounds, and
/// the final Xi-term inequality. Requires q > 1.
UeChainReport ue_bound_chain(const PureState& psi_abc,
                             const EntropicParameter& q,
                             const OptimizerBudget& budget, double tol);

// ---- random-instance scans ----

struct ScanConfig {
  std::string check;            // subadd | ccq-general | xi | theorem1 |
                                // polygamy | monogamy-tsallis | monogamy-renyi |
                                // ue-chain
  std::vector<int> dims;        // subsystem dimensions of the instances
  std::vector<double> q_values;
  int samples = 0;
  std::uint64_t seed = 0;
  OptimizerBudget budget;
  double tolerance = 1e-9;
};

struct WorstCase {
  double q = 1.0;
  int sample = 0;
  std::uint64_t replay_seed = 0;
  DensityMatrix state;
  double gap = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

/// Per-instance outcome (plot-ready row).
struct ScanRow {
  double q = 1.0;
  int sample = 0;
  std::uint64_t replay_seed = 0;
  double gap = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

struct ScanReport {
  ScanConfig config;
  int verified = 0;
  int violated = 0;
  int inconclusive = 0;
  double min_gap = 0.0;
  double max_gap = 0.0;
  std::vector<ScanRow> rows;     // one per instance, in (q, sample) order
  std::vector<WorstCase> worst;  // the 10 smallest-gap instances
};

const std::vector<std::string>& scan_check_names();

/// Runs the named check over samples x q-grid random instances, with
/// per-instance substreams; the aggregation is a deterministic fold in
/// sample order, so identical configs yield identical reports.
ScanReport scan(const ScanConfig& config);

}  // namespace qpoly
