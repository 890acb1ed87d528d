#include "qpoly/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "qpoly/parallel.hpp"

namespace qpoly {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::verified: return "verified";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::exact: return "exact";
    case BoundKind::upper: return "upper";
    case BoundKind::lower: return "lower";
  }
  return "?";
}

InequalityVerdict decide_leq(const std::string& name, double lhs,
                             BoundKind lhs_kind, double rhs,
                             BoundKind rhs_kind, double tol,
                             const std::string& note) {
  InequalityVerdict v;
  v.name = name;
  v.lhs = lhs;
  v.rhs = rhs;
  v.lhs_kind = lhs_kind;
  v.rhs_kind = rhs_kind;
  v.gap = rhs - lhs;
  v.note = note;
  const bool lhs_caps_true = lhs_kind != BoundKind::lower;   // lhs >= true lhs
  const bool rhs_floors_true = rhs_kind != BoundKind::upper; // rhs <= true rhs
  const bool lhs_floors_true = lhs_kind != BoundKind::upper;
  const bool rhs_caps_true = rhs_kind != BoundKind::lower;
  if (lhs_caps_true && rhs_floors_true && lhs <= rhs + tol) {
    v.verdict = Verdict::verified;
  } else if (lhs_floors_true && rhs_caps_true && lhs > rhs + tol) {
    v.verdict = Verdict::violated;
  } else {
    v.verdict = Verdict::inconclusive;
  }
  return v;
}

InequalityVerdict decide_geq(const std::string& name, double lhs,
                             BoundKind lhs_kind, double rhs,
                             BoundKind rhs_kind, double tol,
                             const std::string& note) {
  InequalityVerdict v = decide_leq(name, rhs, rhs_kind, lhs, lhs_kind, tol, note);
  v.lhs = lhs;
  v.rhs = rhs;
  v.lhs_kind = lhs_kind;
  v.rhs_kind = rhs_kind;
  v.gap = lhs - rhs;
  return v;
}

// ---- ccq subadditivity ----

double subadditivity_gap(const DensityMatrix& rho_ab,
                         const EntropicParameter& q) {
  const IqTriple t = closed_form_iq(rho_ab, q);
  return t.xy_ab - t.x_ab - t.y_ab;
}

GeneralCcqGap general_ccq_subadditivity_gap(const CcqState& gamma) {
  const int d = gamma.d();
  const EntropicParameter one(1.0);
  const double inv_d = 1.0 / d;
  const double inv_d2 = inv_d * inv_d;

  const int ab = d * d;
  Matrix avg = Matrix::Zero(ab, ab);
  std::vector<Matrix> row(static_cast<std::size_t>(d), Matrix::Zero(ab, ab));
  std::vector<Matrix> col(static_cast<std::size_t>(d), Matrix::Zero(ab, ab));
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) {
      const Matrix& b = gamma.block(x, y);
      avg += inv_d2 * b;
      row[static_cast<std::size_t>(x)] += inv_d * b;
      col[static_cast<std::size_t>(y)] += inv_d * b;
    }
  }

  GeneralCcqGap out;
  double gap = -tsallis_of_matrix(avg, one);
  for (int x = 0; x < d; ++x) {
    gap += inv_d * tsallis_of_matrix(row[static_cast<std::size_t>(x)], one);
  }
  for (int y = 0; y < d; ++y) {
    gap += inv_d * tsallis_of_matrix(col[static_cast<std::size_t>(y)], one);
    for (int x = 0; x < d; ++x) {
      gap -= inv_d2 * tsallis_of_matrix(gamma.block(x, y), one);
    }
  }
  out.gap = gap;

  const DensityMatrix rho_bar = DensityMatrix::unchecked(avg, gamma.ab_dims());
  for (int y = 0; y < d; ++y) {
    const DensityMatrix rho_y =
        DensityMatrix::unchecked(col[static_cast<std::size_t>(y)], gamma.ab_dims());
    for (int x = 0; x < d; ++x) {
      out.relent_lhs +=
          inv_d2 * relative_entropy(DensityMatrix::unchecked(gamma.block(x, y),
                                                             gamma.ab_dims()),
                                    rho_y);
    }
  }
  for (int x = 0; x < d; ++x) {
    out.relent_rhs +=
        inv_d * relative_entropy(DensityMatrix::unchecked(
                                     row[static_cast<std::size_t>(x)],
                                     gamma.ab_dims()),
                                 rho_bar);
  }
  return out;
}

// ---- Xi bounds ----

XiBounds xi_bounds(const PureState& psi_abc, const EntropicParameter& q) {
  if (q.limit_branch || q.q <= 1.0) {
    throw std::invalid_argument("xi_bounds: requires q > 1");
  }
  if (psi_abc.dims().count() != 3) {
    throw std::invalid_argument("xi_bounds: input must be three-party");
  }
  const int d = std::max({psi_abc.dims().dim(0), psi_abc.dims().dim(1),
                          psi_abc.dims().dim(2)});
  const DensityMatrix rho = psi_abc.projector();
  const double s_b = tsallis_quantum(partial_trace(rho, {1}), q);
  const double s_c = tsallis_quantum(partial_trace(rho, {2}), q);
  const double u = std::pow(static_cast<double>(d), q.q - 1.0);
  const double factor = (u - 1.0) / u;
  const double cap = (u - 1.0) / (q.q - 1.0);
  return XiBounds{factor * (cap - s_b), factor * (cap - s_c)};
}

// ---- theorem 1 ----

Theorem1Result theorem1_check(const PureState& psi_abc,
                              const EntropicParameter& q,
                              const OptimizerBudget& budget, double tol) {
  if (psi_abc.dims().count() != 3) {
    throw std::invalid_argument("theorem1_check: input must be three-party");
  }
  const DensityMatrix rho = psi_abc.projector();
  const DensityMatrix rho_ab = partial_trace(rho, {0, 1});
  const DensityMatrix rho_ac = partial_trace(rho, {0, 2});
  const PureFunctional f = PureFunctional::tsallis(q.q);

  Theorem1Result out;
  out.lhs = tsallis_quantum(partial_trace(rho, {0}), q);
  out.teoa_ab = concave_roof(rho_ab, {0}, f, budget);
  out.teoa_ac = concave_roof(rho_ac, {0}, f, budget);
  out.rhs_lower = out.teoa_ab.value + out.teoa_ac.value;

  const double s_a = out.lhs;
  const double cap_ab =
      std::min(s_a, tsallis_quantum(partial_trace(rho_ab, {1}), q));
  const double cap_ac =
      std::min(s_a, tsallis_quantum(partial_trace(rho_ac, {1}), q));
  out.rhs_upper = cap_ab + cap_ac;

  // The ccq states of the condition live at the common embedded dimension.
  const int d = std::max({psi_abc.dims().dim(0), psi_abc.dims().dim(1),
                          psi_abc.dims().dim(2)});
  const DimVector square({d, d});
  out.gap_ab = subadditivity_gap(embed(rho_ab, square), q);
  out.gap_ac = subadditivity_gap(embed(rho_ac, square), q);
  out.condition_holds = out.gap_ab >= -1e-10 && out.gap_ac >= -1e-10;

  if (out.lhs <= out.rhs_lower + tol) {
    out.verdict = decide_leq("tq-polygamy-3", out.lhs, BoundKind::exact,
                             out.rhs_lower, BoundKind::lower, tol);
  } else if (out.lhs > out.rhs_upper + tol) {
    out.verdict = decide_leq("tq-polygamy-3", out.lhs, BoundKind::exact,
                             out.rhs_upper, BoundKind::upper, tol,
                             "certified violation via the concavity cap");
  } else {
    out.verdict = decide_leq("tq-polygamy-3", out.lhs, BoundKind::exact,
                             out.rhs_lower, BoundKind::lower, tol,
                             "roof certificates too loose to decide");
  }
  return out;
}

// ---- n-party polygamy ----

static bool is_pure(const DensityMatrix& rho) {
  const double purity = (rho.matrix() * rho.matrix()).trace().real();
  return purity > 1.0 - 1e-10;
}

PolygamyResult polygamy_check_nparty(const DensityMatrix& rho,
                                     const EntropicParameter& q,
                                     const OptimizerBudget& budget,
                                     double tol) {
  const int n = rho.dims().count();
  if (n < 3) {
    throw std::invalid_argument("polygamy_check: needs at least three parties");
  }
  const PureFunctional f = PureFunctional::tsallis(q.q);
  PolygamyResult out;
  out.parties = n;

  const double s_a1 = tsallis_quantum(partial_trace(rho, {0}), q);
  std::vector<int> rest;
  for (int k = 1; k < n; ++k) rest.push_back(k);
  const double s_rest = tsallis_quantum(partial_trace(rho, rest), q);
  out.lhs_upper = std::min(s_a1, s_rest);

  if (is_pure(rho)) {
    out.lhs = s_a1;
    out.lhs_kind = BoundKind::exact;
    out.lhs_upper = s_a1;
  } else {
    // The LHS is itself a max-roof; the sampled decomposition only bounds
    // it from below. Reported as such, never silently treated as exact.
    out.lhs = concave_roof(rho, {0}, f, budget).value;
    out.lhs_kind = BoundKind::lower;
  }

  out.rhs_lower = 0.0;
  out.rhs_upper = 0.0;
  for (int i = 1; i < n; ++i) {
    const DensityMatrix pair = partial_trace(rho, {0, i});
    const double teoa = concave_roof(pair, {0}, f, budget).value;
    out.rhs_terms.push_back(teoa);
    out.rhs_lower += teoa;
    out.rhs_upper +=
        std::min(tsallis_quantum(partial_trace(pair, {0}), q),
                 tsallis_quantum(partial_trace(pair, {1}), q));
  }

  if (out.lhs_upper <= out.rhs_lower + tol) {
    out.verdict =
        decide_leq("tq-polygamy-n", out.lhs_upper, BoundKind::upper,
                   out.rhs_lower, BoundKind::lower, tol,
                   "lhs via certified cap");
  } else if (out.lhs_kind == BoundKind::exact && out.lhs <= out.rhs_lower + tol) {
    out.verdict = decide_leq("tq-polygamy-n", out.lhs, BoundKind::exact,
                             out.rhs_lower, BoundKind::lower, tol);
  } else if (out.lhs > out.rhs_upper + tol &&
             (out.lhs_kind == BoundKind::exact ||
              out.lhs_kind == BoundKind::lower)) {
    out.verdict = decide_leq("tq-polygamy-n", out.lhs, out.lhs_kind,
                             out.rhs_upper, BoundKind::upper, tol,
                             "certified violation via the concavity caps");
  } else {
    out.verdict = decide_leq("tq-polygamy-n", out.lhs, out.lhs_kind,
                             out.rhs_lower, BoundKind::lower, tol,
                             "bounds too loose to decide");
  }
  return out;
}

// ---- multi-qubit monogamy ----

MonogamyResult monogamy_check_multiqubit(const DensityMatrix& rho,
                                         const PureFunctional& measure,
                                         const OptimizerBudget& budget,
                                         double tol) {
  const int n = rho.dims().count();
  if (n < 3) {
    throw std::invalid_argument("monogamy_check: needs at least three parties");
  }
  for (int k = 0; k < n; ++k) {
    if (rho.dims().dim(k) != 2) {
      throw std::invalid_argument("monogamy_check: all subsystems must be qubits");
    }
  }
  if (measure.kind == PureFunctional::Kind::tsallis &&
      (measure.param < 2.0 || measure.param > 3.0)) {
    throw std::invalid_argument("monogamy_check: Tsallis measure needs 2 <= q <= 3");
  }
  if (measure.kind == PureFunctional::Kind::renyi && measure.param < 2.0) {
    throw std::invalid_argument("monogamy_check: Renyi measure needs alpha >= 2");
  }

  MonogamyResult out;
  out.parties = n;
  if (is_pure(rho)) {
    const EigenDecomposition eig = eigendecompose(rho);
    const PureState psi =
        PureState::unchecked(eig.eigenvectors.col(0), rho.dims());
    out.lhs = measure.eval_spectrum(cut_spectrum(psi, {0}));
    out.lhs_kind = BoundKind::exact;
  } else {
    out.lhs = convex_roof(rho, {0}, measure, budget).value;
    out.lhs_kind = BoundKind::upper;
  }

  out.rhs_upper = 0.0;
  for (int i = 1; i < n; ++i) {
    const DensityMatrix pair = partial_trace(rho, {0, i});
    const double e_upper = convex_roof(pair, {0}, measure, budget).value;
    out.rhs_terms.push_back(e_upper);
    out.rhs_upper += e_upper;
  }

  if (out.lhs_kind == BoundKind::exact) {
    out.verdict = decide_geq("monogamy", out.lhs, BoundKind::exact,
                             out.rhs_upper, BoundKind::upper, tol);
  } else if (out.rhs_upper <= tol) {
    out.verdict = decide_geq("monogamy", out.lhs, BoundKind::lower,
                             out.rhs_upper, BoundKind::upper, tol,
                             "rhs vanishes; lhs nonnegative");
  } else {
    out.verdict = decide_geq("monogamy", out.lhs, out.lhs_kind, out.rhs_upper,
                             BoundKind::upper, tol,
                             "mixed-state lhs is an upper bound; not sound "
                             "for this direction");
  }
  return out;
}

// ---- the q-UE bound chain ----

UeChainReport ue_bound_chain(const PureState& psi_abc,
                             const EntropicParameter& q,
                             const OptimizerBudget& budget, double tol) {
  if (q.limit_branch || q.q <= 1.0) {
    throw std::invalid_argument("ue_bound_chain: requires q > 1");
  }
  if (psi_abc.dims().count() != 3) {
    throw std::invalid_argument("ue_bound_chain: input must be three-party");
  }
  const DensityMatrix rho = psi_abc.projector();
  const DensityMatrix rho_ab = partial_trace(rho, {0, 1});
  const DensityMatrix rho_ac = partial_trace(rho, {0, 2});
  const int d = std::max({psi_abc.dims().dim(0), psi_abc.dims().dim(1),
                          psi_abc.dims().dim(2)});

  UeChainReport out;
  out.gap_ab = subadditivity_gap(embed(rho_ab, DimVector({d, d})), q);
  out.gap_ac = subadditivity_gap(embed(rho_ac, DimVector({d, d})), q);
  out.xi = xi_bounds(psi_abc, q);

  const double s_a = tsallis_quantum(partial_trace(rho, {0}), q);
  const double s_b = tsallis_quantum(partial_trace(rho, {1}), q);
  const double s_c = tsallis_quantum(partial_trace(rho, {2}), q);

  const RoofResult uq_ab = unlocalizable_q_entanglement(rho_ab, q, budget);
  const RoofResult uq_ac = unlocalizable_q_entanglement(rho_ac, q, budget);
  const double split_ab = qb_split_chi_average(embed(rho_ab, DimVector({d, d})), q);
  const double split_ac = qb_split_chi_average(embed(rho_ac, DimVector({d, d})), q);

  // Right-hand side of the rearranged condition; the condition gap equals
  // d^{1-q} times its slack against chi0 + chi1.
  const double c = std::pow(static_cast<double>(d), 1.0 - q.q);
  const double k_term = (c - 1.0) * (c - 1.0) / (c * (1.0 - q.q));
  auto ensemine_rhs = [&](double s_x, double s_xy) {
    return s_a + s_x - c * s_xy + k_term;
  };
  // For the pure three-party state S_q(rho_AB) = S_q(rho_C) and vice versa.
  const double rhs_e1_ab = ensemine_rhs(s_b, s_c);
  const double rhs_e1_ac = ensemine_rhs(s_c, s_b);

  out.links.push_back(decide_leq("tuupper1-ab", uq_ab.value, BoundKind::upper,
                                 split_ab, BoundKind::exact, tol,
                                 "q-UE vs the averaged Q_B bound"));
  out.links.push_back(decide_leq("tuupper1-ac", uq_ac.value, BoundKind::upper,
                                 split_ac, BoundKind::exact, tol));
  out.links.push_back(decide_geq("subadd-condition-ab", out.gap_ab,
                                 BoundKind::exact, 0.0, BoundKind::exact, tol,
                                 "sufficient condition, not a theorem"));
  out.links.push_back(decide_geq("subadd-condition-ac", out.gap_ac,
                                 BoundKind::exact, 0.0, BoundKind::exact, tol,
                                 "sufficient condition, not a theorem"));

  const bool cond_ab = out.gap_ab >= -tol;
  const bool cond_ac = out.gap_ac >= -tol;
  if (cond_ab) {
    out.links.push_back(decide_leq("upperUEAB", uq_ab.value, BoundKind::upper,
                                   0.5 * rhs_e1_ab, BoundKind::exact, tol));
  }
  if (cond_ac) {
    out.links.push_back(decide_leq("upperUEAC", uq_ac.value, BoundKind::upper,
                                   0.5 * rhs_e1_ac, BoundKind::exact, tol));
  }

  const PureFunctional f = PureFunctional::tsallis(q.q);
  const RoofResult teoa_ab = concave_roof(rho_ab, {0}, f, budget);
  const RoofResult teoa_ac = concave_roof(rho_ac, {0}, f, budget);

  // UEqbound with the assistance quantity (the derivation requires the
  // max-roof on the right side even though the display omits the
  // superscript): TEoA(A|C) >= S_q(rho_A) - uE(rho_AB). The certified upper
  // bound on the right side is min(S_q(rho_A), S_q(rho_C)).
  out.links.push_back(decide_geq("UEqbound", teoa_ac.value, BoundKind::lower,
                                 std::min(s_a, s_c), BoundKind::upper, tol,
                                 "rhs = S_q(A) - qUE(AB) capped via certified "
                                 "bounds"));
  out.links.push_back(decide_geq("UEqbound2", teoa_ab.value, BoundKind::lower,
                                 std::min(s_a, s_b), BoundKind::upper, tol));

  if (cond_ab && cond_ac) {
    out.links.push_back(decide_geq(
        "bdtog1", teoa_ab.value + teoa_ac.value, BoundKind::lower,
        s_a + 0.5 * (out.xi.xi_b + out.xi.xi_c), BoundKind::exact, tol,
        "final chain inequality with the Xi terms"));
  }

  bool any_violated = false;
  bool any_inconclusive = false;
  for (const auto& link : out.links) {
    if (link.name.rfind("subadd-condition", 0) == 0) continue;  // diagnostic
    if (link.verdict == Verdict::violated) any_violated = true;
    if (link.verdict == Verdict::inconclusive) any_inconclusive = true;
  }
  out.overall = any_violated
                    ? Verdict::violated
                    : (any_inconclusive ? Verdict::inconclusive : Verdict::verified);
  return out;
}

// ---- scans ----

const std::vector<std::string>& scan_check_names() {
  static const std::vector<std::string> names = {
      "subadd",   "ccq-general", "xi",       "theorem1",
      "polygamy", "monogamy-tsallis", "monogamy-renyi", "ue-chain"};
  return names;
}

namespace {

struct Instance {
  double q = 1.0;
  int sample = 0;
  std::uint64_t replay_seed = 0;
  std::optional<DensityMatrix> state;
  double gap = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

constexpr std::uint64_t kTagScan = 0x7363616eULL;

void validate_scan_config(const ScanConfig& c) {
  const auto& names = scan_check_names();
  if (std::find(names.begin(), names.end(), c.check) == names.end()) {
    std::string msg = "scan: unknown check '" + c.check + "'; valid names:";
    for (const auto& n : names) msg += " " + n;
    throw std::invalid_argument(msg);
  }
  if (c.samples < 1) {
    throw std::invalid_argument("scan: samples must be >= 1");
  }
  if (c.q_values.empty()) {
    throw std::invalid_argument("scan: q grid must be nonempty");
  }
  for (double q : c.q_values) {
    if (!(q > 0.0)) {
      throw std::invalid_argument("scan: q_values must be positive");
    }
    if (c.check == "xi" || c.check == "ue-chain") {
      if (q <= 1.0 + kLimitBranchTol) {
        throw std::invalid_argument("scan: check '" + c.check +
                                    "' requires q > 1");
      }
    }
    if ((c.check == "subadd" || c.check == "theorem1" ||
         c.check == "polygamy") &&
        q < 1.0 - kLimitBranchTol) {
      throw std::invalid_argument("scan: check '" + c.check +
                                  "' requires q >= 1");
    }
    if (c.check == "ccq-general" && std::abs(q - 1.0) > kLimitBranchTol) {
      throw std::invalid_argument("scan: check 'ccq-general' is defined at q = 1");
    }
    if (c.check == "monogamy-tsallis" && (q < 2.0 || q > 3.0)) {
      throw std::invalid_argument("scan: monogamy-tsallis requires 2 <= q <= 3");
    }
    if (c.check == "monogamy-renyi" && q < 2.0) {
      throw std::invalid_argument("scan: monogamy-renyi requires alpha >= 2");
    }
  }
  const DimVector dims(c.dims);  // validates entries >= 2
  if (c.check == "subadd" && dims.count() != 2) {
    throw std::invalid_argument("scan: dims for 'subadd' must be bipartite");
  }
  if ((c.check == "xi" || c.check == "theorem1" || c.check == "ue-chain") &&
      dims.count() != 3) {
    throw std::invalid_argument("scan: dims for '" + c.check +
                                "' must be three-party");
  }
  if (c.check == "polygamy" && dims.count() < 3) {
    throw std::invalid_argument("scan: dims for 'polygamy' need >= 3 parties");
  }
  if (c.check == "monogamy-tsallis" || c.check == "monogamy-renyi") {
    if (dims.count() < 3) {
      throw std::invalid_argument("scan: monogamy needs >= 3 parties");
    }
    for (int k = 0; k < dims.count(); ++k) {
      if (dims.dim(k) != 2) {
        throw std::invalid_argument("scan: monogamy instances must be qubits");
      }
    }
  }
}

Instance run_instance(const ScanConfig& cfg, std::size_t qi, int sample) {
  const double qv = cfg.q_values[qi];
  const EntropicParameter q(qv);
  Instance inst;
  inst.q = qv;
  inst.sample = sample;
  inst.replay_seed = Rng::stream_seed(cfg.seed, kTagScan, qi,
                                      static_cast<std::uint64_t>(sample));
  Rng rng(inst.replay_seed);

  if (cfg.check == "subadd") {
    const DimVector dims(cfg.dims);
    const DensityMatrix rho = random_density(dims, dims.total(), rng);
    inst.state = rho;
    inst.gap = subadditivity_gap(rho, q);
    inst.verdict = inst.gap >= -cfg.tolerance ? Verdict::verified : Verdict::violated;
  } else if (cfg.check == "ccq-general") {
    const int d = cfg.dims.front();
    const CcqState gamma = random_general_ccq(d, rng);
    const GeneralCcqGap g = general_ccq_subadditivity_gap(gamma);
    inst.state = gamma.assemble();
    inst.gap = g.gap;
    inst.verdict = g.gap >= -cfg.tolerance ? Verdict::verified : Verdict::violated;
  } else if (cfg.check == "xi") {
    const PureState psi = haar_random_pure(DimVector(cfg.dims), rng);
    const XiBounds xi = xi_bounds(psi, q);
    inst.state = psi.projector();
    inst.gap = std::min(xi.xi_b, xi.xi_c);
    inst.verdict = inst.gap >= -cfg.tolerance ? Verdict::verified : Verdict::violated;
  } else if (cfg.check == "theorem1") {
    const PureState psi = haar_random_pure(DimVector(cfg.dims), rng);
    const Theorem1Result r = theorem1_check(psi, q, cfg.budget, cfg.tolerance);
    inst.state = psi.projector();
    inst.gap = r.rhs_lower - r.lhs;
    inst.verdict = r.verdict.verdict;
  } else if (cfg.check == "polygamy") {
    const PureState psi = haar_random_pure(DimVector(cfg.dims), rng);
    const PolygamyResult r =
        polygamy_check_nparty(psi.projector(), q, cfg.budget, cfg.tolerance);
    inst.state = psi.projector();
    inst.gap = r.rhs_lower - r.lhs;
    inst.verdict = r.verdict.verdict;
  } else if (cfg.check == "monogamy-tsallis" || cfg.check == "monogamy-renyi") {
    const PureState psi = haar_random_pure(DimVector(cfg.dims), rng);
    const PureFunctional f = cfg.check == "monogamy-tsallis"
                                 ? PureFunctional::tsallis(qv)
                                 : PureFunctional::renyi(qv);
    const MonogamyResult r =
        monogamy_check_multiqubit(psi.projector(), f, cfg.budget, cfg.tolerance);
    inst.state = psi.projector();
    inst.gap = r.lhs - r.rhs_upper;
    inst.verdict = r.verdict.verdict;
  } else if (cfg.check == "ue-chain") {
    const PureState psi = haar_random_pure(DimVector(cfg.dims), rng);
    const UeChainReport r = ue_bound_chain(psi, q, cfg.budget, cfg.tolerance);
    inst.state = psi.projector();
    double g = std::numeric_limits<double>::infinity();
    for (const auto& link : r.links) {
      if (link.name.rfind("subadd-condition", 0) == 0) continue;
      g = std::min(g, link.gap);
    }
    inst.gap = std::isfinite(g) ? g : 0.0;
    inst.verdict = r.overall;
  }
  return inst;
}

}  // namespace

ScanReport scan(const ScanConfig& config) {
  validate_scan_config(config);
  const std::size_t nq = config.q_values.size();
  const std::size_t total = nq * static_cast<std::size_t>(config.samples);

  std::vector<Instance> results(total);
  par::for_index(total, [&](std::size_t idx) {
    const std::size_t qi = idx / static_cast<std::size_t>(config.samples);
    const int sample = static_cast<int>(idx % static_cast<std::size_t>(config.samples));
    results[idx] = run_instance(config, qi, sample);
  });

  ScanReport report;
  report.config = config;
  report.min_gap = std::numeric_limits<double>::infinity();
  report.max_gap = -std::numeric_limits<double>::infinity();
  for (const Instance& inst : results) {
    switch (inst.verdict) {
      case Verdict::verified: ++report.verified; break;
      case Verdict::violated: ++report.violated; break;
      case Verdict::inconclusive: ++report.inconclusive; break;
    }
    report.min_gap = std::min(report.min_gap, inst.gap);
    report.max_gap = std::max(report.max_gap, inst.gap);
    report.rows.push_back(
        ScanRow{inst.q, inst.sample, inst.replay_seed, inst.gap, inst.verdict});
  }

  // Keep the 10 smallest-gap instances (deterministic tie-break on index).
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (results[a].gap != results[b].gap) return results[a].gap < results[b].gap;
    return a < b;
  });
  const std::size_t keep = std::min<std::size_t>(10, total);
  for (std::size_t i = 0; i < keep; ++i) {
    const Instance& inst = results[order[i]];
    report.worst.push_back(WorstCase{inst.q, inst.sample, inst.replay_seed,
                                     *inst.state, inst.gap, inst.verdict});
  }
  return report;
}

}  // namespace qpoly
