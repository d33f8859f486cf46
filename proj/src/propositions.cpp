#include "povmic/propositions.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "povmic/rng.hpp"
#include "povmic/tomography.hpp"

namespace povmic {

bool PropositionReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

namespace {

void add_check(PropositionReport& rep, std::string name, bool pass, double margin) {
  rep.checks.push_back({std::move(name), pass, margin});
}

double int_margin(int got, int want) {
  return got == want ? 0.0 : -std::abs(static_cast<double>(got - want));
}

std::string vector_string(const RVector& v) {
  std::ostringstream os;
  for (int i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v(i);
  }
  return os.str();
}

std::vector<Hermitian> tensor_family(const std::vector<Hermitian>& left,
                                     const std::vector<Hermitian>& right) {
  std::vector<Hermitian> out;
  out.reserve(left.size() * right.size());
  for (const auto& l : left) {
    for (const auto& r : right) out.push_back(tensor_prod(l, r));
  }
  return out;
}

double max_family_residual(const OperatorSubspace& space, const std::vector<Hermitian>& fam) {
  double worst = 0.0;
  for (const auto& h : fam) worst = std::max(worst, space.residual(h));
  return worst;
}

double max_cross_inner(const std::vector<Hermitian>& f1, const std::vector<Hermitian>& f2) {
  double worst = 0.0;
  for (const auto& a : f1) {
    for (const auto& b : f2) worst = std::max(worst, std::abs(hs_inner(a, b)));
  }
  return worst;
}

int scaled_trials(int base, int subspace_dim) {
  if (subspace_dim <= 16) return base;
  if (subspace_dim <= 32) return std::max(8, base / 2);
  if (subspace_dim <= 48) return std::max(8, base / 4);
  return std::max(4, base / 8);
}

struct PairScan {
  double min_distance = std::numeric_limits<double>::infinity();
  int pairs = 0;
  int skipped = 0;
};

PairScan pure_pair_scan(const Povm& p, int samples, Rng rng) {
  PairScan out;
  const int d = p.dim();
  RMatrix e = p.vectorized_effects();
  for (int i = 0; i < samples; ++i) {
    CVector psi = random_pure_vector(d, rng);
    CVector chi = random_pure_vector(d, rng);
    if (std::norm(psi.dot(chi)) > 1.0 - 1e-12) {
      ++out.skipped;
      continue;
    }
    RVector diff = e * (hs_vec(Hermitian::outer(psi)) - hs_vec(Hermitian::outer(chi)));
    out.min_distance = std::min(out.min_distance, diff.cwiseAbs().maxCoeff());
    ++out.pairs;
  }
  return out;
}

PairScan pure_mixed_scan(const Povm& p, int samples, Rng rng) {
  PairScan out;
  const int d = p.dim();
  RMatrix e = p.vectorized_effects();
  for (int i = 0; i < samples; ++i) {
    Hermitian pure = random_pure_state(d, rng);
    Hermitian mixed = random_density_matrix(d, rng);
    if (max_abs_diff(pure, mixed) < 1e-12) {
      ++out.skipped;
      continue;
    }
    RVector diff = e * (hs_vec(pure) - hs_vec(mixed));
    out.min_distance = std::min(out.min_distance, diff.cwiseAbs().maxCoeff());
    ++out.pairs;
  }
  return out;
}

/// Tensor of the witness pair on factor `idx` with one fixed random pure
/// state on every other factor (the same fixed states for both members).
std::pair<Hermitian, Hermitian> lift_pair(const std::vector<int>& dims, int idx,
                                          const std::pair<Hermitian, Hermitian>& w, Rng& rng) {
  std::vector<Hermitian> pieces;
  pieces.reserve(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (static_cast<int>(i) == idx) {
      pieces.push_back(w.first);
    } else {
      pieces.push_back(random_pure_state(dims[i], rng));
    }
  }
  Hermitian first = pieces[0];
  for (std::size_t i = 1; i < pieces.size(); ++i) first = tensor_prod(first, pieces[i]);
  pieces[idx] = w.second;
  Hermitian second = pieces[0];
  for (std::size_t i = 1; i < pieces.size(); ++i) second = tensor_prod(second, pieces[i]);
  return {first, second};
}

/// Smallest min(#pos, #neg) over nonzero M (x) G with M any selfadjoint
/// matrix on a d_a-dimensional space, from the inertia of G alone. The
/// inertia of M (x) G is (p q + n r, p r + n q) for M inertia (p, n) and G
/// inertia (q, r).
int exact_line_tensor_rank_pm(int d_a, const RVector& g_eigs, double tol = 1e-9) {
  double scale = std::max(1.0, g_eigs.cwiseAbs().maxCoeff());
  int q = static_cast<int>((g_eigs.array() > tol * scale).count());
  int r = static_cast<int>((g_eigs.array() < -tol * scale).count());
  int best = std::numeric_limits<int>::max();
  for (int p = 0; p <= d_a; ++p) {
    for (int n = 0; p + n <= d_a; ++n) {
      if (p + n == 0) continue;
      best = std::min(best, std::min(p * q + n * r, p * r + n * q));
    }
  }
  return best;
}

void run_min_rank_check(PropositionReport& rep, const std::string& name,
                        const OperatorSubspace& comp, int threshold, bool pm, int trials,
                        std::uint64_t seed) {
  RankCertificate cert =
      pm ? min_rank_pm_search(comp, trials, seed) : min_rank_search(comp, trials, seed);
  int floor_found = std::min(cert.min_found, cert.borderline_found);
  add_check(rep, name, floor_found >= threshold, static_cast<double>(floor_found - threshold));
}

void run_pair_check(PropositionReport& rep, const Povm& product, int samples, Rng rng) {
  PairScan scan = pure_pair_scan(product, samples, rng);
  add_check(rep, "pure_pairs_distinguished", scan.min_distance > 1e-9,
            scan.min_distance - 1e-9);
  rep.instance.emplace_back("pure_pairs", std::to_string(scan.pairs));
}

const RVector& cycle_qutrit_s(int index) {
  static const std::vector<RVector> table = [] {
    std::vector<RVector> t;
    RVector a(3), b(3), c(3);
    a << 1, 1, -2;
    b << 1, 2, -3;
    c << 2, -1, -1;
    t.push_back(a);
    t.push_back(b);
    t.push_back(c);
    return t;
  }();
  return table[index % table.size()];
}

Povm psic_factor(int dim, int qutrit_index) {
  if (dim == 2) return gen_sic_qubit();
  if (dim == 3) return make_qutrit_case2(cycle_qutrit_s(qutrit_index));
  throw std::invalid_argument("psic_factor: factor dimension must be 2 or 3");
}

}  // namespace

Povm make_ic_random(int dim, std::uint64_t seed) {
  for (int attempt = 0; attempt < 10; ++attempt) {
    std::uint64_t derived = Rng(seed).child(7000 + attempt).next_u64();
    Povm p = gen_random(dim, dim * dim, derived);
    if (is_ic(p).ic) return p;
  }
  throw std::runtime_error("make_ic_random: no full-span draw in 10 attempts");
}

Povm make_complement_line(int dim, const Hermitian& s) {
  if (s.dim() != dim) throw std::invalid_argument("make_complement_line: dimension mismatch");
  if (hs_norm(s) < 1e-12) throw std::invalid_argument("make_complement_line: zero generator");
  if (std::abs(s.trace()) > 1e-9 * std::max(1.0, hs_norm(s))) {
    throw std::invalid_argument("make_complement_line: generator must be traceless");
  }
  OperatorSubspace line = OperatorSubspace::span_of({s});
  OperatorSubspace rest = complement(line);
  return gen_from_span(rest.basis());
}

Povm make_qutrit_case2(const RVector& s) {
  if (s.size() != 3) throw std::invalid_argument("make_qutrit_case2: need 3 entries");
  if (std::abs(s.sum()) > 1e-9 * std::max(1.0, s.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("make_qutrit_case2: entries must sum to zero");
  }
  for (int i = 0; i < 3; ++i) {
    if (std::abs(s(i)) < 1e-9) {
      throw std::invalid_argument("make_qutrit_case2: entries must be nonzero (full rank)");
    }
  }
  return make_complement_line(3, Hermitian::diagonal(s));
}

Povm make_qutrit_case2() {
  RVector s(3);
  s << 1, 1, -2;
  return make_qutrit_case2(s);
}

Povm make_dim4_vpsic() {
  RVector g(4);
  g << 1, 1, -1, -1;
  return make_complement_line(4, Hermitian::diagonal(g));
}

Povm make_non_psic(int dim) {
  if (dim < 2) throw std::invalid_argument("make_non_psic: dimension must be >= 2");
  RVector s = RVector::Zero(dim);
  s(0) = 1;
  s(1) = -1;
  return make_complement_line(dim, Hermitian::diagonal(s));
}

PropositionReport check_prop1(int d_a, int d_b, const HarnessOptions& opts, bool corrupt_b) {
  if (d_a < 2 || d_a > 3) throw std::invalid_argument("check_prop1: d_a must be 2 or 3");
  if (d_b < 3 || d_b > 4) throw std::invalid_argument("check_prop1: d_b must be 3 or 4");

  PropositionReport rep;
  rep.proposition = "prop1";
  rep.seed = opts.seed;
  rep.instance.emplace_back("d_a", std::to_string(d_a));
  rep.instance.emplace_back("d_b", std::to_string(d_b));
  rep.instance.emplace_back("a_kind", "ic_random");
  rep.instance.emplace_back(
      "b_kind", corrupt_b ? "non_psic_line" : (d_b == 3 ? "qutrit_span8" : "dim4_line"));

  Povm a = make_ic_random(d_a, opts.seed);
  Povm b = corrupt_b ? make_non_psic(d_b)
                     : (d_b == 3 ? make_qutrit_case2() : make_dim4_vpsic());
  Povm ab = tensor_povm(a, b);

  IcReport ica = is_ic(a);
  add_check(rep, "a_complete_span", ica.ic, int_margin(ica.span_dim, d_a * d_a));

  OperatorSubspace span_b = operator_span(b);
  OperatorSubspace comp_b = complement(span_b);
  OperatorSubspace comp_ab = complement(operator_span(ab));

  std::vector<Hermitian> fam =
      tensor_family(OperatorSubspace::full(d_a).basis(), comp_b.basis());
  OperatorSubspace structured(ab.dim(), fam);

  if (corrupt_b) {
    CertifyReport cb = certify_povm(b, Property::psic, {16, 1e-8}, opts.seed);
    add_check(rep, "corrupted_b_not_psic",
              cb.verdict == Verdict::no && cb.strength == Strength::exact,
              cb.verdict == Verdict::no ? 1.0 : -1.0);

    RankCertificate cert = min_rank_search(structured, 16, opts.seed);
    add_check(rep, "product_rank2_found", cert.min_found <= 2,
              static_cast<double>(2 - cert.min_found));

    auto wb = psic_witness_states(comp_b.basis()[0]);
    Rng rng = Rng(opts.seed).child(11);
    auto lifted = lift_pair({d_a, d_b}, 1, wb, rng);
    double dist = statistics_distance(ab, lifted.first, lifted.second);
    add_check(rep, "lifted_witness_equal_stats", dist <= 1e-9, 1e-9 - dist);
    add_check(rep, "lifted_difference_hidden",
              difference_in_kernel(ab, lifted.first, lifted.second), 0.0);
    rep.refuted = true;
    rep.witness_states = lifted;
    rep.witness_stats_distance = dist;
    return rep;
  }

  CertifyReport cb = certify_povm(b, Property::psic, {opts.search_trials, 1e-8}, opts.seed);
  add_check(rep, "b_pure_state_complete", cb.verdict == Verdict::yes,
            cb.verdict == Verdict::yes ? 1.0 : -1.0);

  int expected = d_a * d_a * (d_b * d_b - span_b.dim());
  add_check(rep, "complement_dim", comp_ab.dim() == expected,
            int_margin(comp_ab.dim(), expected));

  double res = max_family_residual(comp_ab, fam);
  add_check(rep, "complement_containment", res <= 1e-9, 1e-9 - res);

  run_min_rank_check(rep, "complement_min_rank", structured, 3, false, opts.search_trials,
                     opts.seed);
  run_pair_check(rep, ab, opts.pair_samples, Rng(opts.seed).child(21));
  return rep;
}

PropositionReport check_prop2(int d_b, const RVector& s, const HarnessOptions& opts,
                              bool corrupt_a) {
  if (d_b < 3 || d_b > 4) throw std::invalid_argument("check_prop2: d_b must be 3 or 4");

  PropositionReport rep;
  rep.proposition = "prop2";
  rep.seed = opts.seed;
  rep.instance.emplace_back("d_a", "3");
  rep.instance.emplace_back("d_b", std::to_string(d_b));
  rep.instance.emplace_back("s", vector_string(s));
  rep.instance.emplace_back("a_kind", corrupt_a ? "non_psic_line" : "qutrit_span8");

  Povm a = corrupt_a ? make_non_psic(3) : make_qutrit_case2(s);
  RVector sb(3);
  sb << 1, 2, -3;
  Povm b = d_b == 3 ? make_qutrit_case2(sb) : make_dim4_vpsic();
  Povm ab = tensor_povm(a, b);

  OperatorSubspace span_a = operator_span(a);
  OperatorSubspace comp_a = complement(span_a);
  OperatorSubspace span_b = operator_span(b);
  OperatorSubspace comp_b = complement(span_b);
  OperatorSubspace comp_ab = complement(operator_span(ab));

  if (corrupt_a) {
    CertifyReport ca = certify_povm(a, Property::psic, {16, 1e-8}, opts.seed);
    add_check(rep, "corrupted_a_not_psic",
              ca.verdict == Verdict::no && ca.strength == Strength::exact,
              ca.verdict == Verdict::no ? 1.0 : -1.0);

    std::vector<Hermitian> fam =
        tensor_family(comp_a.basis(), OperatorSubspace::full(d_b).basis());
    auto extra = tensor_family(span_a.basis(), comp_b.basis());
    fam.insert(fam.end(), extra.begin(), extra.end());
    OperatorSubspace structured(ab.dim(), fam);
    RankCertificate cert = min_rank_search(structured, 16, opts.seed);
    add_check(rep, "product_rank2_found", cert.min_found <= 2,
              static_cast<double>(2 - cert.min_found));

    auto wa = psic_witness_states(comp_a.basis()[0]);
    Rng rng = Rng(opts.seed).child(12);
    auto lifted = lift_pair({3, d_b}, 0, wa, rng);
    double dist = statistics_distance(ab, lifted.first, lifted.second);
    add_check(rep, "lifted_witness_equal_stats", dist <= 1e-9, 1e-9 - dist);
    rep.refuted = true;
    rep.witness_states = lifted;
    rep.witness_stats_distance = dist;
    return rep;
  }

  QutritClassification cls = qutrit_classify(a);
  add_check(rep, "a_span8_full_rank_line", cls.kind == QutritCase::single_full_rank,
            int_margin(cls.span_dim, 8));

  CertifyReport cb = certify_povm(b, Property::psic, {opts.search_trials, 1e-8}, opts.seed);
  add_check(rep, "b_pure_state_complete", cb.verdict == Verdict::yes,
            cb.verdict == Verdict::yes ? 1.0 : -1.0);

  // Complement splits as (line (x) everything) + (span (x) complement).
  std::vector<Hermitian> fam_line =
      tensor_family(comp_a.basis(), OperatorSubspace::full(d_b).basis());
  std::vector<Hermitian> fam_rest = tensor_family(span_a.basis(), comp_b.basis());
  int expected = d_b * d_b + span_a.dim() * (d_b * d_b - span_b.dim());
  add_check(rep, "decomposition_dim",
            comp_ab.dim() == expected &&
                static_cast<int>(fam_line.size() + fam_rest.size()) == expected,
            int_margin(comp_ab.dim(), expected));
  double cross = max_cross_inner(fam_line, fam_rest);
  add_check(rep, "decomposition_orthogonal", cross <= 1e-9, 1e-9 - cross);
  double res = std::max(max_family_residual(comp_ab, fam_line),
                        max_family_residual(comp_ab, fam_rest));
  add_check(rep, "decomposition_containment", res <= 1e-9, 1e-9 - res);

  std::vector<Hermitian> fam = fam_line;
  fam.insert(fam.end(), fam_rest.begin(), fam_rest.end());
  OperatorSubspace structured(ab.dim(), fam);
  run_min_rank_check(rep, "complement_min_rank", structured, 3, false, opts.search_trials,
                     opts.seed);
  run_pair_check(rep, ab, opts.pair_samples, Rng(opts.seed).child(22));
  return rep;
}

PropositionReport check_prop3(int d_a, int d_b, const HarnessOptions& opts, bool case2_alice,
                              bool corrupt_b) {
  if (d_a < 2 || d_a > 3) throw std::invalid_argument("check_prop3: d_a must be 2 or 3");
  if (d_b < 4) throw std::invalid_argument("check_prop3: d_b must be >= 4");
  if (case2_alice && d_a != 3) {
    throw std::invalid_argument("check_prop3: case2_alice needs d_a = 3");
  }

  PropositionReport rep;
  rep.proposition = "prop3";
  rep.seed = opts.seed;
  rep.instance.emplace_back("d_a", std::to_string(d_a));
  rep.instance.emplace_back("d_b", std::to_string(d_b));
  rep.instance.emplace_back("a_kind", case2_alice ? "qutrit_span8" : "ic_random");
  rep.instance.emplace_back("b_kind", corrupt_b ? "one_sided_line" : "balanced_line");

  Povm a = case2_alice ? make_qutrit_case2() : make_ic_random(d_a, opts.seed);
  RVector g = RVector::Zero(d_b);
  if (corrupt_b) {
    g(0) = 2;
    g(1) = -1;
    g(2) = -1;
  } else {
    g(0) = 1;
    g(1) = 1;
    g(2) = -1;
    g(3) = -1;
  }
  Povm b = make_complement_line(d_b, Hermitian::diagonal(g));
  Povm ab = tensor_povm(a, b);

  OperatorSubspace span_a = operator_span(a);
  OperatorSubspace comp_a = complement(span_a);
  OperatorSubspace span_b = operator_span(b);
  OperatorSubspace comp_b = complement(span_b);

  if (corrupt_b) {
    CertifyReport cb = certify_povm(b, Property::vpsic, {16, 1e-8}, opts.seed);
    add_check(rep, "corrupted_b_not_verifiable",
              cb.verdict == Verdict::no && cb.strength == Strength::exact,
              cb.verdict == Verdict::no ? 1.0 : -1.0);

    std::vector<Hermitian> fam =
        tensor_family(OperatorSubspace::full(d_a).basis(), comp_b.basis());
    if (comp_a.dim() > 0) {
      auto extra = tensor_family(comp_a.basis(), span_b.basis());
      fam.insert(fam.end(), extra.begin(), extra.end());
    }
    OperatorSubspace structured(ab.dim(), fam);
    RankCertificate cert = min_rank_pm_search(structured, 16, opts.seed);
    add_check(rep, "product_rank_pm_1_found", cert.min_found <= 1,
              static_cast<double>(1 - cert.min_found));

    auto wb = vpsic_witness_states(comp_b.basis()[0]);
    Rng rng = Rng(opts.seed).child(13);
    auto lifted = lift_pair({d_a, d_b}, 1, wb, rng);
    double dist = statistics_distance(ab, lifted.first, lifted.second);
    add_check(rep, "lifted_witness_equal_stats", dist <= 1e-9, 1e-9 - dist);
    rep.refuted = true;
    rep.witness_states = lifted;
    rep.witness_stats_distance = dist;
    return rep;
  }

  if (case2_alice) {
    add_check(rep, "premise_a_not_complete", !is_ic(a).ic,
              int_margin(span_a.dim(), 8));

    std::vector<Hermitian> fam =
        tensor_family(comp_a.basis(), OperatorSubspace::full(d_b).basis());
    auto extra = tensor_family(span_a.basis(), comp_b.basis());
    fam.insert(fam.end(), extra.begin(), extra.end());
    OperatorSubspace structured(ab.dim(), fam);
    RankCertificate cert = min_rank_pm_search(structured, opts.search_trials, opts.seed);
    add_check(rep, "one_sided_element_found", cert.min_found <= 1,
              static_cast<double>(1 - cert.min_found));

    // The first family element is the line generator tensored with a diagonal
    // unit, which carries the one-sided spectrum exactly.
    Hermitian elem = structured.basis()[0];
    auto pair = vpsic_witness_states(elem, 1e-8);
    double dist = statistics_distance(ab, pair.first, pair.second);
    add_check(rep, "witness_equal_stats", dist <= 1e-9, 1e-9 - dist);
    rep.refuted = true;
    rep.witness_states = pair;
    rep.witness_stats_distance = dist;
    return rep;
  }

  IcReport ica = is_ic(a);
  add_check(rep, "a_complete_span", ica.ic, int_margin(ica.span_dim, d_a * d_a));

  CertifyReport cb = certify_povm(b, Property::vpsic, {opts.search_trials, 1e-8}, opts.seed);
  add_check(rep, "b_verifiable_exact",
            cb.verdict == Verdict::yes && cb.strength == Strength::exact,
            cb.verdict == Verdict::yes ? 1.0 : -1.0);

  OperatorSubspace comp_ab = complement(operator_span(ab));
  std::vector<Hermitian> fam =
      tensor_family(OperatorSubspace::full(d_a).basis(), comp_b.basis());
  add_check(rep, "complement_dim", comp_ab.dim() == d_a * d_a,
            int_margin(comp_ab.dim(), d_a * d_a));
  double res = max_family_residual(comp_ab, fam);
  add_check(rep, "complement_containment", res <= 1e-9, 1e-9 - res);

  int exact = exact_line_tensor_rank_pm(d_a, eigh(comp_b.basis()[0]).values);
  add_check(rep, "exact_min_rank_pm", exact >= 2, static_cast<double>(exact - 2));

  OperatorSubspace structured(ab.dim(), fam);
  run_min_rank_check(rep, "search_min_rank_pm", structured, 2, true, opts.search_trials,
                     opts.seed);

  PairScan scan = pure_mixed_scan(ab, opts.pair_samples, Rng(opts.seed).child(23));
  add_check(rep, "pure_mixed_distinguished", scan.min_distance > 1e-9,
            scan.min_distance - 1e-9);
  rep.instance.emplace_back("pure_mixed_pairs", std::to_string(scan.pairs));

  // Spectra of coordinate-block compressions must interlace on complement
  // samples, the mechanism that forces two eigenvalues of each sign.
  Rng rng = Rng(opts.seed).child(24);
  double worst = std::numeric_limits<double>::infinity();
  for (int draw = 0; draw < 50; ++draw) {
    RVector c(structured.dim());
    for (int i = 0; i < c.size(); ++i) c(i) = rng.gaussian();
    c.normalize();
    Hermitian t = structured.element(c);
    for (int i = 0; i < d_a; ++i) {
      std::vector<int> cols(d_b);
      std::iota(cols.begin(), cols.end(), i * d_b);
      InterlacingReport ir = check_interlacing(t, cols);
      worst = std::min(worst, ir.worst_slack);
    }
  }
  add_check(rep, "complement_block_interlacing", worst >= -1e-9, worst + 1e-9);
  return rep;
}

PropositionReport check_prop4(const HarnessOptions& opts) {
  PropositionReport rep;
  rep.proposition = "prop4";
  rep.seed = opts.seed;
  rep.instance.emplace_back("d_a", "3");
  rep.instance.emplace_back("d_b", "4");

  Povm a2 = make_qutrit_case2();
  QutritClassification cls = qutrit_classify(a2);
  add_check(rep, "span8_classified", cls.kind == QutritCase::single_full_rank,
            int_margin(cls.span_dim, 8));
  int pm = cls.generator ? rank_pm(*cls.generator) : -1;
  add_check(rep, "span8_generator_one_sided", pm == 1, int_margin(pm, 1));
  CertifyReport v2 = certify_povm(a2, Property::vpsic, {opts.search_trials, 1e-8}, opts.seed);
  bool ic2 = is_ic(a2).ic;
  add_check(rep, "span8_verifiability_matches_completeness",
            v2.verdict == Verdict::no && !ic2, v2.verdict == Verdict::no ? 1.0 : -1.0);

  Povm a1 = make_ic_random(3, opts.seed);
  CertifyReport v1 = certify_povm(a1, Property::vpsic, {opts.search_trials, 1e-8}, opts.seed);
  bool ic1 = is_ic(a1).ic;
  add_check(rep, "full_span_verifiability_matches_completeness",
            v1.verdict == Verdict::yes && v1.strength == Strength::exact && ic1,
            v1.verdict == Verdict::yes ? 1.0 : -1.0);

  PropositionReport sub = check_prop3(3, 4, opts);
  for (const auto& c : sub.checks) add_check(rep, "product_" + c.name, c.pass, c.margin);
  return rep;
}

PropositionReport check_multipartite(const std::vector<int>& factors,
                                     const HarnessOptions& opts, int corrupt_index) {
  if (factors.size() < 2) throw std::invalid_argument("check_multipartite: need >= 2 factors");
  long total = 1;
  for (int d : factors) {
    if (d != 2 && d != 3) {
      throw std::invalid_argument("check_multipartite: factors must be 2 or 3");
    }
    total *= d;
  }
  if (total > 36) throw std::invalid_argument("check_multipartite: product dimension > 36");
  if (corrupt_index >= static_cast<int>(factors.size())) {
    throw std::invalid_argument("check_multipartite: corrupt index out of range");
  }

  PropositionReport rep;
  rep.proposition = "multipartite";
  rep.seed = opts.seed;
  {
    std::ostringstream os;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) os << ",";
      os << factors[i];
    }
    rep.instance.emplace_back("factors", os.str());
  }
  if (corrupt_index >= 0) {
    rep.instance.emplace_back("corrupt_index", std::to_string(corrupt_index));
  }

  std::vector<Povm> povms;
  int qutrit_count = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (static_cast<int>(i) == corrupt_index) {
      povms.push_back(make_non_psic(factors[i]));
      if (factors[i] == 3) ++qutrit_count;
    } else {
      povms.push_back(psic_factor(factors[i], qutrit_count));
      if (factors[i] == 3) ++qutrit_count;
    }
  }
  Povm product = tensor_povm_n(povms);

  long span_product = 1;
  for (const auto& p : povms) span_product *= operator_span(p).dim();
  OperatorSubspace span = operator_span(product);
  add_check(rep, "span_dim_multiplies", span.dim() == span_product,
            int_margin(span.dim(), static_cast<int>(span_product)));

  if (corrupt_index >= 0) {
    const Povm& bad = povms[corrupt_index];
    CertifyReport cc = certify_povm(bad, Property::psic, {16, 1e-8}, opts.seed);
    add_check(rep, "corrupted_factor_not_psic",
              cc.verdict == Verdict::no && cc.strength == Strength::exact,
              cc.verdict == Verdict::no ? 1.0 : -1.0);

    OperatorSubspace comp_bad = complement(operator_span(bad));
    auto wf = psic_witness_states(comp_bad.basis()[0]);
    Rng rng = Rng(opts.seed).child(14);
    auto lifted = lift_pair(factors, corrupt_index, wf, rng);
    double dist = statistics_distance(product, lifted.first, lifted.second);
    add_check(rep, "lifted_witness_equal_stats", dist <= 1e-9, 1e-9 - dist);
    add_check(rep, "lifted_difference_hidden",
              difference_in_kernel(product, lifted.first, lifted.second), 0.0);
    rep.refuted = true;
    rep.witness_states = lifted;
    rep.witness_stats_distance = dist;
    return rep;
  }

  OperatorSubspace comp = complement(span);
  run_min_rank_check(rep, "complement_min_rank", comp, 3, false,
                     scaled_trials(opts.search_trials, comp.dim()), opts.seed);
  run_pair_check(rep, product, opts.pair_samples, Rng(opts.seed).child(25));
  return rep;
}

PropositionReport check_factorized_dims(int n_a, int m_a, int n_b, int m_b,
                                        const HarnessOptions& opts, int corrupt_index) {
  if (n_a < 0 || m_a < 0 || n_b < 0 || m_b < 0 || n_a + m_a < 1 || n_b + m_b < 1) {
    throw std::invalid_argument("check_factorized_dims: need >= 1 factor per side");
  }
  long d_a = 1, d_b = 1;
  for (int i = 0; i < n_a; ++i) d_a *= 2;
  for (int i = 0; i < m_a; ++i) d_a *= 3;
  for (int i = 0; i < n_b; ++i) d_b *= 2;
  for (int i = 0; i < m_b; ++i) d_b *= 3;
  if (d_a * d_b > 36) throw std::invalid_argument("check_factorized_dims: product dim > 36");

  std::vector<int> factor_dims;
  for (int i = 0; i < n_a; ++i) factor_dims.push_back(2);
  for (int i = 0; i < m_a; ++i) factor_dims.push_back(3);
  for (int i = 0; i < n_b; ++i) factor_dims.push_back(2);
  for (int i = 0; i < m_b; ++i) factor_dims.push_back(3);
  if (corrupt_index >= static_cast<int>(factor_dims.size())) {
    throw std::invalid_argument("check_factorized_dims: corrupt index out of range");
  }

  PropositionReport rep;
  rep.proposition = "factorized_dims";
  rep.seed = opts.seed;
  rep.instance.emplace_back("d_a", std::to_string(d_a));
  rep.instance.emplace_back("d_b", std::to_string(d_b));
  rep.instance.emplace_back("qubits_a", std::to_string(n_a));
  rep.instance.emplace_back("qutrits_a", std::to_string(m_a));
  rep.instance.emplace_back("qubits_b", std::to_string(n_b));
  rep.instance.emplace_back("qutrits_b", std::to_string(m_b));
  if (corrupt_index >= 0) {
    rep.instance.emplace_back("corrupt_index", std::to_string(corrupt_index));
  }

  int qutrit_count = 0;
  int slot = 0;
  std::vector<Povm> factors;
  for (int d : factor_dims) {
    if (slot == corrupt_index) {
      factors.push_back(make_non_psic(d));
    } else if (d == 2) {
      factors.push_back(psic_factor(2, 0));
    } else {
      factors.push_back(psic_factor(3, qutrit_count));
    }
    if (d == 3) ++qutrit_count;
    ++slot;
  }
  std::vector<Povm> side_a(factors.begin(), factors.begin() + (n_a + m_a));
  std::vector<Povm> side_b(factors.begin() + (n_a + m_a), factors.end());

  Povm a = side_a.size() == 1 ? side_a[0] : tensor_povm_n(side_a);
  Povm b = side_b.size() == 1 ? side_b[0] : tensor_povm_n(side_b);
  Povm product = tensor_povm(a, b);

  long expect_a = 1, expect_b = 1;
  for (const auto& p : side_a) expect_a *= operator_span(p).dim();
  for (const auto& p : side_b) expect_b *= operator_span(p).dim();
  OperatorSubspace span_a = operator_span(a);
  OperatorSubspace span_b = operator_span(b);
  OperatorSubspace span = operator_span(product);
  add_check(rep, "span_a_factorizes", span_a.dim() == expect_a,
            int_margin(span_a.dim(), static_cast<int>(expect_a)));
  add_check(rep, "span_b_factorizes", span_b.dim() == expect_b,
            int_margin(span_b.dim(), static_cast<int>(expect_b)));
  add_check(rep, "span_product_multiplies", span.dim() == span_a.dim() * span_b.dim(),
            int_margin(span.dim(), span_a.dim() * span_b.dim()));

  if (corrupt_index >= 0) {
    const Povm& bad = factors[corrupt_index];
    CertifyReport cc = certify_povm(bad, Property::psic, {16, 1e-8}, opts.seed);
    add_check(rep, "corrupted_factor_not_psic",
              cc.verdict == Verdict::no && cc.strength == Strength::exact,
              cc.verdict == Verdict::no ? 1.0 : -1.0);

    OperatorSubspace comp_bad = complement(operator_span(bad));
    auto wf = psic_witness_states(comp_bad.basis()[0]);
    Rng rng = Rng(opts.seed).child(15);
    auto lifted = lift_pair(factor_dims, corrupt_index, wf, rng);
    double dist = statistics_distance(product, lifted.first, lifted.second);
    add_check(rep, "lifted_witness_equal_stats", dist <= 1e-9, 1e-9 - dist);
    add_check(rep, "lifted_difference_hidden",
              difference_in_kernel(product, lifted.first, lifted.second), 0.0);
    rep.refuted = true;
    rep.witness_states = lifted;
    rep.witness_stats_distance = dist;
    return rep;
  }

  OperatorSubspace comp = complement(span);
  run_min_rank_check(rep, "complement_min_rank", comp, 3, false,
                     scaled_trials(opts.search_trials, comp.dim()), opts.seed);

  int samples = std::min(opts.pair_samples, 2000);
  PairScan scan = pure_pair_scan(product, samples, Rng(opts.seed).child(26));
  add_check(rep, "pure_pairs_distinguished", scan.min_distance > 1e-9,
            scan.min_distance - 1e-9);
  rep.instance.emplace_back("pure_pairs", std::to_string(scan.pairs));
  return rep;
}

PropositionReport explore_product_psic(int d_a, int d_b, const HarnessOptions& opts) {
  if (d_a < 4) throw std::invalid_argument("explore_product_psic: d_a must be >= 4");
  if (d_b < 3) throw std::invalid_argument("explore_product_psic: d_b must be >= 3");
  if (static_cast<long>(d_a) * d_b > 36) {
    throw std::invalid_argument("explore_product_psic: product dim > 36");
  }

  PropositionReport rep;
  rep.proposition = "explore";
  rep.seed = opts.seed;
  rep.instance.emplace_back("d_a", std::to_string(d_a));
  rep.instance.emplace_back("d_b", std::to_string(d_b));
  rep.instance.emplace_back("status", "exploratory: no result backs this configuration");

  auto full_rank_line = [](int d) {
    RVector s(d);
    double sum = 0;
    for (int i = 0; i + 1 < d; ++i) {
      s(i) = i + 1;
      sum += i + 1;
    }
    s(d - 1) = -sum;
    return make_complement_line(d, Hermitian::diagonal(s));
  };

  Povm a = full_rank_line(d_a);
  Povm b = d_b == 3 ? make_qutrit_case2() : full_rank_line(d_b);
  Povm ab = tensor_povm(a, b);

  CertifyReport ca = certify_povm(a, Property::psic, {opts.search_trials, 1e-8}, opts.seed);
  CertifyReport cb = certify_povm(b, Property::psic, {opts.search_trials, 1e-8}, opts.seed);
  add_check(rep, "a_pure_state_complete", ca.verdict == Verdict::yes,
            ca.verdict == Verdict::yes ? 1.0 : -1.0);
  add_check(rep, "b_pure_state_complete", cb.verdict == Verdict::yes,
            cb.verdict == Verdict::yes ? 1.0 : -1.0);

  OperatorSubspace comp = complement(operator_span(ab));
  RankCertificate cert = min_rank_search(
      comp, scaled_trials(opts.search_trials, comp.dim()), opts.seed);
  int floor_found = std::min(cert.min_found, cert.borderline_found);
  add_check(rep, "product_min_rank_empirical", floor_found >= 3,
            static_cast<double>(floor_found - 3));
  if (cert.min_found <= 2) {
    Hermitian elem = comp.element(cert.witness_coeffs);
    auto pair = psic_witness_states(elem, 1e-6);
    rep.refuted = true;
    rep.witness_states = pair;
    rep.witness_stats_distance = statistics_distance(ab, pair.first, pair.second);
  }

  int samples = std::min(opts.pair_samples, 2000);
  PairScan scan = pure_pair_scan(ab, samples, Rng(opts.seed).child(27));
  add_check(rep, "pure_pairs_distinguished", scan.min_distance > 1e-9,
            scan.min_distance - 1e-9);
  rep.instance.emplace_back("pure_pairs", std::to_string(scan.pairs));
  return rep;
}

InterlacingReport check_interlacing(const Hermitian& t, const std::vector<int>& block_cols) {
  const int n = t.dim();
  const int k = static_cast<int>(block_cols.size());
  if (k < 1 || k > n) throw std::invalid_argument("check_interlacing: bad block size");
  std::vector<bool> seen(n, false);
  for (int c : block_cols) {
    if (c < 0 || c >= n || seen[c]) {
      throw std::invalid_argument("check_interlacing: invalid column selection");
    }
    seen[c] = true;
  }

  CMatrix sub(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) sub(i, j) = t.mat()(block_cols[i], block_cols[j]);
  }
  RVector et = eigh(t).values;
  RVector ec = eigh(Hermitian(sub)).values;

  InterlacingReport out;
  out.comparisons = 2 * k;
  out.worst_slack = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    out.worst_slack = std::min(out.worst_slack, et(j) - ec(j));
    out.worst_slack = std::min(out.worst_slack, ec(j) - et(j + n - k));
  }
  out.pass = out.worst_slack >= -1e-9;
  return out;
}

InterlacingReport interlacing_suite(int draws, std::uint64_t seed) {
  Rng rng(seed);
  InterlacingReport total;
  total.pass = true;
  total.worst_slack = std::numeric_limits<double>::infinity();
  total.comparisons = 0;
  for (int d = 0; d < draws; ++d) {
    int n = 4 + static_cast<int>(rng.next_u64() % 7);
    int k = 2 + static_cast<int>(rng.next_u64() % (n - 2));
    Hermitian t = random_hermitian(n, rng);
    std::vector<int> cols(n);
    std::iota(cols.begin(), cols.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      int j = static_cast<int>(rng.next_u64() % (i + 1));
      std::swap(cols[i], cols[j]);
    }
    cols.resize(k);
    std::sort(cols.begin(), cols.end());
    InterlacingReport r = check_interlacing(t, cols);
    total.pass = total.pass && r.pass;
    total.worst_slack = std::min(total.worst_slack, r.worst_slack);
    total.comparisons += r.comparisons;

    // Sign counts cannot grow under compression: a drop in the chains above
    // would show here as extra positive or negative eigenvalues.
    CMatrix sub(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) sub(i, j) = t.mat()(cols[i], cols[j]);
    }
    RVector et = eigh(t).values;
    RVector ec = eigh(Hermitian(sub)).values;
    int pos_t = static_cast<int>((et.array() > 1e-9).count());
    int neg_t = static_cast<int>((et.array() < -1e-9).count());
    int pos_c = static_cast<int>((ec.array() > 1e-9).count());
    int neg_c = static_cast<int>((ec.array() < -1e-9).count());
    if (pos_c > pos_t || neg_c > neg_t) {
      total.pass = false;
      total.worst_slack = std::min(total.worst_slack, -1.0);
    }
  }
  return total;
}

CMatrix phase_block_unitary(double alpha, double beta, int block_dim) {
  if (block_dim < 1) throw std::invalid_argument("phase_block_unitary: bad block dim");
  const int b = block_dim;
  const Complex ea = std::exp(Complex(0, alpha));
  const Complex eb = std::exp(Complex(0, beta));
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  CMatrix id = CMatrix::Identity(b, b);
  CMatrix u = CMatrix::Zero(3 * b, 3 * b);
  u.block(0, 0, b, b) = (s2 / s6) * id;
  u.block(0, b, b, b) = (s2 / s6) * ea * id;
  u.block(0, 2 * b, b, b) = (s2 / s6) * eb * id;
  u.block(b, 0, b, b) = (s3 / s6) * id;
  u.block(b, 2 * b, b, b) = -(s3 / s6) * eb * id;
  u.block(2 * b, 0, b, b) = (1.0 / s6) * id;
  u.block(2 * b, b, b, b) = -(2.0 / s6) * ea * id;
  u.block(2 * b, 2 * b, b, b) = (1.0 / s6) * eb * id;
  return u;
}

PropositionReport check_proof_unitaries(std::uint64_t seed) {
  PropositionReport rep;
  rep.proposition = "machinery";
  rep.seed = seed;
  Rng rng(seed);

  auto random_complex = [&rng](int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = rng.cgaussian();
    }
    return m;
  };
  auto re_part = [](const CMatrix& m) { return CMatrix((m + m.adjoint()) / 2.0); };
  auto im_part = [](const CMatrix& m) {
    return CMatrix((m - m.adjoint()) / Complex(0, 2.0));
  };

  double worst_unitary = 0.0;
  double worst_formula = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    double alpha = 2.0 * M_PI * rng.uniform();
    double beta = 2.0 * M_PI * rng.uniform();
    int b = draw % 2 == 0 ? 3 : 4;
    CMatrix u = phase_block_unitary(alpha, beta, b);
    CMatrix id = CMatrix::Identity(3 * b, 3 * b);
    worst_unitary = std::max(worst_unitary, (u * u.adjoint() - id).cwiseAbs().maxCoeff());
    worst_unitary = std::max(worst_unitary, (u.adjoint() * u - id).cwiseAbs().maxCoeff());

    CMatrix l = random_hermitian(b, rng).mat();
    CMatrix r1 = random_hermitian(b, rng).mat();
    CMatrix r2 = random_hermitian(b, rng).mat();
    CMatrix r3 = random_hermitian(b, rng).mat();
    double s1 = rng.gaussian(), s2v = rng.gaussian();
    double s3v = -(s1 + s2v);
    CMatrix t21 = random_complex(b);
    CMatrix t31 = random_complex(b);
    CMatrix t32 = random_complex(b);

    CMatrix t = CMatrix::Zero(3 * b, 3 * b);
    t.block(0, 0, b, b) = s1 * l + r1;
    t.block(b, b, b, b) = s2v * l + r2;
    t.block(2 * b, 2 * b, b, b) = s3v * l + r3;
    t.block(b, 0, b, b) = t21;
    t.block(0, b, b, b) = t21.adjoint();
    t.block(2 * b, 0, b, b) = t31;
    t.block(0, 2 * b, b, b) = t31.adjoint();
    t.block(2 * b, b, b, b) = t32;
    t.block(b, 2 * b, b, b) = t32.adjoint();

    CMatrix rotated = u * t * u.adjoint();
    CMatrix formula =
        (r1 + r2 + r3) / 3.0 +
        (2.0 / 3.0) * (re_part(t21) * std::cos(alpha) - im_part(t21) * std::sin(alpha) +
                       re_part(t31) * std::cos(beta) - im_part(t31) * std::sin(beta) +
                       re_part(t32) * std::cos(beta - alpha) -
                       im_part(t32) * std::sin(beta - alpha));
    worst_formula = std::max(
        worst_formula, (rotated.block(0, 0, b, b) - formula).cwiseAbs().maxCoeff());
  }
  add_check(rep, "block_unitary_unitary", worst_unitary <= 1e-12, 1e-12 - worst_unitary);
  add_check(rep, "diagonal_block_formula", worst_formula <= 1e-10, 1e-10 - worst_formula);

  double worst_conj = 0.0;
  double worst_rank_gap = std::numeric_limits<double>::infinity();
  for (int draw = 0; draw < 20; ++draw) {
    int b = draw % 2 == 0 ? 3 : 4;
    CMatrix t = random_complex(b);
    CMatrix r = re_part(t);
    CMatrix j = im_part(t);
    CMatrix id = CMatrix::Identity(b, b);
    const Complex iu(0, 1);

    CMatrix m = CMatrix::Zero(2 * b, 2 * b);
    m.block(0, b, b, b) = t;
    m.block(b, 0, b, b) = t.adjoint();

    CMatrix t0(2 * b, 2 * b);
    t0.block(0, 0, b, b) = j;
    t0.block(0, b, b, b) = r;
    t0.block(b, 0, b, b) = r;
    t0.block(b, b, b, b) = -j;
    CMatrix v(2 * b, 2 * b);
    v.block(0, 0, b, b) = id;
    v.block(0, b, b, b) = -iu * id;
    v.block(b, 0, b, b) = -iu * id;
    v.block(b, b, b, b) = id;
    v /= std::sqrt(2.0);

    CMatrix tp(2 * b, 2 * b);
    tp.block(0, 0, b, b) = r;
    tp.block(0, b, b, b) = iu * j;
    tp.block(b, 0, b, b) = -iu * j;
    tp.block(b, b, b, b) = -r;
    CMatrix w(2 * b, 2 * b);
    w.block(0, 0, b, b) = id;
    w.block(0, b, b, b) = -id;
    w.block(b, 0, b, b) = id;
    w.block(b, b, b, b) = id;
    w /= std::sqrt(2.0);

    worst_conj = std::max(worst_conj, (m - v * t0 * v.adjoint()).cwiseAbs().maxCoeff());
    worst_conj = std::max(worst_conj, (m - w * tp * w.adjoint()).cwiseAbs().maxCoeff());

    int rank_t0 = rank_eps(Hermitian(t0));
    int bound = std::max(rank_eps(Hermitian(r)), rank_eps(Hermitian(j)));
    worst_rank_gap = std::min(worst_rank_gap, static_cast<double>(rank_t0 - bound));
  }
  add_check(rep, "offdiagonal_conjugations", worst_conj <= 1e-12, 1e-12 - worst_conj);
  add_check(rep, "offdiagonal_rank_bound", worst_rank_gap >= 0.0, worst_rank_gap);

  const double grid[7] = {0.0, 0.9, 1.7, 2.6, 3.5, 4.3, 5.2};
  RMatrix f(49, 7);
  int row = 0;
  for (double alpha : grid) {
    for (double beta : grid) {
      f(row, 0) = 1.0;
      f(row, 1) = std::cos(alpha);
      f(row, 2) = std::sin(alpha);
      f(row, 3) = std::cos(beta);
      f(row, 4) = std::sin(beta);
      f(row, 5) = std::cos(beta - alpha);
      f(row, 6) = std::sin(beta - alpha);
      ++row;
    }
  }
  RMatrix gram = f.transpose() * f;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(gram);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  int rank = static_cast<int>((es.eigenvalues().array() > 1e-10 * hi).count());
  add_check(rep, "trig_gram_rank", rank == 7, lo / hi - 1e-10);
  return rep;
}

}  // namespace povmic
