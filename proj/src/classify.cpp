#include "attain/classify.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "attain/errors.hpp"
#include "attain/numlab.hpp"

namespace attain {

namespace {

// Overridden indices that fall on strand j.
std::set<Index> overridden_on_strand(const SequenceSpec& seq, std::size_t j) {
  std::set<Index> out;
  for (const auto& [index, value] : seq.overrides()) {
    if (seq.strand_of(index) == j) out.insert(index);
  }
  return out;
}

// Occurrences first, first+1, ... of strand j, skipping overridden indices.
std::vector<std::uint64_t> free_occurrences(const SequenceSpec& seq, std::size_t j,
                                            std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t k = first; out.size() < count; ++k) {
    if (!seq.is_overridden(seq.index_of(j, k))) out.push_back(k);
  }
  return out;
}

bool all_limits_equal(const SequenceSpec& seq) {
  return essential_spectrum(seq).size() == 1;
}

}  // namespace

Decomposition::Decomposition(SequenceSpec seq, Rational alpha, std::map<Index, Rational> f_entries)
    : seq_(std::move(seq)), alpha_(std::move(alpha)), f_entries_(std::move(f_entries)) {}

Rational Decomposition::f(Index n) const {
  auto it = f_entries_.find(n);
  return it == f_entries_.end() ? Rational(0) : it->second;
}

Rational Decomposition::kplus(Index n) const {
  if (f_entries_.contains(n)) return Rational(0);
  return seq_.entry(n) - alpha_;
}

Rational Decomposition::kplus_bound(Index n) const {
  const std::uint64_t k = seq_.occurrence_of(n);
  Rational bound(0);
  for (const auto& strand : seq_.strands()) bound = std::max(bound, strand.deviation(k));
  return bound;
}

const Rational& witness_sup(const Witness& witness) {
  if (const auto* c = std::get_if<CoordinateWitness>(&witness)) return c->sup;
  return std::get<MixedPairsWitness>(witness).b;
}

Rational mixed_pairs_mu(const Rational& a, const Rational& b, std::uint64_t k) {
  return b - (b - a) / Rational(static_cast<std::int64_t>(2 * (k + 1)));
}

std::vector<CoordinateTerm> coordinate_terms(const SequenceSpec& seq,
                                             const CoordinateWitness& witness,
                                             std::size_t count) {
  const Strand& strand = seq.strands().at(witness.strand_index);
  std::vector<CoordinateTerm> terms;
  terms.reserve(count);
  for (std::uint64_t k : free_occurrences(seq, witness.strand_index, 0, count)) {
    terms.push_back({seq.index_of(witness.strand_index, k), strand.value(k)});
  }
  return terms;
}

std::vector<PairTerm> pair_terms(const SequenceSpec& seq, const MixedPairsWitness& witness,
                                 std::size_t count) {
  const Strand& a_strand = seq.strands().at(witness.a_strand);
  const Strand& b_strand = seq.strands().at(witness.b_strand);
  const auto a_occ = free_occurrences(seq, witness.a_strand, witness.a_first_occurrence, count);
  const auto b_occ = free_occurrences(seq, witness.b_strand, 0, count);
  std::vector<PairTerm> terms;
  terms.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    PairTerm term;
    term.a_index = seq.index_of(witness.a_strand, a_occ[k]);
    term.b_index = seq.index_of(witness.b_strand, b_occ[k]);
    term.v = a_strand.value(a_occ[k]);
    term.u = b_strand.value(b_occ[k]);
    term.mu = mixed_pairs_mu(witness.a, witness.b, k);
    const Rational mu2 = term.mu * term.mu;
    term.t_squared = (mu2 - term.v * term.v) / (term.u * term.u - mu2);
    terms.push_back(std::move(term));
  }
  return terms;
}

std::vector<Rational> predicted_norms(const SequenceSpec& seq, const Witness& witness,
                                      std::size_t count) {
  std::vector<Rational> out;
  out.reserve(count);
  if (const auto* c = std::get_if<CoordinateWitness>(&witness)) {
    for (auto& term : coordinate_terms(seq, *c, count)) out.push_back(std::move(term.value));
  } else {
    const auto& pairs = std::get<MixedPairsWitness>(witness);
    for (std::size_t k = 0; k < count; ++k) out.push_back(mixed_pairs_mu(pairs.a, pairs.b, k));
  }
  return out;
}

Index witness_extent(const SequenceSpec& seq, const Witness& witness, std::size_t count) {
  if (count == 0) return 0;
  if (const auto* c = std::get_if<CoordinateWitness>(&witness)) {
    const auto occ = free_occurrences(seq, c->strand_index, 0, count);
    return seq.index_of(c->strand_index, occ.back());
  }
  const auto& pairs = std::get<MixedPairsWitness>(witness);
  const auto a_occ = free_occurrences(seq, pairs.a_strand, pairs.a_first_occurrence, count);
  const auto b_occ = free_occurrences(seq, pairs.b_strand, 0, count);
  return std::max(seq.index_of(pairs.a_strand, a_occ.back()),
                  seq.index_of(pairs.b_strand, b_occ.back()));
}

ANVerdict classify_an(const SequenceSpec& seq) {
  const std::set<Rational> essential = essential_spectrum(seq);
  if (essential.size() > 1) {
    return NotAN{MultipleEssentialPoints{essential}, build_witness(seq)};
  }
  const Rational& alpha = *essential.begin();
  const BelowThreshold below = spectrum_elements_below(seq, alpha);
  if (const auto* inf = std::get_if<InfiniteBelow>(&below)) {
    return NotAN{InfinitelyManyBelowAlpha{alpha, inf->strand_index}, build_witness(seq)};
  }
  return IsAN{alpha, decompose(seq, alpha)};
}

Decomposition decompose(const SequenceSpec& seq, const Rational& alpha) {
  const std::set<Rational> essential = essential_spectrum(seq);
  if (essential.size() != 1 || *essential.begin() != alpha) {
    throw Error(ErrorCode::NotApplicable,
                "decompose: essential spectrum is not {" + alpha.to_string() + "}");
  }
  if (std::holds_alternative<InfiniteBelow>(spectrum_elements_below(seq, alpha))) {
    throw Error(ErrorCode::NotApplicable,
                "decompose: infinitely many spectrum points below " + alpha.to_string());
  }
  // Every strand now tends to alpha from above or sits on it, so only
  // overrides can fall below alpha.
  std::map<Index, Rational> f_entries;
  for (const auto& [index, value] : seq.overrides()) {
    if (value < alpha) f_entries.emplace(index, value - alpha);
  }
  return Decomposition(seq, alpha, std::move(f_entries));
}

Witness build_witness(const SequenceSpec& seq) {
  const auto& strands = seq.strands();
  std::optional<std::size_t> below;
  for (std::size_t j = 0; j < strands.size(); ++j) {
    if (strands[j].approach() != Approach::Below) continue;
    if (!below || strands[j].limit() > strands[*below].limit()) below = j;
  }
  if (below) {
    return CoordinateWitness{*below, overridden_on_strand(seq, *below), strands[*below].limit()};
  }
  if (all_limits_equal(seq)) {
    throw Error(ErrorCode::NotApplicable, "build_witness: operator is absolutely norm attaining");
  }

  MixedPairsWitness w;
  auto by_limit = [](const Strand& x, const Strand& y) { return x.limit() < y.limit(); };
  // min_element/max_element return the first strand among ties.
  w.a_strand = static_cast<std::size_t>(
      std::min_element(strands.begin(), strands.end(), by_limit) - strands.begin());
  auto max_it = strands.begin();
  for (auto it = strands.begin(); it != strands.end(); ++it) {
    if (it->limit() > max_it->limit()) max_it = it;
  }
  w.b_strand = static_cast<std::size_t>(max_it - strands.begin());
  w.a = strands[w.a_strand].limit();
  w.b = strands[w.b_strand].limit();

  const Rational midpoint = (w.a + w.b) / Rational(2);
  const Strand& a_strand = strands[w.a_strand];
  std::uint64_t k = 0;
  while (a_strand.value(k) >= midpoint) ++k;
  w.a_first_occurrence = k;

  for (const auto& [index, value] : seq.overrides()) {
    const std::size_t j = seq.strand_of(index);
    if (j == w.a_strand || j == w.b_strand) w.excluded_indices.insert(index);
  }
  return w;
}

CompositeOperator::CompositeOperator(Rational alpha, SequenceSpec k_diag,
                                     std::vector<RankOneTerm> f_terms)
    : alpha_(std::move(alpha)), k_diag_(std::move(k_diag)), f_terms_(std::move(f_terms)) {
  if (alpha_.sign() < 0) throw Error(ErrorCode::InvalidSpec, "alpha must be nonnegative");
  for (const auto& strand : k_diag_.strands()) {
    if (!strand.limit().is_zero()) {
      throw Error(ErrorCode::InvalidSpec, "k_diag strands must have limit 0");
    }
    if (strand.approach() == Approach::Below) {
      throw Error(ErrorCode::InvalidSpec, "k_diag strands must approach 0 from above or be exact");
    }
  }
  for (const auto& term : f_terms_) {
    for (const auto& [index, value] : term.vector) {
      if (index == 0) throw Error(ErrorCode::InvalidSpec, "f_terms vector indices start at 1");
    }
  }
}

std::vector<Index> CompositeOperator::f_support() const {
  std::set<Index> support;
  for (const auto& term : f_terms_) {
    if (term.coefficient.is_zero()) continue;
    for (const auto& [index, value] : term.vector) {
      if (!value.is_zero()) support.insert(index);
    }
  }
  return {support.begin(), support.end()};
}

Rational CompositeOperator::f_entry(Index i, Index j) const {
  Rational sum(0);
  for (const auto& term : f_terms_) {
    auto ui = term.vector.find(i);
    auto uj = term.vector.find(j);
    if (ui == term.vector.end() || uj == term.vector.end()) continue;
    sum += term.coefficient * ui->second * uj->second;
  }
  return sum;
}

std::size_t CompositeOperator::f_rank() const {
  const std::vector<Index> support = f_support();
  const std::size_t n = support.size();
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = f_entry(support[i], support[j]);
  }
  // Exact Gaussian elimination.
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < n; ++col) {
    std::size_t pivot = rank;
    while (pivot < n && rows[pivot][col].is_zero()) ++pivot;
    if (pivot == n) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = rank + 1; r < n; ++r) {
      if (rows[r][col].is_zero()) continue;
      const Rational factor = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < n; ++c) rows[r][c] -= factor * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

Certificate an_certificate(const CompositeOperator& op, const std::vector<std::size_t>& sizes,
                           double tol) {
  if (sizes.empty()) throw Error(ErrorCode::InvalidSpec, "an_certificate needs at least one size");
  Certificate cert;
  cert.rank_f = op.f_rank();

  auto check = [&](const TruncatedMatrix& m, std::size_t label) {
    const double lowest = m.size() == 0 ? 0.0 : jacobi_eigenvalues(m).eigenvalues(0);
    if (lowest < -tol) {
      throw NotPositiveError(lowest, label,
                             "composite is not positive: eigenvalue " + std::to_string(lowest) +
                                 " at truncation size " + std::to_string(label));
    }
    return lowest;
  };

  const std::vector<Index> support = op.f_support();
  if (!support.empty()) {
    cert.support_block_min_eigenvalue = check(composite_block(op, support), support.size());
  }
  for (std::size_t n : sizes) {
    if (n == 0) throw Error(ErrorCode::InvalidSpec, "truncation sizes must be positive");
    cert.min_eigenvalue_per_size.emplace_back(n, check(truncate_composite(op, n), n));
  }
  cert.is_positive = true;
  return cert;
}

}  // namespace attain
