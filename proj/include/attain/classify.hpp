#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "attain/rational.hpp"
#include "attain/sequence.hpp"

namespace attain {

/// T = alpha I + K+ + F for a diagonal model, where F carries exactly the
/// entries below alpha and K+ the (nonnegative, vanishing) remainder.
class Decomposition {
 public:
  Decomposition(SequenceSpec seq, Rational alpha, std::map<Index, Rational> f_entries);

  const Rational& alpha() const { return alpha_; }
  const std::map<Index, Rational>& f_entries() const { return f_entries_; }
  const SequenceSpec& sequence() const { return seq_; }

  /// Diagonal of F; zero off its support.
  Rational f(Index n) const;
  /// Diagonal of K+; zero on the support of F.
  Rational kplus(Index n) const;
  /// max_j A_j r_j^((n-1) div m): the decay envelope K+ respects off the overrides.
  Rational kplus_bound(Index n) const;

  friend bool operator==(const Decomposition&, const Decomposition&) = default;

 private:
  SequenceSpec seq_;
  Rational alpha_;
  std::map<Index, Rational> f_entries_;
};

/// Span of the coordinate vectors of one Below strand (minus overridden
/// indices). Entries there increase strictly to `sup` without reaching it.
struct CoordinateWitness {
  std::size_t strand_index = 0;
  std::set<Index> excluded_indices;
  Rational sup;
  friend bool operator==(const CoordinateWitness&, const CoordinateWitness&) = default;
};

/// Span of f_k = e_{a_k} + t_k e_{b_k}, pairing an index whose entry sits
/// below (a+b)/2 with one whose entry is >= b, tuned so that |T f_k| / |f_k| = mu_k.
struct MixedPairsWitness {
  std::size_t a_strand = 0;
  std::size_t b_strand = 0;
  Rational a;
  Rational b;
  /// First occurrence of the a-strand whose value is below (a+b)/2.
  std::uint64_t a_first_occurrence = 0;
  std::set<Index> excluded_indices;
  friend bool operator==(const MixedPairsWitness&, const MixedPairsWitness&) = default;
};

using Witness = std::variant<CoordinateWitness, MixedPairsWitness>;

const Rational& witness_sup(const Witness& witness);

struct CoordinateTerm {
  Index index = 0;
  Rational value;
};

struct PairTerm {
  Index a_index = 0;
  Index b_index = 0;
  Rational v;
  Rational u;
  Rational mu;
  Rational t_squared;
};

/// mu_k = b - (b - a) / (2 (k + 1)), k counted from 0.
Rational mixed_pairs_mu(const Rational& a, const Rational& b, std::uint64_t k);

std::vector<CoordinateTerm> coordinate_terms(const SequenceSpec& seq,
                                             const CoordinateWitness& witness,
                                             std::size_t count);
std::vector<PairTerm> pair_terms(const SequenceSpec& seq, const MixedPairsWitness& witness,
                                 std::size_t count);

/// Exact restricted norm over the span of the first m basis vectors, m = 1..count.
std::vector<Rational> predicted_norms(const SequenceSpec& seq, const Witness& witness,
                                      std::size_t count);

/// Largest coordinate index touched by the first `count` basis vectors.
Index witness_extent(const SequenceSpec& seq, const Witness& witness, std::size_t count);

struct MultipleEssentialPoints {
  std::set<Rational> points;
  friend bool operator==(const MultipleEssentialPoints&, const MultipleEssentialPoints&) = default;
};

struct InfinitelyManyBelowAlpha {
  Rational alpha;
  std::size_t strand_index = 0;
  friend bool operator==(const InfinitelyManyBelowAlpha&, const InfinitelyManyBelowAlpha&) = default;
};

using NotANReason = std::variant<MultipleEssentialPoints, InfinitelyManyBelowAlpha>;

struct IsAN {
  Rational alpha;
  Decomposition decomposition;
  friend bool operator==(const IsAN&, const IsAN&) = default;
};

struct NotAN {
  NotANReason reason;
  Witness witness;
  friend bool operator==(const NotAN&, const NotAN&) = default;
};

using ANVerdict = std::variant<IsAN, NotAN>;

inline bool is_an(const ANVerdict& verdict) { return std::holds_alternative<IsAN>(verdict); }

/// Decides absolute norm attainment of a positive diagonal operator: AN iff
/// the essential spectrum is a single point alpha and only finitely many
/// spectrum points lie below alpha.
ANVerdict classify_an(const SequenceSpec& seq);

/// Throws Error(NotApplicable) unless seq is AN with this alpha.
Decomposition decompose(const SequenceSpec& seq, const Rational& alpha);

/// Throws Error(NotApplicable) when seq is AN.
Witness build_witness(const SequenceSpec& seq);

struct RankOneTerm {
  Rational coefficient;
  std::map<Index, Rational> vector;
  friend bool operator==(const RankOneTerm&, const RankOneTerm&) = default;
};

/// alpha I + K + F with K a positive compact diagonal (all strands tend to 0
/// from above, or sit exactly at 0) and F = sum_j c_j u_j u_j^T.
class CompositeOperator {
 public:
  CompositeOperator(Rational alpha, SequenceSpec k_diag, std::vector<RankOneTerm> f_terms);

  const Rational& alpha() const { return alpha_; }
  const SequenceSpec& k_diag() const { return k_diag_; }
  const std::vector<RankOneTerm>& f_terms() const { return f_terms_; }

  /// Sorted union of the indices any F vector touches.
  std::vector<Index> f_support() const;
  /// Exact F(i, j).
  Rational f_entry(Index i, Index j) const;
  /// Exact rank of F.
  std::size_t f_rank() const;

 private:
  Rational alpha_;
  SequenceSpec k_diag_;
  std::vector<RankOneTerm> f_terms_;
};

struct Certificate {
  bool is_positive = false;
  /// (truncation size, smallest eigenvalue) in request order.
  std::vector<std::pair<std::size_t, double>> min_eigenvalue_per_size;
  /// Smallest eigenvalue of the compression to supp F (empty F: none). T is
  /// block diagonal across supp F and its complement, so this decides positivity.
  std::optional<double> support_block_min_eigenvalue;
  std::size_t rank_f = 0;
};

/// Numeric positivity certificate for a composite. Positive composites are AN.
/// Throws NotPositiveError carrying the offending eigenvalue otherwise.
Certificate an_certificate(const CompositeOperator& op, const std::vector<std::size_t>& sizes,
                           double tol);

}  // namespace attain
