#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "attain/rational.hpp"

namespace attain {

/// 1-based coordinate index into l^2.
using Index = std::uint64_t;

enum class Approach { Below, Exact, Above };

std::string_view to_string(Approach approach);

/// One interleaved component of a sequence.
///
/// Occurrence k >= 0 takes the value L - A r^k (Below), L (Exact) or
/// L + A r^k (Above), with A > 0 and 0 < r < 1 for the geometric kinds.
class Strand {
 public:
  static Strand exact(Rational limit);
  static Strand below(Rational limit, Rational amplitude, Rational ratio);
  static Strand above(Rational limit, Rational amplitude, Rational ratio);

  const Rational& limit() const { return limit_; }
  Approach approach() const { return approach_; }
  bool is_geometric() const { return approach_ != Approach::Exact; }
  /// Only meaningful for geometric strands; zero for Exact.
  const Rational& amplitude() const { return amplitude_; }
  const Rational& ratio() const { return ratio_; }

  /// |value(k) - limit| = A r^k (zero for Exact).
  Rational deviation(std::uint64_t occurrence) const;
  Rational value(std::uint64_t occurrence) const;

  friend bool operator==(const Strand&, const Strand&) = default;

 private:
  Strand(Rational limit, Approach approach, Rational amplitude, Rational ratio);

  Rational limit_;
  Approach approach_ = Approach::Exact;
  Rational amplitude_;
  Rational ratio_;
};

/// A nonnegative sequence described by round-robin strands plus finitely many
/// overridden entries; the diagonal of a positive diagonal operator.
class SequenceSpec {
 public:
  SequenceSpec(std::vector<Strand> strands, std::map<Index, Rational> overrides = {});

  const std::vector<Strand>& strands() const { return strands_; }
  const std::map<Index, Rational>& overrides() const { return overrides_; }
  std::size_t strand_count() const { return strands_.size(); }

  std::size_t strand_of(Index n) const;
  std::uint64_t occurrence_of(Index n) const;
  Index index_of(std::size_t strand, std::uint64_t occurrence) const;
  bool is_overridden(Index n) const { return overrides_.contains(n); }

  Rational entry(Index n) const;

  /// Same strands, different overrides. Validates the new map.
  SequenceSpec with_overrides(std::map<Index, Rational> overrides) const;

  friend bool operator==(const SequenceSpec&, const SequenceSpec&) = default;

 private:
  std::vector<Strand> strands_;
  std::map<Index, Rational> overrides_;
};

Rational entry(const SequenceSpec& seq, Index n);

/// Points every neighbourhood of which holds entries for infinitely many
/// indices: exactly the strand limits.
std::set<Rational> essential_spectrum(const SequenceSpec& seq);

/// Membership in the closure of the entry set. Requires x >= 0.
bool spectrum_contains(const SequenceSpec& seq, const Rational& x);

struct FiniteBelow {
  std::set<Rational> values;
  friend bool operator==(const FiniteBelow&, const FiniteBelow&) = default;
};

/// Names the first strand that yields infinitely many spectrum points below
/// the threshold, or (Exact case) an essential point below it.
struct InfiniteBelow {
  std::size_t strand_index = 0;
  friend bool operator==(const InfiniteBelow&, const InfiniteBelow&) = default;
};

using BelowThreshold = std::variant<FiniteBelow, InfiniteBelow>;

BelowThreshold spectrum_elements_below(const SequenceSpec& seq, const Rational& threshold);

}  // namespace attain
