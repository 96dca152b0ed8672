#pragma once

#include <map>
#include <optional>
#include <set>
#include <variant>

#include "attain/classify.hpp"
#include "attain/sequence.hpp"

namespace attain {

/// T(x1, x2, ...) = (0, w1 x1, w2 x2, ...), described by |w_n| and optional
/// phases on finitely many weights.
class WeightedShift {
 public:
  explicit WeightedShift(SequenceSpec moduli, std::map<Index, double> phases = {});

  const SequenceSpec& moduli() const { return moduli_; }
  const std::map<Index, double>& phases() const { return phases_; }

 private:
  SequenceSpec moduli_;
  std::map<Index, double> phases_;
};

/// Diagonal symbol of |T| = (T*T)^(1/2), i.e. diag(|w_1|, |w_2|, ...).
SequenceSpec modulus(const WeightedShift& shift);

struct InfiniteBelowIndices {
  std::size_t strand_index = 0;
  friend bool operator==(const InfiniteBelowIndices&, const InfiniteBelowIndices&) = default;
};

using BelowAlphaIndices = std::variant<std::set<Index>, InfiniteBelowIndices>;

/// Conditions (i)-(iii): unique limit point alpha of {|w_n|}, no other value
/// repeated infinitely often, finitely many |w_n| < alpha. (ii) and (iii) are
/// only evaluated when (i) yields an alpha.
struct InfiniteSpectrumConditions {
  bool unique_limit_point = false;
  std::optional<bool> finitely_repeated;
  std::optional<bool> finitely_many_below;
  std::optional<Rational> alpha;
  std::set<Rational> violating_values;
  std::optional<BelowAlphaIndices> below_alpha_indices;
  friend bool operator==(const InfiniteSpectrumConditions&,
                         const InfiniteSpectrumConditions&) = default;
};

/// Conditions (i')-(ii'): sigma(|T|) finite with exactly one value of
/// infinite multiplicity.
struct FiniteSpectrumConditions {
  bool finite_spectrum = false;
  bool single_infinite_value = false;
  std::set<Rational> sigma;
  std::set<Rational> infinite_multiplicity_values;
  friend bool operator==(const FiniteSpectrumConditions&, const FiniteSpectrumConditions&) = default;
};

struct ShiftConditionReport {
  std::variant<InfiniteSpectrumConditions, FiniteSpectrumConditions> branch;
  bool verdict = false;
  friend bool operator==(const ShiftConditionReport&, const ShiftConditionReport&) = default;
};

struct ShiftClassification {
  ShiftConditionReport report;
  ANVerdict verdict;
  friend bool operator==(const ShiftClassification&, const ShiftClassification&) = default;
};

/// Evaluates the weight conditions directly and, independently, runs
/// classify_an on |T|.
ShiftClassification classify_shift(const WeightedShift& shift);

ShiftConditionReport shift_conditions(const WeightedShift& shift);

}  // namespace attain
