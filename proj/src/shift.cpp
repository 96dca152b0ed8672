#include "attain/shift.hpp"

#include <cmath>
#include <string>

#include "attain/errors.hpp"

namespace attain {

WeightedShift::WeightedShift(SequenceSpec moduli, std::map<Index, double> phases)
    : moduli_(std::move(moduli)), phases_(std::move(phases)) {
  for (const auto& [index, angle] : phases_) {
    if (index == 0) throw Error(ErrorCode::InvalidSpec, "phase indices start at 1");
    if (!std::isfinite(angle)) {
      throw Error(ErrorCode::InvalidSpec, "phase at index " + std::to_string(index) + " is not finite");
    }
  }
}

SequenceSpec modulus(const WeightedShift& shift) { return shift.moduli(); }

namespace {

InfiniteSpectrumConditions infinite_branch(const SequenceSpec& seq) {
  InfiniteSpectrumConditions c;
  std::set<Rational> geometric_limits;
  for (const auto& strand : seq.strands()) {
    if (strand.is_geometric()) geometric_limits.insert(strand.limit());
  }
  c.unique_limit_point = geometric_limits.size() == 1;
  if (!c.unique_limit_point) return c;

  const Rational alpha = *geometric_limits.begin();
  c.alpha = alpha;

  // Geometric strands never repeat a value and overrides are finite, so only
  // Exact strands can put infinitely many weights on one value.
  for (const auto& strand : seq.strands()) {
    if (!strand.is_geometric() && strand.limit() != alpha) c.violating_values.insert(strand.limit());
  }
  c.finitely_repeated = c.violating_values.empty();

  std::optional<std::size_t> infinite_strand;
  for (std::size_t j = 0; j < seq.strand_count() && !infinite_strand; ++j) {
    const Strand& strand = seq.strands()[j];
    if (strand.limit() < alpha) infinite_strand = j;
    if (strand.approach() == Approach::Below && strand.limit() <= alpha) infinite_strand = j;
  }
  if (infinite_strand) {
    c.below_alpha_indices = InfiniteBelowIndices{*infinite_strand};
    c.finitely_many_below = false;
  } else {
    // Remaining strands have every value >= alpha; only overrides can dip below.
    std::set<Index> indices;
    for (const auto& [index, value] : seq.overrides()) {
      if (value < alpha) indices.insert(index);
    }
    c.below_alpha_indices = std::move(indices);
    c.finitely_many_below = true;
  }
  return c;
}

FiniteSpectrumConditions finite_branch(const SequenceSpec& seq) {
  FiniteSpectrumConditions c;
  for (const auto& strand : seq.strands()) {
    c.sigma.insert(strand.limit());
    c.infinite_multiplicity_values.insert(strand.limit());
  }
  for (const auto& [index, value] : seq.overrides()) c.sigma.insert(value);
  c.finite_spectrum = true;
  c.single_infinite_value = c.infinite_multiplicity_values.size() == 1;
  return c;
}

}  // namespace

ShiftConditionReport shift_conditions(const WeightedShift& shift) {
  const SequenceSpec& seq = shift.moduli();
  bool any_geometric = false;
  for (const auto& strand : seq.strands()) any_geometric |= strand.is_geometric();

  ShiftConditionReport report;
  if (any_geometric) {
    auto c = infinite_branch(seq);
    report.verdict = c.unique_limit_point && c.finitely_repeated.value_or(false) &&
                     c.finitely_many_below.value_or(false);
    report.branch = std::move(c);
  } else {
    auto c = finite_branch(seq);
    report.verdict = c.finite_spectrum && c.single_infinite_value;
    report.branch = std::move(c);
  }
  return report;
}

ShiftClassification classify_shift(const WeightedShift& shift) {
  return {shift_conditions(shift), classify_an(modulus(shift))};
}

}  // namespace attain
