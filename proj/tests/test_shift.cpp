#include <doctest.h>

#include <numbers>

#include "attain/errors.hpp"
#include "attain/shift.hpp"
#include "support/generators.hpp"

using namespace attain;
using attain::testing::SpecGenerator;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return Rational(p, d); }

}  // namespace

TEST_CASE("modulus discards phases and keeps the moduli spec") {
  const SequenceSpec ones({Strand::exact(q(1))});
  const WeightedShift rotated(ones, {{1, std::numbers::pi / 4}});
  CHECK(modulus(rotated) == ones);

  const SequenceSpec geometric({Strand::above(q(2), q(1), q(1, 2))});
  CHECK(modulus(WeightedShift(geometric)) == geometric);

  CHECK_THROWS_AS(WeightedShift(ones, {{0, 1.0}}), Error);
  CHECK_THROWS_AS(WeightedShift(ones, {{2, std::numeric_limits<double>::infinity()}}), Error);
}

TEST_CASE("unilateral shift: finite branch, AN with alpha 1") {
  const auto result = classify_shift(WeightedShift(SequenceSpec({Strand::exact(q(1))})));
  const auto& fin = std::get<FiniteSpectrumConditions>(result.report.branch);
  CHECK(fin.finite_spectrum);
  CHECK(fin.single_infinite_value);
  CHECK(fin.sigma == std::set<Rational>{q(1)});
  CHECK(result.report.verdict);
  REQUIRE(is_an(result.verdict));
  CHECK(std::get<IsAN>(result.verdict).alpha == q(1));
}

TEST_CASE("weights 1 - (1/2)^n violate (iii)") {
  const auto result = classify_shift(WeightedShift(SequenceSpec({Strand::below(q(1), q(1, 2), q(1, 2))})));
  const auto& inf = std::get<InfiniteSpectrumConditions>(result.report.branch);
  CHECK(inf.unique_limit_point);
  CHECK(*inf.alpha == q(1));
  CHECK(inf.finitely_repeated == true);
  CHECK(inf.finitely_many_below == false);
  CHECK(*inf.below_alpha_indices == BelowAlphaIndices{InfiniteBelowIndices{0}});
  CHECK_FALSE(result.report.verdict);
  CHECK_FALSE(is_an(result.verdict));
}

TEST_CASE("alternating weights 1, 2 with an override violate (ii')") {
  const SequenceSpec seq({Strand::exact(q(1)), Strand::exact(q(2))}, {{1, q(5)}});
  const auto result = classify_shift(WeightedShift(seq));
  const auto& fin = std::get<FiniteSpectrumConditions>(result.report.branch);
  CHECK(fin.sigma == std::set<Rational>{q(1), q(2), q(5)});
  CHECK(fin.infinite_multiplicity_values == std::set<Rational>{q(1), q(2)});
  CHECK_FALSE(fin.single_infinite_value);
  CHECK_FALSE(result.report.verdict);
  CHECK_FALSE(is_an(result.verdict));
}

TEST_CASE("geometric weights from above with one low override are AN") {
  const SequenceSpec seq({Strand::above(q(2), q(1), q(1, 2))}, {{1, q(1)}});
  const auto result = classify_shift(WeightedShift(seq));
  const auto& inf = std::get<InfiniteSpectrumConditions>(result.report.branch);
  CHECK(inf.unique_limit_point);
  CHECK(inf.finitely_repeated == true);
  CHECK(inf.finitely_many_below == true);
  CHECK(*inf.below_alpha_indices == BelowAlphaIndices{std::set<Index>{1}});
  CHECK(result.report.verdict);
  const IsAN& an = std::get<IsAN>(result.verdict);
  CHECK(an.alpha == q(2));
  CHECK(an.decomposition.f_entries() == std::map<Index, Rational>{{1, q(-1)}});
}

TEST_CASE("two geometric limits leave (ii) and (iii) unevaluated") {
  const SequenceSpec seq({Strand::above(q(1), q(1), q(1, 2)), Strand::above(q(2), q(1), q(1, 2))});
  const auto report = shift_conditions(WeightedShift(seq));
  const auto& inf = std::get<InfiniteSpectrumConditions>(report.branch);
  CHECK_FALSE(inf.unique_limit_point);
  CHECK_FALSE(inf.alpha.has_value());
  CHECK_FALSE(inf.finitely_repeated.has_value());
  CHECK_FALSE(report.verdict);
}

TEST_CASE("an exact strand off the geometric limit violates (ii)") {
  const SequenceSpec seq({Strand::above(q(1), q(1), q(1, 2)), Strand::exact(q(3))});
  const auto report = shift_conditions(WeightedShift(seq));
  const auto& inf = std::get<InfiniteSpectrumConditions>(report.branch);
  CHECK(inf.finitely_repeated == false);
  CHECK(inf.violating_values == std::set<Rational>{q(3)});
  CHECK(inf.finitely_many_below == true);
  CHECK_FALSE(report.verdict);
}

TEST_CASE("property: weight conditions agree with the spectral classifier") {
  SpecGenerator gen(123456);
  int an = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    const WeightedShift shift = gen.shift();
    const auto result = classify_shift(shift);
    REQUIRE(result.report.verdict == is_an(result.verdict));
    an += result.report.verdict;
  }
  CHECK(an > 100);
  CHECK(an < 1400);
}

TEST_CASE("property: phases never change the classification") {
  SpecGenerator gen(777);
  for (int trial = 0; trial < 300; ++trial) {
    const WeightedShift shift = gen.shift();
    const WeightedShift phased(shift.moduli(), gen.phases());
    const WeightedShift plain(shift.moduli());
    CHECK(classify_shift(phased) == classify_shift(plain));
  }
}

TEST_CASE("property: the branch is fixed by the presence of geometric strands") {
  SpecGenerator gen(31);
  for (int trial = 0; trial < 300; ++trial) {
    const WeightedShift shift = gen.shift();
    bool geometric = false;
    for (const auto& s : shift.moduli().strands()) geometric |= s.is_geometric();
    const auto report = shift_conditions(shift);
    CHECK(std::holds_alternative<InfiniteSpectrumConditions>(report.branch) == geometric);
  }
}
