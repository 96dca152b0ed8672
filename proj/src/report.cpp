#include "attain/report.hpp"

#include "attain/errors.hpp"

namespace attain {

using json = nlohmann::json;

namespace {

constexpr std::size_t kWitnessPreview = 5;

json index_set_json(const std::set<Index>& indices) {
  json out = json::array();
  for (Index n : indices) out.push_back(n);
  return out;
}

json sequence_report(std::string_view kind, const SequenceSpec& seq) {
  json out;
  out["kind"] = kind;
  out["conditions"] = nullptr;
  out["checks"] = json::array();
  const ANVerdict verdict = classify_an(seq);
  if (const auto* yes = std::get_if<IsAN>(&verdict)) {
    out["verdict"] = "AN";
    out["alpha"] = to_json(yes->alpha);
    out["reason"] = nullptr;
    out["witness"] = nullptr;
  } else {
    const auto& no = std::get<NotAN>(verdict);
    out["verdict"] = "NotAN";
    const auto* below = std::get_if<InfinitelyManyBelowAlpha>(&no.reason);
    out["alpha"] = below ? to_json(below->alpha) : json(nullptr);
    out["reason"] = reason_json(no.reason);
    out["witness"] = witness_json(seq, no.witness, kWitnessPreview);
  }
  return out;
}

}  // namespace

json to_json(const Rational& value) { return value.to_string(); }

json to_json(const std::set<Rational>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(to_json(v));
  return out;
}

json reason_json(const NotANReason& reason) {
  if (const auto* multi = std::get_if<MultipleEssentialPoints>(&reason)) {
    return {{"type", "MultipleEssentialPoints"}, {"points", to_json(multi->points)}};
  }
  const auto& below = std::get<InfinitelyManyBelowAlpha>(reason);
  return {{"type", "InfinitelyManyBelowAlpha"},
          {"alpha", to_json(below.alpha)},
          {"strand_index", below.strand_index}};
}

json witness_json(const SequenceSpec& seq, const Witness& witness, std::size_t preview) {
  json out;
  json norms = json::array();
  for (const auto& p : predicted_norms(seq, witness, preview)) norms.push_back(to_json(p));
  out["predicted_norms"] = std::move(norms);
  out["sup"] = to_json(witness_sup(witness));
  if (const auto* c = std::get_if<CoordinateWitness>(&witness)) {
    out["type"] = "coordinate";
    out["strand_index"] = c->strand_index;
    out["excluded_indices"] = index_set_json(c->excluded_indices);
  } else {
    const auto& m = std::get<MixedPairsWitness>(witness);
    out["type"] = "mixed_pairs";
    out["a"] = to_json(m.a);
    out["b"] = to_json(m.b);
    out["a_strand"] = m.a_strand;
    out["b_strand"] = m.b_strand;
    out["a_first_occurrence"] = m.a_first_occurrence;
    out["excluded_indices"] = index_set_json(m.excluded_indices);
  }
  return out;
}

json conditions_json(const ShiftConditionReport& report) {
  json out;
  out["verdict"] = report.verdict;
  if (const auto* inf = std::get_if<InfiniteSpectrumConditions>(&report.branch)) {
    out["branch"] = "infinite_spectrum";
    out["i"] = inf->unique_limit_point;
    out["ii"] = inf->finitely_repeated ? json(*inf->finitely_repeated) : json(nullptr);
    out["iii"] = inf->finitely_many_below ? json(*inf->finitely_many_below) : json(nullptr);
    out["alpha"] = inf->alpha ? to_json(*inf->alpha) : json(nullptr);
    out["violating_values"] = to_json(inf->violating_values);
    if (!inf->below_alpha_indices) {
      out["below_alpha_indices"] = nullptr;
    } else if (const auto* finite = std::get_if<std::set<Index>>(&*inf->below_alpha_indices)) {
      out["below_alpha_indices"] = {{"finite", index_set_json(*finite)}};
    } else {
      out["below_alpha_indices"] = {
          {"infinite_strand", std::get<InfiniteBelowIndices>(*inf->below_alpha_indices).strand_index}};
    }
  } else {
    const auto& fin = std::get<FiniteSpectrumConditions>(report.branch);
    out["branch"] = "finite_spectrum";
    out["i_prime"] = fin.finite_spectrum;
    out["ii_prime"] = fin.single_infinite_value;
    out["sigma"] = to_json(fin.sigma);
    out["infinite_multiplicity_values"] = to_json(fin.infinite_multiplicity_values);
  }
  return out;
}

json certificate_json(const Certificate& cert) {
  json checks = json::array();
  if (cert.support_block_min_eigenvalue) {
    checks.push_back({{"name", "positivity_support_block"},
                      {"min_eigenvalue", *cert.support_block_min_eigenvalue},
                      {"passed", true}});
  }
  for (const auto& [size, lowest] : cert.min_eigenvalue_per_size) {
    checks.push_back(
        {{"name", "positivity"}, {"size", size}, {"min_eigenvalue", lowest}, {"passed", true}});
  }
  checks.push_back({{"name", "rank_f"}, {"value", cert.rank_f}});
  return checks;
}

json classify_report(const OperatorModel& model, const std::vector<std::size_t>& sizes,
                     double tol) {
  if (const auto* seq = std::get_if<SequenceSpec>(&model)) return sequence_report("diagonal", *seq);
  if (const auto* shift = std::get_if<WeightedShift>(&model)) {
    json out = sequence_report("shift", modulus(*shift));
    out["conditions"] = conditions_json(shift_conditions(*shift));
    return out;
  }
  const auto& op = std::get<CompositeOperator>(model);
  json out;
  out["kind"] = "composite";
  out["conditions"] = nullptr;
  out["witness"] = nullptr;
  try {
    const Certificate cert = an_certificate(op, sizes, tol);
    out["verdict"] = "AN";
    out["alpha"] = to_json(op.alpha());
    out["reason"] = nullptr;
    out["checks"] = certificate_json(cert);
  } catch (const NotPositiveError& e) {
    out["verdict"] = "NotPositive";
    out["alpha"] = nullptr;
    out["reason"] = {{"type", "NotPositive"},
                     {"eigenvalue", e.eigenvalue()},
                     {"size", e.truncation_size()}};
    out["checks"] = json::array();
  }
  return out;
}

}  // namespace attain
