#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "attain/classify.hpp"
#include "attain/shift.hpp"
#include "attain/specfile.hpp"

namespace attain {

/// Rationals are emitted as "p/q" strings ("p" for integers).
nlohmann::json to_json(const Rational& value);
nlohmann::json to_json(const std::set<Rational>& values);

nlohmann::json reason_json(const NotANReason& reason);
nlohmann::json witness_json(const SequenceSpec& seq, const Witness& witness, std::size_t preview);
nlohmann::json conditions_json(const ShiftConditionReport& report);
nlohmann::json certificate_json(const Certificate& cert);

/// Machine-readable classification: {kind, verdict, alpha, reason,
/// conditions, witness, checks}. Keys are sorted, so dumps are stable.
nlohmann::json classify_report(const OperatorModel& model, const std::vector<std::size_t>& sizes,
                               double tol);

}  // namespace attain
