#pragma once

#include <filesystem>
#include <string_view>
#include <variant>

#include "attain/classify.hpp"
#include "attain/sequence.hpp"
#include "attain/shift.hpp"

namespace attain {

/// A parsed operator file: "diagonal", "shift" or "composite".
using OperatorModel = std::variant<SequenceSpec, WeightedShift, CompositeOperator>;

std::string_view kind_name(const OperatorModel& model);

/// Parses and validates an operator description. Throws Error(InvalidSpec)
/// naming the first violated rule.
OperatorModel parse_spec_text(std::string_view json_text);
OperatorModel parse_spec(const std::filesystem::path& path);

}  // namespace attain
