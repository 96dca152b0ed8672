#include "attain/specfile.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "attain/errors.hpp"

namespace attain {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::InvalidSpec, where.empty() ? what : where + ": " + what);
}

void require_keys(const json& object, const std::string& where,
                  std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) fail(where, "expected a JSON object");
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (auto name : allowed) known |= (key == name);
    if (!known) fail(where, "unknown field \"" + key + "\"");
  }
}

const json& required(const json& object, const std::string& where, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

Rational rational_field(const json& value, const std::string& where) {
  if (value.is_string()) {
    try {
      return Rational::parse(value.get<std::string>());
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }
  if (value.is_number_integer()) {
    return value.is_number_unsigned() ? Rational(static_cast<std::int64_t>(value.get<std::uint64_t>()))
                                      : Rational(value.get<std::int64_t>());
  }
  fail(where, "rationals must be \"p/q\" strings or integers");
}

Index index_key(const std::string& key, const std::string& where) {
  if (key.empty() || key.size() > 18) fail(where, "invalid index \"" + key + "\"");
  for (char ch : key) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) fail(where, "invalid index \"" + key + "\"");
  }
  const Index n = std::stoull(key);
  if (n == 0) fail(where, "indices start at 1");
  return n;
}

std::map<Index, Rational> rational_map(const json& object, const std::string& where) {
  if (!object.is_object()) fail(where, "expected an object mapping index to rational");
  std::map<Index, Rational> out;
  for (const auto& [key, value] : object.items()) {
    const std::string here = where + "[" + key + "]";
    const Index n = index_key(key, here);
    if (!out.emplace(n, rational_field(value, here)).second) {
      fail(where, "duplicate index " + std::to_string(n));
    }
  }
  return out;
}

Strand parse_strand(const json& object, const std::string& where) {
  require_keys(object, where, {"limit", "approach", "amplitude", "ratio"});
  const Rational limit = rational_field(required(object, where, "limit"), where + ".limit");
  if (limit.sign() < 0) fail(where, "strand limit must be nonnegative");
  const json& approach_json = required(object, where, "approach");
  if (!approach_json.is_string()) fail(where, "approach must be a string");
  const std::string approach = approach_json.get<std::string>();
  if (approach == "exact") {
    if (object.contains("amplitude") || object.contains("ratio")) {
      fail(where, "exact strands take no amplitude or ratio");
    }
    return Strand::exact(limit);
  }
  if (approach != "below" && approach != "above") {
    fail(where, "approach must be one of below, exact, above");
  }
  const Rational amplitude = rational_field(required(object, where, "amplitude"), where + ".amplitude");
  const Rational ratio = rational_field(required(object, where, "ratio"), where + ".ratio");
  try {
    return approach == "below" ? Strand::below(limit, amplitude, ratio)
                               : Strand::above(limit, amplitude, ratio);
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

SequenceSpec parse_sequence(const json& object, const std::string& where) {
  const json& strands_json = required(object, where, "strands");
  if (!strands_json.is_array() || strands_json.empty()) fail(where, "strands must be a nonempty array");
  std::vector<Strand> strands;
  for (std::size_t i = 0; i < strands_json.size(); ++i) {
    strands.push_back(parse_strand(strands_json[i], where + "strands[" + std::to_string(i) + "]"));
  }
  std::map<Index, Rational> overrides;
  if (auto it = object.find("overrides"); it != object.end()) {
    overrides = rational_map(*it, where + "overrides");
  }
  try {
    return SequenceSpec(std::move(strands), std::move(overrides));
  } catch (const Error& e) {
    fail(where.empty() ? std::string() : where.substr(0, where.size() - 1), e.what());
  }
}

double parse_angle(const json& value, const std::string& where) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) fail(where, "phase must be a decimal number of radians");
  const std::string text = value.get<std::string>();
  std::size_t consumed = 0;
  double angle = 0.0;
  try {
    angle = std::stod(text, &consumed);
  } catch (const std::exception&) {
    fail(where, "malformed phase \"" + text + "\"");
  }
  if (consumed != text.size()) fail(where, "malformed phase \"" + text + "\"");
  return angle;
}

WeightedShift parse_shift(const json& root) {
  SequenceSpec moduli = parse_sequence(root, "");
  std::map<Index, double> phases;
  if (auto it = root.find("phases"); it != root.end()) {
    if (!it->is_object()) fail("phases", "expected an object mapping index to radians");
    for (const auto& [key, value] : it->items()) {
      const std::string here = "phases[" + key + "]";
      if (!phases.emplace(index_key(key, here), parse_angle(value, here)).second) {
        fail("phases", "duplicate index " + key);
      }
    }
  }
  return WeightedShift(std::move(moduli), std::move(phases));
}

CompositeOperator parse_composite(const json& root) {
  const Rational alpha = rational_field(required(root, "", "alpha"), "alpha");
  const json& k_json = required(root, "", "k_diag");
  require_keys(k_json, "k_diag", {"strands", "overrides"});
  SequenceSpec k_diag = parse_sequence(k_json, "k_diag.");
  std::vector<RankOneTerm> terms;
  if (auto it = root.find("f_terms"); it != root.end()) {
    if (!it->is_array()) fail("f_terms", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string here = "f_terms[" + std::to_string(i) + "]";
      const json& term = (*it)[i];
      require_keys(term, here, {"coef", "vector"});
      terms.push_back({rational_field(required(term, here, "coef"), here + ".coef"),
                       rational_map(required(term, here, "vector"), here + ".vector")});
    }
  }
  return CompositeOperator(alpha, std::move(k_diag), std::move(terms));
}

// Rejects repeated keys inside any single JSON object.
json parse_strict(std::string_view text) {
  std::vector<std::set<std::string>> seen;
  auto callback = [&seen](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start: seen.emplace_back(); break;
      case json::parse_event_t::object_end: seen.pop_back(); break;
      case json::parse_event_t::key: {
        const auto key = parsed.get<std::string>();
        if (!seen.back().insert(key).second) fail("", "duplicate key \"" + key + "\"");
        break;
      }
      default: break;
    }
    return true;
  };
  try {
    return json::parse(text.begin(), text.end(), callback);
  } catch (const json::parse_error& e) {
    fail("", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string_view kind_name(const OperatorModel& model) {
  switch (model.index()) {
    case 0: return "diagonal";
    case 1: return "shift";
    default: return "composite";
  }
}

OperatorModel parse_spec_text(std::string_view json_text) {
  const json root = parse_strict(json_text);
  if (!root.is_object()) fail("", "top level must be a JSON object");
  const json& kind_json = required(root, "", "kind");
  if (!kind_json.is_string()) fail("kind", "expected a string");
  const std::string kind = kind_json.get<std::string>();
  if (kind == "diagonal") {
    require_keys(root, "", {"kind", "strands", "overrides"});
    return parse_sequence(root, "");
  }
  if (kind == "shift") {
    require_keys(root, "", {"kind", "strands", "overrides", "phases"});
    return parse_shift(root);
  }
  if (kind == "composite") {
    require_keys(root, "", {"kind", "alpha", "k_diag", "f_terms"});
    return parse_composite(root);
  }
  fail("kind", "must be one of diagonal, shift, composite");
}

OperatorModel parse_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidSpec, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spec_text(buffer.str());
}

}  // namespace attain
