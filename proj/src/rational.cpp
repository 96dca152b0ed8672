#include "attain/rational.hpp"

#include <cctype>
#include <ostream>

#include "attain/errors.hpp"

namespace attain {

namespace {

bool is_integer_text(std::string_view text) {
  if (text.empty()) return false;
  std::size_t start = (text.front() == '-' || text.front() == '+') ? 1 : 0;
  if (start == text.size()) return false;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view text) {
  if (!is_integer_text(text)) {
    throw Error(ErrorCode::InvalidSpec, "malformed rational \"" + std::string(text) + "\"");
  }
  if (text.front() == '+') text.remove_prefix(1);
  return mpz_class(std::string(text), 10);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::InvalidSpec, "rational with zero denominator");
  value_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(mpq_class(parse_integer(text)));
  mpz_class num = parse_integer(text.substr(0, slash));
  std::string_view den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+')) {
    throw Error(ErrorCode::InvalidSpec, "malformed rational \"" + std::string(text) + "\"");
  }
  mpz_class den = parse_integer(den_text);
  if (den == 0) {
    throw Error(ErrorCode::InvalidSpec, "rational with zero denominator \"" + std::string(text) + "\"");
  }
  return Rational(mpq_class(num, den));
}

std::string Rational::to_string() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational Rational::pow(std::uint64_t exponent) const {
  // Powers of a reduced fraction stay reduced, so no gcd pass is needed.
  mpq_class out;
  mpz_pow_ui(out.get_num_mpz_t(), value_.get_num_mpz_t(), exponent);
  mpz_pow_ui(out.get_den_mpz_t(), value_.get_den_mpz_t(), exponent);
  Rational result;
  result.value_ = std::move(out);
  return result;
}

Rational Rational::abs() const {
  Rational result;
  result.value_ = ::abs(value_);
  return result;
}

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw Error(ErrorCode::InvalidSpec, "division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational Rational::operator-() const {
  Rational result;
  result.value_ = -value_;
  return result;
}

std::ostream& operator<<(std::ostream& os, const Rational& value) {
  return os << value.to_string();
}

}  // namespace attain
