#include "crn/rates.hpp"

#include <cctype>
#include <cmath>

#include "crn/error.hpp"

namespace crn {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt pow10(long n) {
  BigInt p = 1;
  for (long i = 0; i < n; ++i) p *= 10;
  return p;
}

std::optional<Rational> parse_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 3) return std::nullopt;
    exponent = std::stol(std::string(exp_text));
    if (exponent > 330) return std::nullopt;
    if (exp_negative) exponent = -exponent;
  }
  std::string_view int_part = s;
  std::string_view frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) return std::nullopt;
  if (!int_part.empty() && !all_digits(int_part)) return std::nullopt;
  if (!frac_part.empty() && !all_digits(frac_part)) return std::nullopt;
  if (int_part.size() + frac_part.size() > 400) return std::nullopt;

  // cpp_int reads a leading 0 as an octal prefix.
  std::string all = std::string(int_part) + std::string(frac_part);
  const auto first = all.find_first_not_of('0');
  all = first == std::string::npos ? "0" : all.substr(first);
  BigInt digits(all);
  exponent -= static_cast<long>(frac_part.size());
  Rational q = exponent >= 0 ? Rational(digits * pow10(exponent))
                             : Rational(digits, pow10(-exponent));
  return negative ? Rational(-q) : q;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_decimal(text.substr(0, slash));
    auto den = parse_decimal(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return *num / *den;
  }
  return parse_decimal(text);
}

std::string format_rational(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

RateConstants::RateConstants(std::vector<double> values) : values_(std::move(values)) {}

RateConstants::RateConstants(std::vector<Rational> exact) {
  values_.reserve(exact.size());
  for (const auto& q : exact) values_.push_back(to_double(q));
  exact_ = std::move(exact);
}

RateConstants RateConstants::scaled(std::size_t k, double factor) const {
  RateConstants out;
  out.values_ = values_;
  out.values_[k] *= factor;
  if (exact_) {
    // Doubles are dyadic rationals, so the product stays exact.
    out.exact_ = *exact_;
    (*out.exact_)[k] *= Rational(factor);
    out.values_[k] = to_double((*out.exact_)[k]);
  }
  return out;
}

}  // namespace crn
