#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses a decimal literal ("3", "0.25", "1e-3") or a fraction ("1/3") exactly.
/// Returns nullopt on malformed input.
std::optional<Rational> parse_rational(std::string_view text);

/// Shortest text that parses back to the same rational.
std::string format_rational(const Rational& q);

double to_double(const Rational& q);

/// Per-reaction rate constants kappa_k. Every rate has a floating value; when
/// all of them were given exactly (e.g. read from a .crn file) the exact
/// rationals are kept as well so tree constants can be formed without rounding.
class RateConstants {
 public:
  RateConstants() = default;
  RateConstants(std::vector<double> values);  // NOLINT(google-explicit-constructor)
  explicit RateConstants(std::vector<Rational> exact);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }

  bool is_exact() const { return exact_.has_value(); }
  const std::vector<Rational>& exact() const { return *exact_; }

  /// Copy with rate k multiplied by factor; drops exactness unless the factor is exact.
  RateConstants scaled(std::size_t k, double factor) const;

 private:
  std::vector<double> values_;
  std::optional<std::vector<Rational>> exact_;
};

}  // namespace crn
