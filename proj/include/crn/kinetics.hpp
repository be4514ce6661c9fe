#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "crn/network.hpp"
#include "crn/rates.hpp"

namespace crn {

// Per-species "rate of association" functions theta_i. All vanish for x <= 0.

/// theta(x) = x: recovers stochastic mass action.
struct LinearTheta {
  friend bool operator==(const LinearTheta&, const LinearTheta&) = default;
};

/// theta(x) = v x / (k + x).
struct MichaelisMentenTheta {
  double v = 1.0;
  double k = 1.0;
  friend bool operator==(const MichaelisMentenTheta&, const MichaelisMentenTheta&) = default;
};

/// theta(x) = min(n, x): an n-server queue.
struct MinServersTheta {
  std::int64_t n = 1;
  friend bool operator==(const MinServersTheta&, const MinServersTheta&) = default;
};

/// theta(j) = values[j - 1] for 1 <= j <= values.size(); lookups beyond the table are errors.
struct TabulatedTheta {
  std::vector<double> values;
  friend bool operator==(const TabulatedTheta&, const TabulatedTheta&) = default;
};

using Theta = std::variant<LinearTheta, MichaelisMentenTheta, MinServersTheta, TabulatedTheta>;

double theta_value(const Theta& theta, Count x);

/// sum_{j=1}^{x} ln theta(j); zero for x <= 0.
double theta_log_factorial(const Theta& theta, Count x);

/// lim_{j -> inf} theta(j); +inf for Linear, NaN when the limit is not known (tables).
double theta_limit(const Theta& theta);

/// theta is nondecreasing on the positive integers.
bool theta_nondecreasing(const Theta& theta);

enum class KineticsFamily { MassAction, ThetaProduct, RatioForm };

/// ln theta(x) for the ratio-form intensities; theta must be strictly positive.
using LogThetaFunction = std::function<double(std::span<const Count>)>;

class KineticsSpec {
 public:
  static KineticsSpec mass_action(RateConstants rates);
  static KineticsSpec theta_product(RateConstants rates, std::vector<Theta> thetas);
  static KineticsSpec ratio_form(RateConstants rates, LogThetaFunction log_theta);

  KineticsFamily family() const { return family_; }
  const RateConstants& rates() const { return rates_; }
  const std::vector<Theta>& thetas() const { return thetas_; }
  const LogThetaFunction& log_theta() const { return log_theta_; }

  /// Throws InvalidSpec when lengths or parameters do not fit the network.
  void validate(const Network& net) const;

  /// Same family and parameters with different rate constants.
  KineticsSpec with_rates(RateConstants rates) const;

 private:
  KineticsFamily family_ = KineticsFamily::MassAction;
  RateConstants rates_;
  std::vector<Theta> thetas_;
  LogThetaFunction log_theta_;
};

/// lambda_k(x). Zero whenever x does not cover the source complex of reaction k.
double intensity(const KineticsSpec& spec, const Network& net, std::size_t k,
                 std::span<const Count> x);

/// Sum of lambda_k(x) over all reactions.
double total_intensity(const KineticsSpec& spec, const Network& net, std::span<const Count> x);

/// Deterministic mass-action rate kappa_k x^{nu_k}, with 0^0 = 1.
double deterministic_rate(const RateConstants& kappa, const Network& net, std::size_t k,
                          std::span<const double> x);

/// kappa_k = kappa_hat_k * V^{1 - |nu_k|}.
RateConstants scale_rate_constants(const RateConstants& kappa_hat, const Network& net, double volume);

/// ln theta(x) = sum_i sum_{j=1}^{x_i} ln theta_i(j); turns per-species thetas into ratio form.
LogThetaFunction log_theta_from_species(std::vector<Theta> thetas);

}  // namespace crn
