#include "crn/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "crn/error.hpp"

namespace crn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double table_lookup(const TabulatedTheta& t, Count x) {
  if (x > static_cast<Count>(t.values.size())) {
    throw Error(ErrorCode::InvalidSpec, "tabulated theta has no value for x = " + std::to_string(x) +
                                            " (table covers 1.." + std::to_string(t.values.size()) + ")");
  }
  return t.values[static_cast<std::size_t>(x - 1)];
}

}  // namespace

double theta_value(const Theta& theta, Count x) {
  if (x <= 0) return 0.0;
  return std::visit(
      overloaded{
          [&](const LinearTheta&) { return static_cast<double>(x); },
          [&](const MichaelisMentenTheta& t) {
            const auto xd = static_cast<double>(x);
            return t.v * xd / (t.k + xd);
          },
          [&](const MinServersTheta& t) { return static_cast<double>(std::min<Count>(t.n, x)); },
          [&](const TabulatedTheta& t) { return table_lookup(t, x); },
      },
      theta);
}

double theta_log_factorial(const Theta& theta, Count x) {
  if (x <= 0) return 0.0;
  const auto xd = static_cast<double>(x);
  return std::visit(
      overloaded{
          [&](const LinearTheta&) { return std::lgamma(xd + 1.0); },
          [&](const MichaelisMentenTheta& t) {
            // prod_{j<=x} v j / (k + j) = v^x Gamma(x+1) Gamma(k+1) / Gamma(k+x+1)
            return xd * std::log(t.v) + std::lgamma(xd + 1.0) + std::lgamma(t.k + 1.0) -
                   std::lgamma(t.k + xd + 1.0);
          },
          [&](const MinServersTheta& t) {
            const Count busy = std::min(x, t.n);
            return std::lgamma(static_cast<double>(busy) + 1.0) +
                   static_cast<double>(x - busy) * std::log(static_cast<double>(t.n));
          },
          [&](const TabulatedTheta& t) {
            double s = 0.0;
            for (Count j = 1; j <= x; ++j) s += std::log(table_lookup(t, j));
            return s;
          },
      },
      theta);
}

double theta_limit(const Theta& theta) {
  return std::visit(overloaded{
                        [](const LinearTheta&) { return std::numeric_limits<double>::infinity(); },
                        [](const MichaelisMentenTheta& t) { return t.v; },
                        [](const MinServersTheta& t) { return static_cast<double>(t.n); },
                        [](const TabulatedTheta&) { return std::numeric_limits<double>::quiet_NaN(); },
                    },
                    theta);
}

bool theta_nondecreasing(const Theta& theta) {
  if (const auto* t = std::get_if<TabulatedTheta>(&theta)) {
    return std::is_sorted(t->values.begin(), t->values.end());
  }
  return true;
}

KineticsSpec KineticsSpec::mass_action(RateConstants rates) {
  KineticsSpec s;
  s.family_ = KineticsFamily::MassAction;
  s.rates_ = std::move(rates);
  return s;
}

KineticsSpec KineticsSpec::theta_product(RateConstants rates, std::vector<Theta> thetas) {
  KineticsSpec s;
  s.family_ = KineticsFamily::ThetaProduct;
  s.rates_ = std::move(rates);
  s.thetas_ = std::move(thetas);
  return s;
}

KineticsSpec KineticsSpec::ratio_form(RateConstants rates, LogThetaFunction log_theta) {
  KineticsSpec s;
  s.family_ = KineticsFamily::RatioForm;
  s.rates_ = std::move(rates);
  s.log_theta_ = std::move(log_theta);
  return s;
}

KineticsSpec KineticsSpec::with_rates(RateConstants rates) const {
  KineticsSpec s = *this;
  s.rates_ = std::move(rates);
  return s;
}

void KineticsSpec::validate(const Network& net) const {
  if (rates_.size() != net.num_reactions()) {
    throw Error(ErrorCode::InvalidSpec, "expected " + std::to_string(net.num_reactions()) +
                                            " rate constants, got " + std::to_string(rates_.size()));
  }
  for (std::size_t k = 0; k < rates_.size(); ++k) {
    if (!(rates_[k] > 0.0) || !std::isfinite(rates_[k])) {
      throw Error(ErrorCode::InvalidSpec, "rate constant " + std::to_string(k) + " is not positive");
    }
  }
  if (family_ == KineticsFamily::ThetaProduct) {
    if (thetas_.size() != net.num_species()) {
      throw Error(ErrorCode::InvalidSpec, "expected one theta per species");
    }
    for (std::size_t i = 0; i < thetas_.size(); ++i) {
      const std::string who = "theta for species " + net.species()[i].name;
      std::visit(overloaded{
                     [](const LinearTheta&) {},
                     [&](const MichaelisMentenTheta& t) {
                       if (!(t.v > 0.0) || !(t.k > 0.0)) {
                         throw Error(ErrorCode::InvalidSpec, who + " needs v > 0 and k > 0");
                       }
                     },
                     [&](const MinServersTheta& t) {
                       if (t.n < 1) throw Error(ErrorCode::InvalidSpec, who + " needs n >= 1");
                     },
                     [&](const TabulatedTheta& t) {
                       for (double v : t.values) {
                         if (!(v > 0.0)) {
                           throw Error(ErrorCode::InvalidSpec, who + " has a nonpositive entry");
                         }
                       }
                     },
                 },
                 thetas_[i]);
    }
  }
  if (family_ == KineticsFamily::RatioForm && !log_theta_) {
    throw Error(ErrorCode::InvalidSpec, "ratio-form kinetics without a theta function");
  }
}

double intensity(const KineticsSpec& spec, const Network& net, std::size_t k,
                 std::span<const Count> x) {
  const Complex& nu = net.source(k);
  if (!covers(x, nu)) return 0.0;
  const double kappa = spec.rates()[k];
  switch (spec.family()) {
    case KineticsFamily::MassAction: {
      double rate = kappa;
      for (std::size_t i = 0; i < nu.coeffs.size(); ++i) {
        for (std::int32_t j = 0; j < nu.coeffs[i]; ++j) rate *= static_cast<double>(x[i] - j);
      }
      return rate;
    }
    case KineticsFamily::ThetaProduct: {
      double rate = kappa;
      const auto& thetas = spec.thetas();
      for (std::size_t i = 0; i < nu.coeffs.size(); ++i) {
        for (std::int32_t j = 0; j < nu.coeffs[i]; ++j) rate *= theta_value(thetas[i], x[i] - j);
      }
      return rate;
    }
    case KineticsFamily::RatioForm: {
      State below(x.begin(), x.end());
      for (std::size_t i = 0; i < below.size(); ++i) below[i] -= nu.coeffs[i];
      return kappa * std::exp(spec.log_theta()(x) - spec.log_theta()(below));
    }
  }
  return 0.0;
}

double total_intensity(const KineticsSpec& spec, const Network& net, std::span<const Count> x) {
  double total = 0.0;
  for (std::size_t k = 0; k < net.num_reactions(); ++k) total += intensity(spec, net, k, x);
  return total;
}

double deterministic_rate(const RateConstants& kappa, const Network& net, std::size_t k,
                          std::span<const double> x) {
  double rate = kappa[k];
  const Complex& nu = net.source(k);
  for (std::size_t i = 0; i < nu.coeffs.size(); ++i) {
    for (std::int32_t j = 0; j < nu.coeffs[i]; ++j) rate *= x[i];
  }
  return rate;
}

RateConstants scale_rate_constants(const RateConstants& kappa_hat, const Network& net, double volume) {
  if (!(volume > 0.0) || !std::isfinite(volume)) {
    throw Error(ErrorCode::InvalidSpec, "volume must be positive");
  }
  if (kappa_hat.is_exact()) {
    const Rational v(volume);
    std::vector<Rational> out;
    for (std::size_t k = 0; k < net.num_reactions(); ++k) {
      const std::int64_t e = 1 - net.source(k).molecularity();
      Rational f = 1;
      for (std::int64_t i = 0; i < std::abs(e); ++i) f *= v;
      out.push_back(e >= 0 ? Rational(kappa_hat.exact()[k] * f) : Rational(kappa_hat.exact()[k] / f));
    }
    return RateConstants(std::move(out));
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < net.num_reactions(); ++k) {
    const auto e = static_cast<double>(1 - net.source(k).molecularity());
    out.push_back(kappa_hat[k] * std::pow(volume, e));
  }
  return RateConstants(std::move(out));
}

LogThetaFunction log_theta_from_species(std::vector<Theta> thetas) {
  return [thetas = std::move(thetas)](std::span<const Count> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < thetas.size(); ++i) s += theta_log_factorial(thetas[i], x[i]);
    return s;
  };
}

}  // namespace crn
