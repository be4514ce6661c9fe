#include "crn/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "crn/equilibrium.hpp"
#include "crn/error.hpp"
#include "crn/structure.hpp"

namespace crn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string_view family_name(KineticsFamily f) {
  switch (f) {
    case KineticsFamily::MassAction: return "mass_action";
    case KineticsFamily::ThetaProduct: return "theta_product";
    case KineticsFamily::RatioForm: return "ratio_form";
  }
  return "?";
}

void require_c(std::span<const double> c, std::size_t m) {
  if (c.size() != m) throw Error(ErrorCode::NonPositiveC, "c needs one entry per species");
  for (double v : c) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::NonPositiveC, "c must be strictly positive");
  }
}

// Per-species thetas when the weight factorizes over species (mass action counts as linear).
std::optional<std::vector<Theta>> species_thetas(const KineticsSpec& kinetics, std::size_t m) {
  switch (kinetics.family()) {
    case KineticsFamily::MassAction: return std::vector<Theta>(m, LinearTheta{});
    case KineticsFamily::ThetaProduct: return kinetics.thetas();
    case KineticsFamily::RatioForm: return std::nullopt;
  }
  return std::nullopt;
}

double log_theta_factorial_of(const Theta& theta, Count x) {
  if (std::holds_alternative<LinearTheta>(theta)) return std::lgamma(static_cast<double>(x) + 1.0);
  return theta_log_factorial(theta, x);
}

void check_balanced(const Network& net, const KineticsSpec& kinetics, std::span<const double> c, double tol) {
  const auto r = complex_balance_residual(net, kinetics.rates(), c);
  double scale = 1.0;
  for (std::size_t k = 0; k < net.num_reactions(); ++k) {
    double f = kinetics.rates()[k];
    const Complex& nu = net.source(k);
    for (std::size_t i = 0; i < nu.coeffs.size(); ++i) f *= std::pow(c[i], nu.coeffs[i]);
    scale = std::max(scale, f);
  }
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  if (!(worst <= tol * scale)) {
    throw Error(ErrorCode::NotComplexBalanced,
                "c is not complex balanced for these rate constants (residual " + std::to_string(worst) + ")");
  }
}

// ln sum_{x=0}^{upto} c^x / prod theta(j), and when asked a bound on ln sum_{x > upto}
// (ok = false if the remainder cannot be shown to converge).
struct Series {
  double log_head = -kInf;
  double log_tail = -kInf;
  bool ok = true;
};

Series theta_series(const Theta& theta, double c, Count upto, bool want_tail) {
  Series s;
  const double lc = std::log(c);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(std::max<Count>(upto, 0)) + 1);
  for (Count x = 0; x <= upto; ++x) terms.push_back(static_cast<double>(x) * lc - log_theta_factorial_of(theta, x));
  s.log_head = log_sum_exp(terms);
  if (!want_tail) return s;
  // For x > upto, t_{x+1}/t_x = c / theta(x+1) <= c / theta(upto + 2) when theta is nondecreasing.
  if (!theta_nondecreasing(theta)) {
    s.ok = false;
    return s;
  }
  const double next = theta_value(theta, upto + 2);
  const double r = c / next;
  if (!(r < 1.0)) {
    s.ok = false;
    return s;
  }
  const double log_t1 = static_cast<double>(upto + 1) * lc - log_theta_factorial_of(theta, upto + 1);
  s.log_tail = log_t1 - std::log1p(-r);
  return s;
}

// Tail bound from the product structure of the weights.
std::optional<double> series_tail_bound(const ConservationLaws& laws, const std::vector<Theta>& thetas,
                                        std::span<const double> c, const IrreducibleClass& window,
                                        double log_window_mass) {
  const std::size_t m = thetas.size();
  const auto& bounds = *window.window;
  std::vector<double> log_s(m);
  std::vector<double> log_tail(m, -kInf);
  for (std::size_t i = 0; i < m; ++i) {
    if (!laws.unbounded_species[i]) {
      auto top = max_coordinate(laws, window.anchor, i);
      if (!top || *top > 10000000) return std::nullopt;
      log_s[i] = theta_series(thetas[i], c[i], top->convert_to<Count>(), false).log_head;
      continue;
    }
    Series s = theta_series(thetas[i], c[i], bounds[i], true);
    if (!s.ok) return std::nullopt;
    log_tail[i] = s.log_tail;
    const double both[2] = {s.log_head, s.log_tail};
    log_s[i] = log_sum_exp(both);
  }
  double total_log_s = 0.0;
  for (double v : log_s) total_log_s += v;
  std::vector<double> parts;
  for (std::size_t i = 0; i < m; ++i) {
    if (laws.unbounded_species[i]) parts.push_back(total_log_s - log_s[i] + log_tail[i]);
  }
  if (parts.empty()) return 0.0;
  return std::exp(log_sum_exp(parts) - log_window_mass);
}

// Tail bound along a one-dimensional class {x0 + n u}.
std::optional<double> ray_tail_bound(const Network& net, const ProductFormDistribution& dist,
                                     const IrreducibleClass& window, double log_window_mass) {
  if (stoich_rank(net) != 1) return std::nullopt;
  const auto thetas = species_thetas(dist.kinetics, net.num_species());
  if (!thetas) return std::nullopt;
  for (const auto& t : *thetas) {
    if (!theta_nondecreasing(t)) return std::nullopt;
  }
  std::vector<std::int64_t> u = net.reaction_vector(0);
  std::int64_t g = 0;
  for (auto v : u) g = std::gcd(g, std::abs(v));
  for (auto& v : u) v /= g;
  const bool nonneg = std::all_of(u.begin(), u.end(), [](auto v) { return v >= 0; });
  const bool nonpos = std::all_of(u.begin(), u.end(), [](auto v) { return v <= 0; });
  if (!nonneg && !nonpos) return 0.0;  // both directions hit the boundary: finite class
  if (nonpos) {
    for (auto& v : u) v = -v;
  }
  // Farthest listed state along u.
  std::size_t best = 0;
  std::int64_t best_dot = std::numeric_limits<std::int64_t>::min();
  for (std::size_t a = 0; a < window.size(); ++a) {
    std::int64_t d = 0;
    for (std::size_t i = 0; i < u.size(); ++i) d += u[i] * window.states[a][i];
    if (d > best_dot) {
      best_dot = d;
      best = a;
    }
  }
  State x1 = window.states[best];
  for (std::size_t i = 0; i < u.size(); ++i) x1[i] += u[i];
  State x2 = x1;
  for (std::size_t i = 0; i < u.size(); ++i) x2[i] += u[i];
  const double l1 = dist.log_weight(x1);
  const double r = std::exp(dist.log_weight(x2) - l1);
  if (!(r < 1.0)) return std::nullopt;
  return std::exp(l1 - std::log1p(-r) - log_window_mass);
}

void fill_probabilities(ProductFormDistribution& d) {
  d.probabilities.resize(d.support.size());
  for (std::size_t a = 0; a < d.support.size(); ++a) {
    d.probabilities[a] = std::exp(d.log_weight(d.support.states[a]) + d.log_normalizer);
  }
}

std::vector<double> log_weights(const ProductFormDistribution& d) {
  std::vector<double> lw(d.support.size());
  for (std::size_t a = 0; a < d.support.size(); ++a) lw[a] = d.log_weight(d.support.states[a]);
  return lw;
}

}  // namespace

std::string_view to_string(SupportKind kind) {
  switch (kind) {
    case SupportKind::FiniteClass: return "finite_class";
    case SupportKind::TruncatedClass: return "truncated_class";
    case SupportKind::FullLattice: return "full_lattice";
  }
  return "?";
}

std::string_view to_string(NormalizerStatus status) {
  switch (status) {
    case NormalizerStatus::Exact: return "exact";
    case NormalizerStatus::Certified: return "certified";
    case NormalizerStatus::Uncertified: return "uncertified";
  }
  return "?";
}

std::string_view to_string(Summability s) {
  return s == Summability::SufficientConditionHolds ? "SufficientConditionHolds" : "Inconclusive";
}

double log_sum_exp(std::span<const double> v) {
  double hi = -kInf;
  for (double x : v) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double x : v) s += std::exp(x - hi);
  return hi + std::log(s);
}

SummabilityVerdict summability_check(const KineticsSpec& kinetics, std::span<const double> c,
                                     const std::vector<bool>& unbounded, double eps) {
  SummabilityVerdict out;
  const auto thetas = species_thetas(kinetics, c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    SpeciesSummability s;
    s.species = i;
    s.unbounded = i < unbounded.size() && unbounded[i];
    s.c = c[i];
    s.theta_limit = thetas ? theta_limit((*thetas)[i]) : kNaN;
    if (s.unbounded) s.holds = s.theta_limit > s.c + eps;  // false for NaN
    if (!s.holds) out.verdict = Summability::Inconclusive;
    out.species.push_back(s);
  }
  return out;
}

double ProductFormDistribution::log_weight(std::span<const Count> x) const {
  const double lv = volume ? std::log(*volume) : 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<double>(x[i]) * (std::log(c[i]) + lv);
  switch (kinetics.family()) {
    case KineticsFamily::MassAction:
      for (Count xi : x) s -= std::lgamma(static_cast<double>(xi) + 1.0);
      break;
    case KineticsFamily::ThetaProduct:
      for (std::size_t i = 0; i < x.size(); ++i) s -= theta_log_factorial(kinetics.thetas()[i], x[i]);
      break;
    case KineticsFamily::RatioForm:
      s -= kinetics.log_theta()(x);
      break;
  }
  return s;
}

double ProductFormDistribution::probability(std::span<const Count> x) const {
  for (Count v : x) {
    if (v < 0) return 0.0;
  }
  if (support_kind != SupportKind::FullLattice) {
    const std::size_t a = support.index_of(State(x.begin(), x.end()));
    if (a != support.size()) return probabilities[a];
    if (support_kind == SupportKind::FiniteClass) return 0.0;
  }
  return std::exp(log_weight(x) + log_normalizer);
}

ProductFormDistribution product_form(const Network& net, const KineticsSpec& kinetics, std::span<const double> c,
                                     const IrreducibleClass& support, const ProductFormOptions& options) {
  require_c(c, net.num_species());
  kinetics.validate(net);
  if (support.size() == 0) throw Error(ErrorCode::InvalidSpec, "empty support");
  if (options.check_balance) check_balanced(net, kinetics, c, options.balance_tol);

  ProductFormDistribution d;
  d.c.assign(c.begin(), c.end());
  d.kinetics = kinetics;
  d.support = support;
  const bool finite = support.bounded;
  d.support_kind = finite ? SupportKind::FiniteClass : SupportKind::TruncatedClass;

  const auto lw = log_weights(d);
  const double log_mass = log_sum_exp(lw);
  d.log_normalizer = -log_mass;
  fill_probabilities(d);
  if (finite) {
    d.normalizer_status = NormalizerStatus::Exact;
    d.tail_bound = 0.0;
    return d;
  }

  if (!support.window) throw Error(ErrorCode::NotFinite, "infinite class without a truncation window");
  const auto laws = conservation_laws(net);
  d.summability = summability_check(kinetics, c, laws.unbounded_species);
  const auto tail = certified_tail_bound(net, kinetics, c, support);
  d.tail_bound = tail ? *tail : kNaN;

  // Window mass over nested sub-boxes, as a growth diagnostic.
  const auto& bounds = *support.window;
  for (int q = 1; q <= 4; ++q) {
    std::vector<double> part;
    for (std::size_t a = 0; a < support.size(); ++a) {
      bool inside = true;
      for (std::size_t i = 0; i < bounds.size() && inside; ++i) {
        if (laws.unbounded_species[i] && 4 * support.states[a][i] > q * bounds[i]) inside = false;
      }
      if (inside) part.push_back(lw[a]);
    }
    d.partial_sum_log.push_back(log_sum_exp(part));
  }

  const bool holds = d.summability->verdict == Summability::SufficientConditionHolds;
  d.normalizer_status = holds && tail ? NormalizerStatus::Certified : NormalizerStatus::Uncertified;
  if (!holds && !tail) {
    const auto& p = d.partial_sum_log;
    const double d3 = std::exp(p[2]) - std::exp(p[1]);
    const double d4 = std::exp(p[3]) - std::exp(p[2]);
    if (d4 >= d3) {
      throw Error(ErrorCode::NotSummable,
                  "summability condition fails and the window mass keeps growing with the window");
    }
  }
  return d;
}

ProductFormDistribution product_form_full_lattice(const Network& net, const KineticsSpec& kinetics,
                                                  std::span<const double> c,
                                                  const std::optional<IrreducibleClass>& listing,
                                                  const ProductFormOptions& options) {
  require_c(c, net.num_species());
  kinetics.validate(net);
  if (options.check_balance) check_balanced(net, kinetics, c, options.balance_tol);
  if (!is_full_lattice(net, kinetics)) {
    throw Error(ErrorCode::InvalidSpec, "the state space is not a single class covering the whole lattice");
  }
  const auto thetas = species_thetas(kinetics, net.num_species());
  if (!thetas) throw Error(ErrorCode::InvalidSpec, "full-lattice normalization needs per-species weights");

  ProductFormDistribution d;
  d.c.assign(c.begin(), c.end());
  d.kinetics = kinetics;
  d.support_kind = SupportKind::FullLattice;
  d.normalizer_status = NormalizerStatus::Exact;
  d.summability = summability_check(kinetics, c, std::vector<bool>(c.size(), true));
  if (kinetics.family() == KineticsFamily::MassAction) {
    double s = 0.0;
    for (double v : c) s += v;
    d.log_normalizer = -s;
  } else {
    if (d.summability->verdict != Summability::SufficientConditionHolds) {
      throw Error(ErrorCode::NotSummable, "theta limits do not exceed c on every species");
    }
    double log_z = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      // Sum until the geometric tail bound is negligible.
      Count upto = 16;
      for (;;) {
        Series s = theta_series((*thetas)[i], c[i], upto, true);
        if (s.ok && s.log_tail < s.log_head - 40.0) {
          const double both[2] = {s.log_head, s.log_tail};
          log_z += log_sum_exp(both);
          break;
        }
        if (upto > 10000000) throw Error(ErrorCode::NotSummable, "per-species series does not settle");
        upto *= 2;
      }
    }
    d.log_normalizer = -log_z;
    d.normalizer_status = NormalizerStatus::Certified;
  }
  if (listing) {
    d.support = *listing;
    fill_probabilities(d);
    double mass = 0.0;
    for (double p : d.probabilities) mass += p;
    d.tail_bound = std::max(0.0, 1.0 - mass);
  } else {
    d.tail_bound = 1.0;
  }
  return d;
}

ProductFormDistribution scaled_poisson(std::span<const double> c, double volume,
                                       const std::optional<IrreducibleClass>& listing) {
  if (!(volume > 0.0) || !std::isfinite(volume)) throw Error(ErrorCode::InvalidSpec, "volume must be positive");
  require_c(c, c.size());
  ProductFormDistribution d;
  d.c.assign(c.begin(), c.end());
  d.kinetics = KineticsSpec::mass_action(RateConstants{});
  d.support_kind = SupportKind::FullLattice;
  d.normalizer_status = NormalizerStatus::Exact;
  d.volume = volume;
  double s = 0.0;
  for (double v : c) s += v * volume;
  d.log_normalizer = -s;
  if (listing) {
    d.support = *listing;
    fill_probabilities(d);
    double mass = 0.0;
    for (double p : d.probabilities) mass += p;
    d.tail_bound = std::max(0.0, 1.0 - mass);
  } else {
    d.tail_bound = 1.0;
  }
  return d;
}

double mm_weight(double v, std::int64_t k, double c, Count x) {
  const double ratio = c / v;
  double w = 1.0;
  for (Count j = 1; j <= x; ++j) w *= static_cast<double>(k + j) / static_cast<double>(j) * ratio;
  return w;
}

double mm_weight(std::span<const double> v, std::span<const std::int64_t> k, std::span<const double> c,
                 std::span<const Count> x) {
  double w = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) w *= mm_weight(v[i], k[i], c[i], x[i]);
  return w;
}

double stationary_residual(const ProductFormDistribution& dist, const Network& net, const KineticsSpec& kinetics,
                           std::span<const Count> x) {
  double lhs = 0.0;
  State y(x.begin(), x.end());
  for (std::size_t k = 0; k < net.num_reactions(); ++k) {
    const auto& v = net.reaction_vector(k);
    bool ok = true;
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = x[i] - v[i];
      if (y[i] < 0) ok = false;
    }
    if (!ok) continue;
    const double rate = intensity(kinetics, net, k, y);
    if (rate > 0.0) lhs += dist.probability(y) * rate;
  }
  const double rhs = dist.probability(x) * total_intensity(kinetics, net, x);
  return std::abs(lhs - rhs);
}

std::optional<double> certified_tail_bound(const Network& net, const KineticsSpec& kinetics,
                                           std::span<const double> c, const IrreducibleClass& window) {
  if (window.bounded) return 0.0;
  if (!window.window) return std::nullopt;
  ProductFormDistribution probe;
  probe.c.assign(c.begin(), c.end());
  probe.kinetics = kinetics;
  probe.support = window;
  const auto lw = log_weights(probe);
  const double log_mass = log_sum_exp(lw);

  std::optional<double> best;
  auto consider = [&](std::optional<double> b) {
    if (b && std::isfinite(*b) && (!best || *b < *best)) best = b;
  };
  if (const auto thetas = species_thetas(kinetics, net.num_species())) {
    consider(series_tail_bound(conservation_laws(net), *thetas, c, window, log_mass));
  }
  consider(ray_tail_bound(net, probe, window, log_mass));
  return best;
}

WindowChoice choose_window(const Network& net, const KineticsSpec& kinetics, std::span<const double> c,
                           const State& x0, double target_tail, std::size_t cap) {
  const std::size_t m = net.num_species();
  require_c(c, m);
  if (x0.size() != m) throw Error(ErrorCode::InvalidSpec, "x0 has the wrong length");
  const auto laws = conservation_laws(net);
  std::vector<Count> bounds(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!laws.unbounded_species[i]) {
      auto top = max_coordinate(laws, x0, i);
      bounds[i] = top ? top->convert_to<Count>() : x0[i];
    } else {
      bounds[i] = std::max<Count>(x0[i], static_cast<Count>(std::ceil(c[i] + 6.0 * std::sqrt(c[i]) + 6.0)));
    }
  }
  for (int iter = 0; iter < 60; ++iter) {
    WindowChoice out;
    out.window = enumerate_window(net, kinetics, x0, bounds, cap);
    const auto tail = certified_tail_bound(net, kinetics, c, out.window);
    if (tail && *tail < target_tail) {
      out.bounds = bounds;
      out.tail_bound = *tail;
      return out;
    }
    if (out.window.bounded) {
      out.bounds = bounds;
      out.tail_bound = 0.0;
      return out;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (laws.unbounded_species[i]) bounds[i] = bounds[i] + std::max<Count>(2, bounds[i] / 4);
    }
  }
  throw Error(ErrorCode::NotFinite, "no truncation window with a certified tail below the target");
}

SupportChoice choose_support(const Network& net, const KineticsSpec& kinetics, std::span<const double> c,
                             const State& x0, std::size_t cap, std::optional<Count> bound, double target_tail) {
  SupportChoice out;
  auto res = enumerate_class(net, kinetics, x0, cap);
  if (res.status == EnumerationStatus::NotIrreducible) {
    throw Error(ErrorCode::NotFinite, "the closure of x0 is not irreducible (" + std::to_string(res.classes.size()) +
                                          " communicating classes)");
  }
  if (res.status == EnumerationStatus::Ok) {
    out.cls = std::move(res.cls);
    return out;
  }
  out.truncated = true;
  out.full_lattice = is_full_lattice(net, kinetics);
  if (bound) {
    const auto laws = conservation_laws(net);
    std::vector<Count> bounds(net.num_species());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      auto top = laws.unbounded_species[i] ? std::nullopt : max_coordinate(laws, x0, i);
      bounds[i] = top ? top->convert_to<Count>() : std::max(*bound, x0[i]);
    }
    out.cls = enumerate_window(net, kinetics, x0, bounds, cap);
    const auto tail = certified_tail_bound(net, kinetics, c, out.cls);
    out.tail_bound = tail ? *tail : kNaN;
    return out;
  }
  auto w = choose_window(net, kinetics, c, x0, target_tail, cap);
  out.cls = std::move(w.window);
  out.tail_bound = w.tail_bound;
  return out;
}

std::vector<Rational> exact_mass_action_probabilities(const IrreducibleClass& cls, const std::vector<Rational>& c) {
  std::vector<Rational> w;
  w.reserve(cls.size());
  Rational total = 0;
  for (const auto& x : cls.states) {
    Rational v = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (Count j = 1; j <= x[i]; ++j) v *= c[i] / Rational(j);
    }
    total += v;
    w.push_back(std::move(v));
  }
  for (auto& v : w) v /= total;
  return w;
}

void write_distribution_csv(std::ostream& out, const ProductFormDistribution& dist, const Network& net) {
  for (const auto& s : net.species()) out << s.name << ',';
  out << "probability\n";
  out.precision(17);
  for (std::size_t a = 0; a < dist.support.size(); ++a) {
    for (Count v : dist.support.states[a]) out << v << ',';
    out << dist.probabilities[a] << '\n';
  }
}

nlohmann::json summary_json(const ProductFormDistribution& dist, const Network& net) {
  const std::size_t m = net.num_species();
  std::vector<double> mean(m, 0.0);
  std::vector<double> var(m, 0.0);
  if (dist.support_kind == SupportKind::FullLattice && dist.kinetics.family() == KineticsFamily::MassAction) {
    for (std::size_t i = 0; i < m; ++i) mean[i] = var[i] = dist.c[i] * dist.volume.value_or(1.0);
  } else {
    double mass = 0.0;
    for (std::size_t a = 0; a < dist.support.size(); ++a) {
      mass += dist.probabilities[a];
      for (std::size_t i = 0; i < m; ++i) mean[i] += dist.probabilities[a] * static_cast<double>(dist.support.states[a][i]);
    }
    for (auto& v : mean) v /= mass;
    for (std::size_t a = 0; a < dist.support.size(); ++a) {
      for (std::size_t i = 0; i < m; ++i) {
        const double d = static_cast<double>(dist.support.states[a][i]) - mean[i];
        var[i] += dist.probabilities[a] * d * d / mass;
      }
    }
  }
  nlohmann::json j;
  std::vector<std::string> names;
  for (const auto& s : net.species()) names.push_back(s.name);
  j["species"] = names;
  j["family"] = family_name(dist.kinetics.family());
  j["support_kind"] = to_string(dist.support_kind);
  j["support_size"] = dist.support.size();
  j["log_normalizer"] = dist.log_normalizer;
  j["normalizer_status"] = to_string(dist.normalizer_status);
  j["tail_bound"] = std::isfinite(dist.tail_bound) ? nlohmann::json(dist.tail_bound) : nlohmann::json(nullptr);
  j["volume"] = dist.volume ? nlohmann::json(*dist.volume) : nlohmann::json(nullptr);
  j["c"] = dist.c;
  j["marginal_means"] = mean;
  j["marginal_variances"] = var;
  if (dist.support.window) j["window"] = *dist.support.window;
  if (dist.summability) {
    nlohmann::json sp = nlohmann::json::array();
    for (const auto& s : dist.summability->species) {
      sp.push_back({{"species", names[s.species]},
                    {"unbounded", s.unbounded},
                    {"theta_limit", std::isnan(s.theta_limit) ? nlohmann::json(nullptr)
                                    : std::isinf(s.theta_limit) ? nlohmann::json("inf")
                                                                : nlohmann::json(s.theta_limit)},
                    {"c", s.c},
                    {"holds", s.holds}});
    }
    j["summability"] = {{"verdict", to_string(dist.summability->verdict)}, {"species", sp}};
  }
  if (!dist.partial_sum_log.empty()) j["partial_sum_log"] = dist.partial_sum_log;
  return j;
}

}  // namespace crn
