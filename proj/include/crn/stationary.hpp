#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crn/kinetics.hpp"
#include "crn/network.hpp"
#include "crn/statespace.hpp"

namespace crn {

enum class SupportKind { FiniteClass, TruncatedClass, FullLattice };
enum class NormalizerStatus { Exact, Certified, Uncertified };

std::string_view to_string(SupportKind kind);
std::string_view to_string(NormalizerStatus status);

/// ln sum exp(v), stable for weights spanning many orders of magnitude.
double log_sum_exp(std::span<const double> v);

struct SpeciesSummability {
  std::size_t species = 0;
  bool unbounded = false;
  /// lim theta_i(j); +inf for linear theta, NaN when unknown.
  double theta_limit = 0.0;
  double c = 0.0;
  bool holds = true;
};

enum class Summability { SufficientConditionHolds, Inconclusive };

struct SummabilityVerdict {
  Summability verdict = Summability::SufficientConditionHolds;
  std::vector<SpeciesSummability> species;
};

std::string_view to_string(Summability s);

/// theta_i(j) > c_i + eps for large j on every unbounded coordinate. Mass action
/// counts as linear theta; ratio-form kinetics is always Inconclusive.
SummabilityVerdict summability_check(const KineticsSpec& kinetics, std::span<const double> c,
                                     const std::vector<bool>& unbounded, double eps = 1e-9);

/// Stationary distribution of product form over a listed set of states.
///
/// For FiniteClass and TruncatedClass the probabilities are normalized over the
/// listed states; for FullLattice they are the exact lattice probabilities of the
/// listed states (which then sum to 1 - mass outside the listing).
struct ProductFormDistribution {
  std::vector<double> c;
  KineticsSpec kinetics;
  SupportKind support_kind = SupportKind::FiniteClass;
  IrreducibleClass support;
  std::vector<double> probabilities;
  /// ln M: pi(x) = M * weight(x).
  double log_normalizer = 0.0;
  NormalizerStatus normalizer_status = NormalizerStatus::Exact;
  /// Upper bound on the relative mass of the class outside the listed states
  /// (0 for finite classes, NaN when no bound is available).
  double tail_bound = 0.0;
  std::optional<double> volume;
  std::optional<SummabilityVerdict> summability;
  /// ln of the window mass over nested sub-boxes (quarters of the window); only for
  /// truncated classes.
  std::vector<double> partial_sum_log;

  /// ln of the unnormalized product-form weight at x (x >= 0).
  double log_weight(std::span<const Count> x) const;
  /// pi(x). Outside a finite class this is 0. For a truncated class, states beyond the
  /// window get the same analytic formula (they belong to the class whenever they
  /// lead into it, as the state space of a weakly reversible network has no
  /// transient states).
  double probability(std::span<const Count> x) const;
};

struct ProductFormOptions {
  /// c must balance every complex to this relative accuracy.
  double balance_tol = 1e-9;
  bool check_balance = true;
};

/// Product-form distribution on an enumerated finite class or a truncation window of
/// an infinite class. Throws NotComplexBalanced, NotSummable.
ProductFormDistribution product_form(const Network& net, const KineticsSpec& kinetics, std::span<const double> c,
                                     const IrreducibleClass& support, const ProductFormOptions& options = {});

/// Product form on the whole lattice Z^m_{>=0}: exact e^{-sum c} for mass action,
/// per-species series for theta products whose summability condition holds.
/// `listing` (optional) selects which states get explicit probabilities.
ProductFormDistribution product_form_full_lattice(const Network& net, const KineticsSpec& kinetics,
                                                  std::span<const double> c,
                                                  const std::optional<IrreducibleClass>& listing = std::nullopt,
                                                  const ProductFormOptions& options = {});

/// Product of Poisson(V c_i) marginals on the full lattice.
ProductFormDistribution scaled_poisson(std::span<const double> c, double volume,
                                       const std::optional<IrreducibleClass>& listing = std::nullopt);

/// prod_i C(k_i + x_i, x_i) (c_i / v_i)^{x_i}: the weight c^x / prod theta(j) for
/// Michaelis-Menten theta_i(x) = v_i x / (k_i + x) with integral k_i.
double mm_weight(std::span<const double> v, std::span<const std::int64_t> k, std::span<const double> c,
                 std::span<const Count> x);
double mm_weight(double v, std::int64_t k, double c, Count x);

/// |sum_k pi(x - zeta_k) lambda_k(x - zeta_k) - pi(x) sum_k lambda_k(x)|.
double stationary_residual(const ProductFormDistribution& dist, const Network& net, const KineticsSpec& kinetics,
                           std::span<const Count> x);

/// Upper bound on (class mass outside the window) / (mass inside), or nullopt.
std::optional<double> certified_tail_bound(const Network& net, const KineticsSpec& kinetics,
                                           std::span<const double> c, const IrreducibleClass& window);

struct WindowChoice {
  std::vector<Count> bounds;
  IrreducibleClass window;
  double tail_bound = 0.0;
};

/// Smallest box (grown geometrically) whose certified tail is below target.
/// Throws NotFinite when no certificate is available or the cap is hit first.
WindowChoice choose_window(const Network& net, const KineticsSpec& kinetics, std::span<const double> c,
                           const State& x0, double target_tail = 1e-10, std::size_t cap = kDefaultStateCap);

struct SupportChoice {
  IrreducibleClass cls;
  /// Class mass beyond the listed states relative to the listed mass (0 when finite).
  double tail_bound = 0.0;
  bool truncated = false;
  /// The class is all of Z^m_{>=0}.
  bool full_lattice = false;
};

/// x0's class when it has at most `cap` states; otherwise a window, either the box with
/// every unbounded coordinate capped at `bound` or one chosen by choose_window.
SupportChoice choose_support(const Network& net, const KineticsSpec& kinetics, std::span<const double> c,
                             const State& x0, std::size_t cap = kDefaultStateCap,
                             std::optional<Count> bound = std::nullopt, double target_tail = 1e-10);

/// Exact probabilities for mass action on a finite class with rational c.
std::vector<Rational> exact_mass_action_probabilities(const IrreducibleClass& cls, const std::vector<Rational>& c);

/// CSV: one column per species, then "probability".
void write_distribution_csv(std::ostream& out, const ProductFormDistribution& dist, const Network& net);
/// Summary: normalizer, status, support size, marginal means and variances.
nlohmann::json summary_json(const ProductFormDistribution& dist, const Network& net);

}  // namespace crn
