#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crn/network.hpp"
#include "crn/rates.hpp"

namespace crn {

enum class EquilibriumMethod { TreeLogLinear, NewtonRefined };

std::string_view to_string(EquilibriumMethod method);

struct Equilibrium {
  std::vector<double> c;
  /// Max over complexes of |inflow - outflow|.
  double residual_inf_norm = 0.0;
  EquilibriumMethod method = EquilibriumMethod::TreeLogLinear;
};

/// Kirchhoff kernel of one linkage class: K[j] belongs to complex complexes[j].
struct TreeConstants {
  std::vector<std::size_t> complexes;
  std::vector<double> K;
  /// Present when the rate constants were exact.
  std::optional<std::vector<Rational>> exact;
};

struct SolveOptions {
  /// Accept the equilibrium when the balance residual is at most this.
  double tol = 1e-9;
  /// Log-linear system residual above this means no complex-balanced equilibrium.
  double consistency_tol = 1e-8;
  int max_newton_iterations = 50;
  double newton_tol = 1e-12;
};

/// Inflow minus outflow at every complex for concentrations c (indexed like net.complexes()).
std::vector<double> complex_balance_residual(const Network& net, const RateConstants& kappa,
                                             std::span<const double> c);

/// K_z = sum over spanning trees of the class rooted at z (edges directed toward z)
/// of the product of rate constants. Throws NotStronglyConnected.
TreeConstants tree_constants(const Network& net, const RateConstants& kappa,
                             const std::vector<std::size_t>& linkage_class);

/// A positive complex-balanced equilibrium. Throws NotWeaklyReversible,
/// NotComplexBalanced or SolverDiverged.
Equilibrium solve_complex_balanced(const Network& net, const RateConstants& kappa,
                                   const SolveOptions& options = {});

/// The complex-balanced equilibrium whose conserved quantities match those of x0
/// (the unique one in x0's compatibility class). x0 needs a strictly positive
/// point in its class; for networks without conservation laws this is
/// solve_complex_balanced.
Equilibrium equilibrium_in_class(const Network& net, const RateConstants& kappa,
                                 std::span<const double> x0, const SolveOptions& options = {});

/// The complex-balanced equilibrium with W c = totals, W the reduced echelon
/// conservation basis of conservation_laws(net).
Equilibrium equilibrium_with_totals(const Network& net, const RateConstants& kappa, std::span<const double> totals,
                                    const SolveOptions& options = {});

/// kappa_k c^{nu_k} = kappa_k' c^{nu'_k} for every reversible pair, to relative tolerance.
/// Throws NotReversibleNetwork.
bool is_detailed_balanced(const Network& net, const RateConstants& kappa, std::span<const double> c,
                          double rel_tol = 1e-9);

/// sum_k kappa_k x^{nu_k} (nu'_k - nu_k).
std::vector<double> ode_rhs(const Network& net, const RateConstants& kappa, std::span<const double> x);

void to_json(nlohmann::json& j, const Equilibrium& eq);

}  // namespace crn
