#include "crn/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "crn/error.hpp"
#include "crn/kinetics.hpp"
#include "crn/structure.hpp"

namespace crn {

namespace {

// c^{nu} for a complex, with 0^0 = 1.
double monomial(const Complex& z, std::span<const double> c) {
  double v = 1.0;
  for (std::size_t i = 0; i < z.coeffs.size(); ++i) {
    for (std::int32_t j = 0; j < z.coeffs[i]; ++j) v *= c[i];
  }
  return v;
}

void require_positive(std::span<const double> c, std::size_t m) {
  if (c.size() != m) throw Error(ErrorCode::NonPositiveC, "c has the wrong length");
  for (double v : c) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::NonPositiveC, "c must be strictly positive");
  }
}

double inf_norm(const std::vector<double>& v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::abs(x));
  return out;
}

double flux_scale(const Network& net, const RateConstants& kappa, std::span<const double> c) {
  double s = 0.0;
  for (std::size_t k = 0; k < net.num_reactions(); ++k) {
    s = std::max(s, kappa[k] * monomial(net.source(k), c));
  }
  return std::max(s, 1.0);
}

Rational exact_determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  return det;
}

bool strongly_connected(const Network& net, const std::vector<std::size_t>& cls) {
  // Forward and backward reachability from the first complex of the class.
  auto reach = [&](bool forward) {
    std::vector<bool> seen(net.num_complexes(), false);
    std::vector<std::size_t> stack{cls.front()};
    seen[cls.front()] = true;
    while (!stack.empty()) {
      const std::size_t z = stack.back();
      stack.pop_back();
      for (const auto& r : net.reactions()) {
        const std::size_t from = forward ? r.source : r.product;
        const std::size_t to = forward ? r.product : r.source;
        if (from == z && !seen[to]) {
          seen[to] = true;
          stack.push_back(to);
        }
      }
    }
    return seen;
  };
  const auto fwd = reach(true);
  const auto bwd = reach(false);
  return std::all_of(cls.begin(), cls.end(), [&](std::size_t z) { return fwd[z] && bwd[z]; });
}

// Balance residual in log coordinates and its Jacobian.
void residual_and_jacobian(const Network& net, const RateConstants& kappa, const Eigen::VectorXd& u,
                           Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
  const std::size_t m = net.num_species();
  r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(net.num_complexes()));
  if (jac) *jac = Eigen::MatrixXd::Zero(r.size(), static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < net.num_reactions(); ++k) {
    const auto& rx = net.reactions()[k];
    const Complex& nu = net.source(k);
    double e = 0.0;
    for (std::size_t i = 0; i < m; ++i) e += nu.coeffs[i] * u[static_cast<Eigen::Index>(i)];
    const double flux = kappa[k] * std::exp(e);
    r[static_cast<Eigen::Index>(rx.product)] += flux;
    r[static_cast<Eigen::Index>(rx.source)] -= flux;
    if (jac) {
      for (std::size_t i = 0; i < m; ++i) {
        if (nu.coeffs[i] == 0) continue;
        const double d = flux * nu.coeffs[i];
        (*jac)(static_cast<Eigen::Index>(rx.product), static_cast<Eigen::Index>(i)) += d;
        (*jac)(static_cast<Eigen::Index>(rx.source), static_cast<Eigen::Index>(i)) -= d;
      }
    }
  }
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::string_view to_string(EquilibriumMethod method) {
  return method == EquilibriumMethod::TreeLogLinear ? "TreeLogLinear" : "NewtonRefined";
}

std::vector<double> complex_balance_residual(const Network& net, const RateConstants& kappa,
                                             std::span<const double> c) {
  require_positive(c, net.num_species());
  std::vector<double> r(net.num_complexes(), 0.0);
  for (std::size_t k = 0; k < net.num_reactions(); ++k) {
    const double flux = kappa[k] * monomial(net.source(k), c);
    r[net.reactions()[k].product] += flux;
    r[net.reactions()[k].source] -= flux;
  }
  return r;
}

TreeConstants tree_constants(const Network& net, const RateConstants& kappa,
                             const std::vector<std::size_t>& linkage_class) {
  if (linkage_class.empty() || !strongly_connected(net, linkage_class)) {
    throw Error(ErrorCode::NotStronglyConnected, "linkage class is not strongly connected");
  }
  const std::size_t n = linkage_class.size();
  std::vector<std::size_t> local(net.num_complexes(), n);
  for (std::size_t j = 0; j < n; ++j) local[linkage_class[j]] = j;

  TreeConstants out;
  out.complexes = linkage_class;
  if (n == 1) {
    out.K = {1.0};
    if (kappa.is_exact()) out.exact = std::vector<Rational>{Rational(1)};
    return out;
  }

  // Out-degree Laplacian of the class: L[a][a] = total out-rate, L[a][b] = -rate(a -> b).
  if (kappa.is_exact()) {
    std::vector<std::vector<Rational>> lap(n, std::vector<Rational>(n));
    for (std::size_t k = 0; k < net.num_reactions(); ++k) {
      const auto& r = net.reactions()[k];
      const std::size_t a = local[r.source];
      if (a == n) continue;
      const std::size_t b = local[r.product];
      lap[a][a] += kappa.exact()[k];
      lap[a][b] -= kappa.exact()[k];
    }
    std::vector<Rational> K;
    for (std::size_t z = 0; z < n; ++z) {
      std::vector<std::vector<Rational>> minor;
      for (std::size_t a = 0; a < n; ++a) {
        if (a == z) continue;
        std::vector<Rational> row;
        for (std::size_t b = 0; b < n; ++b) {
          if (b != z) row.push_back(lap[a][b]);
        }
        minor.push_back(std::move(row));
      }
      K.push_back(exact_determinant(std::move(minor)));
    }
    for (const auto& q : K) out.K.push_back(to_double(q));
    out.exact = std::move(K);
  } else {
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < net.num_reactions(); ++k) {
      const auto& r = net.reactions()[k];
      const std::size_t a = local[r.source];
      if (a == n) continue;
      const auto ai = static_cast<Eigen::Index>(a);
      lap(ai, ai) += kappa[k];
      lap(ai, static_cast<Eigen::Index>(local[r.product])) -= kappa[k];
    }
    for (std::size_t z = 0; z < n; ++z) {
      Eigen::MatrixXd minor(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n - 1));
      Eigen::Index ra = 0;
      for (std::size_t a = 0; a < n; ++a) {
        if (a == z) continue;
        Eigen::Index cb = 0;
        for (std::size_t b = 0; b < n; ++b) {
          if (b != z) minor(ra, cb++) = lap(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        }
        ++ra;
      }
      out.K.push_back(minor.partialPivLu().determinant());
    }
  }
  for (double k : out.K) {
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw Error(ErrorCode::SolverDiverged, "tree constant is not a positive finite number");
    }
  }
  return out;
}

Equilibrium solve_complex_balanced(const Network& net, const RateConstants& kappa,
                                   const SolveOptions& options) {
  if (kappa.size() != net.num_reactions()) {
    throw Error(ErrorCode::InvalidSpec, "one rate constant per reaction is required");
  }
  if (!is_weakly_reversible(net)) {
    throw Error(ErrorCode::NotWeaklyReversible,
                "network is not weakly reversible, so no complex-balanced equilibrium exists");
  }
  const auto classes = linkage_classes(net);
  const std::size_t m = net.num_species();
  const std::size_t nc = net.num_complexes();
  const std::size_t l = classes.size();

  // Unknowns (ln c_1..ln c_m, b_1..b_l); one equation per complex: nu_z . ln c - b_L = ln K_z.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nc), static_cast<Eigen::Index>(m + l));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(nc));
  for (std::size_t L = 0; L < l; ++L) {
    const auto tc = tree_constants(net, kappa, classes[L]);
    for (std::size_t j = 0; j < tc.complexes.size(); ++j) {
      const auto z = static_cast<Eigen::Index>(tc.complexes[j]);
      const Complex& cz = net.complexes()[tc.complexes[j]];
      for (std::size_t i = 0; i < m; ++i) a(z, static_cast<Eigen::Index>(i)) = cz.coeffs[i];
      a(z, static_cast<Eigen::Index>(m + L)) = -1.0;
      rhs[z] = std::log(tc.K[j]);
    }
  }
  const Eigen::VectorXd sol = a.completeOrthogonalDecomposition().solve(rhs);
  const double inconsistency = (a * sol - rhs).cwiseAbs().maxCoeff();
  if (inconsistency > options.consistency_tol * std::max(1.0, rhs.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::NotComplexBalanced,
                "log-linear tree-constant system is inconsistent (residual " + std::to_string(inconsistency) +
                    "); no complex-balanced equilibrium for these rate constants");
  }

  Eigen::VectorXd u = sol.head(static_cast<Eigen::Index>(m));
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residual_and_jacobian(net, kappa, u, r, &jac);
  double norm = r.cwiseAbs().maxCoeff();

  Equilibrium eq;
  eq.method = EquilibriumMethod::TreeLogLinear;
  auto scale = [&](const Eigen::VectorXd& uu) {
    const Eigen::VectorXd c = uu.array().exp();
    return flux_scale(net, kappa, std::span<const double>(c.data(), static_cast<std::size_t>(c.size())));
  };
  for (int it = 0; it < options.max_newton_iterations && norm > options.newton_tol * scale(u); ++it) {
    const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-r);
    double t = 1.0;
    bool improved = false;
    for (int h = 0; h < 30; ++h, t *= 0.5) {
      const Eigen::VectorXd trial = u + t * step;
      Eigen::VectorXd rt;
      residual_and_jacobian(net, kappa, trial, rt, nullptr);
      const double nt = rt.cwiseAbs().maxCoeff();
      if (std::isfinite(nt) && nt < norm) {
        u = trial;
        improved = true;
        break;
      }
    }
    if (!improved) break;
    eq.method = EquilibriumMethod::NewtonRefined;
    residual_and_jacobian(net, kappa, u, r, &jac);
    norm = r.cwiseAbs().maxCoeff();
  }

  eq.c.resize(m);
  for (std::size_t i = 0; i < m; ++i) eq.c[i] = std::exp(u[static_cast<Eigen::Index>(i)]);
  eq.residual_inf_norm = inf_norm(complex_balance_residual(net, kappa, eq.c));
  if (!(eq.residual_inf_norm <= options.tol * flux_scale(net, kappa, eq.c))) {
    throw Error(ErrorCode::SolverDiverged,
                "balance residual " + std::to_string(eq.residual_inf_norm) + " above tolerance");
  }
  return eq;
}

namespace {

Eigen::MatrixXd conservation_rows(const ConservationLaws& laws, std::size_t m) {
  const auto wi = conservation_matrix(laws);
  Eigen::MatrixXd w(static_cast<Eigen::Index>(wi.size()), static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < wi.size(); ++r) {
    for (std::size_t i = 0; i < m; ++i) w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = static_cast<double>(wi[r][i]);
  }
  return w;
}

}  // namespace

Equilibrium equilibrium_in_class(const Network& net, const RateConstants& kappa,
                                 std::span<const double> x0, const SolveOptions& options) {
  const auto laws = conservation_laws(net);
  if (laws.basis.empty()) return solve_complex_balanced(net, kappa, options);
  const std::size_t m = net.num_species();
  if (x0.size() != m) throw Error(ErrorCode::InvalidSpec, "x0 has the wrong length");
  const Eigen::Map<const Eigen::VectorXd> x(x0.data(), static_cast<Eigen::Index>(m));
  const Eigen::VectorXd target = conservation_rows(laws, m) * x;
  return equilibrium_with_totals(net, kappa, std::span<const double>(target.data(), static_cast<std::size_t>(target.size())),
                                 options);
}

Equilibrium equilibrium_with_totals(const Network& net, const RateConstants& kappa, std::span<const double> totals,
                                    const SolveOptions& options) {
  Equilibrium base = solve_complex_balanced(net, kappa, options);
  const auto laws = conservation_laws(net);
  if (laws.basis.empty()) return base;
  const std::size_t m = net.num_species();
  if (totals.size() != laws.basis.size()) throw Error(ErrorCode::InvalidSpec, "one total per conservation law expected");
  const Eigen::MatrixXd w = conservation_rows(laws, m);
  const auto p = w.rows();
  const Eigen::Map<const Eigen::VectorXd> c0(base.c.data(), static_cast<Eigen::Index>(m));
  const Eigen::Map<const Eigen::VectorXd> target(totals.data(), p);

  // Minimize phi(a) = sum_i c0_i exp((W^T a)_i) - a.T, whose gradient is W c(a) - T.
  auto phi = [&](const Eigen::VectorXd& a) {
    return (c0.array() * (w.transpose() * a).array().exp()).sum() - a.dot(target);
  };
  Eigen::VectorXd a = Eigen::VectorXd::Zero(p);
  const double gtol = 1e-13 * std::max(1.0, target.cwiseAbs().maxCoeff());
  bool converged = false;
  for (int it = 0; it < 500; ++it) {
    const Eigen::VectorXd c = c0.array() * (w.transpose() * a).array().exp();
    const Eigen::VectorXd grad = w * c - target;
    if (grad.cwiseAbs().maxCoeff() <= gtol) {
      converged = true;
      break;
    }
    const Eigen::MatrixXd hess = w * c.asDiagonal() * w.transpose();
    const Eigen::VectorXd step = hess.ldlt().solve(-grad);
    const double f0 = phi(a);
    double t = 1.0;
    bool moved = false;
    for (int h = 0; h < 60; ++h, t *= 0.5) {
      const Eigen::VectorXd trial = a + t * step;
      const double ft = phi(trial);
      // Near the minimum the decrease in phi drowns in rounding; a shrinking gradient counts too.
      const Eigen::VectorXd gt = w * (c0.array() * (w.transpose() * trial).array().exp()).matrix() - target;
      if (std::isfinite(ft) &&
          (ft <= f0 + 1e-4 * t * grad.dot(step) || gt.cwiseAbs().maxCoeff() < 0.5 * grad.cwiseAbs().maxCoeff())) {
        a = trial;
        moved = true;
        break;
      }
    }
    if (!moved) {
      converged = grad.cwiseAbs().maxCoeff() <= 1e3 * gtol;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::SolverDiverged, "no positive equilibrium has these conserved totals");
  }
  const Eigen::VectorXd c = c0.array() * (w.transpose() * a).array().exp();
  Equilibrium eq;
  eq.method = base.method;
  eq.c = to_vector(c);
  eq.residual_inf_norm = inf_norm(complex_balance_residual(net, kappa, eq.c));
  if (!(eq.residual_inf_norm <= options.tol * flux_scale(net, kappa, eq.c))) {
    throw Error(ErrorCode::SolverDiverged, "balance residual above tolerance after moving to the requested class");
  }
  return eq;
}

bool is_detailed_balanced(const Network& net, const RateConstants& kappa, std::span<const double> c,
                          double rel_tol) {
  if (!is_reversible(net)) {
    throw Error(ErrorCode::NotReversibleNetwork, "detailed balance needs every reaction to have its reverse");
  }
  require_positive(c, net.num_species());
  for (std::size_t k = 0; k < net.num_reactions(); ++k) {
    const auto& r = net.reactions()[k];
    const std::size_t back = net.find_reaction(r.product, r.source);
    const double fwd = kappa[k] * monomial(net.source(k), c);
    const double bwd = kappa[back] * monomial(net.source(back), c);
    if (std::abs(fwd - bwd) > rel_tol * std::max(fwd, bwd)) return false;
  }
  return true;
}

std::vector<double> ode_rhs(const Network& net, const RateConstants& kappa, std::span<const double> x) {
  std::vector<double> out(net.num_species(), 0.0);
  for (std::size_t k = 0; k < net.num_reactions(); ++k) {
    const double f = deterministic_rate(kappa, net, k, x);
    const auto& v = net.reaction_vector(k);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += f * static_cast<double>(v[i]);
  }
  return out;
}

void to_json(nlohmann::json& j, const Equilibrium& eq) {
  j = nlohmann::json{{"c", eq.c}, {"residual", eq.residual_inf_norm}, {"method", to_string(eq.method)}};
}

}  // namespace crn
