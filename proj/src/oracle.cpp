#include "crn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

#include "crn/error.hpp"
#include "crn/structure.hpp"

namespace crn {

namespace {

using ColMajor = Eigen::SparseMatrix<double, Eigen::ColMajor>;

std::size_t closed_classes(const GeneratorMatrix& q) {
  using Digraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
  const auto n = static_cast<std::size_t>(q.rows());
  Digraph g(n);
  for (Eigen::Index r = 0; r < q.outerSize(); ++r) {
    for (GeneratorMatrix::InnerIterator it(q, r); it; ++it) {
      if (it.row() != it.col() && it.value() > 0.0) {
        boost::add_edge(static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), g);
      }
    }
  }
  std::vector<int> comp(n);
  const int count = boost::strong_components(g, comp.data());
  std::vector<bool> closed(static_cast<std::size_t>(count), true);
  for (Eigen::Index r = 0; r < q.outerSize(); ++r) {
    for (GeneratorMatrix::InnerIterator it(q, r); it; ++it) {
      if (it.row() != it.col() && it.value() > 0.0 &&
          comp[static_cast<std::size_t>(it.row())] != comp[static_cast<std::size_t>(it.col())]) {
        closed[static_cast<std::size_t>(comp[static_cast<std::size_t>(it.row())])] = false;
      }
    }
  }
  return static_cast<std::size_t>(std::count(closed.begin(), closed.end(), true));
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

OracleSolution solve_stationary_oracle(const GeneratorMatrix& q, const OracleOptions& options) {
  const Eigen::Index n = q.rows();
  if (n == 0 || q.cols() != n) throw Error(ErrorCode::InvalidSpec, "generator must be square and nonempty");
  OracleSolution sol;
  for (Eigen::Index i = 0; i < n; ++i) sol.max_rate = std::max(sol.max_rate, std::abs(q.coeff(i, i)));
  if (n == 1) {
    sol.pi = {1.0};
    sol.method = "trivial";
    return sol;
  }
  if (const std::size_t closed = closed_classes(q); closed != 1) {
    throw Error(ErrorCode::SingularBeyondNullity,
                "generator has " + std::to_string(closed) + " closed classes; the stationary solution is not unique");
  }

  // A = Q^T with its last row replaced by ones; A pi = e_n.
  ColMajor a = ColMajor(q.transpose());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(a.nonZeros() + n));
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    for (ColMajor::InnerIterator it(a, c); it; ++it) {
      if (it.row() != n - 1) trips.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (Eigen::Index c = 0; c < n; ++c) trips.emplace_back(n - 1, c, 1.0);
  ColMajor m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[n - 1] = 1.0;

  Eigen::VectorXd pi;
  if (static_cast<std::size_t>(n) <= options.direct_limit) {
    Eigen::SparseLU<ColMajor, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) {
      throw Error(ErrorCode::SingularBeyondNullity, "sparse LU failed: " + lu.lastErrorMessage());
    }
    pi = lu.solve(rhs);
    // One step of iterative refinement.
    const Eigen::VectorXd r = rhs - m * pi;
    pi += lu.solve(r);
    sol.method = "sparse_lu";
  } else {
    Eigen::BiCGSTAB<ColMajor, Eigen::IncompleteLUT<double>> solver;
    solver.setTolerance(options.iterative_tol);
    solver.setMaxIterations(options.max_iterations);
    solver.compute(m);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::SingularBeyondNullity, "preconditioner failed");
    pi = solver.solveWithGuess(rhs, Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
    sol.iterations = static_cast<int>(solver.iterations());
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::SolverDiverged, "BiCGSTAB did not converge (error " + std::to_string(solver.error()) + ")");
    }
    sol.method = "bicgstab_ilut";
  }
  if (!pi.allFinite()) throw Error(ErrorCode::SingularBeyondNullity, "oracle solve produced non-finite values");
  // Round-off can leave entries of order -1e-17 on nearly empty states.
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi[i] < 0.0) {
      if (pi[i] < -1e-9) throw Error(ErrorCode::SingularBeyondNullity, "oracle solution has negative mass");
      pi[i] = 0.0;
    }
  }
  pi /= pi.sum();
  const Eigen::VectorXd res = q.transpose() * pi;
  sol.residual = res.cwiseAbs().maxCoeff();
  sol.pi.assign(pi.data(), pi.data() + n);
  return sol;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorCode::SupportMismatch, "distributions live on different supports");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

std::vector<double> renormalized(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) s += v;
  std::vector<double> out(p.begin(), p.end());
  for (auto& v : out) v /= s;
  return out;
}

ComparisonReport compare(std::span<const double> formula, std::span<const double> oracle, const IrreducibleClass& cls,
                         double threshold, double tail_bound, std::size_t keep) {
  if (formula.size() != cls.size() || oracle.size() != cls.size()) {
    throw Error(ErrorCode::SupportMismatch, "distributions and class differ in size");
  }
  ComparisonReport rep;
  rep.threshold = threshold;
  rep.tail_bound = tail_bound;
  rep.states = cls.size();
  rep.window_mass = std::isfinite(tail_bound) ? 1.0 / (1.0 + tail_bound) : std::numeric_limits<double>::quiet_NaN();
  const auto p = renormalized(formula);
  const auto q = renormalized(oracle);
  rep.total_variation = total_variation(p, q);
  std::vector<StateDiscrepancy> all;
  all.reserve(p.size());
  for (std::size_t a = 0; a < p.size(); ++a) {
    const double rel = std::abs(p[a] - q[a]) / std::max(std::max(p[a], q[a]), std::numeric_limits<double>::min());
    rep.max_relative_error = std::max(rep.max_relative_error, rel);
    all.push_back({cls.states[a], p[a], q[a], rel});
  }
  const std::size_t k = std::min(keep, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), [](const auto& x, const auto& y) {
    return std::abs(x.formula - x.oracle) > std::abs(y.formula - y.oracle);
  });
  all.resize(k);
  rep.worst = std::move(all);
  const double allowed = threshold + (std::isfinite(tail_bound) ? tail_bound : 0.0);
  if (rep.total_variation <= allowed) {
    rep.verdict = Verdict::Pass;
  } else {
    rep.verdict = std::isfinite(tail_bound) ? Verdict::Fail : Verdict::Inconclusive;
  }
  return rep;
}

ReversibilityReport check_reversibility(std::span<const double> pi, const Network& net, const KineticsSpec& kinetics,
                                        const IrreducibleClass& cls, double rel_tol) {
  if (!is_reversible(net)) {
    throw Error(ErrorCode::NotReversibleNetwork, "reversibility check needs every reaction to have its reverse");
  }
  if (pi.size() != cls.size()) throw Error(ErrorCode::SupportMismatch, "pi and class differ in size");
  // alpha(x, y) summed over reactions with the same displacement.
  auto alpha = [&](const State& x, const std::vector<std::int64_t>& shift) {
    double a = 0.0;
    for (std::size_t k = 0; k < net.num_reactions(); ++k) {
      if (net.reaction_vector(k) == shift) a += intensity(kinetics, net, k, x);
    }
    return a;
  };
  ReversibilityReport rep;
  std::map<std::vector<std::int64_t>, int> shifts;
  for (std::size_t k = 0; k < net.num_reactions(); ++k) shifts.emplace(net.reaction_vector(k), 0);
  for (std::size_t a = 0; a < cls.size(); ++a) {
    const State& x = cls.states[a];
    for (const auto& [shift, unused] : shifts) {
      State y = x;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += shift[i];
      const std::size_t b = cls.index_of(y);
      if (b == cls.size() || b < a) continue;
      std::vector<std::int64_t> back(shift.size());
      for (std::size_t i = 0; i < back.size(); ++i) back[i] = -shift[i];
      const double fwd = pi[a] * alpha(x, shift);
      const double bwd = pi[b] * alpha(y, back);
      const double scale = std::max(fwd, bwd);
      if (scale <= 0.0) continue;
      const double defect = std::abs(fwd - bwd) / scale;
      rep.max_flux_defect = std::max(rep.max_flux_defect, defect);
    }
  }
  rep.reversible = rep.max_flux_defect <= rel_tol;
  return rep;
}

void to_json(nlohmann::json& j, const ComparisonReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json worst = nlohmann::json::array();
  for (const auto& w : r.worst) {
    worst.push_back({{"state", w.state}, {"formula", w.formula}, {"oracle", w.oracle}, {"relative_error", w.relative_error}});
  }
  nlohmann::json offenders = nlohmann::json::array();
  for (const auto& o : r.residual_offenders) {
    offenders.push_back({{"state", o.state}, {"residual", o.residual}, {"relative", o.relative}});
  }
  j = nlohmann::json{{"total_variation", r.total_variation},
                     {"max_relative_error", r.max_relative_error},
                     {"threshold", r.threshold},
                     {"window_mass", num(r.window_mass)},
                     {"tail_bound", num(r.tail_bound)},
                     {"states", r.states},
                     {"max_relative_residual", r.max_relative_residual},
                     {"worst", worst},
                     {"residual_offenders", offenders},
                     {"verdict", to_string(r.verdict)}};
}

}  // namespace crn
