#include <doctest.h>

#include <cmath>
#include <random>

#include "common.hpp"
#include "crn/equilibrium.hpp"
#include "crn/error.hpp"
#include "crn/oracle.hpp"
#include "crn/stationary.hpp"
#include "crn/statespace.hpp"

using namespace crn;

namespace {

GeneratorMatrix dense_to_q(const std::vector<std::vector<double>>& m) {
  GeneratorMatrix q(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (m[i][j] != 0.0) q.insert(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j];
    }
  }
  q.makeCompressed();
  return q;
}

IrreducibleClass finite_class(const NetworkDocument& doc, const State& x0) {
  auto res = enumerate_class(doc.network, doc.kinetics(), x0);
  REQUIRE(res.status == EnumerationStatus::Ok);
  return res.cls;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("two-state chain") {
  const auto sol = solve_stationary_oracle(dense_to_q({{-1, 1}, {2, -2}}));
  CHECK(sol.pi[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(sol.pi[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(sol.residual < 1e-15);
  CHECK(sol.max_rate == 2.0);
}

TEST_CASE("single absorbing state") {
  const auto sol = solve_stationary_oracle(dense_to_q({{0}}));
  CHECK(sol.pi == std::vector<double>{1.0});
}

TEST_CASE("two closed classes are refused") {
  try {
    solve_stationary_oracle(dense_to_q({{-1, 1, 0, 0}, {1, -1, 0, 0}, {0, 0, -1, 1}, {0, 0, 1, -1}}));
    FAIL("solved");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularBeyondNullity);
  }
  // a transient state feeding one closed class is fine
  const auto sol = solve_stationary_oracle(dense_to_q({{-1, 1, 0}, {0, -2, 2}, {0, 1, -1}}));
  CHECK(sol.pi[0] == doctest::Approx(0.0));
  CHECK(sol.pi[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("binomial against the oracle") {
  const auto doc = testutil::load_fixture("s1s2.crn");
  const auto cls = finite_class(doc, {3, 0});
  const auto sol = solve_stationary_oracle(generator_matrix(doc.network, doc.kinetics(), cls));
  std::vector<double> ref(cls.size());
  for (std::size_t a = 0; a < cls.size(); ++a) ref[a] = oracle::binomial_pmf(3, 2.0 / 3.0, static_cast<int>(cls.states[a][0]));
  CHECK(total_variation(sol.pi, ref) < 1e-10);
}

TEST_CASE("sparse and iterative solves agree with a dense long-double solve") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto raw = oracle::random_wr_deficiency_zero(rng);
    const auto doc = testutil::document(raw);
    const auto x0 = oracle::random_state(rng, raw.species.size(), 3);
    const auto cls = finite_class(doc, State(x0.begin(), x0.end()));
    if (cls.size() > 400) continue;
    std::vector<oracle::Vec> states;
    for (const auto& x : cls.states) states.emplace_back(x.begin(), x.end());
    const auto ref = oracle::dense_stationary(raw, states);
    const auto q = generator_matrix(doc.network, doc.kinetics(), cls);
    const auto direct = solve_stationary_oracle(q);
    OracleOptions it;
    it.direct_limit = 0;
    const auto iter = solve_stationary_oracle(q, it);
    CHECK(iter.method == (cls.size() > 1 ? "bicgstab_ilut" : "trivial"));
    CHECK(total_variation(direct.pi, ref) < 1e-12);
    CHECK(total_variation(iter.pi, ref) < 1e-9);
  }
}

TEST_CASE("a truncated class matches the product form state by state") {
  const auto doc = testutil::load_fixture("enzyme2.crn");
  const auto eq = solve_complex_balanced(doc.network, doc.rates);
  const auto win = enumerate_window(doc.network, doc.kinetics(), {0, 4, 0, 0}, {25, 4, 4, 4});
  const auto d = product_form(doc.network, doc.kinetics(), eq.c, win);
  const auto sol = solve_stationary_oracle(generator_matrix(doc.network, doc.kinetics(), win));
  for (std::size_t a = 0; a < win.size(); ++a) {
    if (d.probabilities[a] > 1e-200) CHECK(sol.pi[a] == doctest::Approx(d.probabilities[a]).epsilon(1e-9));
  }
}

TEST_CASE("total variation") {
  const std::vector<double> p{0.2, 0.8}, pt{1.0, 0.0}, qt{0.0, 1.0};
  CHECK(total_variation(p, p) == 0.0);
  CHECK(total_variation(pt, qt) == 1.0);
  CHECK_THROWS_AS(total_variation(p, std::vector<double>{1.0}), Error);
  CHECK(renormalized(std::vector<double>{1.0, 3.0}) == std::vector<double>{0.25, 0.75});
}

TEST_CASE("verdicts") {
  IrreducibleClass cls;
  cls.states = {{0}, {1}};
  const std::vector<double> a{0.5, 0.5}, b{0.5 + 1e-6, 0.5 - 1e-6};
  CHECK(compare(a, a, cls, 1e-10).verdict == Verdict::Pass);
  CHECK(compare(a, b, cls, 1e-10).verdict == Verdict::Fail);
  CHECK(compare(a, b, cls, 1e-10, 1e-5).verdict == Verdict::Pass);
  CHECK(compare(a, b, cls, 1e-10, std::nan("")).verdict == Verdict::Inconclusive);
  const auto r = compare(a, b, cls, 1e-10);
  REQUIRE(r.worst.size() == 2);
  CHECK(r.total_variation == doctest::Approx(1e-6));
  nlohmann::json j = r;
  CHECK(j["verdict"] == "fail");
  CHECK(j["tail_bound"] == 0.0);
}

TEST_CASE("residual grows linearly with a perturbation") {
  const auto doc = testutil::load_fixture("cycle3.crn");
  const auto cls = finite_class(doc, {4, 1, 0});
  const auto q = generator_matrix(doc.network, doc.kinetics(), cls);
  const auto sol = solve_stationary_oracle(q);
  std::mt19937_64 rng(4);
  Eigen::VectorXd dir(static_cast<Eigen::Index>(cls.size()));
  for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = std::uniform_real_distribution<double>(-1, 1)(rng);
  dir.array() -= dir.mean();
  std::vector<double> ratio;
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    Eigen::VectorXd pi = Eigen::Map<const Eigen::VectorXd>(sol.pi.data(), dir.size()) + eps * dir;
    ratio.push_back((q.transpose() * pi).cwiseAbs().maxCoeff() / eps);
  }
  CHECK(ratio[1] == doctest::Approx(ratio[0]).epsilon(1e-6));
  CHECK(ratio[2] == doctest::Approx(ratio[0]).epsilon(1e-5));
}

TEST_CASE("reversibility follows detailed balance") {
  const auto s = testutil::load_fixture("s1s2.crn");
  const auto cls = finite_class(s, {5, 0});
  const auto pi = solve_stationary_oracle(generator_matrix(s.network, s.kinetics(), cls)).pi;
  CHECK(check_reversibility(pi, s.network, s.kinetics(), cls).reversible);

  const auto cyc = testutil::load_fixture("cycle3.crn");
  const auto eq = solve_complex_balanced(cyc.network, cyc.rates);
  const auto ccls = finite_class(cyc, {3, 0, 0});
  const auto d = product_form(cyc.network, cyc.kinetics(), eq.c, ccls);
  const auto rep = check_reversibility(d.probabilities, cyc.network, cyc.kinetics(), ccls);
  CHECK_FALSE(rep.reversible);
  CHECK(rep.max_flux_defect > 0.1);
  CHECK_FALSE(is_detailed_balanced(cyc.network, cyc.rates, eq.c));

  // Michaelis-Menten birth-death chain along the ray
  const auto mm = testutil::load_fixture("mm_counterexample.crn");
  const auto win = enumerate_window(mm.network, mm.kinetics(), {0, 0}, {30, 30});
  const auto dm = product_form(mm.network, mm.kinetics(), std::vector<double>{1.0, 1.0}, win);
  CHECK(check_reversibility(dm.probabilities, mm.network, mm.kinetics(), win).reversible);

  const auto fo = testutil::load_fixture("first_order_closed.crn");
  CHECK_THROWS_AS(check_reversibility(pi, fo.network, fo.kinetics(), cls), Error);
}

}
