#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "common.hpp"
#include "crn/equilibrium.hpp"
#include "crn/error.hpp"
#include "crn/stationary.hpp"
#include "crn/statespace.hpp"
#include "crn/structure.hpp"

using namespace crn;

namespace {

IrreducibleClass finite_class(const NetworkDocument& doc, const State& x0) {
  auto res = enumerate_class(doc.network, doc.kinetics(), x0);
  REQUIRE(res.status == EnumerationStatus::Ok);
  return res.cls;
}

double choose(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

// For each complex z: inflow into z at x equals outflow from z at x.
void check_grouped_identity(const ProductFormDistribution& d, const Network& net, const KineticsSpec& kin,
                            const State& x) {
  for (std::size_t z = 0; z < net.num_complexes(); ++z) {
    double in = 0.0, out = 0.0;
    for (std::size_t k = 0; k < net.num_reactions(); ++k) {
      if (net.reactions()[k].product == z) {
        State y = x;
        bool ok = true;
        for (std::size_t i = 0; i < y.size(); ++i) {
          y[i] -= net.reaction_vector(k)[i];
          ok = ok && y[i] >= 0;
        }
        if (ok) in += d.probability(y) * intensity(kin, net, k, y);
      }
      if (net.reactions()[k].source == z) out += d.probability(x) * intensity(kin, net, k, x);
    }
    CHECK(std::abs(in - out) <= 1e-12 * std::max({in, out, 1e-300}));
  }
}

}  // namespace

TEST_SUITE("stationary") {

TEST_CASE("log-sum-exp") {
  const std::vector<double> v{1000.0, 1000.0};
  CHECK(log_sum_exp(v) == doctest::Approx(1000.0 + std::log(2.0)));
  const std::vector<double> w{-1e4, 0.0};
  CHECK(log_sum_exp(w) == doctest::Approx(0.0));
  CHECK(std::isinf(log_sum_exp(std::vector<double>{})));
}

TEST_CASE("s1s2 is binomial(N, c1)") {
  const auto doc = testutil::load_fixture("s1s2.crn");
  const std::vector<double> c{2.0 / 3.0, 1.0 / 3.0};
  for (int n : {1, 3, 10, 20}) {
    const auto cls = finite_class(doc, {n, 0});
    const auto d = product_form(doc.network, doc.kinetics(), c, cls);
    CHECK(d.support_kind == SupportKind::FiniteClass);
    CHECK(d.normalizer_status == NormalizerStatus::Exact);
    CHECK(d.tail_bound == 0.0);
    for (std::size_t a = 0; a < cls.size(); ++a) {
      const auto& x = cls.states[a];
      CHECK(d.probabilities[a] == doctest::Approx(oracle::binomial_pmf(n, 2.0 / 3.0, static_cast<int>(x[0]))).epsilon(1e-13));
    }
    // X1 and X2 are not independent: both at N is impossible, each alone is not
    CHECK(d.probability(State{n, n}) == 0.0);
    CHECK(d.probability(State{n, 0}) * d.probability(State{0, n}) > 0.0);
  }
}

TEST_CASE("exact probabilities for rational c") {
  const auto doc = testutil::load_fixture("s1s2.crn");
  const auto cls = finite_class(doc, {3, 0});
  const auto p = exact_mass_action_probabilities(cls, {Rational(2, 3), Rational(1, 3)});
  std::vector<Rational> want(4);
  for (std::size_t a = 0; a < cls.size(); ++a) {
    const int k = static_cast<int>(cls.states[a][0]);
    want[a] = Rational(static_cast<long>(choose(3, k) * std::pow(2, k) + 0.5), 27);
  }
  CHECK(p == want);
}

TEST_CASE("c-independence on a finite class") {
  const auto doc = testutil::load_fixture("enzyme2.crn");
  const std::vector<double> a{1.0}, b{7.0};
  const auto c1 = equilibrium_with_totals(doc.network, doc.rates, a).c;
  const auto c2 = equilibrium_with_totals(doc.network, doc.rates, b).c;
  const auto win = enumerate_window(doc.network, doc.kinetics(), {0, 4, 0, 0}, {12, 4, 4, 4});
  const auto d1 = product_form(doc.network, doc.kinetics(), c1, win);
  const auto d2 = product_form(doc.network, doc.kinetics(), c2, win);
  for (std::size_t i = 0; i < win.size(); ++i) CHECK(d1.probabilities[i] == doctest::Approx(d2.probabilities[i]).epsilon(1e-10));
}

TEST_CASE("mass action on the full lattice has independent Poisson marginals") {
  const auto doc = testutil::load_fixture("enzyme1.crn");
  const std::vector<double> c(4, 0.05);
  const auto win = enumerate_window(doc.network, doc.kinetics(), {0, 0, 0, 0}, {3, 3, 3, 3});
  const auto d = product_form_full_lattice(doc.network, doc.kinetics(), c, win);
  CHECK(d.support_kind == SupportKind::FullLattice);
  CHECK(d.normalizer_status == NormalizerStatus::Exact);
  for (std::size_t a = 0; a < win.size(); ++a) {
    double joint = 1.0;
    for (auto xi : win.states[a]) joint *= oracle::poisson_pmf(0.05, xi);
    CHECK(d.probabilities[a] == doctest::Approx(joint).epsilon(1e-13));
  }
  double below = 0.0;
  for (Count k = 0; k <= 3; ++k) below += oracle::poisson_pmf(0.05, k);
  CHECK(d.tail_bound == doctest::Approx(1.0 - std::pow(below, 4)).epsilon(1e-6));

  const auto v = scaled_poisson(c, 10.0, win);
  CHECK(v.probability(State{1, 2, 0, 0}) ==
        doctest::Approx(oracle::poisson_pmf(0.5, 1) * oracle::poisson_pmf(0.5, 2) * std::pow(oracle::poisson_pmf(0.5, 0), 2)));
  const auto j = summary_json(v, doc.network);
  for (double m : j["marginal_means"].get<std::vector<double>>()) CHECK(m == doctest::Approx(0.5));
}

TEST_CASE("theta products on the full lattice") {
  // 0 <-> A served by 2 servers with c = 1: weights 1, 1, 1/2, 1/4, ... sum to 3
  const auto doc = parse("@theta A minn(2)\n0 <-> A ; 1, 1\n");
  const std::vector<double> c{1.0};
  const auto win = enumerate_window(doc.network, doc.kinetics(), {0}, {60});
  const auto d = product_form_full_lattice(doc.network, doc.kinetics(), c, win);
  CHECK(d.normalizer_status == NormalizerStatus::Certified);
  CHECK(d.log_normalizer == doctest::Approx(-std::log(3.0)).epsilon(1e-14));
  CHECK(d.probability(State{3}) == doctest::Approx(0.25 / 3.0).epsilon(1e-14));
}

TEST_CASE("stationary equation and grouped identity on the fixtures") {
  struct Row {
    const char* file;
    State x0;
    std::optional<std::vector<Count>> box;
  };
  const Row rows[] = {
      {"s1s2.crn", {6, 0}, std::nullopt},
      {"cycle3.crn", {3, 2, 1}, std::nullopt},
      {"first_order_closed.crn", {5, 0, 0}, std::nullopt},
      {"first_order_open.crn", {0, 0}, std::vector<Count>{14, 14}},
      {"enzyme1.crn", {0, 0, 0, 0}, std::vector<Count>{5, 5, 5, 5}},
      {"enzyme2.crn", {0, 3, 0, 0}, std::vector<Count>{16, 3, 3, 3}},
      {"fast_subnetwork.crn", {0, 0, 3, 0}, std::vector<Count>{3, 3, 3, 14}},
      {"mm_counterexample.crn", {0, 0}, std::vector<Count>{40, 40}},
  };
  for (const auto& r : rows) {
    CAPTURE(std::string(r.file));
    const auto doc = testutil::load_fixture(r.file);
    const auto kin = doc.kinetics();
    const auto eq = solve_complex_balanced(doc.network, doc.rates);
    const auto cls = r.box ? enumerate_window(doc.network, kin, r.x0, *r.box) : finite_class(doc, r.x0);
    const auto d = product_form(doc.network, kin, eq.c, cls);
    for (const auto& x : cls.states) {
      const double scale = d.probability(x) * total_intensity(kin, doc.network, x);
      CHECK(stationary_residual(d, doc.network, kin, x) <= 1e-10 * scale);
      check_grouped_identity(d, doc.network, kin, x);
    }
  }
}

TEST_CASE("Michaelis-Menten closed form") {
  const std::vector<double> v{3.0, 0.5}, c{1.0, 1.0};
  const std::vector<std::int64_t> k{1, 1};
  const MichaelisMentenTheta t1{3.0, 1.0}, t2{0.5, 1.0};
  for (Count x = 0; x <= 200; ++x) {
    const double generic = std::exp(-theta_log_factorial(t1, x) - theta_log_factorial(t2, x));
    const std::vector<Count> xx{x, x};
    CHECK(mm_weight(v, k, c, xx) == doctest::Approx(generic).epsilon(1e-12));
    const double closed = std::pow(choose(static_cast<int>(x) + 1, static_cast<int>(x)), 2) * std::pow(2.0 / 3.0, static_cast<double>(x));
    CHECK(mm_weight(v, k, c, xx) == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("the Michaelis-Menten counterexample is uncertified") {
  const auto doc = testutil::load_fixture("mm_counterexample.crn");
  const auto kin = doc.kinetics();
  const std::vector<double> c{1.0, 1.0};
  const auto win = enumerate_window(doc.network, kin, {0, 0}, {50, 50});
  CHECK(win.size() == 51);
  const auto d = product_form(doc.network, kin, c, win);
  REQUIRE(d.summability);
  CHECK(d.summability->verdict == Summability::Inconclusive);
  CHECK(d.normalizer_status == NormalizerStatus::Uncertified);
  // ratios of pi along the ray follow C(1+n,n)^2 (2/3)^n
  const double p0 = d.probability(State{0, 0});
  for (Count n = 1; n <= 50; ++n) {
    const double want = std::pow(n + 1.0, 2) * std::pow(2.0 / 3.0, static_cast<double>(n));
    CHECK(d.probability(State{n, n}) / p0 == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(std::isfinite(d.tail_bound));
}

TEST_CASE("summability") {
  const std::vector<double> c{1.0, 1.0};
  const auto mm = testutil::load_fixture("mm_counterexample.crn");
  const auto v = summability_check(mm.kinetics(), c, {true, true});
  CHECK(v.verdict == Summability::Inconclusive);
  CHECK(v.species[0].holds);
  CHECK_FALSE(v.species[1].holds);
  const auto bounded = summability_check(mm.kinetics(), c, {true, false});
  CHECK(bounded.verdict == Summability::SufficientConditionHolds);
  const auto e1 = testutil::load_fixture("enzyme1.crn");
  CHECK(summability_check(e1.kinetics(), std::vector<double>(4, 100.0), std::vector<bool>(4, true)).verdict ==
        Summability::SufficientConditionHolds);
}

TEST_CASE("not summable") {
  // one server, arrivals at rate 2: weight 2^x grows without bound
  const auto doc = parse("@theta A minn(1)\n0 <-> A ; 2, 1\n");
  const std::vector<double> c{2.0};
  const auto win = enumerate_window(doc.network, doc.kinetics(), {0}, {60});
  try {
    product_form(doc.network, doc.kinetics(), c, win);
    FAIL("expected NotSummable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSummable);
  }
  CHECK_THROWS_AS(product_form_full_lattice(doc.network, doc.kinetics(), c, win), Error);
}

TEST_CASE("tail bounds dominate the true tail") {
  // enzyme2: E is Poisson(3) and independent of the rest
  const auto doc = testutil::load_fixture("enzyme2.crn");
  const auto eq = solve_complex_balanced(doc.network, doc.rates);
  for (Count b : {6, 10, 15, 20}) {
    const auto win = enumerate_window(doc.network, doc.kinetics(), {0, 2, 0, 0}, {b, 2, 2, 2});
    const auto bound = certified_tail_bound(doc.network, doc.kinetics(), eq.c, win);
    REQUIRE(bound);
    double inside = 0.0;
    for (Count e = 0; e <= b; ++e) inside += oracle::poisson_pmf(3.0, e);
    CHECK(*bound >= (1.0 - inside) / inside);
    CHECK(*bound <= 10.0 * (1.0 - inside) / inside + 1e-15);
  }
  const auto w = choose_window(doc.network, doc.kinetics(), eq.c, {0, 2, 0, 0}, 1e-10);
  CHECK(w.tail_bound <= 1e-10);
  CHECK(w.window.size() == static_cast<std::size_t>(w.bounds[0] + 1) * 6);
}

TEST_CASE("support choice") {
  const auto s = testutil::load_fixture("s1s2.crn");
  const std::vector<double> c{2.0 / 3.0, 1.0 / 3.0};
  const auto fin = choose_support(s.network, s.kinetics(), c, {4, 0});
  CHECK_FALSE(fin.truncated);
  CHECK(fin.cls.size() == 5);
  const auto e2 = testutil::load_fixture("enzyme2.crn");
  const auto eq = solve_complex_balanced(e2.network, e2.rates);
  const auto fixed = choose_support(e2.network, e2.kinetics(), eq.c, {0, 1, 0, 0}, 1000, Count{9});
  CHECK(fixed.truncated);
  CHECK_FALSE(fixed.full_lattice);
  CHECK(fixed.cls.size() == 30);
  const auto irr = testutil::load_fixture("irreversible.crn");
  CHECK_THROWS_AS(choose_support(irr.network, irr.kinetics(), std::vector<double>{1.0, 1.0}, {1, 0}), Error);
}

TEST_CASE("unbalanced c is refused") {
  const auto doc = testutil::load_fixture("s1s2.crn");
  const auto cls = finite_class(doc, {2, 0});
  CHECK_THROWS_AS(product_form(doc.network, doc.kinetics(), std::vector<double>{1.0, 1.0}, cls), Error);
}

TEST_CASE("exports") {
  const auto doc = testutil::load_fixture("s1s2.crn");
  const std::vector<double> c{2.0 / 3.0, 1.0 / 3.0};
  const auto d = product_form(doc.network, doc.kinetics(), c, finite_class(doc, {2, 0}));
  std::ostringstream os;
  write_distribution_csv(os, d, doc.network);
  CHECK(os.str().rfind("S1,S2,probability\n", 0) == 0);
  const auto j = summary_json(d, doc.network);
  CHECK(j["support_size"] == 3);
  CHECK(j["normalizer_status"] == "exact");
  CHECK(j["marginal_means"][0].get<double>() == doctest::Approx(4.0 / 3.0));
  CHECK(j["marginal_variances"][0].get<double>() == doctest::Approx(2.0 * 2.0 / 9.0));
}

}
