// One line per acceptance criterion; exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "crn/equilibrium.hpp"
#include "crn/error.hpp"
#include "crn/kinetics.hpp"
#include "crn/netparse.hpp"
#include "crn/oracle.hpp"
#include "crn/ssa.hpp"
#include "crn/stationary.hpp"
#include "crn/statespace.hpp"
#include "crn/structure.hpp"
#include "oracles.hpp"

using namespace crn;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void note(Outcome& o, bool ok, const std::string& what) {
  o.pass = o.pass && ok;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what + (ok ? "" : " [FAIL]");
}

std::string fixture_path(const std::string& name) { return std::string(CRN_FIXTURE_DIR) + "/" + name; }
NetworkDocument fixture(const std::string& name) { return load_document(fixture_path(name)); }

IrreducibleClass finite_class(const NetworkDocument& doc, const State& x0) {
  auto res = enumerate_class(doc.network, doc.kinetics(), x0);
  if (res.status != EnumerationStatus::Ok) throw std::runtime_error("class is not finite");
  return res.cls;
}

// TV between the product form on `cls` and the oracle solve of the generator on `cls`.
double tv_against_oracle(const NetworkDocument& doc, const KineticsSpec& kin, std::span<const double> c,
                         const IrreducibleClass& cls) {
  const auto d = product_form(doc.network, kin, c, cls);
  const auto sol = solve_stationary_oracle(generator_matrix(doc.network, kin, cls));
  return total_variation(renormalized(d.probabilities), renormalized(sol.pi));
}

int run_cli(const std::string& args) {
  const std::string cmd = "'" CRN_CLI_PATH "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome structure_numbers() {
  Outcome o;
  struct Row {
    const char* file;
    std::size_t n, l, s, d;
  };
  for (const Row& r : {Row{"enzyme1.crn", 6, 2, 4, 0}, Row{"enzyme2.crn", 5, 2, 3, 0}, Row{"s1s2.crn", 2, 1, 1, 0},
                       Row{"fast_subnetwork.crn", 5, 2, 3, 0}}) {
    const auto rep = analyze(fixture(r.file).network);
    note(o, rep.n_complexes == r.n && rep.n_linkage_classes == r.l && rep.stoich_dim == r.s && rep.deficiency == r.d,
         fmt("%s (%zu,%zu,%zu,%zu)", r.file, rep.n_complexes, rep.n_linkage_classes, rep.stoich_dim, rep.deficiency));
  }
  return o;
}

Outcome binomial_equilibrium() {
  Outcome o;
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(std::log(1e-3), std::log(1e3));
  const auto doc = fixture("s1s2.crn");
  double worst = 0.0, worst_res = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double k1 = std::exp(u(rng)), k2 = std::exp(u(rng));
    const RateConstants kappa(std::vector<double>{k1, k2});
    const std::vector<double> totals{1.0};
    const auto eq = equilibrium_with_totals(doc.network, kappa, totals);
    worst = std::max({worst, std::abs(eq.c[0] - k2 / (k1 + k2)), std::abs(eq.c[1] - k1 / (k1 + k2))});
    for (double r : complex_balance_residual(doc.network, kappa, eq.c)) worst_res = std::max(worst_res, std::abs(r));
  }
  note(o, worst <= 1e-12, fmt("max |c - c_exact| %.2e over 100 draws", worst));
  note(o, worst_res <= 1e-12, fmt("max residual %.2e", worst_res));
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  {
    const auto doc = fixture("s1s2.crn");
    const auto eq = solve_complex_balanced(doc.network, doc.rates);
    double worst = 0.0;
    for (Count n = 1; n <= 20; ++n) worst = std::max(worst, tv_against_oracle(doc, doc.kinetics(), eq.c, finite_class(doc, {n, 0})));
    note(o, worst <= 1e-9, fmt("s1s2 N<=20 max TV %.1e", worst));
  }
  {
    const auto doc = fixture("enzyme2.crn");
    const auto kin = doc.kinetics();
    const auto eq = solve_complex_balanced(doc.network, doc.rates);
    double worst = 0.0, tail = 0.0;
    for (Count n = 0; n <= 6; ++n) {
      const auto w = choose_window(doc.network, kin, eq.c, {0, n, 0, 0}, 1e-10);
      tail = std::max(tail, w.tail_bound);
      worst = std::max(worst, tv_against_oracle(doc, kin, eq.c, w.window));
    }
    note(o, worst <= 1e-9 && tail < 1e-10, fmt("enzyme2 N<=6 max TV %.1e, max tail %.1e", worst, tail));
  }
  {
    std::mt19937_64 rng(1729);
    double worst = 0.0;
    std::size_t largest = 0;
    int done = 0;
    while (done < 50) {
      const auto raw = oracle::random_wr_deficiency_zero(rng);
      const auto doc = crn::parse(raw.to_text());
      const auto x0 = oracle::random_state(rng, raw.species.size(), 2 + static_cast<std::int64_t>(rng() % 12));
      auto res = enumerate_class(doc.network, doc.kinetics(), State(x0.begin(), x0.end()), 10000);
      if (res.status != EnumerationStatus::Ok) continue;
      const auto eq = solve_complex_balanced(doc.network, doc.rates);
      worst = std::max(worst, tv_against_oracle(doc, doc.kinetics(), eq.c, res.cls));
      largest = std::max(largest, res.cls.size());
      ++done;
    }
    note(o, worst <= 1e-9, fmt("50 random WR deficiency-zero networks max TV %.1e (largest class %zu)", worst, largest));
  }
  return o;
}

Outcome stationary_residuals() {
  Outcome o;
  struct Row {
    const char* file;
    State x0;
  };
  const Row rows[] = {{"s1s2.crn", {10, 0}},          {"cycle3.crn", {3, 2, 1}},         {"first_order_closed.crn", {5, 0, 0}},
                      {"first_order_open.crn", {0, 0}}, {"enzyme1.crn", {0, 0, 0, 0}},     {"enzyme2.crn", {0, 3, 0, 0}},
                      {"fast_subnetwork.crn", {0, 0, 3, 0}}, {"mm_counterexample.crn", {0, 0}}};
  std::size_t checked = 0;
  double worst = 0.0;
  bool all = true;
  for (const auto& r : rows) {
    const auto doc = fixture(r.file);
    const auto kin = doc.kinetics();
    const auto eq = solve_complex_balanced(doc.network, doc.rates);
    const auto support = choose_support(doc.network, kin, eq.c, r.x0);
    const auto d = product_form(doc.network, kin, eq.c, support.cls);
    for (const auto& x : support.cls.states) {
      const double scale = d.probability(x) * total_intensity(kin, doc.network, x);
      const double res = stationary_residual(d, doc.network, kin, x);
      if (scale > 0.0) worst = std::max(worst, res / scale);
      all = all && res <= 1e-10 * scale;
      ++checked;
    }
  }
  note(o, all, fmt("8 fixtures, %zu states, max residual / (pi * total rate) %.1e", checked, worst));
  return o;
}

Outcome michaelis_menten() {
  Outcome o;
  const auto doc = fixture("mm_counterexample.crn");
  const auto kin = doc.kinetics();
  const std::vector<double> c{1.0, 1.0};
  auto closed_tv = [&](const IrreducibleClass& win) {
    std::vector<double> closed;
    for (const auto& x : win.states) {
      closed.push_back(std::pow(static_cast<double>(x[0]) + 1.0, 2) * std::pow(2.0 / 3.0, static_cast<double>(x[0])));
    }
    const auto d = product_form(doc.network, kin, c, win);
    return total_variation(renormalized(closed), renormalized(d.probabilities));
  };
  const auto win = enumerate_window(doc.network, kin, {0, 0}, {60, 60});
  const auto tail = certified_tail_bound(doc.network, kin, c, win);
  const double tv = tv_against_oracle(doc, kin, c, win);
  note(o, tv <= 1e-8, fmt("B=60: TV %.1e vs oracle, certified tail %.2e", tv, tail.value_or(NAN)));
  const auto chosen = choose_window(doc.network, kin, c, {0, 0}, 1e-10);
  const double tv2 = tv_against_oracle(doc, kin, c, chosen.window);
  note(o, tv2 <= 1e-8 && chosen.tail_bound < 1e-10,
       fmt("tail-chosen B=%lld: TV %.1e, tail %.1e", static_cast<long long>(chosen.bounds[0]), tv2, chosen.tail_bound));
  const double ctv = closed_tv(win);
  note(o, ctv <= 1e-12, fmt("closed form C(1+n,n)^2 (2/3)^n TV %.1e", ctv));
  const std::vector<double> v{3.0, 0.5};
  const std::vector<std::int64_t> k{1, 1};
  const MichaelisMentenTheta t1{3.0, 1.0}, t2{0.5, 1.0};
  double rel = 0.0;
  for (Count x = 0; x <= 200; ++x) {
    for (Count y = 0; y <= 200; y += 10) {
      const std::vector<Count> xy{x, y};
      const double generic = std::exp(-theta_log_factorial(t1, x) - theta_log_factorial(t2, y));
      rel = std::max(rel, std::abs(mm_weight(v, k, c, xy) - generic) / generic);
    }
  }
  note(o, rel <= 1e-12, fmt("mm_weight vs generic theta product, x<=200: max rel %.1e", rel));
  return o;
}

Outcome volume_scaling() {
  Outcome o;
  const auto doc = fixture("enzyme1.crn");
  const auto cdet = solve_complex_balanced(doc.network, doc.rates).c;
  for (double vol : {1.0, 5.0, 20.0}) {
    const auto kin = doc.kinetics(scale_rate_constants(doc.rates, doc.network, vol));
    std::vector<double> c(cdet);
    for (auto& x : c) x *= vol;
    const auto w = choose_window(doc.network, kin, c, {0, 0, 0, 0}, 1e-12);
    const auto pi = renormalized(solve_stationary_oracle(generator_matrix(doc.network, kin, w.window)).pi);
    double rel = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      double mean = 0.0;
      for (std::size_t a = 0; a < pi.size(); ++a) mean += pi[a] * static_cast<double>(w.window.states[a][i]);
      rel = std::max(rel, std::abs(mean - c[i]) / c[i]);
    }
    note(o, rel <= 1e-6, fmt("V=%g: %zu states, max rel error of means %.1e", vol, w.window.size(), rel));
  }
  return o;
}

Outcome ssa_agreement() {
  Outcome o;
  {
    const auto doc = fixture("s1s2.crn");
    const auto emp = occupation_measure(doc.network, doc.kinetics(), {3, 0}, 1e5, 100.0, 20261016);
    double tv = 0.0;
    for (int k = 0; k <= 3; ++k) tv += std::abs(emp.probability({k, 3 - k}) - oracle::binomial_pmf(3, 2.0 / 3.0, k));
    note(o, 0.5 * tv < 0.01, fmt("s1s2 T=1e5 TV %.4f", 0.5 * tv));
  }
  const std::size_t n = 10000;
  {
    const auto doc = fixture("enzyme1.crn");
    const auto c = solve_complex_balanced(doc.network, doc.rates).c;
    // P is recycled through E + S -> ES many times before it leaves, so mixing takes
    // on the order of 100 time units
    const auto ends = ensemble_endpoints(doc.network, doc.kinetics(), {0, 0, 0, 0}, 1000.0, n, 7, 0);
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      double s = 0.0, s2 = 0.0;
      for (const auto& x : ends) {
        s += static_cast<double>(x[i]);
        s2 += static_cast<double>(x[i] * x[i]);
      }
      const double mean = s / static_cast<double>(n);
      const double se = std::sqrt((s2 / static_cast<double>(n) - mean * mean) / static_cast<double>(n));
      worst = std::max(worst, std::abs(mean - c[i]) / se);
    }
    note(o, worst <= 3.0, fmt("enzyme1 n=1e4 max |mean - c| = %.2f SE", worst));
  }
  {
    const auto doc = fixture("enzyme2.crn");
    const auto ends = ensemble_endpoints(doc.network, doc.kinetics(), {0, 5, 0, 0}, 50.0, n, 11, 0);
    auto corr = [&](std::size_t a, std::size_t b) {
      double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
      for (const auto& x : ends) {
        const double u = static_cast<double>(x[a]), v = static_cast<double>(x[b]);
        sa += u, sb += v, saa += u * u, sbb += v * v, sab += u * v;
      }
      const double m = static_cast<double>(n);
      return (sab / m - sa / m * sb / m) / std::sqrt((saa / m - sa * sa / m / m) * (sbb / m - sb * sb / m / m));
    };
    const double se = 1.0 / std::sqrt(static_cast<double>(n));
    const double r1 = corr(0, 1), r2 = corr(0, 2), r3 = corr(0, 3);
    note(o, std::max({std::abs(r1), std::abs(r2), std::abs(r3)}) <= 3.0 * se,
         fmt("enzyme2 corr(E,S/ES/P) = %.4f/%.4f/%.4f, 3 SE = %.4f", r1, r2, r3, 3.0 * se));
  }
  return o;
}

Outcome reversibility_equivalence() {
  Outcome o;
  std::mt19937_64 rng(44);
  int agree = 0, total = 0;
  std::size_t smallest = SIZE_MAX;
  for (int trial = 0; trial < 20; ++trial) {
    const bool db = trial < 10;
    const auto raw = oracle::random_reversible(rng, db);
    const auto doc = crn::parse(raw.to_text());
    const auto eq = solve_complex_balanced(doc.network, doc.rates);
    const bool flag = is_detailed_balanced(doc.network, doc.rates, eq.c);
    // start at the first triangle's root plus a few molecules so its loop is reachable
    auto x0 = oracle::random_state(rng, raw.species.size(), 2);
    for (std::size_t i = 0; i < x0.size(); ++i) x0[i] += raw.sources[0][i];
    const auto cls = finite_class(doc, State(x0.begin(), x0.end()));
    const auto pi = solve_stationary_oracle(generator_matrix(doc.network, doc.kinetics(), cls)).pi;
    const bool chain = check_reversibility(pi, doc.network, doc.kinetics(), cls).reversible;
    agree += (flag == db) + (chain == flag);
    total += 2;
    smallest = std::min(smallest, cls.size());
  }
  note(o, agree == total, fmt("%d/%d sub-checks agree (10 detailed balanced, 10 not; smallest class %zu)", agree, total, smallest));
  return o;
}

Outcome c_independence() {
  Outcome o;
  const auto doc = fixture("enzyme2.crn");
  const auto kin = doc.kinetics();
  const std::vector<double> t1{1.0}, t2{7.0};
  const auto c1 = equilibrium_with_totals(doc.network, doc.rates, t1).c;
  const auto c2 = equilibrium_with_totals(doc.network, doc.rates, t2).c;
  double orth = 0.0;
  for (const auto& v : reaction_vectors(doc.network)) {
    double dot = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      dot += static_cast<double>(v[i]) * (std::log(c1[i]) - std::log(c2[i]));
      norm += static_cast<double>(v[i] * v[i]);
    }
    orth = std::max(orth, std::abs(dot) / std::sqrt(norm));
  }
  const auto w = choose_window(doc.network, kin, c1, {0, 4, 0, 0}, 1e-12);
  const auto p1 = product_form(doc.network, kin, c1, w.window).probabilities;
  const auto p2 = product_form(doc.network, kin, c2, w.window).probabilities;
  double diff = 0.0;
  for (std::size_t a = 0; a < p1.size(); ++a) diff = std::max(diff, std::abs(p1[a] - p2[a]));
  note(o, diff <= 1e-10, fmt("c1=(%.3g,%.3g,%.3g,%.3g) c2=(%.3g,%.3g,%.3g,%.3g): max |pi1 - pi2| %.1e over %zu states",
                             c1[0], c1[1], c1[2], c1[3], c2[0], c2[1], c2[2], c2[3], diff, p1.size()));
  note(o, orth <= 1e-9, fmt("max |<ln c1 - ln c2, v>| / |v| %.1e", orth));
  return o;
}

Outcome negative_controls() {
  Outcome o;
  const int rc = run_cli("equilibrium '" + fixture_path("irreversible.crn") + "'");
  note(o, rc == 3, fmt("irreversible network exit %d", rc));
  const int vrc = run_cli("verify '" + fixture_path("s1s2.crn") + "' --x0 10,0 --corrupt-rate 0:1.5");
  note(o, vrc == 1, fmt("verify with a corrupted rate exit %d", vrc));
  {
    const auto doc = fixture("s1s2.crn");
    const auto cls = finite_class(doc, {10, 0});
    const auto eq = solve_complex_balanced(doc.network, doc.rates);
    auto p = product_form(doc.network, doc.kinetics(), eq.c, cls).probabilities;
    const auto pi = solve_stationary_oracle(generator_matrix(doc.network, doc.kinetics(), cls)).pi;
    p[3] *= 1.0 + 1e-6;
    const auto rep = compare(p, pi, cls, 1e-10);
    note(o, rep.verdict == Verdict::Fail, fmt("pi perturbed by 1e-6 at one state: %s", std::string(to_string(rep.verdict)).c_str()));
  }
  std::vector<std::string> seeds;
  for (const char* f : {"s1s2.crn", "enzyme2.crn", "mm_counterexample.crn", "fast_subnetwork.crn", "cycle3.crn"}) {
    std::ifstream in(fixture_path(f), std::ios::binary);
    seeds.emplace_back(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  std::mt19937_64 rng(10);
  int structured = 0, accepted = 0, bad = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    try {
      parse(oracle::mutate_text(seeds[rng() % seeds.size()], rng));
      ++accepted;
    } catch (const Error& e) {
      if (e.position()) ++structured; else ++bad;
    } catch (...) {
      ++bad;
    }
  }
  note(o, bad == 0, fmt("fuzz 1e4: %d accepted, %d positioned errors, %d other", accepted, structured, bad));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "structure numbers", 1, structure_numbers},
      {2, "binomial equilibrium", 1, binomial_equilibrium},
      {3, "product form vs oracle", 120, oracle_equivalence},
      {4, "stationary residual", 60, stationary_residuals},
      {5, "Michaelis-Menten kinetics", 30, michaelis_menten},
      {6, "volume scaling", 120, volume_scaling},
      {7, "SSA agreement", 300, ssa_agreement},
      {8, "reversibility equivalence", 60, reversibility_equivalence},
      {9, "c independence", 10, c_independence},
      {10, "negative controls", 60, negative_controls},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << fmt("criterion %2d %-4s %-26s %7.2fs (limit %gs)%s | ", c.id, pass ? "PASS" : "FAIL", c.name, secs,
                     c.limit_s, in_time ? "" : " [SLOW]")
              << o.detail << std::endl;
  }
  std::cout << (failed ? fmt("%d criteria failed", failed) : std::string("all criteria pass")) << std::endl;
  return failed ? 1 : 0;
}
