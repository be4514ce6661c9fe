// crn: command-line front end. See README.md for subcommands and exit codes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crn/config.hpp"
#include "crn/equilibrium.hpp"
#include "crn/error.hpp"
#include "crn/kinetics.hpp"
#include "crn/netparse.hpp"
#include "crn/oracle.hpp"
#include "crn/ssa.hpp"
#include "crn/stationary.hpp"
#include "crn/statespace.hpp"
#include "crn/structure.hpp"

using namespace crn;
using nlohmann::json;

namespace {

enum Exit : int {
  kOk = 0,
  kVerifyFail = 1,
  kParse = 2,
  kNotWeaklyReversible = 3,
  kNotComplexBalanced = 4,
  kExplosion = 5,
  kInconclusive = 6,
  kRuntime = 7,
};

// Thrown for bad flag values found after CLI11 has parsed the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string file;
  std::string format = "json";
  std::string out;
  std::optional<double> volume;
  std::optional<double> tol;
};

struct LoadError : std::runtime_error {
  LoadError(Error e) : std::runtime_error(e.what()), error(std::move(e)) {}
  Error error;
};

NetworkDocument load(const std::string& path) {
  try {
    return load_document(path);
  } catch (const Error& e) {
    throw LoadError(e);
  }
}

State parse_state(const std::string& text, std::size_t m) {
  State x;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty() || v < 0) throw UsageError("--x0: '" + item + "' is not a nonnegative integer");
    x.push_back(v);
  }
  if (x.size() != m) {
    throw UsageError("--x0 has " + std::to_string(x.size()) + " entries, the network has " + std::to_string(m) +
                     " species");
  }
  return x;
}

// Rates used by the stochastic model: the file's rates, scaled when a volume is given.
RateConstants stochastic_rates(const NetworkDocument& doc, std::optional<double> volume) {
  if (!volume) volume = doc.volume;
  if (!volume) return doc.rates;
  if (!(*volume > 0.0) || !std::isfinite(*volume)) throw UsageError("--volume must be positive");
  return scale_rate_constants(doc.rates, doc.network, *volume);
}

std::optional<double> effective_volume(const NetworkDocument& doc, std::optional<double> volume) {
  return volume ? volume : doc.volume;
}

SolveOptions solve_options(const Common& common, const RunConfig& cfg) {
  SolveOptions o;
  o.tol = common.tol.value_or(cfg.tol);
  return o;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  body(f);
}

void emit_json(const Common& common, const json& j) {
  Output out(common.out);
  out.stream() << j.dump(2) << '\n';
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os.str();
}

// Without a class to aim at, report the equilibrium whose conserved totals are all 1
// (for S1 <-> S2 that is the one with c1 + c2 = 1), or the solver's own pick when no
// positive point has those totals.
Equilibrium default_equilibrium(const Network& net, const RateConstants& kappa, const SolveOptions& opts) {
  const auto laws = conservation_laws(net);
  if (laws.basis.empty()) return solve_complex_balanced(net, kappa, opts);
  const std::vector<double> ones(laws.basis.size(), 1.0);
  try {
    return equilibrium_with_totals(net, kappa, ones, opts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SolverDiverged) throw;
    return solve_complex_balanced(net, kappa, opts);
  }
}

// ---- analyze ----

int cmd_analyze(const Common& common) {
  const auto doc = load(common.file);
  const auto report = analyze(doc.network);
  json j = report;
  if (common.format == "human") {
    Output out(common.out);
    auto& os = out.stream();
    os << "species            " << doc.network.num_species() << '\n'
       << "reactions          " << doc.network.num_reactions() << '\n'
       << "complexes          " << report.n_complexes << '\n'
       << "linkage classes    " << report.n_linkage_classes << '\n'
       << "stoichiometric dim " << report.stoich_dim << '\n'
       << "deficiency         " << report.deficiency << '\n'
       << "weakly reversible  " << (report.weakly_reversible ? "yes" : "no") << '\n'
       << "reversible         " << (report.reversible ? "yes" : "no") << '\n';
    return kOk;
  }
  emit_json(common, j);
  return kOk;
}

// ---- equilibrium ----

int cmd_equilibrium(const Common& common, const RunConfig& cfg, const std::string& x0_text) {
  const auto doc = load(common.file);
  const auto& net = doc.network;
  const auto opts = solve_options(common, cfg);
  const auto volume = effective_volume(doc, common.volume);
  const RateConstants kappa = stochastic_rates(doc, common.volume);
  Equilibrium eq;
  if (!x0_text.empty()) {
    const State x0 = parse_state(x0_text, net.num_species());
    const std::vector<double> x(x0.begin(), x0.end());
    eq = equilibrium_in_class(net, kappa, x, opts);
  } else {
    eq = default_equilibrium(net, kappa, opts);
  }
  json j = eq;
  json names = json::array();
  for (const auto& s : net.species()) names.push_back(s.name);
  j["species"] = names;
  j["volume"] = volume ? json(*volume) : json(nullptr);
  if (is_reversible(net)) j["detailed_balanced"] = is_detailed_balanced(net, kappa, eq.c);
  if (common.format == "human") {
    Output out(common.out);
    auto& os = out.stream();
    os.precision(17);
    for (std::size_t i = 0; i < net.num_species(); ++i) os << net.species()[i].name << " = " << eq.c[i] << '\n';
    os << "residual " << eq.residual_inf_norm << " (" << to_string(eq.method) << ")\n";
    if (j.contains("detailed_balanced")) os << "detailed balanced " << (j["detailed_balanced"].get<bool>() ? "yes" : "no") << '\n';
    return kOk;
  }
  emit_json(common, j);
  return kOk;
}

// ---- stationary ----

struct StationaryFlags {
  std::string x0;
  std::optional<Count> bound;
  std::optional<std::size_t> cap;
  std::optional<double> tail;
  std::string csv;
};

struct Built {
  KineticsSpec kinetics;
  Equilibrium eq;
  SupportChoice support;
  ProductFormDistribution dist;
};

Built build_distribution(const NetworkDocument& doc, const KineticsSpec& kinetics, const State& x0,
                         std::optional<double> volume, const StationaryFlags& flags, const RunConfig& cfg,
                         const SolveOptions& opts) {
  const auto& net = doc.network;
  Built b{kinetics, {}, {}, {}};
  b.eq = solve_complex_balanced(net, kinetics.rates(), opts);
  const std::size_t cap = flags.cap.value_or(cfg.cap);
  b.support = choose_support(net, kinetics, b.eq.c, x0, cap, flags.bound, flags.tail.value_or(cfg.tail_target));
  if (b.support.truncated && b.support.full_lattice && kinetics.family() == KineticsFamily::MassAction) {
    if (volume) {
      // The stochastic c is V times the deterministic one.
      std::vector<double> c_det(b.eq.c);
      for (auto& v : c_det) v /= *volume;
      b.dist = scaled_poisson(c_det, *volume, b.support.cls);
    } else {
      b.dist = product_form_full_lattice(net, kinetics, b.eq.c, b.support.cls);
    }
  } else {
    b.dist = product_form(net, kinetics, b.eq.c, b.support.cls);
  }
  return b;
}

int cmd_stationary(const Common& common, const RunConfig& cfg, const StationaryFlags& flags) {
  const auto doc = load(common.file);
  const auto& net = doc.network;
  if (flags.x0.empty()) throw UsageError("stationary needs --x0");
  const State x0 = parse_state(flags.x0, net.num_species());
  const auto volume = effective_volume(doc, common.volume);
  const auto kinetics = doc.kinetics(stochastic_rates(doc, common.volume));
  const auto b = build_distribution(doc, kinetics, x0, volume, flags, cfg, solve_options(common, cfg));
  if (!flags.csv.empty()) write_file(flags.csv, [&](std::ostream& os) { write_distribution_csv(os, b.dist, net); });
  if (common.format == "csv") {
    Output out(common.out);
    write_distribution_csv(out.stream(), b.dist, net);
    return kOk;
  }
  json j = summary_json(b.dist, net);
  if (common.format == "human") {
    Output out(common.out);
    auto& os = out.stream();
    os.precision(12);
    os << "support     " << j["support_kind"].get<std::string>() << ", " << b.dist.support.size() << " states\n"
       << "normalizer  " << j["normalizer_status"].get<std::string>() << ", ln M = " << b.dist.log_normalizer << '\n'
       << "tail bound  " << b.dist.tail_bound << '\n';
    if (b.dist.summability) os << "summability " << to_string(b.dist.summability->verdict) << '\n';
    os << "means       " << join(j["marginal_means"].get<std::vector<double>>()) << '\n';
    return kOk;
  }
  emit_json(common, j);
  return kOk;
}

// ---- simulate ----

struct SimulateFlags {
  std::string x0;
  std::optional<double> t_final;
  std::optional<double> burn_in;
  std::size_t replicas = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_jumps;
  std::string histogram;
  std::string trajectory;
  std::size_t threads = 0;
};

json histogram_json(const EmpiricalDistribution& emp, const Network& net) {
  const auto means = emp.means(net.num_species());
  json j;
  j["weighting"] = emp.weighting == Weighting::TimeAveraged ? "time_averaged" : "endpoint_ensemble";
  j["burn_in"] = emp.burn_in;
  j["replicas"] = emp.replicas;
  j["states"] = emp.weights.size();
  j["marginal_means"] = means;
  return j;
}

int cmd_simulate(const Common& common, const RunConfig& cfg, const SimulateFlags& flags) {
  const auto doc = load(common.file);
  const auto& net = doc.network;
  if (flags.x0.empty()) throw UsageError("simulate needs --x0");
  const State x0 = parse_state(flags.x0, net.num_species());
  const auto kinetics = doc.kinetics(stochastic_rates(doc, common.volume));
  const double t_final = flags.t_final.value_or(cfg.t_final);
  const std::uint64_t seed = flags.seed.value_or(cfg.seed);
  const std::uint64_t max_jumps = flags.max_jumps.value_or(cfg.max_jumps);
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw UsageError("--t-final must be positive");

  json j;
  json names = json::array();
  for (const auto& s : net.species()) names.push_back(s.name);
  j["species"] = names;
  j["seed"] = seed;
  j["t_final"] = t_final;
  j["x0"] = x0;
  EmpiricalDistribution emp;
  if (flags.replicas > 0) {
    emp = ensemble(net, kinetics, x0, t_final, flags.replicas, seed, flags.threads, max_jumps);
    j["mode"] = "ensemble";
  } else {
    const double burn_in = flags.burn_in.value_or(std::min(cfg.burn_in, t_final / 10.0));
    if (!flags.trajectory.empty()) {
      SimulationOptions so;
      so.max_jumps = max_jumps;
      const auto traj = simulate(net, kinetics, x0, t_final, seed, so);
      write_file(flags.trajectory, [&](std::ostream& os) { write_trajectory_csv(os, traj, net); });
      emp = occupation_measure(traj, burn_in);
      j["jumps"] = traj.jumps;
      j["absorbed"] = traj.absorbed;
      j["final_state"] = traj.final_state;
    } else {
      emp = occupation_measure(net, kinetics, x0, t_final, burn_in, seed, max_jumps);
    }
    j["mode"] = "trajectory";
  }
  if (!flags.histogram.empty()) write_file(flags.histogram, [&](std::ostream& os) { write_histogram_csv(os, emp, net); });
  j["histogram"] = histogram_json(emp, net);
  if (common.format == "csv") {
    Output out(common.out);
    write_histogram_csv(out.stream(), emp, net);
    return kOk;
  }
  if (common.format == "human") {
    Output out(common.out);
    auto& os = out.stream();
    os << "mode   " << j["mode"].get<std::string>() << ", seed " << seed << '\n'
       << "means  " << join(j["histogram"]["marginal_means"].get<std::vector<double>>()) << '\n';
    return kOk;
  }
  emit_json(common, j);
  return kOk;
}

// ---- verify ----

struct VerifyFlags : StationaryFlags {
  std::optional<double> tv;
  std::optional<double> residual_tol;
  std::optional<double> ssa_time;
  std::optional<std::uint64_t> seed;
  std::string corrupt;
};

std::pair<std::size_t, double> parse_corruption(const std::string& text, std::size_t reactions) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--corrupt-rate expects REACTION:FACTOR");
  std::size_t k = 0;
  double factor = 0.0;
  try {
    std::size_t used = 0;
    k = std::stoul(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("k");
    factor = std::stod(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("factor");
  } catch (const std::exception&) {
    throw UsageError("--corrupt-rate expects REACTION:FACTOR");
  }
  if (k >= reactions) throw UsageError("--corrupt-rate: no reaction " + std::to_string(k));
  if (!(factor > 0.0) || !std::isfinite(factor)) throw UsageError("--corrupt-rate: factor must be positive");
  return {k, factor};
}

int cmd_verify(const Common& common, const RunConfig& cfg, const VerifyFlags& flags) {
  const auto doc = load(common.file);
  const auto& net = doc.network;
  if (flags.x0.empty()) throw UsageError("verify needs --x0");
  const State x0 = parse_state(flags.x0, net.num_species());
  const auto volume = effective_volume(doc, common.volume);
  const RateConstants rates = stochastic_rates(doc, common.volume);
  const auto kinetics = doc.kinetics(rates);
  const auto opts = solve_options(common, cfg);

  // The formula path may run on deliberately wrong rates; the oracle always uses the true ones.
  KineticsSpec formula_kinetics = kinetics;
  json corruption = nullptr;
  if (!flags.corrupt.empty()) {
    const auto [k, factor] = parse_corruption(flags.corrupt, net.num_reactions());
    formula_kinetics = doc.kinetics(rates.scaled(k, factor));
    corruption = {{"reaction", k}, {"factor", factor}};
  }
  const auto b = build_distribution(doc, formula_kinetics, x0, volume, flags, cfg, opts);
  const auto& cls = b.dist.support;
  const auto q = generator_matrix(net, kinetics, cls);
  const auto oracle = solve_stationary_oracle(q);

  const double threshold = flags.tv.value_or(cfg.tv_threshold);
  std::vector<double> formula(b.dist.probabilities);
  auto report = compare(formula, oracle.pi, cls, threshold, b.dist.tail_bound);

  // Stationary equation, checked state by state against the true kinetics.
  const double residual_tol = flags.residual_tol.value_or(cfg.residual_tol);
  std::vector<ResidualOffender> offenders;
  for (std::size_t a = 0; a < cls.size(); ++a) {
    const auto& x = cls.states[a];
    const double r = stationary_residual(b.dist, net, kinetics, x);
    const double scale = b.dist.probability(x) * total_intensity(kinetics, net, x);
    const double rel = scale > 0.0 ? r / scale : (r > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    report.max_relative_residual = std::max(report.max_relative_residual, rel);
    if (rel > residual_tol) offenders.push_back({x, r, rel});
  }
  std::sort(offenders.begin(), offenders.end(), [](const auto& u, const auto& v) { return u.relative > v.relative; });
  if (offenders.size() > 10) offenders.resize(10);
  report.residual_offenders = offenders;
  if (!report.residual_offenders.empty() && report.verdict == Verdict::Pass && std::isfinite(b.dist.tail_bound)) {
    report.verdict = Verdict::Fail;
  }

  json j;
  j["file"] = common.file;
  j["x0"] = x0;
  j["support_kind"] = to_string(b.dist.support_kind);
  j["normalizer_status"] = to_string(b.dist.normalizer_status);
  j["oracle"] = {{"method", oracle.method}, {"residual", oracle.residual}, {"max_rate", oracle.max_rate}};
  j["comparison"] = report;
  j["corruption"] = corruption;
  if (flags.ssa_time) {
    const std::uint64_t seed = flags.seed.value_or(cfg.seed);
    const double t = *flags.ssa_time;
    const auto emp = occupation_measure(net, kinetics, x0, t, std::min(cfg.burn_in, t / 10.0), seed, cfg.max_jumps);
    double inside = 0.0;
    std::vector<double> p(cls.size(), 0.0);
    for (const auto& [x, w] : emp.weights) {
      const std::size_t a = cls.index_of(x);
      if (a < cls.size()) {
        p[a] = w;
        inside += w;
      }
    }
    const auto target = renormalized(formula);
    j["ssa"] = {{"t_final", t},
                {"seed", seed},
                {"mass_outside_window", 1.0 - inside},
                {"total_variation", inside > 0.0 ? num(total_variation(renormalized(p), target)) : json(nullptr)}};
  }
  j["verdict"] = to_string(report.verdict);

  if (common.format == "human") {
    Output out(common.out);
    auto& os = out.stream();
    os.precision(6);
    os << "states              " << cls.size() << " (" << to_string(b.dist.support_kind) << ")\n"
       << "total variation     " << report.total_variation << " (threshold " << threshold << ", tail "
       << b.dist.tail_bound << ")\n"
       << "max rel. residual   " << report.max_relative_residual << '\n';
    for (const auto& o : report.residual_offenders) {
      os << "  residual at (";
      for (std::size_t i = 0; i < o.state.size(); ++i) os << (i ? "," : "") << o.state[i];
      os << "): " << o.relative << '\n';
    }
    os << "verdict             " << to_string(report.verdict) << '\n';
  } else {
    emit_json(common, j);
  }
  switch (report.verdict) {
    case Verdict::Pass: return kOk;
    case Verdict::Fail: return kVerifyFail;
    case Verdict::Inconclusive: return kInconclusive;
  }
  return kRuntime;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotWeaklyReversible: return kNotWeaklyReversible;
    case ErrorCode::NotComplexBalanced: return kNotComplexBalanced;
    case ErrorCode::Explosion: return kExplosion;
    case ErrorCode::IoError: return kParse;
    default: return kRuntime;
  }
}

void diagnose(const std::string& file, const Error& e) {
  std::cerr << file;
  if (e.position()) std::cerr << ':' << e.position()->line << ':' << e.position()->column;
  std::cerr << ": error[" << to_string(e.code()) << "]: " << e.message() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary distributions of stochastically modeled reaction networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "crn 1.0");

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", common.file, ".crn network file")->required();
    sub->add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "human"}))
        ->capture_default_str();
    sub->add_option("--out", common.out, "write the main output here instead of stdout");
    sub->add_option("--volume", common.volume, "system volume V; rates in the file are read as deterministic ones");
    sub->add_option("--tol", common.tol, "equilibrium tolerance (default 1e-9, env CRN_TOL)");
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "structural report: complexes, linkage classes, deficiency");
  add_common(analyze_cmd);

  std::string eq_x0;
  auto* eq_cmd = app.add_subcommand("equilibrium", "positive complex-balanced equilibrium");
  add_common(eq_cmd);
  eq_cmd->add_option("--x0", eq_x0, "pick the equilibrium in the compatibility class of this point");

  StationaryFlags st;
  auto* st_cmd = app.add_subcommand("stationary", "product-form stationary distribution on the class of x0");
  add_common(st_cmd);
  st_cmd->add_option("--x0", st.x0, "initial state, comma separated")->required();
  st_cmd->add_option("--bound", st.bound, "truncate unbounded species at this count");
  st_cmd->add_option("--cap", st.cap, "maximum number of states (default 250000)");
  st_cmd->add_option("--tail", st.tail, "target relative tail mass when choosing a window (default 1e-10)");
  st_cmd->add_option("--csv", st.csv, "also write the distribution as CSV here");

  SimulateFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Gillespie simulation");
  add_common(sim_cmd);
  sim_cmd->add_option("--x0", sim.x0, "initial state, comma separated")->required();
  sim_cmd->add_option("--t-final", sim.t_final, "final time (default 1e4)");
  sim_cmd->add_option("--burn-in", sim.burn_in, "discard the path before this time (default min(100, T/10))");
  sim_cmd->add_option("--replicas", sim.replicas, "endpoint ensemble of this many replicas instead of one path");
  sim_cmd->add_option("--seed", sim.seed, "base seed (default 20100101, env CRN_SEED)");
  sim_cmd->add_option("--max-jumps", sim.max_jumps, "fail with Explosion beyond this many jumps per path");
  sim_cmd->add_option("--histogram", sim.histogram, "write the empirical distribution as CSV here");
  sim_cmd->add_option("--trajectory", sim.trajectory, "write the full path as CSV here");
  sim_cmd->add_option("--threads", sim.threads, "worker threads for ensembles (0: hardware)");

  VerifyFlags vf;
  auto* ver_cmd = app.add_subcommand("verify", "compare the product form with a direct solve of the generator");
  add_common(ver_cmd);
  ver_cmd->add_option("--x0", vf.x0, "initial state, comma separated")->required();
  ver_cmd->add_option("--bound", vf.bound, "truncate unbounded species at this count");
  ver_cmd->add_option("--cap", vf.cap, "maximum number of states (default 250000)");
  ver_cmd->add_option("--tail", vf.tail, "target relative tail mass when choosing a window (default 1e-10)");
  ver_cmd->add_option("--tv", vf.tv, "total-variation threshold (default 1e-10)");
  ver_cmd->add_option("--residual-tol", vf.residual_tol, "relative stationary-equation tolerance (default 1e-10)");
  ver_cmd->add_option("--ssa", vf.ssa_time, "also simulate up to this time and report the distance");
  ver_cmd->add_option("--seed", vf.seed, "seed of the --ssa run");
  ver_cmd->add_option("--corrupt-rate", vf.corrupt, "REACTION:FACTOR, scale one rate in the formula path only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  RunConfig cfg;
  try {
    cfg = config_from_environment();
  } catch (const Error& e) {
    std::cerr << "crn: error[" << to_string(e.code()) << "]: " << e.message() << '\n';
    return kParse;
  }
  try {
    if (*analyze_cmd) return cmd_analyze(common);
    if (*eq_cmd) return cmd_equilibrium(common, cfg, eq_x0);
    if (*st_cmd) return cmd_stationary(common, cfg, st);
    if (*sim_cmd) return cmd_simulate(common, cfg, sim);
    if (*ver_cmd) return cmd_verify(common, cfg, vf);
  } catch (const LoadError& e) {
    diagnose(common.file, e.error);
    return kParse;
  } catch (const UsageError& e) {
    std::cerr << "crn: " << e.what() << '\n';
    return kParse;
  } catch (const Error& e) {
    diagnose(common.file, e);
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "crn: " << e.what() << '\n';
    return kRuntime;
  }
  return kRuntime;
}
