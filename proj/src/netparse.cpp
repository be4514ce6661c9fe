#include "crn/netparse.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "crn/error.hpp"

namespace crn {

namespace {

struct Term {
  std::string species;
  std::int64_t coeff = 0;
  SourcePosition pos;
};

struct RawComplex {
  std::vector<Term> terms;  // empty for the 0 complex
};

struct RawRule {
  RawComplex source;
  RawComplex product;
  bool reversible = false;
  std::vector<Rational> rates;
  SourcePosition pos;
};

struct RawTheta {
  std::string species;
  Theta theta;
  SourcePosition pos;
};

// Cursor over one line. Columns are 1-based byte offsets.
class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  void skip_space() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }
  char peek() {
    skip_space();
    return pos_ < line_.size() ? line_[pos_] : '\0';
  }
  bool accept(std::string_view token) {
    skip_space();
    if (line_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }
  SourcePosition here() {
    skip_space();
    return {line_no_, pos_ + 1};
  }
  [[noreturn]] void fail(const std::string& what, ErrorCode code = ErrorCode::SyntaxError) {
    throw Error(code, what, here());
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
  }

  std::string identifier() {
    skip_space();
    if (pos_ >= line_.size() || !ident_start(line_[pos_])) fail("expected a species name");
    const std::size_t start = pos_;
    while (pos_ < line_.size() && ident_char(line_[pos_])) ++pos_;
    return std::string(line_.substr(start, pos_ - start));
  }

  bool at_digit() {
    skip_space();
    return pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_])) != 0;
  }

  std::int64_t integer() {
    skip_space();
    const auto start_pos = here();
    std::int64_t value = 0;
    bool any = false;
    while (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_])) != 0) {
      const int d = line_[pos_] - '0';
      if (value > (std::numeric_limits<std::int32_t>::max() - d) / 10) {
        throw Error(ErrorCode::CoefficientOverflow, "integer does not fit in 32 bits", start_pos);
      }
      value = value * 10 + d;
      any = true;
      ++pos_;
    }
    if (!any) fail("expected an integer");
    return value;
  }

  // A rate-like literal: digits, '.', exponent, and an optional '/denominator'.
  Rational number() {
    skip_space();
    const auto start_pos = here();
    const std::size_t start = pos_;
    auto numeric_char = [&](std::size_t i) {
      const char c = line_[i];
      if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.' || c == '/') return true;
      if (c == 'e' || c == 'E') return true;
      if ((c == '+' || c == '-') && i > start && (line_[i - 1] == 'e' || line_[i - 1] == 'E')) return true;
      return (c == '+' || c == '-') && i == start;
    };
    while (pos_ < line_.size() && numeric_char(pos_)) ++pos_;
    const auto text = line_.substr(start, pos_ - start);
    if (text.empty()) fail("expected a number");
    auto q = parse_rational(text);
    if (!q) throw Error(ErrorCode::SyntaxError, "malformed number '" + std::string(text) + "'", start_pos);
    return *q;
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

RawComplex parse_complex(LineCursor& cur) {
  RawComplex c;
  if (cur.peek() == '0') {
    // "0" alone is the empty complex; "0A" or "0 A" is a zero multiplier, which we reject.
    const auto pos = cur.here();
    const std::int64_t n = cur.integer();
    if (n == 0 && !LineCursor::ident_start(cur.peek())) return c;
    throw Error(ErrorCode::SyntaxError, "stoichiometric multipliers must be positive", pos);
  }
  for (;;) {
    Term t;
    t.coeff = 1;
    if (cur.at_digit()) {
      const auto pos = cur.here();
      t.coeff = cur.integer();
      if (t.coeff == 0) throw Error(ErrorCode::SyntaxError, "stoichiometric multipliers must be positive", pos);
    }
    t.pos = cur.here();
    t.species = cur.identifier();
    c.terms.push_back(std::move(t));
    if (!cur.accept("+")) break;
  }
  return c;
}

Theta parse_theta(LineCursor& cur) {
  const auto pos = cur.here();
  const std::string kind = cur.identifier();
  if (kind == "linear") return LinearTheta{};
  if (kind == "mm") {
    cur.expect("(");
    const double v = to_double(cur.number());
    cur.expect(",");
    const double k = to_double(cur.number());
    cur.expect(")");
    if (!(v > 0.0) || !(k > 0.0) || !std::isfinite(v) || !std::isfinite(k)) {
      throw Error(ErrorCode::InvalidSpec, "mm(v,k) needs v > 0 and k > 0", pos);
    }
    return MichaelisMentenTheta{v, k};
  }
  if (kind == "minn") {
    cur.expect("(");
    const std::int64_t n = cur.integer();
    cur.expect(")");
    if (n < 1) throw Error(ErrorCode::InvalidSpec, "minn(n) needs n >= 1", pos);
    return MinServersTheta{n};
  }
  if (kind == "table") {
    cur.expect("(");
    TabulatedTheta t;
    do {
      const double v = to_double(cur.number());
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::InvalidSpec, "table entries must be positive", pos);
      }
      t.values.push_back(v);
    } while (cur.accept(","));
    cur.expect(")");
    return t;
  }
  throw Error(ErrorCode::SyntaxError, "unknown theta '" + kind + "' (linear, mm, minn, table)", pos);
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_rate(const RateConstants& rates, std::size_t k) {
  return rates.is_exact() ? format_rational(rates.exact()[k]) : format_double(rates[k]);
}

std::string format_theta(const Theta& theta) {
  if (std::holds_alternative<LinearTheta>(theta)) return "linear";
  if (const auto* t = std::get_if<MichaelisMentenTheta>(&theta)) {
    return "mm(" + format_double(t->v) + ", " + format_double(t->k) + ")";
  }
  if (const auto* t = std::get_if<MinServersTheta>(&theta)) {
    return "minn(" + std::to_string(t->n) + ")";
  }
  const auto& t = std::get<TabulatedTheta>(theta);
  std::string out = "table(";
  for (std::size_t j = 0; j < t.values.size(); ++j) {
    if (j) out += ", ";
    out += format_double(t.values[j]);
  }
  return out + ")";
}

std::string format_complex(const Network& net, const Complex& c) {
  if (c.is_empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
    if (c.coeffs[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (c.coeffs[i] != 1) out += std::to_string(c.coeffs[i]);
    out += net.species()[i].name;
  }
  return out;
}

}  // namespace

bool NetworkDocument::has_theta() const {
  for (const auto& t : thetas) {
    if (t) return true;
  }
  return false;
}

KineticsSpec NetworkDocument::kinetics() const { return kinetics(rates); }

KineticsSpec NetworkDocument::kinetics(const RateConstants& r) const {
  if (!has_theta() && !ratio_form) return KineticsSpec::mass_action(r);
  std::vector<Theta> resolved(network.num_species(), LinearTheta{});
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (thetas[i]) resolved[i] = *thetas[i];
  }
  if (ratio_form) return KineticsSpec::ratio_form(r, log_theta_from_species(std::move(resolved)));
  return KineticsSpec::theta_product(r, std::move(resolved));
}

NetworkDocument parse(std::string_view text) {
  std::vector<std::string> species;
  std::map<std::string, std::size_t> species_index;
  bool species_declared = false;
  std::vector<RawRule> rules;
  std::vector<RawTheta> theta_decls;
  std::optional<double> volume;
  std::optional<std::string> kinetics_mode;

  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  auto declare = [&](const std::string& name, SourcePosition pos, bool explicit_decl) {
    if (species_index.count(name)) {
      if (explicit_decl) throw Error(ErrorCode::DuplicateSpeciesName, "species '" + name + "' declared twice", pos);
      return;
    }
    if (species_declared && !explicit_decl) {
      throw Error(ErrorCode::UnknownSpecies, "species '" + name + "' is not in the @species list", pos);
    }
    species_index[name] = species.size();
    species.push_back(name);
  };

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    LineCursor cur(line, line_no);
    if (cur.at_end()) {
      if (end == text.size()) break;
      continue;
    }

    if (cur.accept("@")) {
      const auto dpos = cur.here();
      const std::string directive = cur.identifier();
      if (directive == "species") {
        if (species_declared || !species.empty()) {
          throw Error(ErrorCode::SyntaxError, "@species must come first and only once", dpos);
        }
        do {
          const auto pos = cur.here();
          declare(cur.identifier(), pos, true);
        } while (!cur.at_end());
        species_declared = true;
      } else if (directive == "volume") {
        if (volume) throw Error(ErrorCode::SyntaxError, "duplicate @volume", dpos);
        const auto pos = cur.here();
        const double v = to_double(cur.number());
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidSpec, "volume must be positive", pos);
        volume = v;
      } else if (directive == "theta") {
        RawTheta decl;
        decl.pos = cur.here();
        decl.species = cur.identifier();
        decl.theta = parse_theta(cur);
        theta_decls.push_back(std::move(decl));
      } else if (directive == "kinetics") {
        if (kinetics_mode) throw Error(ErrorCode::SyntaxError, "duplicate @kinetics", dpos);
        const std::string mode = cur.identifier();
        if (mode != "mass_action" && mode != "theta_product" && mode != "ratio") {
          throw Error(ErrorCode::SyntaxError, "unknown kinetics '" + mode + "'", dpos);
        }
        kinetics_mode = mode;
      } else {
        throw Error(ErrorCode::SyntaxError, "unknown directive '@" + directive + "'", dpos);
      }
      if (!cur.at_end()) cur.fail("unexpected trailing text");
      continue;
    }

    RawRule rule;
    rule.pos = cur.here();
    rule.source = parse_complex(cur);
    if (cur.accept("<->")) {
      rule.reversible = true;
    } else if (!cur.accept("->")) {
      cur.fail("expected '->' or '<->'");
    }
    rule.product = parse_complex(cur);
    if (!cur.accept(";")) {
      if (cur.at_end()) throw Error(ErrorCode::MissingRateConstant, "rule has no rate constant", cur.here());
      cur.fail("expected ';' before the rate constant");
    }
    const std::size_t expected = rule.reversible ? 2 : 1;
    while (rule.rates.size() < expected) {
      if (cur.at_end()) {
        throw Error(ErrorCode::MissingRateConstant,
                    rule.reversible ? "reversible rule needs two rate constants" : "rule has no rate constant",
                    cur.here());
      }
      if (!rule.rates.empty()) cur.expect(",");
      const auto pos = cur.here();
      Rational q = cur.number();
      if (q <= 0) throw Error(ErrorCode::NonPositiveRate, "rate constants must be positive", pos);
      const double d = to_double(q);
      if (!(d > 0.0) || !std::isfinite(d)) {
        throw Error(ErrorCode::NonPositiveRate, "rate constant out of floating range", pos);
      }
      rule.rates.push_back(std::move(q));
    }
    if (!cur.at_end()) cur.fail("unexpected trailing text");
    for (const auto* c : {&rule.source, &rule.product}) {
      for (const auto& t : c->terms) declare(t.species, t.pos, false);
    }
    rules.push_back(std::move(rule));
  }

  if (rules.empty()) {
    throw Error(ErrorCode::EmptyNetwork, "no reactions", {line_no == 0 ? 1 : line_no, 1});
  }

  const std::size_t m = species.size();
  auto coeffs = [&](const RawComplex& c, SourcePosition pos) {
    std::vector<std::int64_t> v(m, 0);
    for (const auto& t : c.terms) {
      auto& slot = v[species_index.at(t.species)];
      slot += t.coeff;
      if (slot > std::numeric_limits<std::int32_t>::max()) {
        throw Error(ErrorCode::CoefficientOverflow, "coefficient does not fit in 32 bits", pos);
      }
    }
    return v;
  };

  std::vector<ReactionInput> inputs;
  std::vector<Rational> rates;
  std::set<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> seen;
  for (const auto& rule : rules) {
    auto src = coeffs(rule.source, rule.pos);
    auto prod = coeffs(rule.product, rule.pos);
    if (src == prod) throw Error(ErrorCode::SelfLoopReaction, "source and product are identical", rule.pos);
    auto add = [&](std::vector<std::int64_t> a, std::vector<std::int64_t> b, const Rational& q) {
      if (!seen.emplace(a, b).second) {
        throw Error(ErrorCode::DuplicateReaction, "reaction repeats an earlier one", rule.pos);
      }
      inputs.push_back({std::move(a), std::move(b)});
      rates.push_back(q);
    };
    add(src, prod, rule.rates[0]);
    if (rule.reversible) add(prod, src, rule.rates[1]);
  }

  NetworkDocument doc{Network::build(species, inputs), RateConstants(std::move(rates)), {}, false, volume};

  if (!theta_decls.empty()) doc.thetas.assign(m, std::nullopt);
  for (const auto& decl : theta_decls) {
    auto it = species_index.find(decl.species);
    if (it == species_index.end()) {
      throw Error(ErrorCode::UnknownSpecies, "@theta names unknown species '" + decl.species + "'", decl.pos);
    }
    if (doc.thetas[it->second]) {
      throw Error(ErrorCode::SyntaxError, "second @theta for species '" + decl.species + "'", decl.pos);
    }
    doc.thetas[it->second] = decl.theta;
  }
  doc.ratio_form = kinetics_mode == "ratio";
  if (kinetics_mode == "mass_action" && doc.has_theta()) {
    throw Error(ErrorCode::SyntaxError, "@kinetics mass_action conflicts with @theta declarations", {1, 1});
  }
  if (kinetics_mode == "theta_product" && !doc.has_theta()) {
    // theta_product with every species linear; keep the declaration explicit.
    doc.thetas.assign(m, Theta{LinearTheta{}});
  }
  return doc;
}

std::string serialize(const NetworkDocument& doc) {
  const Network& net = doc.network;
  std::ostringstream out;
  out << "@species";
  for (const auto& s : net.species()) out << ' ' << s.name;
  out << '\n';
  if (doc.volume) out << "@volume " << format_double(*doc.volume) << '\n';
  if (doc.ratio_form) out << "@kinetics ratio\n";
  for (std::size_t i = 0; i < doc.thetas.size(); ++i) {
    if (doc.thetas[i]) out << "@theta " << net.species()[i].name << ' ' << format_theta(*doc.thetas[i]) << '\n';
  }
  for (std::size_t k = 0; k < net.num_reactions(); ++k) {
    out << format_complex(net, net.source(k)) << " -> " << format_complex(net, net.product(k)) << " ; "
        << format_rate(doc.rates, k) << '\n';
  }
  return out.str();
}

NetworkDocument load_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool equivalent(const NetworkDocument& a, const NetworkDocument& b) {
  const Network& x = a.network;
  const Network& y = b.network;
  if (x.num_species() != y.num_species()) return false;
  for (std::size_t i = 0; i < x.num_species(); ++i) {
    if (x.species()[i].name != y.species()[i].name) return false;
  }
  if (x.complexes() != y.complexes() || x.reactions() != y.reactions()) return false;
  if (a.rates.values() != b.rates.values() || a.rates.is_exact() != b.rates.is_exact()) return false;
  if (a.rates.is_exact() && a.rates.exact() != b.rates.exact()) return false;
  return a.thetas == b.thetas && a.ratio_form == b.ratio_form && a.volume == b.volume;
}

}  // namespace crn
