#include "crn/structure.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/connected_components.hpp>
#include <boost/graph/strong_components.hpp>

#include "crn/error.hpp"
#include "exact_lp.hpp"

namespace crn {

namespace {

using UndirectedGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
using DirectedGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;

std::vector<std::vector<Rational>> to_rational(const std::vector<std::vector<std::int64_t>>& rows,
                                               std::size_t cols) {
  std::vector<std::vector<Rational>> out(rows.size(), std::vector<Rational>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) out[i][j] = rows[i][j];
  }
  return out;
}

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(std::vector<std::vector<Rational>>& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t sel = row;
    while (sel < a.size() && a[sel][col] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[row], a[sel]);
    const Rational p = a[row][col];
    for (auto& v : a[row]) v /= p;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == row || a[i][col] == 0) continue;
      const Rational f = a[i][col];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  a.resize(row);
  return pivots;
}

std::vector<BigInt> smallest_integer_row(const std::vector<Rational>& row) {
  BigInt lcm = 1;
  for (const auto& q : row) {
    lcm = boost::multiprecision::lcm(lcm, BigInt(boost::multiprecision::denominator(q)));
  }
  std::vector<BigInt> out;
  out.reserve(row.size());
  BigInt g = 0;
  for (const auto& q : row) {
    BigInt v = boost::multiprecision::numerator(q) * (lcm / boost::multiprecision::denominator(q));
    g = boost::multiprecision::gcd(g, v);
    out.push_back(std::move(v));
  }
  if (g > 1) {
    for (auto& v : out) v /= g;
  }
  return out;
}

// Coordinates i for which some u >= 0 with W u = 0 has u_i > 0.
std::vector<bool> unbounded_coordinates(const std::vector<std::vector<BigInt>>& basis,
                                        std::size_t m) {
  std::vector<bool> out(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (out[i]) continue;
    // maximize u_i subject to W u = 0, u_i + slack = 1, u >= 0.
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    for (const auto& w : basis) {
      std::vector<Rational> row(m + 1, 0);
      for (std::size_t j = 0; j < m; ++j) row[j] = Rational(w[j]);
      a.push_back(std::move(row));
      b.push_back(0);
    }
    std::vector<Rational> cap(m + 1, 0);
    cap[i] = 1;
    cap[m] = 1;
    a.push_back(std::move(cap));
    b.push_back(1);
    std::vector<Rational> objective(m + 1, 0);
    objective[i] = 1;
    auto res = detail::maximize(std::move(a), std::move(b), objective);
    if (res.status == detail::LpStatus::Optimal && res.value > 0) {
      // The optimizer's support is unbounded as a whole.
      for (std::size_t j = 0; j < m; ++j) {
        if (res.x[j] > 0) out[j] = true;
      }
    }
  }
  return out;
}

}  // namespace

LinkagePartition linkage_classes(const Network& net) {
  UndirectedGraph g(net.num_complexes());
  for (const auto& r : net.reactions()) boost::add_edge(r.source, r.product, g);
  std::vector<int> component(net.num_complexes());
  const int n = boost::connected_components(g, component.data());
  std::vector<std::vector<std::size_t>> classes(static_cast<std::size_t>(n));
  for (std::size_t z = 0; z < component.size(); ++z) {
    classes[static_cast<std::size_t>(component[z])].push_back(z);
  }
  std::sort(classes.begin(), classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return classes;
}

bool is_weakly_reversible(const Network& net) {
  DirectedGraph g(net.num_complexes());
  for (const auto& r : net.reactions()) boost::add_edge(r.source, r.product, g);
  std::vector<int> scc(net.num_complexes());
  boost::strong_components(g, scc.data());
  // Each linkage class is one SCC iff every reaction stays inside an SCC.
  return std::all_of(net.reactions().begin(), net.reactions().end(),
                     [&](const Reaction& r) { return scc[r.source] == scc[r.product]; });
}

bool is_reversible(const Network& net) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& r : net.reactions()) edges.emplace(r.source, r.product);
  return std::all_of(net.reactions().begin(), net.reactions().end(), [&](const Reaction& r) {
    return edges.count({r.product, r.source}) > 0;
  });
}

std::size_t exact_rank(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols) {
  std::vector<std::vector<BigInt>> a(rows.size(), std::vector<BigInt>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = rows[i][j];
  }
  // Bareiss: every intermediate entry is a minor of the input, divisions are exact.
  BigInt prev = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < a.size(); ++col) {
    std::size_t sel = rank;
    while (sel < a.size() && a[sel][col] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[rank], a[sel]);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      for (std::size_t j = col + 1; j < cols; ++j) {
        a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
      }
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

std::size_t stoich_rank(const Network& net) {
  return exact_rank(reaction_vectors(net), net.num_species());
}

std::size_t deficiency(const Network& net) {
  const auto c = static_cast<long long>(net.num_complexes());
  const auto l = static_cast<long long>(linkage_classes(net).size());
  const auto s = static_cast<long long>(stoich_rank(net));
  const long long d = c - l - s;
  if (d < 0) {
    throw Error(ErrorCode::InternalRankInconsistency,
                "deficiency " + std::to_string(d) + " = " + std::to_string(c) + " - " +
                    std::to_string(l) + " - " + std::to_string(s) + " is negative");
  }
  return static_cast<std::size_t>(d);
}

ConservationLaws conservation_laws(const Network& net) {
  const std::size_t m = net.num_species();
  auto a = to_rational(reaction_vectors(net), m);
  const auto pivots = rref(a, m);

  std::vector<bool> is_pivot(m, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Rational>> null_rows;
  for (std::size_t f = 0; f < m; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> w(m, 0);
    w[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) w[pivots[i]] = -a[i][f];
    null_rows.push_back(std::move(w));
  }
  rref(null_rows, m);

  ConservationLaws laws;
  for (const auto& row : null_rows) laws.basis.push_back(smallest_integer_row(row));
  laws.unbounded_species = unbounded_coordinates(laws.basis, m);
  laws.positive_vector_exists =
      std::none_of(laws.unbounded_species.begin(), laws.unbounded_species.end(),
                   [](bool b) { return b; });
  return laws;
}

std::optional<BigInt> max_coordinate(const ConservationLaws& laws, std::span<const Count> x0,
                                     std::size_t i) {
  const std::size_t m = x0.size();
  if (laws.unbounded_species[i]) return std::nullopt;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (const auto& w : laws.basis) {
    std::vector<Rational> row(m);
    Rational total = 0;
    for (std::size_t j = 0; j < m; ++j) {
      row[j] = Rational(w[j]);
      total += Rational(w[j]) * x0[j];
    }
    a.push_back(std::move(row));
    b.push_back(total);
  }
  std::vector<Rational> objective(m, 0);
  objective[i] = 1;
  auto res = detail::maximize(std::move(a), std::move(b), objective);
  if (res.status != detail::LpStatus::Optimal) return std::nullopt;
  // Lattice points cannot exceed the floor of the real maximum.
  return BigInt(boost::multiprecision::numerator(res.value) /
                boost::multiprecision::denominator(res.value));
}

std::vector<std::vector<std::int64_t>> conservation_matrix(const ConservationLaws& laws) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& row : laws.basis) {
    std::vector<std::int64_t> r;
    for (const auto& v : row) {
      if (v > std::numeric_limits<std::int64_t>::max() ||
          v < std::numeric_limits<std::int64_t>::min()) {
        throw Error(ErrorCode::CoefficientOverflow, "conservation coefficient exceeds 64 bits");
      }
      r.push_back(v.convert_to<std::int64_t>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

StructureReport analyze(const Network& net) {
  StructureReport rep;
  rep.n_complexes = net.num_complexes();
  rep.linkage_partition = linkage_classes(net);
  rep.n_linkage_classes = rep.linkage_partition.size();
  rep.stoich_dim = stoich_rank(net);
  rep.deficiency = deficiency(net);
  rep.weakly_reversible = is_weakly_reversible(net);
  rep.reversible = is_reversible(net);
  rep.conservation = conservation_laws(net);
  if (rep.stoich_dim + rep.conservation.basis.size() != net.num_species()) {
    throw Error(ErrorCode::InternalRankInconsistency,
                "rank and conservation basis do not add up to the species count");
  }
  return rep;
}

void to_json(nlohmann::json& j, const StructureReport& report) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& row : report.conservation.basis) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& v : row) {
      if (v <= std::numeric_limits<std::int64_t>::max() &&
          v >= std::numeric_limits<std::int64_t>::min()) {
        r.push_back(v.convert_to<std::int64_t>());
      } else {
        r.push_back(v.str());
      }
    }
    basis.push_back(std::move(r));
  }
  j = nlohmann::json{
      {"n_complexes", report.n_complexes},
      {"n_linkage_classes", report.n_linkage_classes},
      {"stoich_dim", report.stoich_dim},
      {"deficiency", report.deficiency},
      {"weakly_reversible", report.weakly_reversible},
      {"reversible", report.reversible},
      {"linkage_partition", report.linkage_partition},
      {"conservation_basis", std::move(basis)},
      {"positive_conservation", report.conservation.positive_vector_exists},
      {"unbounded_species", report.conservation.unbounded_species},
  };
}

}  // namespace crn
