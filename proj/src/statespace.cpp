#include "crn/statespace.hpp"

#include <deque>
#include <ostream>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

#include "crn/error.hpp"
#include "crn/structure.hpp"

namespace crn {

namespace {

using Digraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;

bool in_box(const State& x, const std::vector<Count>* bounds) {
  if (!bounds) return true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > (*bounds)[i]) return false;
  }
  return true;
}

// Successors of x under reactions with positive intensity.
template <class F>
void for_each_successor(const Network& net, const KineticsSpec& kinetics, const State& x, F&& f) {
  for (std::size_t k = 0; k < net.num_reactions(); ++k) {
    if (!covers(x, net.source(k))) continue;
    const double rate = intensity(kinetics, net, k, x);
    if (!(rate > 0.0)) continue;
    State y = x;
    const auto& v = net.reaction_vector(k);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += v[i];
    f(k, std::move(y), rate);
  }
}

struct Closure {
  std::vector<State> states;
  StateIndex index;
  std::vector<std::vector<std::size_t>> edges;
  bool capped = false;
};

Closure forward_closure(const Network& net, const KineticsSpec& kinetics, const State& x0,
                        const std::vector<Count>* bounds, std::size_t cap) {
  Closure c;
  c.states.push_back(x0);
  c.index.emplace(x0, 0);
  for (std::size_t head = 0; head < c.states.size(); ++head) {
    std::vector<std::size_t> out;
    const State x = c.states[head];
    bool stop = false;
    for_each_successor(net, kinetics, x, [&](std::size_t, State y, double) {
      if (stop || !in_box(y, bounds)) return;
      auto [it, inserted] = c.index.emplace(y, c.states.size());
      if (inserted) {
        if (c.states.size() >= cap) {
          c.index.erase(it);
          stop = true;
          return;
        }
        c.states.push_back(std::move(y));
      }
      out.push_back(it->second);
    });
    c.edges.push_back(std::move(out));
    if (stop) {
      c.capped = true;
      return c;
    }
  }
  return c;
}

std::vector<int> scc(const std::vector<std::vector<std::size_t>>& edges, int& count) {
  Digraph g(edges.size());
  for (std::size_t a = 0; a < edges.size(); ++a) {
    for (std::size_t b : edges[a]) boost::add_edge(a, b, g);
  }
  std::vector<int> comp(edges.size());
  count = boost::strong_components(g, comp.data());
  return comp;
}

IrreducibleClass make_class(std::vector<State> states, const State& anchor) {
  IrreducibleClass cls;
  cls.anchor = anchor;
  cls.states = std::move(states);
  cls.index.reserve(cls.states.size());
  for (std::size_t i = 0; i < cls.states.size(); ++i) cls.index.emplace(cls.states[i], i);
  return cls;
}

bool reaches(const Network& net, const KineticsSpec& kinetics, const State& from, const State& to,
             std::size_t budget) {
  StateIndex seen;
  std::deque<State> queue{from};
  seen.emplace(from, 0);
  while (!queue.empty()) {
    State x = std::move(queue.front());
    queue.pop_front();
    if (x == to) return true;
    bool full = false;
    for_each_successor(net, kinetics, x, [&](std::size_t, State y, double) {
      if (full) return;
      if (seen.emplace(y, 0).second) {
        if (seen.size() > budget) {
          full = true;
          return;
        }
        queue.push_back(std::move(y));
      }
    });
    if (full) return false;
  }
  return false;
}

}  // namespace

std::size_t IrreducibleClass::index_of(const State& x) const {
  auto it = index.find(x);
  return it == index.end() ? size() : it->second;
}

EnumerationResult enumerate_class(const Network& net, const KineticsSpec& kinetics, const State& x0,
                                  std::size_t cap) {
  if (x0.size() != net.num_species()) throw Error(ErrorCode::InvalidSpec, "x0 has the wrong length");
  for (Count v : x0) {
    if (v < 0) throw Error(ErrorCode::InvalidSpec, "x0 must be nonnegative");
  }
  EnumerationResult res;
  res.positive_conservation = conservation_laws(net).positive_vector_exists;
  Closure c = forward_closure(net, kinetics, x0, nullptr, cap);
  if (c.capped) {
    res.status = EnumerationStatus::CapExceeded;
    res.explored = std::move(c.states);
    return res;
  }
  if (is_weakly_reversible(net)) {
    res.status = EnumerationStatus::Ok;
    res.certified_by_structure = true;
    res.cls = make_class(c.states, x0);
    res.explored = std::move(c.states);
    return res;
  }
  int count = 0;
  const auto comp = scc(c.edges, count);
  if (count == 1) {
    res.status = EnumerationStatus::Ok;
    res.cls = make_class(c.states, x0);
    res.explored = std::move(c.states);
    return res;
  }
  res.status = EnumerationStatus::NotIrreducible;
  res.classes.assign(static_cast<std::size_t>(count), CommunicatingClass{{}, true});
  for (std::size_t a = 0; a < comp.size(); ++a) {
    auto& cc = res.classes[static_cast<std::size_t>(comp[a])];
    cc.members.push_back(a);
    for (std::size_t b : c.edges[a]) {
      if (comp[b] != comp[a]) cc.closed = false;
    }
  }
  res.explored = std::move(c.states);
  return res;
}

IrreducibleClass enumerate_window(const Network& net, const KineticsSpec& kinetics, const State& x0,
                                  const std::vector<Count>& bounds, std::size_t cap) {
  if (x0.size() != net.num_species() || bounds.size() != net.num_species()) {
    throw Error(ErrorCode::InvalidSpec, "x0 and bounds need one entry per species");
  }
  if (!in_box(x0, &bounds)) throw Error(ErrorCode::InvalidSpec, "x0 lies outside the window");
  Closure c = forward_closure(net, kinetics, x0, &bounds, cap);
  if (c.capped) {
    throw Error(ErrorCode::NotFinite, "window holds more than " + std::to_string(cap) + " states");
  }
  int count = 0;
  const auto comp = scc(c.edges, count);
  std::vector<State> kept;
  for (std::size_t a = 0; a < c.states.size(); ++a) {
    if (comp[a] == comp[0]) kept.push_back(c.states[a]);
  }
  IrreducibleClass cls = make_class(std::move(kept), x0);
  cls.window = bounds;
  // The window is the whole class when nothing beyond the box is reachable.
  bool escapes = false;
  for (const auto& x : cls.states) {
    for_each_successor(net, kinetics, x, [&](std::size_t, State y, double) {
      if (!in_box(y, &bounds)) escapes = true;
    });
    if (escapes) break;
  }
  cls.bounded = !escapes && count == 1;
  return cls;
}

bool transition_graph_strongly_connected(const Network& net, const KineticsSpec& kinetics,
                                         const IrreducibleClass& cls) {
  std::vector<std::vector<std::size_t>> edges(cls.size());
  for (std::size_t a = 0; a < cls.size(); ++a) {
    for_each_successor(net, kinetics, cls.states[a], [&](std::size_t, State y, double) {
      const std::size_t b = cls.index_of(y);
      if (b != cls.size()) edges[a].push_back(b);
    });
  }
  int count = 0;
  scc(edges, count);
  return count == 1;
}

bool is_full_lattice(const Network& net, const KineticsSpec& kinetics, std::size_t budget) {
  const std::size_t m = net.num_species();
  const State zero(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    State e = zero;
    e[i] = 1;
    if (!reaches(net, kinetics, zero, e, budget) || !reaches(net, kinetics, e, zero, budget)) return false;
  }
  return true;
}

GeneratorMatrix generator_matrix(const Network& net, const KineticsSpec& kinetics, const IrreducibleClass& cls) {
  if (!cls.bounded && !cls.window) {
    throw Error(ErrorCode::NotFinite, "class is infinite; enumerate a truncation window first");
  }
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> trips;
  const auto n = static_cast<Eigen::Index>(cls.size());
  for (std::size_t a = 0; a < cls.size(); ++a) {
    double out = 0.0;
    for_each_successor(net, kinetics, cls.states[a], [&](std::size_t, State y, double rate) {
      const std::size_t b = cls.index_of(y);
      if (b == cls.size()) return;
      trips.emplace_back(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b), rate);
      out += rate;
    });
    trips.emplace_back(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a), -out);
  }
  GeneratorMatrix q(n, n);
  q.setFromTriplets(trips.begin(), trips.end());
  q.makeCompressed();
  return q;
}

void write_states_jsonl(std::ostream& out, const IrreducibleClass& cls) {
  for (const auto& x : cls.states) {
    out << '[';
    for (std::size_t i = 0; i < x.size(); ++i) out << (i ? "," : "") << x[i];
    out << "]\n";
  }
}

void write_generator_triplets(std::ostream& out, const GeneratorMatrix& q) {
  out << "row,col,value\n";
  out.precision(17);
  for (Eigen::Index r = 0; r < q.outerSize(); ++r) {
    for (GeneratorMatrix::InnerIterator it(q, r); it; ++it) {
      out << it.row() << ',' << it.col() << ',' << it.value() << '\n';
    }
  }
}

}  // namespace crn
