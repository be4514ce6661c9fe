#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCore>
#include <boost/container_hash/hash.hpp>

#include "crn/kinetics.hpp"
#include "crn/network.hpp"

namespace crn {

using StateIndex = std::unordered_map<State, std::size_t, boost::hash<State>>;

/// A closed irreducible set of lattice points (or a box window of one).
struct IrreducibleClass {
  std::vector<State> states;
  StateIndex index;
  /// The whole class is finite and every state of it is listed.
  bool bounded = true;
  State anchor;
  /// Per-species upper bounds when this is a truncation window of a larger class.
  std::optional<std::vector<Count>> window;

  std::size_t size() const { return states.size(); }
  /// Position of x in states, or size() when absent.
  std::size_t index_of(const State& x) const;
  bool contains(const State& x) const { return index_of(x) != size(); }
};

enum class EnumerationStatus { Ok, CapExceeded, NotIrreducible };

struct CommunicatingClass {
  /// Indices into EnumerationResult::explored.
  std::vector<std::size_t> members;
  /// No positive-rate transition leaves the class.
  bool closed = false;
};

struct EnumerationResult {
  EnumerationStatus status = EnumerationStatus::Ok;
  /// Filled when status is Ok.
  IrreducibleClass cls;
  /// From the conservation-law analysis: a positive conservation vector
  /// exists, so every class is finite. Explains CapExceeded when false.
  bool positive_conservation = false;
  /// Irreducibility follows from weak reversibility rather than an explicit check.
  bool certified_by_structure = false;
  /// Forward closure of x0 (up to the cap).
  std::vector<State> explored;
  /// Communicating-class decomposition of the closure when status is NotIrreducible.
  std::vector<CommunicatingClass> classes;
};

inline constexpr std::size_t kDefaultStateCap = 250000;

/// Breadth-first closure of x0 under positive-rate transitions.
EnumerationResult enumerate_class(const Network& net, const KineticsSpec& kinetics, const State& x0,
                                  std::size_t cap = kDefaultStateCap);

/// States of x0's class inside the box x_i <= bounds[i]: the forward closure within
/// the box, restricted to states that communicate with x0 without leaving it.
IrreducibleClass enumerate_window(const Network& net, const KineticsSpec& kinetics, const State& x0,
                                  const std::vector<Count>& bounds, std::size_t cap = kDefaultStateCap);

/// Explicit strong-connectivity check of the transition graph on the listed states.
bool transition_graph_strongly_connected(const Network& net, const KineticsSpec& kinetics,
                                         const IrreducibleClass& cls);

/// Every x in Z^m_{>=0} communicates with 0: checked by showing 0 <-> e_i for all i
/// (intensities only depend on x through x >= nu, and extra molecules never
/// disable a reaction, so such paths can be shifted and chained).
bool is_full_lattice(const Network& net, const KineticsSpec& kinetics, std::size_t budget = 20000);

using GeneratorMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Q over the listed states. Transitions out of a truncation window are dropped and the
/// diagonal is minus the sum of the kept off-diagonal entries. Throws NotFinite for an
/// unbounded class without a window.
GeneratorMatrix generator_matrix(const Network& net, const KineticsSpec& kinetics, const IrreducibleClass& cls);

/// One JSON array per line.
void write_states_jsonl(std::ostream& out, const IrreducibleClass& cls);
/// CSV "row,col,value" of the nonzero entries.
void write_generator_triplets(std::ostream& out, const GeneratorMatrix& q);

}  // namespace crn
