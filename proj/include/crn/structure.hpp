#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "crn/network.hpp"
#include "crn/rates.hpp"

namespace crn {

/// Partition of complex indices into linkage classes. Each class is sorted and
/// classes are ordered by their smallest complex index.
using LinkagePartition = std::vector<std::vector<std::size_t>>;

/// Basis of the orthogonal complement of the stoichiometric subspace.
struct ConservationLaws {
  /// Rows in reduced echelon form, each scaled to coprime integers with a
  /// positive leading entry.
  std::vector<std::vector<BigInt>> basis;
  /// A strictly positive w with w.(nu'_k - nu_k) = 0 exists; then every
  /// compatibility class is bounded.
  bool positive_vector_exists = false;
  /// Species whose count is unbounded on compatibility classes (the support of
  /// the largest nonnegative vector in the stoichiometric subspace).
  std::vector<bool> unbounded_species;
};

struct StructureReport {
  std::size_t n_complexes = 0;
  std::size_t n_linkage_classes = 0;
  std::size_t stoich_dim = 0;
  std::size_t deficiency = 0;
  bool weakly_reversible = false;
  bool reversible = false;
  LinkagePartition linkage_partition;
  ConservationLaws conservation;
};

LinkagePartition linkage_classes(const Network& net);

/// Every linkage class is strongly connected.
bool is_weakly_reversible(const Network& net);

/// Every reaction has its reverse in the network.
bool is_reversible(const Network& net);

/// Exact rank of the reaction-vector matrix.
std::size_t stoich_rank(const Network& net);

/// |C| - l - s. Throws InternalRankInconsistency if that is negative.
std::size_t deficiency(const Network& net);

ConservationLaws conservation_laws(const Network& net);

StructureReport analyze(const Network& net);

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
std::size_t exact_rank(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols);

/// Largest value of x_i over {x >= 0 : W x = W x0}, or nullopt when unbounded.
std::optional<BigInt> max_coordinate(const ConservationLaws& laws, std::span<const Count> x0,
                                     std::size_t i);

/// Conservation basis rows narrowed to int64 (throws CoefficientOverflow if a value does not fit).
std::vector<std::vector<std::int64_t>> conservation_matrix(const ConservationLaws& laws);

void to_json(nlohmann::json& j, const StructureReport& report);

}  // namespace crn
