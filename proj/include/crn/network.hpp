#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace crn {

/// Molecule count of one species.
using Count = std::int64_t;
/// A point of the nonnegative integer lattice, one count per species.
using State = std::vector<Count>;

struct SpeciesId {
  std::size_t index = 0;
  std::string name;
};

/// Stoichiometric coefficients of one complex; the zero vector is the empty complex.
struct Complex {
  std::vector<std::int32_t> coeffs;

  /// Sum of coefficients, |nu|.
  std::int64_t molecularity() const;
  bool is_empty() const;

  friend bool operator==(const Complex&, const Complex&) = default;
  friend auto operator<=>(const Complex&, const Complex&) = default;
};

struct Reaction {
  std::size_t source = 0;
  std::size_t product = 0;

  friend bool operator==(const Reaction&, const Reaction&) = default;
};

/// Source and product coefficient vectors of one reaction, before deduplication.
struct ReactionInput {
  std::vector<std::int64_t> source;
  std::vector<std::int64_t> product;
};

/// Immutable chemical reaction network {S, C, R}.
///
/// Complexes are stored once in a canonical table in first-appearance order;
/// reactions refer to them by index.
class Network {
 public:
  static Network build(const std::vector<std::string>& species,
                       const std::vector<ReactionInput>& reactions);

  std::size_t num_species() const { return species_.size(); }
  std::size_t num_complexes() const { return complexes_.size(); }
  std::size_t num_reactions() const { return reactions_.size(); }

  const std::vector<SpeciesId>& species() const { return species_; }
  const std::vector<Complex>& complexes() const { return complexes_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }

  const Complex& source(std::size_t k) const { return complexes_[reactions_[k].source]; }
  const Complex& product(std::size_t k) const { return complexes_[reactions_[k].product]; }

  /// nu'_k - nu_k for reaction k.
  const std::vector<std::int64_t>& reaction_vector(std::size_t k) const { return vectors_[k]; }

  /// Index of the species with this name, or num_species() if absent.
  std::size_t find_species(const std::string& name) const;

  /// Index of the reaction source -> product, or num_reactions() if absent.
  std::size_t find_reaction(std::size_t source, std::size_t product) const;

 private:
  std::vector<SpeciesId> species_;
  std::vector<Complex> complexes_;
  std::vector<Reaction> reactions_;
  std::vector<std::vector<std::int64_t>> vectors_;
};

inline Network build_network(const std::vector<std::string>& species,
                             const std::vector<ReactionInput>& reactions) {
  return Network::build(species, reactions);
}

/// Reaction vectors nu'_k - nu_k in reaction order.
std::vector<std::vector<std::int64_t>> reaction_vectors(const Network& net);

/// True when x_i >= nu_i for every species.
bool covers(std::span<const Count> x, const Complex& nu);

}  // namespace crn
