#include "crn/network.hpp"

#include <limits>
#include <map>
#include <set>
#include <unordered_set>

#include "crn/error.hpp"

namespace crn {

std::int64_t Complex::molecularity() const {
  std::int64_t total = 0;
  for (auto c : coeffs) total += c;
  return total;
}

bool Complex::is_empty() const {
  for (auto c : coeffs) {
    if (c != 0) return false;
  }
  return true;
}

namespace {

Complex to_complex(const std::vector<std::int64_t>& raw, std::size_t m, std::size_t k) {
  if (raw.size() != m) {
    throw Error(ErrorCode::InvalidComplex,
                "reaction " + std::to_string(k) + " has a coefficient vector of length " +
                    std::to_string(raw.size()) + ", expected " + std::to_string(m));
  }
  Complex c;
  c.coeffs.reserve(m);
  for (auto v : raw) {
    if (v < 0) {
      throw Error(ErrorCode::InvalidComplex,
                  "reaction " + std::to_string(k) + " has a negative coefficient");
    }
    if (v > std::numeric_limits<std::int32_t>::max()) {
      throw Error(ErrorCode::CoefficientOverflow,
                  "reaction " + std::to_string(k) + " coefficient " + std::to_string(v) +
                      " does not fit in 32 bits");
    }
    c.coeffs.push_back(static_cast<std::int32_t>(v));
  }
  return c;
}

}  // namespace

Network Network::build(const std::vector<std::string>& species,
                       const std::vector<ReactionInput>& reactions) {
  if (species.empty() || reactions.empty()) {
    throw Error(ErrorCode::EmptyNetwork, "a network needs at least one species and one reaction");
  }
  Network net;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < species.size(); ++i) {
    if (!seen.insert(species[i]).second) {
      throw Error(ErrorCode::DuplicateSpeciesName, "species '" + species[i] + "' declared twice");
    }
    net.species_.push_back({i, species[i]});
  }

  const std::size_t m = species.size();
  std::map<Complex, std::size_t> table;
  auto intern = [&](Complex c) {
    auto [it, inserted] = table.emplace(c, net.complexes_.size());
    if (inserted) net.complexes_.push_back(std::move(c));
    return it->second;
  };

  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t k = 0; k < reactions.size(); ++k) {
    Complex src = to_complex(reactions[k].source, m, k);
    Complex prod = to_complex(reactions[k].product, m, k);
    if (src == prod) {
      throw Error(ErrorCode::SelfLoopReaction,
                  "reaction " + std::to_string(k) + " has identical source and product");
    }
    const std::size_t s = intern(std::move(src));
    const std::size_t p = intern(std::move(prod));
    if (!edges.emplace(s, p).second) {
      throw Error(ErrorCode::DuplicateReaction,
                  "reaction " + std::to_string(k) + " repeats an earlier reaction");
    }
    net.reactions_.push_back({s, p});
  }

  net.vectors_.reserve(net.reactions_.size());
  for (const auto& r : net.reactions_) {
    std::vector<std::int64_t> v(m);
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = static_cast<std::int64_t>(net.complexes_[r.product].coeffs[i]) -
             net.complexes_[r.source].coeffs[i];
    }
    net.vectors_.push_back(std::move(v));
  }
  return net;
}

std::size_t Network::find_species(const std::string& name) const {
  for (const auto& s : species_) {
    if (s.name == name) return s.index;
  }
  return species_.size();
}

std::size_t Network::find_reaction(std::size_t source, std::size_t product) const {
  for (std::size_t k = 0; k < reactions_.size(); ++k) {
    if (reactions_[k].source == source && reactions_[k].product == product) return k;
  }
  return reactions_.size();
}

std::vector<std::vector<std::int64_t>> reaction_vectors(const Network& net) {
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(net.num_reactions());
  for (std::size_t k = 0; k < net.num_reactions(); ++k) out.push_back(net.reaction_vector(k));
  return out;
}

bool covers(std::span<const Count> x, const Complex& nu) {
  for (std::size_t i = 0; i < nu.coeffs.size(); ++i) {
    if (x[i] < nu.coeffs[i]) return false;
  }
  return true;
}

}  // namespace crn
