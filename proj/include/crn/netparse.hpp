#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crn/kinetics.hpp"
#include "crn/network.hpp"
#include "crn/rates.hpp"

namespace crn {

/// A network together with its rate constants and kinetics annotations, as
/// read from a .crn file. The grammar is documented in docs/crn-grammar.md.
struct NetworkDocument {
  Network network;
  RateConstants rates;
  /// Per-species theta declarations; empty when the file has no @theta lines.
  /// Species without a declaration default to linear theta.
  std::vector<std::optional<Theta>> thetas;
  /// `@kinetics ratio`: ratio-form intensities with theta(x) built from the per-species thetas.
  bool ratio_form = false;
  std::optional<double> volume;

  bool has_theta() const;
  /// Kinetics described by the document (mass action when there are no @theta lines).
  KineticsSpec kinetics() const;
  /// Same kinetics with different rate constants.
  KineticsSpec kinetics(const RateConstants& rates) const;
};

NetworkDocument parse(std::string_view text);
std::string serialize(const NetworkDocument& doc);
NetworkDocument load_document(const std::filesystem::path& path);

/// Same species order, complexes, reactions, rates, kinetics and volume.
bool equivalent(const NetworkDocument& a, const NetworkDocument& b);

}  // namespace crn
