#pragma once

#include <string>
#include <vector>

#include "crn/netparse.hpp"
#include "oracles.hpp"

namespace testutil {

inline std::string fixture(const std::string& name) { return std::string(CRN_FIXTURE_DIR) + "/" + name; }

inline crn::NetworkDocument load_fixture(const std::string& name) { return crn::load_document(fixture(name)); }

inline crn::NetworkDocument document(const oracle::RawNetwork& raw) { return crn::parse(raw.to_text()); }

/// The document's network written back out as coefficient vectors.
inline oracle::RawNetwork raw(const crn::NetworkDocument& doc) {
  oracle::RawNetwork r;
  const auto& net = doc.network;
  for (const auto& s : net.species()) r.species.push_back(s.name);
  for (std::size_t k = 0; k < net.num_reactions(); ++k) {
    r.sources.emplace_back(net.source(k).coeffs.begin(), net.source(k).coeffs.end());
    r.products.emplace_back(net.product(k).coeffs.begin(), net.product(k).coeffs.end());
    r.rates.push_back(doc.rates[k]);
  }
  return r;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testutil
