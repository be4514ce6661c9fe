#pragma once

// Reference computations that share no code with the library: brute-force
// spanning-tree sums, closed-form pmfs, a dense long-double stationary solve and
// a plain breadth-first reachability. Slow, small inputs only.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using Vec = std::vector<std::int64_t>;

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0.0;
};

/// K_z = sum over spanning trees rooted at z (every other node has one out-edge,
/// all paths end at z) of the product of edge weights. Enumerates every choice of
/// one out-edge per non-root node.
std::vector<double> rooted_tree_sums(std::size_t n, const std::vector<Edge>& edges);

double binomial_pmf(int n, double p, int k);
double poisson_pmf(double mean, std::int64_t k);
double multinomial_pmf(const std::vector<double>& p, const Vec& x);

/// A network written out directly as coefficient vectors.
struct RawNetwork {
  std::vector<std::string> species;
  std::vector<Vec> sources;
  std::vector<Vec> products;
  std::vector<double> rates;

  std::string to_text() const;
};

/// kappa * prod_i x_i! / (x_i - nu_i)!.
double mass_action(double kappa, const Vec& nu, const Vec& x);

/// All states reachable from x0 (at most `limit`, else empty), in sorted order.
std::vector<Vec> reachable(const RawNetwork& net, const Vec& x0, std::size_t limit = 20000);

/// Stationary vector of the mass-action chain on `states` (closed under the
/// dynamics) by Gaussian elimination in long double on the dense generator.
std::vector<double> dense_stationary(const RawNetwork& net, const std::vector<Vec>& states);

/// The same chain with per-state intensities supplied by the caller.
std::vector<double> dense_stationary(const std::vector<Vec>& states, const std::vector<Vec>& jumps,
                                     const std::vector<std::vector<double>>& rates);

/// Weakly reversible, deficiency zero, every species conserved in total (so every
/// class is finite). Each non-root complex owns a private species, which keeps the
/// reaction vectors of different linkage classes independent.
RawNetwork random_wr_deficiency_zero(std::mt19937_64& rng);

/// Reversible network whose linkage classes are triangles and edges. With
/// `detailed_balanced` the rates come from a random c* through
/// kappa' = kappa c*^nu / c*^nu'; otherwise one triangle's loop condition is broken.
RawNetwork random_reversible(std::mt19937_64& rng, bool detailed_balanced);

/// Point with every species conserved total equal to `total`, spread at random.
Vec random_state(std::mt19937_64& rng, std::size_t m, std::int64_t total);

/// One to four random edits (deletions, token insertions, byte flips, duplications).
std::string mutate_text(std::string s, std::mt19937_64& rng);

}  // namespace oracle
