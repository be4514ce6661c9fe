#include <doctest.h>

#include <fstream>
#include <iterator>
#include <random>

#include "common.hpp"
#include "crn/error.hpp"

using namespace crn;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(testutil::fixture(name), std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("fuzz") {

TEST_CASE("mutated inputs fail with positioned errors only") {
  std::vector<std::string> seeds;
  for (const char* f : {"s1s2.crn", "enzyme2.crn", "mm_counterexample.crn", "fast_subnetwork.crn", "cycle3.crn",
                        "first_order_open.crn"}) {
    seeds.push_back(slurp(f));
  }
  std::mt19937_64 rng(20261016);
  int accepted = 0, rejected = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto text = oracle::mutate_text(seeds[rng() % seeds.size()], rng);
    try {
      const auto doc = parse(text);
      ++accepted;
      CHECK(equivalent(parse(serialize(doc)), doc));
    } catch (const Error& e) {
      ++rejected;
      CAPTURE(text);
      CAPTURE(e.what());
      CHECK(e.position().has_value());
      CHECK_FALSE(e.message().empty());
    } catch (const std::exception& e) {
      CAPTURE(text);
      FAIL("unstructured exception: " << e.what());
    }
  }
  CHECK(accepted > 100);
  CHECK(rejected > 1000);
}

}
