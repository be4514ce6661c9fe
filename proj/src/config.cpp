#include "crn/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "crn/error.hpp"

namespace crn {

RunConfig config_from_environment() {
  RunConfig cfg;
  if (const char* s = std::getenv("CRN_SEED"); s && *s) {
    std::uint64_t v = 0;
    const char* end = s + std::strlen(s);
    auto [ptr, ec] = std::from_chars(s, end, v);
    if (ec != std::errc() || ptr != end) throw Error(ErrorCode::InvalidSpec, "CRN_SEED is not an unsigned integer");
    cfg.seed = v;
  }
  if (const char* s = std::getenv("CRN_TOL"); s && *s) {
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidSpec, "CRN_TOL is not a positive number");
    }
    cfg.tol = v;
  }
  return cfg;
}

}  // namespace crn
