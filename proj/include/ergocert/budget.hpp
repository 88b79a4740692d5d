#pragma once

#include <cstddef>

namespace ergocert {

/// Path-enumeration budget: at most this many paths may be enumerated
/// exhaustively. Defaults to 1e7; the ERGOCERT_BUDGET environment variable
/// overrides it (expert use).
std::size_t enumeration_budget();

/// m^n when it fits under `cap`, nullopt-style sentinel otherwise.
/// Returns cap + 1 on overflow so callers can compare against cap.
std::size_t pow_or_saturate(std::size_t m, std::size_t n, std::size_t cap);

} // namespace ergocert
