#include "ergocert/budget.hpp"

#include <cstdlib>
#include <string>

namespace ergocert {

std::size_t enumeration_budget() {
    if (const char* env = std::getenv("ERGOCERT_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return 10000000;
}

std::size_t pow_or_saturate(std::size_t m, std::size_t n, std::size_t cap) {
    std::size_t r = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (m != 0 && r > cap / m) return cap + 1;
        r *= m;
    }
    return r;
}

} // namespace ergocert
