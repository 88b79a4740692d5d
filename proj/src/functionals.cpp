#include "ergocert/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergocert/errors.hpp"

namespace ergocert {

namespace {

constexpr double kBdTol = 1e-12;
constexpr std::size_t kEnumCap = 1000000; // m^n cap for exhaustive loops

/// m^n, or nullopt on overflow past `cap`.
std::optional<std::size_t> checked_pow(std::size_t m, std::size_t n, std::size_t cap) {
    std::size_t r = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (r > cap / m) return std::nullopt;
        r *= m;
    }
    return r;
}

double table_spread(const std::vector<double>& t) {
    const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
    return *hi - *lo;
}

void check_explicit_c(const std::vector<double>& c, const std::vector<double>& derived,
                      std::size_t n) {
    if (c.size() != n) {
        throw_error(ErrorCode::LengthMismatch, "c has " + std::to_string(c.size()) +
                                                   " entries for horizon " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (c[i] < 0.0) {
            throw_error(ErrorCode::DomainError, "c[" + std::to_string(i) + "] is negative");
        }
        if (c[i] < derived[i] - kBdTol) {
            throw_error(ErrorCode::DomainError,
                        "c[" + std::to_string(i) + "] = " + std::to_string(c[i]) +
                            " is below the coordinate sensitivity " + std::to_string(derived[i]));
        }
    }
}

} // namespace

const char* functional_kind_name(FunctionalKind kind) {
    switch (kind) {
        case FunctionalKind::Additive: return "additive";
        case FunctionalKind::Occupation: return "occupation";
        case FunctionalKind::SupOfClass: return "sup_of_class";
        case FunctionalKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

Functional Functional::additive(std::size_t m, std::vector<std::vector<double>> tables,
                                std::optional<std::vector<double>> c) {
    if (m == 0 || tables.empty()) {
        throw_error(ErrorCode::DomainError, "additive functional needs m >= 1 and n >= 1");
    }
    for (const auto& t : tables) {
        if (t.size() != m) {
            throw_error(ErrorCode::LengthMismatch, "value table size != state count");
        }
    }
    Functional f;
    f.kind_ = FunctionalKind::Additive;
    f.m_ = m;
    f.n_ = tables.size();
    std::vector<double> derived(f.n_);
    for (std::size_t i = 0; i < f.n_; ++i) derived[i] = table_spread(tables[i]);
    if (c) {
        check_explicit_c(*c, derived, f.n_);
        f.c_ = std::move(*c);
    } else {
        f.c_ = std::move(derived);
    }
    f.tables_ = std::move(tables);
    return f;
}

Functional Functional::occupation(std::size_t m, std::size_t n, std::vector<std::size_t> target,
                                  std::vector<double> weights,
                                  std::optional<std::vector<double>> c) {
    if (m == 0 || n == 0) {
        throw_error(ErrorCode::DomainError, "occupation functional needs m >= 1 and n >= 1");
    }
    for (std::size_t x : target) {
        if (x >= m) throw_error(ErrorCode::IndexOutOfRange, "occupation target state " + std::to_string(x));
    }
    if (weights.empty()) weights.assign(n, 1.0);
    if (weights.size() != n) {
        throw_error(ErrorCode::LengthMismatch, "occupation weights size != horizon");
    }
    std::vector<std::vector<double>> tables(n, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t x : target) tables[i][x] = weights[i];
    }
    Functional f = Functional::additive(m, std::move(tables), std::move(c));
    f.kind_ = FunctionalKind::Occupation;
    std::sort(target.begin(), target.end());
    target.erase(std::unique(target.begin(), target.end()), target.end());
    f.target_ = std::move(target);
    f.weights_ = std::move(weights);
    return f;
}

Functional Functional::sup_of_class(std::size_t m, std::size_t n,
                                    std::vector<std::vector<double>> member_tables,
                                    std::optional<std::vector<double>> c) {
    if (m == 0 || n == 0 || member_tables.empty()) {
        throw_error(ErrorCode::DomainError, "sup-of-class functional needs a nonempty class");
    }
    double spread = 0.0;
    for (const auto& g : member_tables) {
        if (g.size() != m) throw_error(ErrorCode::LengthMismatch, "member table size != state count");
        spread = std::max(spread, table_spread(g));
    }
    Functional f;
    f.kind_ = FunctionalKind::SupOfClass;
    f.m_ = m;
    f.n_ = n;
    std::vector<double> derived(n, spread);
    if (c) {
        check_explicit_c(*c, derived, n);
        f.c_ = std::move(*c);
    } else {
        f.c_ = std::move(derived);
    }
    f.members_ = std::move(member_tables);
    return f;
}

Functional Functional::tabulated(std::size_t m, std::size_t n, std::vector<double> values,
                                 std::optional<std::vector<double>> c) {
    if (m == 0 || n == 0) {
        throw_error(ErrorCode::DomainError, "tabulated functional needs m >= 1 and n >= 1");
    }
    const auto count = checked_pow(m, n, kEnumCap);
    if (!count) {
        throw_error(ErrorCode::TooLargeToEnumerate,
                    "tabulated functional needs m^n <= " + std::to_string(kEnumCap));
    }
    if (values.size() != *count) {
        throw_error(ErrorCode::LengthMismatch, "tabulated values size " + std::to_string(values.size()) +
                                                   " != m^n = " + std::to_string(*count));
    }
    Functional f;
    f.kind_ = FunctionalKind::Tabulated;
    f.m_ = m;
    f.n_ = n;
    f.values_ = std::move(values);
    if (c) {
        f.c_ = *c;
        if (auto v = bd_check(f, *c)) {
            throw_error(ErrorCode::DomainError,
                        "supplied c violated at coordinate " + std::to_string(v->coordinate) +
                            " by " + std::to_string(v->excess));
        }
    } else {
        f.c_ = minimal_c(f);
    }
    return f;
}

double Functional::evaluate(std::span<const std::size_t> path) const {
    if (path.size() != n_) {
        throw_error(ErrorCode::LengthMismatch, "path length " + std::to_string(path.size()) +
                                                   " != horizon " + std::to_string(n_));
    }
    for (std::size_t x : path) {
        if (x >= m_) throw_error(ErrorCode::IndexOutOfRange, "path state " + std::to_string(x));
    }
    switch (kind_) {
        case FunctionalKind::Additive:
        case FunctionalKind::Occupation: {
            double s = 0.0;
            for (std::size_t i = 0; i < n_; ++i) s += tables_[i][path[i]];
            return s;
        }
        case FunctionalKind::SupOfClass: {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& g : members_) {
                double s = 0.0;
                for (std::size_t i = 0; i < n_; ++i) s += g[path[i]];
                best = std::max(best, s);
            }
            return best;
        }
        case FunctionalKind::Tabulated: {
            std::size_t idx = 0;
            for (std::size_t i = 0; i < n_; ++i) idx = idx * m_ + path[i];
            return values_[idx];
        }
    }
    throw_error(ErrorCode::InternalError, "unhandled functional kind");
}

Functional Functional::scaled(double s) const {
    if (!(s > 0.0)) {
        throw_error(ErrorCode::DomainError, "scale factor must be > 0");
    }
    Functional f = *this;
    for (double& ci : f.c_) ci *= s;
    for (auto& t : f.tables_) {
        for (double& v : t) v *= s;
    }
    for (auto& g : f.members_) {
        for (double& v : g) v *= s;
    }
    for (double& v : f.values_) v *= s;
    for (double& w : f.weights_) w *= s;
    return f;
}

namespace {

/// Runs `visit(tuple)` for every tuple in X^n in lexicographic order.
template <typename Visit>
void for_each_tuple(std::size_t m, std::size_t n, Visit&& visit) {
    std::vector<std::size_t> tuple(n, 0);
    for (;;) {
        visit(tuple);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++tuple[i] < m) break;
            tuple[i] = 0;
            if (i == 0) return;
        }
        if (n == 0) return;
    }
}

std::size_t require_enumerable(const Functional& f) {
    const auto count = checked_pow(f.space_size(), f.horizon(), kEnumCap);
    if (!count) {
        throw_error(ErrorCode::TooLargeToEnumerate,
                    "exhaustive check needs m^n <= " + std::to_string(kEnumCap));
    }
    return *count;
}

} // namespace

std::optional<BdViolation> bd_check(const Functional& f, std::span<const double> c) {
    if (c.size() != f.horizon()) {
        throw_error(ErrorCode::LengthMismatch, "candidate c size != horizon");
    }
    require_enumerable(f);
    const std::size_t m = f.space_size();
    const std::size_t n = f.horizon();

    std::optional<BdViolation> violation;
    for_each_tuple(m, n, [&](std::vector<std::size_t>& tuple) {
        if (violation) return;
        const double fx = f.evaluate(tuple);
        for (std::size_t i = 0; i < n && !violation; ++i) {
            const std::size_t orig = tuple[i];
            for (std::size_t y = 0; y < m; ++y) {
                if (y == orig) continue;
                tuple[i] = y;
                const double diff = std::abs(fx - f.evaluate(tuple));
                if (diff > c[i] + kBdTol) {
                    violation = BdViolation{i, {}, y, diff - c[i]};
                    tuple[i] = orig;
                    violation->tuple = tuple;
                    break;
                }
            }
            tuple[i] = orig;
        }
    });
    return violation;
}

std::vector<double> minimal_c(const Functional& f) {
    require_enumerable(f);
    const std::size_t m = f.space_size();
    const std::size_t n = f.horizon();

    std::vector<double> c(n, 0.0);
    for_each_tuple(m, n, [&](std::vector<std::size_t>& tuple) {
        const double fx = f.evaluate(tuple);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t orig = tuple[i];
            for (std::size_t y = 0; y < m; ++y) {
                if (y == orig) continue;
                tuple[i] = y;
                c[i] = std::max(c[i], std::abs(fx - f.evaluate(tuple)));
            }
            tuple[i] = orig;
        }
    });
    return c;
}

} // namespace ergocert
