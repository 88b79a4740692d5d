#include "ergocert/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ergocert/budget.hpp"
#include "ergocert/errors.hpp"
#include "ergocert/numerics.hpp"

namespace ergocert {

namespace {

constexpr double kCrossCheckTol = 1e-12;
constexpr std::size_t kTableCap = 1000000; // m^n cap for conditional-value tables

template <typename Visit>
void enum_suffix(const MarkovKernel& p, std::vector<std::size_t>& path, std::size_t depth,
                 std::size_t n, double prob, Visit&& visit) {
    if (depth == n) {
        visit(std::span<const std::size_t>(path.data(), n), prob);
        return;
    }
    const std::size_t m = p.size();
    const std::size_t prev = path[depth - 1];
    for (std::size_t y = 0; y < m; ++y) {
        const double q = p.at(prev, y);
        if (q == 0.0) continue;
        path[depth] = y;
        enum_suffix(p, path, depth + 1, n, prob * q, visit);
    }
}

template <typename Visit>
void enumerate_impl(const PathLaw& law, Visit&& visit) {
    law.path_count_or_throw();
    const std::size_t n = law.horizon();
    const std::size_t m = law.kernel().size();
    std::vector<std::size_t> path(n);
    for (std::size_t x0 = 0; x0 < m; ++x0) {
        const double w = law.initial().at(x0);
        if (w == 0.0) continue;
        path[0] = x0;
        enum_suffix(law.kernel(), path, 1, n, w, visit);
    }
}

void require_compatible(const PathLaw& law, const Functional& f) {
    if (f.horizon() != law.horizon()) {
        throw_error(ErrorCode::HorizonMismatch, "functional horizon " + std::to_string(f.horizon()) +
                                                    " != law horizon " + std::to_string(law.horizon()));
    }
    if (f.space_size() != law.kernel().size()) {
        throw_error(ErrorCode::SpaceMismatch, "functional state count != kernel state count");
    }
}

/// Marginal-formula expectation for coordinatewise functionals:
/// sum_i sum_x (xi P^i)(x) g_i(x).
double coordinatewise_expectation(const PathLaw& law, std::span<const std::vector<double>> tables) {
    Distribution mu = law.initial();
    CompensatedSum total;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i > 0) mu = marginal(mu, law.kernel(), 1);
        for (std::size_t x = 0; x < mu.size(); ++x) {
            total.add(mu.at(x) * tables[i][x]);
        }
    }
    return total.value();
}

} // namespace

PathLaw::PathLaw(MarkovKernel kernel, Distribution initial, std::size_t horizon)
    : kernel_(std::move(kernel)), initial_(std::move(initial)), horizon_(horizon) {
    if (!(initial_.space() == kernel_.space())) {
        throw_error(ErrorCode::SpaceMismatch, "initial distribution over a different state space");
    }
    if (horizon_ < 1) {
        throw_error(ErrorCode::HorizonTooSmall, "path law horizon must be >= 1");
    }
}

std::size_t PathLaw::path_count_or_throw() const {
    const std::size_t budget = enumeration_budget();
    const std::size_t count = pow_or_saturate(kernel_.size(), horizon_, budget);
    if (count > budget) {
        throw_error(ErrorCode::BudgetExceeded,
                    "m^n exceeds the enumeration budget of " + std::to_string(budget) +
                        " paths (ERGOCERT_BUDGET overrides)");
    }
    return count;
}

void enumerate_paths(const PathLaw& law,
                     const std::function<void(std::span<const std::size_t>, double)>& visit) {
    enumerate_impl(law, visit);
}

double exact_expectation(const PathLaw& law, const Functional& f) {
    require_compatible(law, f);
    CompensatedSum acc;
    enumerate_impl(law, [&](std::span<const std::size_t> path, double prob) {
        acc.add(prob * f.evaluate(path));
    });
    const double by_paths = acc.value();

    if (f.kind() == FunctionalKind::Additive || f.kind() == FunctionalKind::Occupation) {
        const double by_marginals = coordinatewise_expectation(law, f.coordinate_tables());
        double scale = 1.0;
        for (const auto& t : f.coordinate_tables()) {
            scale += std::abs(*std::max_element(t.begin(), t.end(), [](double a, double b) {
                return std::abs(a) < std::abs(b);
            }));
        }
        if (std::abs(by_paths - by_marginals) > kCrossCheckTol * scale) {
            throw_error(ErrorCode::InternalError,
                        "path enumeration and marginal formula disagree: " + std::to_string(by_paths) +
                            " vs " + std::to_string(by_marginals));
        }
    }
    return by_paths;
}

double exact_tail(const PathLaw& law, const Functional& f, double t) {
    if (!(t > 0.0)) throw_error(ErrorCode::DomainError, "tail threshold must be > 0");
    const double grid[1] = {t};
    return exact_tail_grid(law, f, grid)[0];
}

std::vector<double> exact_tail_grid(const PathLaw& law, const Functional& f,
                                    std::span<const double> t_grid) {
    require_compatible(law, f);
    for (std::size_t j = 0; j + 1 < t_grid.size(); ++j) {
        if (!(t_grid[j] < t_grid[j + 1])) {
            throw_error(ErrorCode::DomainError, "t grid must be strictly increasing");
        }
    }
    const double expectation = exact_expectation(law, f);

    // bucket[k] collects the mass of paths exceeding exactly the first k
    // thresholds; tails are suffix sums.
    std::vector<CompensatedSum> bucket(t_grid.size() + 1);
    enumerate_impl(law, [&](std::span<const std::size_t> path, double prob) {
        const double excess = f.evaluate(path) - expectation;
        const std::size_t k = static_cast<std::size_t>(
            std::lower_bound(t_grid.begin(), t_grid.end(), excess) - t_grid.begin());
        bucket[k].add(prob);
    });

    std::vector<double> tails(t_grid.size());
    CompensatedSum suffix;
    for (std::size_t j = t_grid.size(); j-- > 0;) {
        suffix.add(bucket[j + 1].value());
        tails[j] = std::clamp(suffix.value(), 0.0, 1.0);
    }
    return tails;
}

double exact_laplace(const PathLaw& law, const Functional& f) {
    require_compatible(law, f);
    const double expectation = exact_expectation(law, f);
    CompensatedSum acc;
    enumerate_impl(law, [&](std::span<const std::size_t> path, double prob) {
        acc.add(prob * std::exp(f.evaluate(path) - expectation));
    });
    return acc.value();
}

Lemma1Gap lemma1_gap(const MarkovKernel& p, const Distribution& xi, const Distribution& xi_prime,
                     const Functional& h) {
    const PathLaw law_xi(p, xi, h.horizon());
    const PathLaw law_xi_prime(p, xi_prime, h.horizon());
    Lemma1Gap gap;
    gap.lhs = std::abs(exact_expectation(law_xi, h) - exact_expectation(law_xi_prime, h));

    Distribution mu = xi;
    Distribution nu = xi_prime;
    CompensatedSum rhs;
    for (std::size_t i = 0; i < h.horizon(); ++i) {
        if (i > 0) {
            mu = marginal(mu, p, 1);
            nu = marginal(nu, p, 1);
        }
        rhs.add(2.0 * h.c()[i] * tv_distance(mu, nu));
    }
    gap.rhs = rhs.value();
    return gap;
}

GPair g_pair(const MarkovKernel& p, const Distribution& pi, const Functional& f, std::size_t i,
             std::span<const std::size_t> prefix) {
    const std::size_t n = f.horizon();
    const std::size_t m = p.size();
    if (i >= n) {
        throw_error(ErrorCode::IndexOutOfRange, "coordinate " + std::to_string(i) +
                                                    " beyond horizon " + std::to_string(n));
    }
    if (prefix.size() != i + 1) {
        throw_error(ErrorCode::LengthMismatch, "prefix must have i+1 states");
    }
    for (std::size_t x : prefix) {
        if (x >= m) throw_error(ErrorCode::IndexOutOfRange, "prefix state " + std::to_string(x));
    }
    if (f.space_size() != m || !(pi.space() == p.space())) {
        throw_error(ErrorCode::SpaceMismatch, "g_pair inputs over different state spaces");
    }
    const std::size_t budget = enumeration_budget();
    if (pow_or_saturate(m, n - 1 - i, budget) > budget) {
        throw_error(ErrorCode::BudgetExceeded, "suffix enumeration exceeds the budget");
    }

    std::vector<std::size_t> buf(n);
    std::copy(prefix.begin(), prefix.end(), buf.begin());
    if (i == n - 1) {
        const double v = f.evaluate(buf);
        return GPair{v, v};
    }

    // Integrate the suffix with its first state drawn from `first`, the
    // remaining steps from the kernel.
    auto integrate = [&](const Distribution& first) {
        CompensatedSum acc;
        for (std::size_t y = 0; y < m; ++y) {
            const double w = first.at(y);
            if (w == 0.0) continue;
            buf[i + 1] = y;
            enum_suffix(p, buf, i + 2, n, w, [&](std::span<const std::size_t> path, double prob) {
                acc.add(prob * f.evaluate(path));
            });
        }
        return acc.value();
    };

    GPair out;
    out.g = integrate(Distribution::unchecked(p.space(), std::vector<double>(
                          p.data().begin() + static_cast<std::ptrdiff_t>(prefix[i] * m),
                          p.data().begin() + static_cast<std::ptrdiff_t>((prefix[i] + 1) * m))));
    out.g_pi = integrate(pi);
    return out;
}

std::vector<std::vector<double>> conditional_expectation_tables(const MarkovKernel& p,
                                                                const Functional& f) {
    const std::size_t m = p.size();
    const std::size_t n = f.horizon();
    if (f.space_size() != m) {
        throw_error(ErrorCode::SpaceMismatch, "functional state count != kernel state count");
    }
    const std::size_t cap = std::min(kTableCap, enumeration_budget());
    const std::size_t total = pow_or_saturate(m, n, cap);
    if (total > cap) {
        throw_error(ErrorCode::BudgetExceeded,
                    "conditional tables need m^n <= " + std::to_string(cap));
    }

    std::vector<std::vector<double>> h(n);
    h[n - 1].resize(total);
    {
        std::vector<std::size_t> path(n, 0);
        for (std::size_t code = 0; code < total; ++code) {
            std::size_t rem = code;
            for (std::size_t k = n; k-- > 0;) {
                path[k] = rem % m;
                rem /= m;
            }
            h[n - 1][code] = f.evaluate(path);
        }
    }
    for (std::size_t j = n - 1; j-- > 0;) {
        const std::size_t count = pow_or_saturate(m, j + 1, cap);
        h[j].resize(count);
        for (std::size_t code = 0; code < count; ++code) {
            const std::size_t last = code % m;
            CompensatedSum acc;
            for (std::size_t y = 0; y < m; ++y) {
                const double q = p.at(last, y);
                if (q == 0.0) continue;
                acc.add(q * h[j + 1][code * m + y]);
            }
            h[j][code] = acc.value();
        }
    }
    return h;
}

Lemma2Result lemma2_check(const MarkovKernel& p, const Distribution& pi, const SmallSet& c,
                          const Functional& f, const ErgodicityCertificate& erg,
                          Lemma2Exponent exponent) {
    constexpr double kTol = 1e-10;
    const std::size_t m = p.size();
    const std::size_t n = f.horizon();
    const auto h = conditional_expectation_tables(p, f);
    const auto& cs = f.c();

    Lemma2Result result;
    result.worst_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        CompensatedSum bound_sum;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double e = (exponent == Lemma2Exponent::Elapsed) ? static_cast<double>(j - i)
                                                                   : static_cast<double>(j);
            bound_sum.add(cs[j] * std::pow(erg.r, e));
        }
        const double bound = 2.0 * erg.L * bound_sum.value();

        const std::size_t count = h[i].size();
        for (std::size_t code = 0; code < count; ++code) {
            if (!c.contains(code % m)) continue;
            double g_pi;
            if (i == n - 1) {
                g_pi = h[n - 1][code];
            } else {
                CompensatedSum acc;
                for (std::size_t y = 0; y < m; ++y) {
                    if (pi.at(y) == 0.0) continue;
                    acc.add(pi.at(y) * h[i + 1][code * m + y]);
                }
                g_pi = acc.value();
            }
            const double lhs = std::abs(h[i][code] - g_pi);
            ++result.checked;
            result.worst_margin = std::max(result.worst_margin, lhs - bound);
            if (lhs > bound + kTol && result.pass) {
                result.pass = false;
                Lemma2Violation v;
                v.i = i;
                v.lhs = lhs;
                v.bound = bound;
                v.prefix.resize(i + 1);
                std::size_t rem = code;
                for (std::size_t k = i + 1; k-- > 0;) {
                    v.prefix[k] = rem % m;
                    rem /= m;
                }
                result.violation = std::move(v);
            }
        }
    }
    return result;
}

} // namespace ergocert
