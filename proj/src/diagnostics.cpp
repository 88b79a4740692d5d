#include "ergocert/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ergocert/budget.hpp"
#include "ergocert/errors.hpp"
#include "ergocert/exact.hpp"
#include "ergocert/numerics.hpp"

namespace ergocert {

namespace {

constexpr double kCheckTol = 1e-10;
constexpr std::size_t kProfileCap = 1000000; // m^n cap for per-path storage

} // namespace

MartingaleProfile::MartingaleProfile(const MarkovKernel& p, std::size_t start, SmallSet c,
                                     std::size_t n, const Functional& f)
    : m_(p.size()), n_(n), start_(start), c_(std::move(c)), cvec_(f.c()) {
    if (start_ >= m_) {
        throw_error(ErrorCode::IndexOutOfRange, "start state " + std::to_string(start_));
    }
    if (!c_.contains(start_)) {
        // tau_C^0 = 0 a.s. is what pins G_0 to the plain expectation
        throw_error(ErrorCode::StartNotInC, "martingale profile requires the start state in C");
    }
    if (f.horizon() != n_ || f.space_size() != m_) {
        throw_error(ErrorCode::HorizonMismatch, "functional does not match kernel/horizon");
    }
    if (n_ < 1 || n_ > 32000) {
        throw_error(ErrorCode::HorizonTooSmall, "horizon out of range");
    }
    const std::size_t cap = std::min(kProfileCap, enumeration_budget());
    if (pow_or_saturate(m_, n_, cap) > cap) {
        throw_error(ErrorCode::BudgetExceeded,
                    "martingale profile needs m^n <= " + std::to_string(cap));
    }

    const auto h = conditional_expectation_tables(p, f);
    expectation_ = h[0][start_];

    const std::size_t paths = pow_or_saturate(m_, n_ - 1, cap);
    prob_.assign(paths, 0.0);
    f_.assign(paths, 0.0);
    g_.assign(n_ * paths, 0.0);
    tau_.assign(n_ * paths, -1);

    std::vector<std::size_t> path(n_);
    path[0] = start_;
    for (std::size_t code = 0; code < paths; ++code) {
        std::size_t rem = code;
        for (std::size_t k = n_ - 1; k >= 1; --k) {
            path[k] = rem % m_;
            rem /= m_;
        }
        double prob = 1.0;
        std::size_t full_code = start_;
        for (std::size_t k = 1; k < n_; ++k) {
            prob *= p.at(path[k - 1], path[k]);
            full_code = full_code * m_ + path[k];
        }
        prob_[code] = prob;
        f_[code] = h[n_ - 1][full_code];

        // tau_C^i and the per-path conditional values G_i. The hit index at
        // or after i (when <= n-2) selects the prefix the expectation
        // conditions on; otherwise f itself is already measurable.
        std::int16_t next_hit = -1; // first hit at or after k, scanning down
        for (std::size_t k = n_; k-- > 0;) {
            if (c_.contains(path[k])) next_hit = static_cast<std::int16_t>(k);
            tau_[k * paths + code] = next_hit;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            const std::int16_t t = tau_[i * paths + code];
            if (t >= 0 && static_cast<std::size_t>(t) + 2 <= n_) {
                std::size_t prefix_code = start_;
                for (std::size_t k = 1; k <= static_cast<std::size_t>(t); ++k) {
                    prefix_code = prefix_code * m_ + path[k];
                }
                g_[i * paths + code] = h[static_cast<std::size_t>(t)][prefix_code];
            } else {
                g_[i * paths + code] = f_[code];
            }
        }
    }

    // Identity checks: endpoints, telescoping, and the per-atom zero-mean
    // martingale property.
    for (std::size_t code = 0; code < paths; ++code) {
        if (prob_[code] == 0.0) continue;
        endpoints_worst_ = std::max(endpoints_worst_, std::abs(g_[code] - expectation_));
        endpoints_worst_ =
            std::max(endpoints_worst_, std::abs(g_[(n_ - 1) * paths + code] - f_[code]));
        CompensatedSum tele;
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            tele.add(g_[(i + 1) * paths + code] - g_[i * paths + code]);
        }
        telescoping_worst_ =
            std::max(telescoping_worst_, std::abs(tele.value() - (f_[code] - expectation_)));
    }

    for (std::size_t i = 0; i + 1 < n_; ++i) {
        // Atoms with tau_C^i = j > i carry zero increments (checked by
        // fact1); the event {tau_C^i = i} partitions into prefix atoms
        // x_{0:i}, accumulated here.
        const std::size_t atom_count = pow_or_saturate(m_, i, kProfileCap);
        std::vector<CompensatedSum> atom(atom_count);
        for (std::size_t code = 0; code < paths; ++code) {
            if (prob_[code] == 0.0) continue;
            const std::int16_t t = tau_[i * paths + code];
            if (t != static_cast<std::int16_t>(i)) continue;
            // prefix code of x_{1:i} (x_0 is fixed)
            std::size_t atom_code = 0;
            std::size_t rem = code;
            for (std::size_t k = 0; k < n_ - 1 - i; ++k) rem /= m_;
            atom_code = rem;
            atom[atom_code].add(prob_[code] *
                                (g_[(i + 1) * paths + code] - g_[i * paths + code]));
        }
        for (const auto& a : atom) {
            martingale_worst_ = std::max(martingale_worst_, std::abs(a.value()));
        }
    }
}

std::size_t MartingaleProfile::state_at(std::size_t path, std::size_t k) const {
    if (k == 0) return start_;
    std::size_t rem = path;
    for (std::size_t j = n_ - 1; j > k; --j) rem /= m_;
    return rem % m_;
}

std::optional<std::size_t> MartingaleProfile::tau(std::size_t i, std::size_t path) const {
    const std::int16_t t = tau_[i * prob_.size() + path];
    if (t < 0) return std::nullopt;
    return static_cast<std::size_t>(t);
}

MartingaleProfile martingale_profile(const MarkovKernel& p, std::size_t start, const SmallSet& c,
                                     std::size_t n, const Functional& f) {
    return MartingaleProfile(p, start, c, n, f);
}

FactCheckResult fact1_check(const MartingaleProfile& profile) {
    const std::size_t n = profile.horizon();
    FactCheckResult result;
    result.worst_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t path = 0; path < profile.path_count(); ++path) {
        if (profile.probability(path) == 0.0) continue;
        for (std::size_t i = 1; i < n; ++i) {
            // tau_C^{i-1} = i-1 exactly when X_{i-1} lands in C
            if (profile.small_set().contains(profile.state_at(path, i - 1))) continue;
            const double inc = std::abs(profile.g(i, path) - profile.g(i - 1, path));
            ++result.checked;
            result.worst_margin = std::max(result.worst_margin, inc);
            if (inc > kCheckTol && result.pass) {
                result.pass = false;
                result.violation = FactViolation{path, i, inc, 0.0};
            }
        }
    }
    return result;
}

FactCheckResult fact2_check(const MartingaleProfile& profile, double l_bound, double r,
                            double rho) {
    if (!(l_bound >= 1.0) || !(r > 0.0 && r < 1.0) || !(rho >= r && rho < 1.0)) {
        throw_error(ErrorCode::DomainError, "fact2 requires L >= 1, 0 < r <= rho < 1");
    }
    const std::size_t n = profile.horizon();
    const auto& c = profile.sensitivity();
    double c_inf = 0.0;
    for (double ci : c) c_inf = std::max(c_inf, ci);
    const double c1 = 5.0 * l_bound / (1.0 - r);
    const double c2 = 16.0 * l_bound * l_bound / (1.0 - rho);

    FactCheckResult result;
    result.worst_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t path = 0; path < profile.path_count(); ++path) {
        if (profile.probability(path) == 0.0) continue;
        for (std::size_t i = 1; i < n; ++i) {
            if (!profile.small_set().contains(profile.state_at(path, i - 1))) continue;
            const auto tau_i = profile.tau(i, path);
            if (!tau_i) continue; // sigma_C after i-1 is not path-determined
            const double sigma = static_cast<double>(*tau_i - (i - 1));
            const double inc = std::abs(profile.g(i, path) - profile.g(i - 1, path));

            const double bound1 = c1 * c_inf * sigma;
            CompensatedSum geo;
            for (std::size_t k = i; k < n; ++k) {
                geo.add(c[k] * c[k] * std::pow(rho, static_cast<double>(k - i)));
            }
            const double bound2 = c2 * std::pow(rho, -2.0 * sigma) * geo.value();

            ++result.checked;
            const double margin = std::max(inc - bound1, inc * inc - bound2);
            result.worst_margin = std::max(result.worst_margin, margin);
            if (margin > kCheckTol && result.pass) {
                result.pass = false;
                if (inc - bound1 >= inc * inc - bound2) {
                    result.violation = FactViolation{path, i, inc, bound1};
                } else {
                    result.violation = FactViolation{path, i, inc * inc, bound2};
                }
            }
        }
    }
    return result;
}

Fact3Result fact3_check(const MarkovKernel& p, std::size_t start, const SmallSet& c, std::size_t n,
                        const Functional& f, const BetaResult& beta) {
    if (!c.contains(start)) {
        throw_error(ErrorCode::StartNotInC, "fact3 requires the start state in C");
    }
    Fact3Result result;
    result.lhs = exact_laplace(PathLaw(p, Distribution::dirac(p.space(), start), n), f);
    result.rhs = std::exp(beta.c3 * c_norm_sq(f.c()));
    result.pass = result.lhs <= result.rhs * (1.0 + 1e-12);
    return result;
}

WbarResult wbar_check(const MarkovKernel& p, const Functional& h, std::size_t i) {
    const std::size_t m = p.size();
    const std::size_t n = h.horizon();
    if (h.space_size() != m) {
        throw_error(ErrorCode::SpaceMismatch, "functional state count != kernel state count");
    }
    if (i >= n) {
        throw_error(ErrorCode::IndexOutOfRange, "coordinate " + std::to_string(i));
    }
    const std::size_t budget = enumeration_budget();
    if (pow_or_saturate(m, n - 1 - i, budget) > budget) {
        throw_error(ErrorCode::BudgetExceeded, "suffix enumeration exceeds the budget");
    }

    constexpr std::size_t kAnchor = 0; // fixed for reproducibility; any state works
    WbarResult result;
    result.c_i = h.c()[i];
    result.values.assign(m, 0.0);

    std::vector<std::size_t> buf(n, kAnchor);
    for (std::size_t x = 0; x < m; ++x) {
        CompensatedSum acc;
        // Suffix weights follow the chain continued from x_i = x; the two
        // evaluations differ only in coordinate i.
        auto leaf = [&](double prob) {
            buf[i] = x;
            const double with_x = h.evaluate(buf);
            buf[i] = kAnchor;
            const double with_anchor = h.evaluate(buf);
            acc.add(prob * (with_x - with_anchor));
        };
        if (i == n - 1) {
            leaf(1.0);
        } else {
            // Depth-first over positions i+2..n-1; the first suffix step is
            // drawn from row x explicitly — buf[i] toggles inside leaf() and
            // must not feed transitions.
            auto walk = [&](auto&& self, std::size_t depth, double prob) -> void {
                if (depth == n) {
                    leaf(prob);
                    return;
                }
                for (std::size_t z = 0; z < m; ++z) {
                    const double qq = p.at(buf[depth - 1], z);
                    if (qq == 0.0) continue;
                    buf[depth] = z;
                    self(self, depth + 1, prob * qq);
                }
            };
            for (std::size_t y = 0; y < m; ++y) {
                const double q = p.at(x, y);
                if (q == 0.0) continue;
                buf[i + 1] = y;
                walk(walk, i + 2, q);
            }
        }
        result.values[x] = acc.value();
        result.sup_abs = std::max(result.sup_abs, std::abs(acc.value()));
    }
    return result;
}

} // namespace ergocert
