#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ergocert/bound.hpp"
#include "ergocert/functionals.hpp"
#include "ergocert/kernel.hpp"

namespace ergocert {

/// Exact per-path record of the stopped-filtration decomposition
///   G_i = E_x[f(X_{0:n-1}) | F_{tau_C^i}],
/// built by grouping enumerated paths by their prefix up to tau_C^i.
/// Paths are indexed by the suffix code of (x_1, ..., x_{n-1}); x_0 = start.
class MartingaleProfile {
public:
    MartingaleProfile(const MarkovKernel& p, std::size_t start, SmallSet c, std::size_t n,
                      const Functional& f);

    std::size_t horizon() const { return n_; }
    std::size_t state_count() const { return m_; }
    std::size_t start_state() const { return start_; }
    std::size_t path_count() const { return prob_.size(); }
    const SmallSet& small_set() const { return c_; }
    const std::vector<double>& sensitivity() const { return cvec_; }
    double expectation() const { return expectation_; }

    std::size_t state_at(std::size_t path, std::size_t k) const;
    double probability(std::size_t path) const { return prob_[path]; }
    double f_value(std::size_t path) const { return f_[path]; }
    double g(std::size_t i, std::size_t path) const { return g_[i * prob_.size() + path]; }
    /// tau_C^i on the path; nullopt when the path does not hit C in [i, n-1].
    std::optional<std::size_t> tau(std::size_t i, std::size_t path) const;

    // identity checks performed at construction
    bool telescoping_ok() const { return telescoping_worst_ <= 1e-10; }
    double telescoping_worst() const { return telescoping_worst_; }
    bool endpoints_ok() const { return endpoints_worst_ <= 1e-10; }
    double endpoints_worst() const { return endpoints_worst_; }
    /// per-atom probability-weighted sum of G_{i+1} - G_i
    bool martingale_ok() const { return martingale_worst_ <= 1e-10; }
    double martingale_worst() const { return martingale_worst_; }

private:
    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::size_t start_ = 0;
    SmallSet c_;
    std::vector<double> cvec_;
    double expectation_ = 0.0;
    std::vector<double> prob_;
    std::vector<double> f_;
    std::vector<double> g_;        // n x paths, row-major by i
    std::vector<std::int16_t> tau_; // n x paths; -1 = beyond horizon
    double telescoping_worst_ = 0.0;
    double endpoints_worst_ = 0.0;
    double martingale_worst_ = 0.0;
};

MartingaleProfile martingale_profile(const MarkovKernel& p, std::size_t start, const SmallSet& c,
                                     std::size_t n, const Functional& f);

struct FactViolation {
    std::size_t path = 0;
    std::size_t i = 0;
    double lhs = 0.0;
    double bound = 0.0;
};

struct FactCheckResult {
    bool pass = true;
    double worst_margin = 0.0; // max of lhs - bound over checked pairs
    std::size_t checked = 0;
    std::optional<FactViolation> violation;
};

/// Increments vanish off the return event:
/// G_i - G_{i-1} = (G_i - G_{i-1}) 1{tau_C^{i-1} = i-1}.
FactCheckResult fact1_check(const MartingaleProfile& profile);

/// Increment bounds with C1 = 5L/(1-r), C2 = 16 L^2/(1-rho):
///   |G_i - G_{i-1}|   <= C1 ||c||_inf 1{tau^{i-1}=i-1} sigma_C(theta^{i-1})
///   |G_i - G_{i-1}|^2 <= C2 1{...} rho^{-2 sigma} sum_{k>=i} c_k^2 rho^{k-i}
/// checked on the event {tau_C^i <= n-1} where sigma is path-determined.
FactCheckResult fact2_check(const MartingaleProfile& profile, double l_bound, double r, double rho);

struct Fact3Result {
    double lhs = 0.0; // E_x[exp(f - E_x f)], exact
    double rhs = 0.0; // exp(c3 ||c||^2)
    bool pass = false;
};

Fact3Result fact3_check(const MarkovKernel& p, std::size_t start, const SmallSet& c, std::size_t n,
                        const Functional& f, const BetaResult& beta);

struct WbarResult {
    std::vector<double> values; // wbar_i(x) per state
    double sup_abs = 0.0;
    double c_i = 0.0;
};

/// One-coordinate telescoping term of the coupling proof: with anchor state
/// x* = 0 and hbar_i(x_{i:n-1}) = h(x*,...,x*, x_{i:n-1}),
///   wbar_i(x_i) = E[ hbar_i(x_i, suffix) - hbar_{i+1}(suffix) ]
/// with the suffix chain continued from x_i. Always |wbar_i| <= c_i.
WbarResult wbar_check(const MarkovKernel& p, const Functional& h, std::size_t i);

} // namespace ergocert
