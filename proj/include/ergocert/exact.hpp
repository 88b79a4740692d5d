#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ergocert/ergodicity.hpp"
#include "ergocert/functionals.hpp"
#include "ergocert/kernel.hpp"

namespace ergocert {

/// The law of (X_0, ..., X_{n-1}) for a chain with the given kernel and
/// initial distribution, at a finite horizon small enough to enumerate.
class PathLaw {
public:
    PathLaw(MarkovKernel kernel, Distribution initial, std::size_t horizon);

    const MarkovKernel& kernel() const { return kernel_; }
    const Distribution& initial() const { return initial_; }
    std::size_t horizon() const { return horizon_; }

    /// Number of paths m^n; throws BudgetExceeded past the enumeration budget.
    std::size_t path_count_or_throw() const;

private:
    MarkovKernel kernel_;
    Distribution initial_;
    std::size_t horizon_;
};

/// Visit every positive-probability path in lexicographic order with its
/// exact probability (product of initial weight and transition entries).
void enumerate_paths(const PathLaw& law,
                     const std::function<void(std::span<const std::size_t>, double)>& visit);

/// E[f(X_{0:n-1})] by depth-first enumeration with compensated accumulation.
/// For coordinatewise functionals the O(n m^2) marginal formula
/// sum_i sum_x (xi P^i)(x) g_i(x) is computed as well and a disagreement
/// beyond 1e-12 raises InternalError.
double exact_expectation(const PathLaw& law, const Functional& f);

/// P(f - E[f] > t), strict inequality, exact.
double exact_tail(const PathLaw& law, const Functional& f, double t);

/// As exact_tail for every threshold of a strictly increasing grid, with a
/// single enumeration pass.
std::vector<double> exact_tail_grid(const PathLaw& law, const Functional& f,
                                    std::span<const double> t_grid);

/// E[exp(f - E[f])], exact; >= 1 by Jensen.
double exact_laplace(const PathLaw& law, const Functional& f);

struct Lemma1Gap {
    double lhs = 0.0; // |E_xi[h] - E_xi'[h]|
    double rhs = 0.0; // 2 sum_i c_i d_TV(xi P^i, xi' P^i)
};

/// Both sides of the coupling inequality for bounded-difference h; the
/// caller asserts lhs <= rhs.
Lemma1Gap lemma1_gap(const MarkovKernel& p, const Distribution& xi, const Distribution& xi_prime,
                     const Functional& h);

struct GPair {
    double g = 0.0;    // suffix chain continued from the prefix endpoint
    double g_pi = 0.0; // suffix started from the invariant distribution
};

/// Conditional suffix expectations for a fixed prefix x_{0:i}:
///   g   = E[f(x_{0:i}, suffix)] with the suffix chain started from row x_i,
///   g_pi= same with the first suffix state drawn from pi.
/// At i = n-1 both equal f(prefix).
GPair g_pair(const MarkovKernel& p, const Distribution& pi, const Functional& f, std::size_t i,
             std::span<const std::size_t> prefix);

/// Conditional value tables: table j maps every prefix code x_{0:j}
/// (lexicographic, x_0 most significant) to E[f | X_{0:j} = prefix].
/// Requires m^n <= min(1e6, budget).
std::vector<std::vector<double>> conditional_expectation_tables(const MarkovKernel& p,
                                                                const Functional& f);

enum class Lemma2Exponent {
    Elapsed,  // r^{j-i}: decay measured from index i (the consistent reading)
    Absolute, // r^j: deliberately wrong reading, kept as a sharpness probe
};

struct Lemma2Violation {
    std::size_t i = 0;
    std::vector<std::size_t> prefix;
    double lhs = 0.0;
    double bound = 0.0;
};

struct Lemma2Result {
    bool pass = true;
    double worst_margin = 0.0; // max over checked pairs of lhs - bound
    std::size_t checked = 0;
    std::optional<Lemma2Violation> violation;
};

/// For every i and every prefix ending in C:
///   |g_i - g_{i,pi}| <= 2 L sum_{j=i+1}^{n-1} c_j r^{exponent} + 1e-10.
Lemma2Result lemma2_check(const MarkovKernel& p, const Distribution& pi, const SmallSet& c,
                          const Functional& f, const ErgodicityCertificate& erg,
                          Lemma2Exponent exponent = Lemma2Exponent::Elapsed);

} // namespace ergocert
