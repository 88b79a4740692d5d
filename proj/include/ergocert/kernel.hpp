#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ergocert {

/// Ordered finite state space. Labels are the user-facing names; all
/// numeric code works with indices into this ordering.
struct StateSpace {
    std::vector<std::string> labels;

    std::size_t size() const { return labels.size(); }
    bool operator==(const StateSpace& other) const { return labels == other.labels; }

    /// Index of `label`, or throws DomainError.
    std::size_t index_of(const std::string& label) const;
};

/// Row-stochastic transition matrix over a finite state space.
/// Immutable after validation; row x is the law of the next state from x.
class MarkovKernel {
public:
    const StateSpace& space() const { return space_; }
    std::size_t size() const { return space_.size(); }
    double at(std::size_t x, std::size_t y) const { return p_[x * space_.size() + y]; }
    const std::vector<double>& data() const { return p_; }

    friend MarkovKernel validate_kernel(const std::vector<std::vector<double>>& raw,
                                        const std::vector<std::string>& labels);

private:
    MarkovKernel(StateSpace space, std::vector<double> p)
        : space_(std::move(space)), p_(std::move(p)) {}

    StateSpace space_;
    std::vector<double> p_; // row-major m x m
};

/// Probability vector over a state space.
class Distribution {
public:
    /// Validating constructor: entries >= -1e-12 (tiny negatives clamped),
    /// sum within 1e-9 of 1 (then renormalized exactly).
    static Distribution validated(StateSpace space, std::vector<double> weights);

    /// Point mass at state index x.
    static Distribution dirac(StateSpace space, std::size_t x);

    /// Uniform distribution.
    static Distribution uniform(StateSpace space);

    const StateSpace& space() const { return space_; }
    std::size_t size() const { return space_.size(); }
    double at(std::size_t x) const { return w_[x]; }
    const std::vector<double>& weights() const { return w_; }

    /// Unchecked wrap for internally computed vectors (already stochastic up
    /// to roundoff).
    static Distribution unchecked(StateSpace space, std::vector<double> weights) {
        return Distribution(std::move(space), std::move(weights));
    }

private:
    Distribution(StateSpace space, std::vector<double> weights)
        : space_(std::move(space)), w_(std::move(weights)) {}

    StateSpace space_;
    std::vector<double> w_;
};

/// Nonempty subset of state indices (the distinguished set the return-time
/// and decay conditions are stated on).
struct SmallSet {
    std::vector<std::size_t> indices; // sorted, distinct

    static SmallSet of(std::vector<std::size_t> indices, std::size_t space_size);
    static SmallSet all(std::size_t space_size);

    bool contains(std::size_t x) const;
    std::size_t size() const { return indices.size(); }
};

struct H1Report {
    bool irreducible = false;
    bool aperiodic = false;
    // gcd of directed cycle lengths when irreducible; 0 when reducible
    // (undefined for the whole chain).
    std::size_t period = 0;
};

/// Validate a raw matrix: square, entries >= -1e-12 (clamped to 0), each row
/// sum within 1e-9 of 1 (renormalized to sum exactly 1), labels distinct.
MarkovKernel validate_kernel(const std::vector<std::vector<double>>& raw,
                             const std::vector<std::string>& labels);

/// Total variation distance, half-L1 convention:
/// d_TV(mu, nu) = sup_A |mu(A) - nu(A)| = (1/2) sum_x |mu(x) - nu(x)|.
double tv_distance(const Distribution& mu, const Distribution& nu);

/// Unique invariant probability pi with pi P = pi, by direct linear solve of
/// (P^T - I) pi = 0 with the normalization sum(pi) = 1. Requires
/// irreducibility; the result satisfies ||pi P - pi||_inf <= 1e-12.
Distribution stationary_distribution(const MarkovKernel& p);

/// Irreducibility via strong connectivity of {(x,y): P(x,y) > 0}; period via
/// the BFS-level gcd of l(x)+1-l(y) over edges. O(m + edges), exact.
H1Report check_h1(const MarkovKernel& p);

/// xi P^i. i = 0 returns xi unchanged.
Distribution marginal(const Distribution& xi, const MarkovKernel& p, std::size_t i);

} // namespace ergocert
