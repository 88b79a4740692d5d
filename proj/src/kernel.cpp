#include "ergocert/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

#include "ergocert/errors.hpp"
#include "ergocert/numerics.hpp"

namespace ergocert {

namespace {

constexpr double kEntryTol = 1e-12;  // entries below -kEntryTol are rejected
constexpr double kRowSumTol = 1e-9;  // row sums beyond this are rejected, closer ones renormalized

} // namespace

std::size_t StateSpace::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) return i;
    }
    throw_error(ErrorCode::DomainError, "unknown state label '" + label + "'");
}

MarkovKernel validate_kernel(const std::vector<std::vector<double>>& raw,
                             const std::vector<std::string>& labels) {
    const std::size_t m = labels.size();
    if (m == 0) {
        throw_error(ErrorCode::NotSquare, "state space is empty");
    }
    {
        std::set<std::string> seen;
        for (const auto& l : labels) {
            if (!seen.insert(l).second) {
                throw_error(ErrorCode::DuplicateLabel, "label '" + l + "' appears twice");
            }
        }
    }
    if (raw.size() != m) {
        throw_error(ErrorCode::NotSquare, "matrix has " + std::to_string(raw.size()) +
                                              " rows for " + std::to_string(m) + " states");
    }

    std::vector<double> p(m * m);
    for (std::size_t x = 0; x < m; ++x) {
        if (raw[x].size() != m) {
            throw_error(ErrorCode::NotSquare, "row " + std::to_string(x) + " has " +
                                                  std::to_string(raw[x].size()) + " entries");
        }
        double sum = 0.0;
        for (std::size_t y = 0; y < m; ++y) {
            double e = raw[x][y];
            if (e < -kEntryTol) {
                throw_error(ErrorCode::NegativeEntry,
                            "P(" + std::to_string(x) + "," + std::to_string(y) + ") = " + std::to_string(e));
            }
            e = std::max(e, 0.0);
            p[x * m + y] = e;
            sum += e;
        }
        if (std::abs(sum - 1.0) > kRowSumTol) {
            throw_error(ErrorCode::RowSumOutOfTolerance,
                        "row " + std::to_string(x) + " sums to " + std::to_string(sum));
        }
        for (std::size_t y = 0; y < m; ++y) p[x * m + y] /= sum;
    }
    return MarkovKernel(StateSpace{labels}, std::move(p));
}

Distribution Distribution::validated(StateSpace space, std::vector<double> weights) {
    const std::size_t m = space.size();
    if (weights.size() != m) {
        throw_error(ErrorCode::LengthMismatch, "distribution has " + std::to_string(weights.size()) +
                                                   " weights for " + std::to_string(m) + " states");
    }
    double sum = 0.0;
    for (double& w : weights) {
        if (w < -kEntryTol) {
            throw_error(ErrorCode::NegativeEntry, "negative weight " + std::to_string(w));
        }
        w = std::max(w, 0.0);
        sum += w;
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
        throw_error(ErrorCode::RowSumOutOfTolerance, "weights sum to " + std::to_string(sum));
    }
    for (double& w : weights) w /= sum;
    return Distribution(std::move(space), std::move(weights));
}

Distribution Distribution::dirac(StateSpace space, std::size_t x) {
    if (x >= space.size()) {
        throw_error(ErrorCode::IndexOutOfRange, "dirac index " + std::to_string(x));
    }
    std::vector<double> w(space.size(), 0.0);
    w[x] = 1.0;
    return Distribution(std::move(space), std::move(w));
}

Distribution Distribution::uniform(StateSpace space) {
    const std::size_t m = space.size();
    std::vector<double> w(m, 1.0 / static_cast<double>(m));
    return Distribution(std::move(space), std::move(w));
}

SmallSet SmallSet::of(std::vector<std::size_t> indices, std::size_t space_size) {
    if (indices.empty()) {
        throw_error(ErrorCode::DomainError, "small set must be nonempty");
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    if (indices.back() >= space_size) {
        throw_error(ErrorCode::IndexOutOfRange,
                    "small set index " + std::to_string(indices.back()) + " out of range");
    }
    return SmallSet{std::move(indices)};
}

SmallSet SmallSet::all(std::size_t space_size) {
    std::vector<std::size_t> idx(space_size);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return SmallSet::of(std::move(idx), space_size);
}

bool SmallSet::contains(std::size_t x) const {
    return std::binary_search(indices.begin(), indices.end(), x);
}

double tv_distance(const Distribution& mu, const Distribution& nu) {
    if (!(mu.space() == nu.space())) {
        throw_error(ErrorCode::SpaceMismatch, "tv_distance over different state spaces");
    }
    CompensatedSum l1;
    for (std::size_t x = 0; x < mu.size(); ++x) {
        l1.add(std::abs(mu.at(x) - nu.at(x)));
    }
    return 0.5 * l1.value();
}

Distribution stationary_distribution(const MarkovKernel& p) {
    const H1Report h1 = check_h1(p);
    if (!h1.irreducible) {
        throw_error(ErrorCode::NotIrreducible, "stationary distribution requires irreducibility");
    }
    const std::size_t m = p.size();
    // Rows 0..m-2: (P^T - I) pi = 0; last row: sum(pi) = 1. The dropped
    // balance equation is implied by the others plus normalization.
    std::vector<double> a(m * m, 0.0);
    std::vector<double> b(m, 0.0);
    for (std::size_t r = 0; r + 1 < m; ++r) {
        for (std::size_t x = 0; x < m; ++x) {
            a[r * m + x] = p.at(x, r) - (x == r ? 1.0 : 0.0);
        }
    }
    for (std::size_t x = 0; x < m; ++x) a[(m - 1) * m + x] = 1.0;
    b[m - 1] = 1.0;

    std::vector<double> pi = solve_linear(std::move(a), std::move(b));
    for (double& w : pi) w = std::max(w, 0.0);
    double sum = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (double& w : pi) w /= sum;
    return Distribution::unchecked(p.space(), std::move(pi));
}

namespace {

std::vector<std::vector<std::size_t>> adjacency(const MarkovKernel& p) {
    const std::size_t m = p.size();
    std::vector<std::vector<std::size_t>> adj(m);
    for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t y = 0; y < m; ++y) {
            if (p.at(x, y) > 0.0) adj[x].push_back(y);
        }
    }
    return adj;
}

std::vector<bool> reachable_from(const std::vector<std::vector<std::size_t>>& adj, std::size_t s) {
    std::vector<bool> seen(adj.size(), false);
    std::queue<std::size_t> q;
    seen[s] = true;
    q.push(s);
    while (!q.empty()) {
        std::size_t x = q.front();
        q.pop();
        for (std::size_t y : adj[x]) {
            if (!seen[y]) {
                seen[y] = true;
                q.push(y);
            }
        }
    }
    return seen;
}

} // namespace

H1Report check_h1(const MarkovKernel& p) {
    const std::size_t m = p.size();
    const auto adj = adjacency(p);
    std::vector<std::vector<std::size_t>> radj(m);
    for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t y : adj[x]) radj[y].push_back(x);
    }

    // Strongly connected iff every state reaches and is reached by state 0.
    const auto fwd = reachable_from(adj, 0);
    const auto bwd = reachable_from(radj, 0);
    H1Report report;
    report.irreducible = std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
                         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
    if (!report.irreducible) {
        report.period = 0;
        report.aperiodic = false;
        return report;
    }

    // BFS levels from state 0; gcd of l(x)+1-l(y) over all edges gives the
    // gcd of all directed cycle lengths.
    std::vector<long long> level(m, -1);
    std::queue<std::size_t> q;
    level[0] = 0;
    q.push(0);
    while (!q.empty()) {
        std::size_t x = q.front();
        q.pop();
        for (std::size_t y : adj[x]) {
            if (level[y] < 0) {
                level[y] = level[x] + 1;
                q.push(y);
            }
        }
    }
    long long g = 0;
    for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t y : adj[x]) {
            g = std::gcd(g, level[x] + 1 - level[y]);
        }
    }
    report.period = static_cast<std::size_t>(std::abs(g));
    report.aperiodic = report.period == 1;
    return report;
}

Distribution marginal(const Distribution& xi, const MarkovKernel& p, std::size_t i) {
    if (!(xi.space() == p.space())) {
        throw_error(ErrorCode::SpaceMismatch, "marginal over different state spaces");
    }
    const std::size_t m = p.size();
    std::vector<double> w = xi.weights();
    std::vector<double> next(m);
    for (std::size_t step = 0; step < i; ++step) {
        for (std::size_t y = 0; y < m; ++y) {
            CompensatedSum s;
            for (std::size_t x = 0; x < m; ++x) s.add(w[x] * p.at(x, y));
            next[y] = s.value();
        }
        w.swap(next);
    }
    return Distribution::unchecked(xi.space(), std::move(w));
}

} // namespace ergocert
