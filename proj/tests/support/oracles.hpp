#pragma once

// Test-only oracles. These deliberately avoid the library's numerical
// routines: eigenvalues come from characteristic-polynomial roots, H1 from
// boolean matrix powers, so disagreements point at real bugs.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "ergocert/kernel.hpp"

namespace testsupport {

/// Characteristic polynomial by Faddeev-LeVerrier:
/// det(lambda I - A) = lambda^m + c[0] lambda^{m-1} + ... + c[m-1].
inline std::vector<double> char_poly(const std::vector<std::vector<double>>& a) {
    const std::size_t m = a.size();
    std::vector<std::vector<double>> mk(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) mk[i][i] = 1.0;
    std::vector<double> c(m, 0.0);
    for (std::size_t k = 1; k <= m; ++k) {
        // mk <- A * mk
        std::vector<std::vector<double>> next(m, std::vector<double>(m, 0.0));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t l = 0; l < m; ++l) {
                double s = 0.0;
                for (std::size_t j = 0; j < m; ++j) s += a[i][j] * mk[j][l];
                next[i][l] = s;
            }
        }
        mk = next;
        double trace = 0.0;
        for (std::size_t i = 0; i < m; ++i) trace += mk[i][i];
        c[k - 1] = -trace / static_cast<double>(k);
        for (std::size_t i = 0; i < m; ++i) mk[i][i] += c[k - 1];
    }
    return c;
}

/// All eigenvalue moduli, sorted descending, via Durand-Kerner on the
/// characteristic polynomial.
inline std::vector<double> eigen_moduli(const std::vector<std::vector<double>>& a) {
    const std::size_t m = a.size();
    if (m == 0) return {};
    const std::vector<double> c = char_poly(a);
    using cplx = std::complex<double>;
    auto poly = [&](cplx z) {
        cplx v = 1.0;
        for (std::size_t k = 0; k < m; ++k) v = v * z + c[k];
        return v;
    };
    std::vector<cplx> roots(m);
    cplx seed(0.4, 0.9);
    cplx w = seed;
    for (std::size_t j = 0; j < m; ++j) {
        roots[j] = w;
        w *= seed;
    }
    for (int it = 0; it < 2000; ++it) {
        double moved = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            cplx denom = 1.0;
            for (std::size_t k = 0; k < m; ++k) {
                if (k != j) denom *= roots[j] - roots[k];
            }
            const cplx delta = poly(roots[j]) / denom;
            roots[j] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    std::vector<double> moduli(m);
    for (std::size_t j = 0; j < m; ++j) moduli[j] = std::abs(roots[j]);
    std::sort(moduli.begin(), moduli.end(), std::greater<>());
    return moduli;
}

inline double slem_oracle(const ergocert::MarkovKernel& p) {
    const std::size_t m = p.size();
    if (m <= 1) return 0.0;
    std::vector<std::vector<double>> a(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) a[i][j] = p.at(i, j);
    }
    return eigen_moduli(a)[1];
}

struct BruteH1 {
    bool irreducible = false;
    std::size_t period = 0;
};

/// Irreducibility by boolean transitive closure; period as the gcd of
/// {k <= 2 m^2 : P^k(0,0) > 0}.
inline BruteH1 brute_h1(const ergocert::MarkovKernel& p) {
    const std::size_t m = p.size();
    std::vector<std::vector<bool>> step(m, std::vector<bool>(m, false));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) step[i][j] = p.at(i, j) > 0.0;
    }
    std::vector<std::vector<bool>> reach = step;
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
            }
        }
    }
    BruteH1 out;
    out.irreducible = true;
    for (std::size_t i = 0; i < m && out.irreducible; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!reach[i][j]) {
                out.irreducible = false;
                break;
            }
        }
    }
    if (!out.irreducible) return out;

    std::vector<std::vector<bool>> pk = step;
    std::size_t g = 0;
    for (std::size_t k = 1; k <= 2 * m * m; ++k) {
        if (k > 1) {
            std::vector<std::vector<bool>> next(m, std::vector<bool>(m, false));
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t l = 0; l < m; ++l) {
                    if (!pk[i][l]) continue;
                    for (std::size_t j = 0; j < m; ++j) {
                        if (step[l][j]) next[i][j] = true;
                    }
                }
            }
            pk = next;
        }
        if (pk[0][0]) g = std::gcd(g, k);
    }
    out.period = g;
    return out;
}

/// Strictly positive rows: always irreducible and aperiodic.
inline ergocert::MarkovKernel random_dense_kernel(std::mt19937_64& gen, std::size_t m) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<std::vector<double>> rows(m, std::vector<double>(m));
    std::vector<std::string> labels(m);
    for (std::size_t i = 0; i < m; ++i) {
        labels[i] = "s" + std::to_string(i);
        double sum = 0.0;
        for (double& x : rows[i]) {
            x = u(gen);
            sum += x;
        }
        for (double& x : rows[i]) x /= sum;
    }
    return ergocert::validate_kernel(rows, labels);
}

/// Random support pattern per row (at least one entry); may be reducible or
/// periodic — exactly what the H1 comparison wants.
inline ergocert::MarkovKernel random_sparse_kernel(std::mt19937_64& gen, std::size_t m) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::bernoulli_distribution keep(0.35);
    std::vector<std::vector<double>> rows(m, std::vector<double>(m, 0.0));
    std::vector<std::string> labels(m);
    for (std::size_t i = 0; i < m; ++i) {
        labels[i] = "s" + std::to_string(i);
        for (std::size_t j = 0; j < m; ++j) {
            if (keep(gen)) rows[i][j] = u(gen);
        }
        rows[i][pick(gen)] += u(gen); // never an empty row
        double sum = std::accumulate(rows[i].begin(), rows[i].end(), 0.0);
        for (double& x : rows[i]) x /= sum;
    }
    return ergocert::validate_kernel(rows, labels);
}

inline ergocert::Distribution random_distribution(std::mt19937_64& gen,
                                                  const ergocert::StateSpace& space) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> w(space.size());
    double sum = 0.0;
    for (double& x : w) {
        x = u(gen);
        sum += x;
    }
    for (double& x : w) x /= sum;
    return ergocert::Distribution::validated(space, std::move(w));
}

} // namespace testsupport
