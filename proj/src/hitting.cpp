#include "ergocert/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ergocert/errors.hpp"
#include "ergocert/numerics.hpp"

namespace ergocert {

HittingTime hitting_time(std::span<const std::size_t> path, const SmallSet& c, std::size_t i) {
    for (std::size_t n = i; n < path.size(); ++n) {
        if (c.contains(path[n])) return HittingTime{n};
    }
    return HittingTime{std::nullopt};
}

namespace {

std::vector<std::size_t> complement(const SmallSet& c, std::size_t m) {
    std::vector<std::size_t> d;
    for (std::size_t x = 0; x < m; ++x) {
        if (!c.contains(x)) d.push_back(x);
    }
    return d;
}

} // namespace

double u_max(const MarkovKernel& p, const SmallSet& c) {
    const std::size_t m = p.size();
    const std::vector<std::size_t> d = complement(c, m);
    if (d.empty()) return std::numeric_limits<double>::infinity();

    auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
        out.assign(d.size(), 0.0);
        for (std::size_t a = 0; a < d.size(); ++a) {
            double s = 0.0;
            for (std::size_t b = 0; b < d.size(); ++b) s += p.at(d[a], d[b]) * v[b];
            out[a] = s;
        }
    };
    const double radius = spectral_radius_power(apply, d.size(), 1e-10, 100000);
    if (radius <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / radius;
}

std::vector<double> sigma_mgf(const MarkovKernel& p, const SmallSet& c, double u) {
    const std::size_t m = p.size();
    const double ceiling = u_max(p, c);
    if (!(u > 1.0) || !(u < ceiling - 1e-12)) {
        throw_error(ErrorCode::UOutOfRange, "u = " + std::to_string(u) + " outside (1, " +
                                                std::to_string(ceiling) + " - 1e-12)");
    }
    const std::vector<std::size_t> d = complement(c, m);

    // g(y) = E_y[u^{tau_C^0}]: 1 on C; on D solve (I - u P_DD) g_D = u P_DC 1.
    std::vector<double> g(m, 1.0);
    if (!d.empty()) {
        const std::size_t k = d.size();
        std::vector<double> a(k * k, 0.0);
        std::vector<double> b(k, 0.0);
        for (std::size_t row = 0; row < k; ++row) {
            double into_c = 0.0;
            for (std::size_t y = 0; y < m; ++y) {
                if (c.contains(y)) into_c += p.at(d[row], y);
            }
            b[row] = u * into_c;
            for (std::size_t col = 0; col < k; ++col) {
                a[row * k + col] = (row == col ? 1.0 : 0.0) - u * p.at(d[row], d[col]);
            }
        }
        const std::vector<double> g_d = solve_linear(std::move(a), std::move(b));
        for (std::size_t row = 0; row < k; ++row) g[d[row]] = g_d[row];
    }

    // sigma_C = 1 + tau_C^0 after one step.
    std::vector<double> out(m, 0.0);
    for (std::size_t x = 0; x < m; ++x) {
        CompensatedSum s;
        for (std::size_t y = 0; y < m; ++y) s.add(p.at(x, y) * g[y]);
        out[x] = u * s.value();
    }
    return out;
}

DriftCertificate drift_certificate(const MarkovKernel& p, const SmallSet& c, double u) {
    DriftCertificate cert{c, u, 0.0, sigma_mgf(p, c, u)};
    for (std::size_t x : c.indices) {
        cert.m_bound = std::max(cert.m_bound, cert.mgf[x]);
    }
    // sigma_C >= 1 gives E_x[u^sigma] >= u exactly; the solve can land a few
    // ulps under that when C covers the whole space.
    cert.m_bound = std::max(cert.m_bound, u);
    return cert;
}

namespace {

constexpr double kGridMargin = 1e-6;
constexpr double kUCeiling = 1e6;

double beta_at(const MarkovKernel& p, const SmallSet& c, const ErgodicityCertificate& erg,
               double u) {
    return beta_constant(u, drift_certificate(p, c, u).m_bound, erg.L, erg.r).beta;
}

} // namespace

DriftOptimum optimize_drift(const MarkovKernel& p, const SmallSet& c,
                            const ErgodicityCertificate& erg, std::size_t grid_size) {
    if (grid_size < 8) {
        throw_error(ErrorCode::GridTooSmall, "grid_size must be >= 8, got " + std::to_string(grid_size));
    }
    const double ceiling = std::min(u_max(p, c), kUCeiling);
    const double lo = 1.0 + kGridMargin;
    const double hi = ceiling * (1.0 - kGridMargin);
    if (!(hi > lo)) {
        throw_error(ErrorCode::EmptyRange, "u search range (1, " + std::to_string(ceiling) + ") is empty");
    }

    const double log_lo = std::log(lo);
    const double log_hi = std::log(hi);
    auto grid_point = [&](std::size_t k) {
        return std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(k) /
                                     static_cast<double>(grid_size - 1));
    };

    std::size_t best_k = 0;
    double best_beta = -1.0;
    for (std::size_t k = 0; k < grid_size; ++k) {
        const double b = beta_at(p, c, erg, grid_point(k));
        if (b > best_beta) { // strict: ties keep the smaller u
            best_beta = b;
            best_k = k;
        }
    }

    // Golden-section refinement in log u around the best grid point.
    double a = (best_k == 0) ? log_lo : std::log(grid_point(best_k - 1));
    double b = (best_k + 1 == grid_size) ? log_hi : std::log(grid_point(best_k + 1));
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = beta_at(p, c, erg, std::exp(x1));
    double f2 = beta_at(p, c, erg, std::exp(x2));
    for (int it = 0; it < 20; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = beta_at(p, c, erg, std::exp(x2));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = beta_at(p, c, erg, std::exp(x1));
        }
    }

    double best_u = grid_point(best_k);
    if (f1 > best_beta && f1 >= f2) {
        best_u = std::exp(x1);
    } else if (f2 > best_beta) {
        best_u = std::exp(x2);
    }

    DriftOptimum out{drift_certificate(p, c, best_u), BetaResult{}};
    out.beta = beta_constant(best_u, out.drift.m_bound, erg.L, erg.r);
    return out;
}

} // namespace ergocert
