#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ergocert/bound.hpp"
#include "ergocert/ergodicity.hpp"
#include "ergocert/kernel.hpp"

namespace ergocert {

/// tau_C^i on a finite path: the smallest n >= i with path[n] in C, or
/// not-within-horizon (finite paths legitimately never hit).
struct HittingTime {
    std::optional<std::size_t> value;

    bool within_horizon() const { return value.has_value(); }
};

/// Return-time moment condition: sup_{x in C} E_x[u^{sigma_C}] <= M with
/// u > 1. `mgf[x]` is E_x[u^{sigma_C}] for every state x; M is taken tight.
struct DriftCertificate {
    SmallSet c;
    double u = 0.0;
    double m_bound = 0.0;
    std::vector<double> mgf;
};

/// First hit of C at or after index i: inf{n >= i : path[n] in C}.
/// sigma_C is hitting_time(path, C, 1).
HittingTime hitting_time(std::span<const std::size_t> path, const SmallSet& c, std::size_t i);

/// Supremum of u for which E_x[u^{sigma_C}] stays finite: 1/rho(P_DD) where
/// D is the complement of C (+inf when D is empty or never returns mass).
double u_max(const MarkovKernel& p, const SmallSet& c);

/// E_x[u^{sigma_C}] for every x, by solving g = u P_DD g + u P_DC 1 on D
/// (unique for u < u_max), g = 1 on C, then one forward step
/// E_x[u^{sigma_C}] = u sum_y P(x,y) g(y). Requires 1 < u < u_max - 1e-12.
std::vector<double> sigma_mgf(const MarkovKernel& p, const SmallSet& c, double u);

/// Assemble the certificate with M = max_{x in C} E_x[u^{sigma_C}].
DriftCertificate drift_certificate(const MarkovKernel& p, const SmallSet& c, double u);

struct DriftOptimum {
    DriftCertificate drift;
    BetaResult beta;
};

/// Maximize beta(u, M(u), L, r) over u: geometric grid of `grid_size`
/// points on (1+1e-6, min(u_max, 1e6)(1-1e-6)), then golden-section
/// refinement around the best grid point (20 iterations, in log u).
/// Ties break toward smaller u; the result is never below the best grid
/// point. grid_size >= 8.
DriftOptimum optimize_drift(const MarkovKernel& p, const SmallSet& c,
                            const ErgodicityCertificate& erg, std::size_t grid_size);

} // namespace ergocert
