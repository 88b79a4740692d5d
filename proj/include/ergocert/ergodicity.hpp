#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ergocert/kernel.hpp"

namespace ergocert {

/// Exact TV decay from the small set: d[n] = max_{x in C} d_TV(delta_x P^n, pi),
/// computed on the horizon 0..N.
struct TvDecayProfile {
    std::vector<double> d; // size N+1
    std::size_t horizon = 0;

    /// CSV with columns n, d_n, L*r^n (the fitted envelope).
    std::string to_csv(double L, double r) const;
};

enum class CertificateMode { Empirical, UserSupplied };

/// Geometric-decay certificate: d_TV(delta_x P^n, pi) <= L r^n for all
/// x in C and n <= horizon. L >= 1, r in (0,1). `residual` is d[horizon].
struct ErgodicityCertificate {
    double L = 1.0;
    double r = 0.0;
    std::size_t horizon = 0;
    CertificateMode mode = CertificateMode::Empirical;
    double residual = 0.0;
};

/// Compute the decay profile by iterating delta_x through n matrix-vector
/// products for each x in C. N >= 1.
TvDecayProfile tv_decay_profile(const MarkovKernel& p, const SmallSet& c,
                                const Distribution& pi, std::size_t n_horizon);

/// Second-largest eigenvalue modulus of P: power iteration on the subspace
/// orthogonal to constants in the pi-weighted sense (i.e. pi^T v = 0), with
/// the leading eigenvalue deflated as B = P - 1 pi^T. Tolerance 1e-10.
double slem(const MarkovKernel& p);

/// Fit (L, r): r = r_override if given, else the max of slem and the
/// empirical tail ratios d[n+1]/d[n] over n in [ceil(N/2), N-1] (only where
/// d[n] > 1e-14), floored at 1e-6 and capped below 1; candidates >= 1 mean
/// the profile shows no geometric decay. L = max(1, max_n d[n]/r^n).
ErgodicityCertificate fit_ergodicity(const MarkovKernel& p, const SmallSet& c,
                                     const Distribution& pi, std::size_t n_horizon,
                                     std::optional<double> r_override = std::nullopt);

/// Default profile horizon: ten relaxation times, at least 50, at most 1e4.
std::size_t default_decay_horizon(double slem_value);

} // namespace ergocert
