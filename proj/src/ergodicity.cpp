#include "ergocert/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ergocert/errors.hpp"
#include "ergocert/numerics.hpp"

namespace ergocert {

std::string TvDecayProfile::to_csv(double L, double r) const {
    std::ostringstream out;
    out.precision(17);
    out << "n,d_n,Lr^n\n";
    double env = L;
    for (std::size_t n = 0; n < d.size(); ++n) {
        out << n << "," << d[n] << "," << env << "\n";
        env *= r;
    }
    return out.str();
}

TvDecayProfile tv_decay_profile(const MarkovKernel& p, const SmallSet& c,
                                const Distribution& pi, std::size_t n_horizon) {
    if (n_horizon < 1) {
        throw_error(ErrorCode::HorizonTooSmall, "decay horizon must be >= 1");
    }
    TvDecayProfile profile;
    profile.horizon = n_horizon;
    profile.d.assign(n_horizon + 1, 0.0);
    for (std::size_t x : c.indices) {
        Distribution mu = Distribution::dirac(p.space(), x);
        profile.d[0] = std::max(profile.d[0], tv_distance(mu, pi));
        for (std::size_t n = 1; n <= n_horizon; ++n) {
            mu = marginal(mu, p, 1);
            profile.d[n] = std::max(profile.d[n], tv_distance(mu, pi));
        }
    }
    return profile;
}

double slem(const MarkovKernel& p) {
    const std::size_t m = p.size();
    if (m == 1) return 0.0;
    const Distribution pi = stationary_distribution(p);

    // B = P - 1 pi^T kills the Perron pair and keeps every other eigenvalue;
    // iterates stay pi-orthogonal to constants (pi^T B v = 0), re-projected
    // each step against drift.
    auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
        out.assign(m, 0.0);
        double piv = 0.0;
        for (std::size_t x = 0; x < m; ++x) piv += pi.at(x) * v[x];
        for (std::size_t x = 0; x < m; ++x) {
            double s = 0.0;
            for (std::size_t y = 0; y < m; ++y) s += p.at(x, y) * v[y];
            out[x] = s - piv;
        }
        double pio = 0.0;
        for (std::size_t x = 0; x < m; ++x) pio += pi.at(x) * out[x];
        for (std::size_t x = 0; x < m; ++x) out[x] -= pio;
    };
    return spectral_radius_power(apply, m, 1e-10, 100000);
}

std::size_t default_decay_horizon(double slem_value) {
    std::size_t n = 50;
    if (slem_value < 1.0) {
        const double relax = 10.0 / (1.0 - slem_value);
        if (relax > static_cast<double>(n)) {
            n = static_cast<std::size_t>(std::ceil(relax));
        }
    } else {
        n = 10000;
    }
    return std::min<std::size_t>(n, 10000);
}

ErgodicityCertificate fit_ergodicity(const MarkovKernel& p, const SmallSet& c,
                                     const Distribution& pi, std::size_t n_horizon,
                                     std::optional<double> r_override) {
    if (n_horizon < 10) {
        throw_error(ErrorCode::HorizonTooSmall, "fit horizon must be >= 10");
    }
    const TvDecayProfile profile = tv_decay_profile(p, c, pi, n_horizon);

    double r;
    CertificateMode mode;
    if (r_override) {
        if (!(*r_override > 0.0 && *r_override < 1.0)) {
            throw_error(ErrorCode::InvalidOverride,
                        "r override " + std::to_string(*r_override) + " not in (0,1)");
        }
        r = *r_override;
        mode = CertificateMode::UserSupplied;
    } else {
        double candidate = slem(p);
        // Tail-ratio guard: robust to Jordan blocks and polynomial
        // prefactors the asymptotic rate alone would miss on this horizon.
        const std::size_t lo = (n_horizon + 1) / 2;
        for (std::size_t n = lo; n + 1 <= n_horizon; ++n) {
            if (profile.d[n] > 1e-14) {
                candidate = std::max(candidate, profile.d[n + 1] / profile.d[n]);
            }
        }
        if (candidate >= 1.0) {
            throw_error(ErrorCode::NoGeometricDecay,
                        "decay rate candidate " + std::to_string(candidate) + " is >= 1");
        }
        r = std::clamp(candidate, 1e-6, 1.0 - 1e-12);
        mode = CertificateMode::Empirical;
    }

    // Profile values at or below 1e-13 are indistinguishable from roundoff
    // and already inside the certificate's 1e-12 slack; they must not
    // inflate L (r^n underflows long before d does on floored-r fits).
    double L = 1.0;
    double rn = 1.0;
    for (std::size_t n = 0; n <= n_horizon; ++n) {
        if (profile.d[n] > 1e-13) {
            if (rn == 0.0) {
                throw_error(ErrorCode::NoGeometricDecay,
                            "r^n underflowed while d[" + std::to_string(n) + "] is still positive");
            }
            if (profile.d[n] > L * rn) L = profile.d[n] / rn;
        }
        rn *= r;
    }

    ErgodicityCertificate cert;
    cert.L = L;
    cert.r = r;
    cert.horizon = n_horizon;
    cert.mode = mode;
    cert.residual = profile.d[n_horizon];
    return cert;
}

} // namespace ergocert
