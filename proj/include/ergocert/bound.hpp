#pragma once

#include <span>
#include <vector>

namespace ergocert {

/// The explicit constant of the Markov-chain bounded-difference tail bound,
/// together with every intermediate constant for audit:
///   rho   = max(r, u^{-1/4})
///   c1    = 5 L / (1 - r)
///   c2    = 16 L^2 / (1 - rho)
///   c3    = 4 L (5/log u + 4 M L) / (1 - rho)^2
///   big_c = 2 c3
///   beta  = 1/(4 c3) = (1 - rho)^2 / (16 L) * (5/log u + 4 M L)^{-1}
struct BetaResult {
    double beta = 0.0;
    double rho = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double big_c = 0.0;
    // inputs echoed
    double u = 0.0;
    double m_bound = 0.0;
    double l_bound = 0.0;
    double r = 0.0;
};

struct TailBound {
    double t = 0.0;
    double c_norm_sq = 0.0;
    double value = 1.0;
    // all c_i = 0: the functional is constant and the bound is vacuous
    bool degenerate = false;
};

/// Evaluate the constants. Requires u > 1, M >= u, L >= 1, r in (0,1).
BetaResult beta_constant(double u, double m_bound, double l_bound, double r);

/// exp(-beta t^2 / ||c||^2) for t > 0.
TailBound markov_tail_bound(const BetaResult& beta, double t, std::span<const double> c);

/// The independent-coordinates baseline exp(-2 t^2 / ||c||^2).
TailBound iid_tail_bound(double t, std::span<const double> c);

double c_norm_sq(std::span<const double> c);

} // namespace ergocert
