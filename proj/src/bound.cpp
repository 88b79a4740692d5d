#include "ergocert/bound.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ergocert/errors.hpp"

namespace ergocert {

BetaResult beta_constant(double u, double m_bound, double l_bound, double r) {
    if (!(u > 1.0)) throw_error(ErrorCode::DomainError, "u must be > 1, got " + std::to_string(u));
    if (!(m_bound >= u)) {
        // sigma_C >= 1 forces E[u^sigma] >= u, so any valid M is >= u
        throw_error(ErrorCode::DomainError, "M must be >= u, got M = " + std::to_string(m_bound));
    }
    if (!(l_bound >= 1.0)) throw_error(ErrorCode::DomainError, "L must be >= 1, got " + std::to_string(l_bound));
    if (!(r > 0.0 && r < 1.0)) throw_error(ErrorCode::DomainError, "r must be in (0,1), got " + std::to_string(r));

    BetaResult out;
    out.u = u;
    out.m_bound = m_bound;
    out.l_bound = l_bound;
    out.r = r;
    out.rho = std::max(r, std::pow(u, -0.25));
    out.c1 = 5.0 * l_bound / (1.0 - r);
    out.c2 = 16.0 * l_bound * l_bound / (1.0 - out.rho);
    const double paren = 5.0 / std::log(u) + 4.0 * m_bound * l_bound;
    const double one_minus_rho = 1.0 - out.rho;
    out.c3 = 4.0 * l_bound * paren / (one_minus_rho * one_minus_rho);
    out.big_c = 2.0 * out.c3;
    out.beta = 1.0 / (4.0 * out.c3);
    // (1-rho)^2 < 1 and the parenthesis exceeds 4ML >= 4u > 4, so beta is
    // always under 1/64; anything else is a computation fault.
    if (!(out.beta > 0.0) || !(out.beta < 1.0 / 64.0)) {
        throw_error(ErrorCode::InternalError, "beta left its provable range");
    }
    return out;
}

double c_norm_sq(std::span<const double> c) {
    double s = 0.0;
    for (double ci : c) s += ci * ci;
    return s;
}

namespace {

TailBound exp_tail(double rate, double t, std::span<const double> c) {
    if (!(t > 0.0)) throw_error(ErrorCode::DomainError, "t must be > 0");
    TailBound out;
    out.t = t;
    out.c_norm_sq = c_norm_sq(c);
    if (out.c_norm_sq == 0.0) {
        out.value = 1.0;
        out.degenerate = true;
        return out;
    }
    out.value = std::exp(-rate * t * t / out.c_norm_sq);
    return out;
}

} // namespace

TailBound markov_tail_bound(const BetaResult& beta, double t, std::span<const double> c) {
    return exp_tail(beta.beta, t, c);
}

TailBound iid_tail_bound(double t, std::span<const double> c) {
    return exp_tail(2.0, t, c);
}

} // namespace ergocert
