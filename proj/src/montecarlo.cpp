#include "ergocert/montecarlo.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "ergocert/budget.hpp"
#include "ergocert/errors.hpp"
#include "ergocert/exact.hpp"
#include "ergocert/hitting.hpp"
#include "ergocert/numerics.hpp"

namespace ergocert {

std::uint64_t stream_seed(std::uint64_t base, std::size_t stream) {
    return mix64(base + static_cast<std::uint64_t>(stream));
}

BinomialCi clopper_pearson(std::size_t successes, std::size_t trials, double confidence) {
    if (trials == 0 || successes > trials) {
        throw_error(ErrorCode::DomainError, "invalid binomial counts");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw_error(ErrorCode::DomainError, "confidence must be in (0,1)");
    }
    using boost::math::binomial_distribution;
    const double alpha_half = (1.0 - confidence) / 2.0;
    BinomialCi ci;
    ci.low = binomial_distribution<double>::find_lower_bound_on_p(
        static_cast<double>(trials), static_cast<double>(successes), alpha_half);
    ci.high = binomial_distribution<double>::find_upper_bound_on_p(
        static_cast<double>(trials), static_cast<double>(successes), alpha_half);
    return ci;
}

std::vector<std::size_t> sample_path(const MarkovKernel& p, std::size_t x, std::size_t n, Rng& rng) {
    const std::size_t m = p.size();
    if (x >= m) throw_error(ErrorCode::IndexOutOfRange, "start state " + std::to_string(x));
    if (n < 1) throw_error(ErrorCode::HorizonTooSmall, "path length must be >= 1");

    std::vector<std::size_t> path(n);
    path[0] = x;
    for (std::size_t k = 1; k < n; ++k) {
        const double u = rng.uniform01();
        const std::size_t prev = path[k - 1];
        double cum = 0.0;
        std::size_t pick = m; // sentinel
        std::size_t last_positive = m;
        for (std::size_t y = 0; y < m; ++y) {
            const double q = p.at(prev, y);
            if (q > 0.0) last_positive = y;
            cum += q;
            if (u < cum) {
                pick = y;
                break;
            }
        }
        // u can land a rounding hair past the accumulated row sum
        path[k] = (pick < m) ? pick : last_positive;
    }
    return path;
}

namespace {

/// Split `total` samples over `streams`, earlier streams taking the
/// remainder; the partition is part of the reproducibility contract.
std::vector<std::size_t> stream_quota(std::size_t total, std::size_t streams) {
    std::vector<std::size_t> quota(streams, total / streams);
    for (std::size_t s = 0; s < total % streams; ++s) quota[s] += 1;
    return quota;
}

double mc_mean_f(const MarkovKernel& p, std::size_t x, std::size_t n, const Functional& f,
                 std::uint64_t base_seed, std::size_t first_stream, std::size_t samples,
                 std::size_t streams) {
    const auto quota = stream_quota(samples, streams);
    CompensatedSum acc;
    for (std::size_t s = 0; s < streams; ++s) {
        Rng rng(stream_seed(base_seed, first_stream + s));
        CompensatedSum local;
        for (std::size_t i = 0; i < quota[s]; ++i) {
            local.add(f.evaluate(sample_path(p, x, n, rng)));
        }
        acc.add(local.value());
    }
    return acc.value() / static_cast<double>(samples);
}

} // namespace

McTailEstimate mc_tail(const MarkovKernel& p, std::size_t x, std::size_t n, const Functional& f,
                       double t, const SampleSpec& spec) {
    if (!(t > 0.0)) throw_error(ErrorCode::DomainError, "tail threshold must be > 0");
    if (spec.samples < 1 || spec.streams < 1) {
        throw_error(ErrorCode::DomainError, "sample spec needs samples >= 1 and streams >= 1");
    }
    if (f.horizon() != n) {
        throw_error(ErrorCode::HorizonMismatch, "functional horizon != sampling horizon");
    }

    McTailEstimate out;
    const std::size_t budget = enumeration_budget();
    if (pow_or_saturate(p.size(), n, budget) <= budget) {
        out.center = exact_expectation(PathLaw(p, Distribution::dirac(p.space(), x), n), f);
        out.center_is_mc = false;
    } else {
        // Centering pass: 10x the samples on streams after the main ones.
        out.center = mc_mean_f(p, x, n, f, spec.seed, spec.streams, 10 * spec.samples, spec.streams);
        out.center_is_mc = true;
    }

    const auto quota = stream_quota(spec.samples, spec.streams);
    std::size_t exceed = 0;
    for (std::size_t s = 0; s < spec.streams; ++s) {
        Rng rng(stream_seed(spec.seed, s));
        for (std::size_t i = 0; i < quota[s]; ++i) {
            const double v = f.evaluate(sample_path(p, x, n, rng));
            if (v - out.center > t) ++exceed;
        }
    }

    out.estimate.n = spec.samples;
    out.estimate.point = static_cast<double>(exceed) / static_cast<double>(spec.samples);
    const BinomialCi ci = clopper_pearson(exceed, spec.samples);
    out.estimate.ci_low = ci.low;
    out.estimate.ci_high = ci.high;
    return out;
}

McMgfEstimate mc_sigma_mgf(const MarkovKernel& p, const SmallSet& c, std::size_t x, double u,
                           const SampleSpec& spec, std::size_t horizon_cap) {
    const double ceiling = u_max(p, c);
    if (!(u > 1.0) || !(u < ceiling - 1e-12)) {
        throw_error(ErrorCode::UOutOfRange, "u = " + std::to_string(u) + " outside (1, " +
                                                std::to_string(ceiling) + " - 1e-12)");
    }
    if (x >= p.size()) throw_error(ErrorCode::IndexOutOfRange, "start state " + std::to_string(x));
    if (spec.samples < 1 || spec.streams < 1 || horizon_cap < 1) {
        throw_error(ErrorCode::DomainError, "sample spec needs samples, streams, cap >= 1");
    }

    const auto quota = stream_quota(spec.samples, spec.streams);
    McMgfEstimate out;
    CompensatedSum sum;
    CompensatedSum sum_sq;
    const std::size_t m = p.size();
    for (std::size_t s = 0; s < spec.streams; ++s) {
        Rng rng(stream_seed(spec.seed, s));
        CompensatedSum local;
        CompensatedSum local_sq;
        for (std::size_t i = 0; i < quota[s]; ++i) {
            std::size_t state = x;
            std::size_t sigma = 0;
            for (std::size_t step = 1; step <= horizon_cap; ++step) {
                const double uu = rng.uniform01();
                double cum = 0.0;
                std::size_t pick = m;
                std::size_t last_positive = m;
                for (std::size_t y = 0; y < m; ++y) {
                    const double q = p.at(state, y);
                    if (q > 0.0) last_positive = y;
                    cum += q;
                    if (uu < cum) {
                        pick = y;
                        break;
                    }
                }
                state = (pick < m) ? pick : last_positive;
                if (c.contains(state)) {
                    sigma = step;
                    break;
                }
            }
            if (sigma == 0) {
                ++out.truncated;
            } else {
                const double v = std::pow(u, static_cast<double>(sigma));
                local.add(v);
                local_sq.add(v * v);
                ++out.hits;
            }
        }
        sum.add(local.value());
        sum_sq.add(local_sq.value());
    }

    if (out.hits > 0) {
        const double n = static_cast<double>(out.hits);
        out.mean = sum.value() / n;
        if (out.hits > 1) {
            const double var = std::max(0.0, (sum_sq.value() - n * out.mean * out.mean) / (n - 1.0));
            out.std_error = std::sqrt(var / n);
        }
    }
    return out;
}

} // namespace ergocert
