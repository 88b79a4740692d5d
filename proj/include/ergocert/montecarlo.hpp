#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ergocert/functionals.hpp"
#include "ergocert/kernel.hpp"

namespace ergocert {

/// Seeded sampling plan. Stream s draws from its own generator seeded with
/// mix64(seed + s) (splitmix64 finalizer), so parallel and serial execution
/// aggregate to bit-identical results.
struct SampleSpec {
    std::uint64_t seed = 1;
    std::size_t samples = 100000;
    std::size_t streams = 1;
};

/// Deterministic generator: mt19937_64 with the documented seed mix;
/// uniforms via the 53-bit mantissa map (x >> 11) * 2^-53.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t stream_seed(std::uint64_t base, std::size_t stream);

struct TailEstimate {
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::size_t n = 0;
};

struct McTailEstimate {
    TailEstimate estimate;
    double center = 0.0;   // the expectation the exceedances are measured from
    bool center_is_mc = false;
};

struct McMgfEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t hits = 0;
    std::size_t truncated = 0; // trajectories that never returned within the cap

    bool is_lower_bound() const { return truncated > 0; }
};

/// Exact two-sided binomial (Clopper-Pearson) interval.
struct BinomialCi {
    double low = 0.0;
    double high = 1.0;
};
BinomialCi clopper_pearson(std::size_t successes, std::size_t trials, double confidence = 0.99);

/// Sample a trajectory of length n started at x. Each step consumes one
/// uniform and picks the next state by inverse-CDF lookup on the row.
std::vector<std::size_t> sample_path(const MarkovKernel& p, std::size_t x, std::size_t n, Rng& rng);

/// Estimate P(f - E > t). The centering constant comes from
/// exact_expectation when m^n fits the budget, otherwise from a separate
/// Monte Carlo pass with 10x the samples (flagged via center_is_mc).
McTailEstimate mc_tail(const MarkovKernel& p, std::size_t x, std::size_t n, const Functional& f,
                       double t, const SampleSpec& spec);

/// Empirical E_x[u^{sigma_C}] over trajectories that return to C within
/// horizon_cap steps; a lower bound when any trajectory was truncated.
McMgfEstimate mc_sigma_mgf(const MarkovKernel& p, const SmallSet& c, std::size_t x, double u,
                           const SampleSpec& spec, std::size_t horizon_cap = 10000);

} // namespace ergocert
