#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace ergocert {

/// Neumaier-compensated accumulator. Keeps 1e-12 tolerances honest when
/// summing up to ~1e7 terms of mixed magnitude.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Dense linear solve A x = b with partial-pivot LU. Throws SolverSingular
/// when A is rank deficient (relative pivot threshold).
std::vector<double> solve_linear(std::vector<double> a_rowmajor, std::vector<double> b);

/// Spectral radius of the linear operator `apply` on R^dim by power iteration.
/// A two-step Krylov fit recovers the modulus when the dominant eigenvalue is
/// a complex pair, which plain growth ratios cannot see. Deterministic start.
/// Throws NonConvergence after `max_iter` applications.
double spectral_radius_power(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply,
                             std::size_t dim, double tol = 1e-10, std::size_t max_iter = 100000);

/// splitmix64 finalizer; the fixed 64-bit mixing function used to derive
/// per-stream seeds (documented in reports for reproducibility).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace ergocert
