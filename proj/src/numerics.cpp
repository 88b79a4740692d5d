#include "ergocert/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

#include "ergocert/errors.hpp"

namespace ergocert {

std::vector<double> solve_linear(std::vector<double> a_rowmajor, std::vector<double> b) {
    const std::size_t n = b.size();
    if (a_rowmajor.size() != n * n) {
        throw_error(ErrorCode::DomainError, "solve_linear: matrix/vector size mismatch");
    }
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a_rowmajor[i * n + j];
        }
    }
    Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(n));

    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) {
        throw_error(ErrorCode::SolverSingular, "linear system is singular to working precision");
    }
    Eigen::VectorXd x = lu.solve(rhs);
    return std::vector<double>(x.data(), x.data() + n);
}

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void scale(std::vector<double>& v, double f) {
    for (double& x : v) x *= f;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Largest root modulus of x^2 - alpha x - gamma.
double quadratic_root_modulus(double alpha, double gamma) {
    std::complex<double> disc = std::sqrt(std::complex<double>(alpha * alpha + 4.0 * gamma, 0.0));
    std::complex<double> r1 = (alpha + disc) / 2.0;
    std::complex<double> r2 = (alpha - disc) / 2.0;
    return std::max(std::abs(r1), std::abs(r2));
}

} // namespace

double spectral_radius_power(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply,
                             std::size_t dim, double tol, std::size_t max_iter) {
    if (dim == 0) return 0.0;

    // Deterministic generic start vector.
    std::vector<double> prev(dim), curr(dim), next(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        curr[i] = 0.5 + static_cast<double>(mix64(i) >> 11) * 0x1.0p-53;
    }
    scale(curr, 1.0 / norm2(curr));

    apply(curr, next);
    double growth_prev = norm2(next);
    if (growth_prev == 0.0) return 0.0;
    prev = curr;
    curr = next;
    scale(curr, 1.0 / growth_prev);

    double est_ratio_prev = growth_prev;
    double est_quad_prev = -1.0;
    int ratio_stable = 0;
    int quad_stable = 0;

    for (std::size_t it = 1; it < max_iter; ++it) {
        apply(curr, next);
        const double growth = norm2(next);
        if (growth == 0.0) return 0.0;

        // Plain growth ratio: converges when the dominant eigenvalue is a
        // single real one.
        const double est_ratio = growth;
        if (std::abs(est_ratio - est_ratio_prev) <= tol * std::max(1.0, est_ratio)) {
            if (++ratio_stable >= 3) return est_ratio;
        } else {
            ratio_stable = 0;
        }
        est_ratio_prev = est_ratio;

        // Two-step fit: A^2 p = alpha A p + gamma p over span{curr, prev};
        // with A prev = growth_prev * curr and A curr = growth * u_next,
        // solve least squares for (alpha, gamma) and take the largest root
        // modulus of the companion quadratic.
        const double g11 = 1.0;                  // <curr, curr>
        const double g12 = dot(curr, prev);      // <curr, prev>
        const double g22 = dot(prev, prev);
        const double det = g11 * g22 - g12 * g12;
        if (std::abs(det) > 1e-12) {
            // rhs vector w = A curr (unnormalized) projected on (curr, prev)
            const double w1 = dot(next, curr);
            const double w2 = dot(next, prev);
            // Solve [g11 g12; g12 g22] [a; c] = [w1; w2] where
            // A curr ~= a * curr + c * prev; then alpha = a, gamma = c * growth_prev.
            const double a = (w1 * g22 - w2 * g12) / det;
            const double c = (w2 * g11 - w1 * g12) / det;
            const double est_quad = quadratic_root_modulus(a, c * growth_prev);
            if (est_quad_prev >= 0.0 &&
                std::abs(est_quad - est_quad_prev) <= tol * std::max(1.0, est_quad)) {
                if (++quad_stable >= 3) return est_quad;
            } else {
                quad_stable = 0;
            }
            est_quad_prev = est_quad;
        }

        prev = curr;
        curr = next;
        scale(curr, 1.0 / growth);
        growth_prev = growth;
    }
    throw_error(ErrorCode::NonConvergence, "power iteration did not converge");
}

} // namespace ergocert
