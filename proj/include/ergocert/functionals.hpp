#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ergocert {

enum class FunctionalKind { Additive, Occupation, SupOfClass, Tabulated };

const char* functional_kind_name(FunctionalKind kind);

/// A functional f : X^n -> R with Hamming-weighted sensitivity
/// |f(x) - f(y)| <= sum_i c_i 1{x_i != y_i}. The additive, occupation and
/// sup-of-class constructors guarantee membership for their derived c;
/// tabulated functionals are checked exhaustively against theirs.
class Functional {
public:
    /// f(x) = sum_i g_i(x_i), one value table per coordinate (n tables of
    /// m entries). Derived c_i = max g_i - min g_i.
    static Functional additive(std::size_t m, std::vector<std::vector<double>> tables,
                               std::optional<std::vector<double>> c = std::nullopt);

    /// f(x) = sum_i w_i 1{x_i in A}. Empty `weights` means all ones.
    static Functional occupation(std::size_t m, std::size_t n, std::vector<std::size_t> target,
                                 std::vector<double> weights = {},
                                 std::optional<std::vector<double>> c = std::nullopt);

    /// f(x) = max_g sum_i g(x_i) over a finite class of per-state tables.
    /// Derived common c_i = max_g (max g - min g).
    static Functional sup_of_class(std::size_t m, std::size_t n,
                                   std::vector<std::vector<double>> member_tables,
                                   std::optional<std::vector<double>> c = std::nullopt);

    /// Explicit value for every tuple, lexicographic order with x_0 most
    /// significant (index = sum_k x_k m^{n-1-k}). Capped at m^n <= 1e6.
    /// A supplied c must pass bd_check; otherwise c = minimal_c(f).
    static Functional tabulated(std::size_t m, std::size_t n, std::vector<double> values,
                                std::optional<std::vector<double>> c = std::nullopt);

    double evaluate(std::span<const std::size_t> path) const;

    /// Same functional scaled by s > 0; sensitivity vector scales with it.
    Functional scaled(double s) const;

    FunctionalKind kind() const { return kind_; }
    std::size_t horizon() const { return n_; }
    std::size_t space_size() const { return m_; }
    const std::vector<double>& c() const { return c_; }

    /// Per-coordinate value tables; empty unless additive/occupation.
    std::span<const std::vector<double>> coordinate_tables() const { return tables_; }

    /// Member tables of a sup-of-class functional; empty otherwise.
    std::span<const std::vector<double>> class_members() const { return members_; }

    /// Occupation bookkeeping (sorted target states, per-coordinate weights);
    /// empty for other kinds.
    const std::vector<std::size_t>& occupation_target() const { return target_; }
    const std::vector<double>& occupation_weights() const { return weights_; }

private:
    Functional() = default;

    FunctionalKind kind_ = FunctionalKind::Additive;
    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::vector<double> c_;

    // additive / occupation: per-coordinate value tables (n x m)
    std::vector<std::vector<double>> tables_;
    // sup-of-class: one table per member (k x m)
    std::vector<std::vector<double>> members_;
    // tabulated: m^n values
    std::vector<double> values_;
    // occupation bookkeeping for reports
    std::vector<std::size_t> target_;
    std::vector<double> weights_;

    friend struct FunctionalInternals;
};

/// First per-coordinate violation of |f(x) - f(x with coord i replaced)|
/// <= c_i + 1e-12, if any.
struct BdViolation {
    std::size_t coordinate = 0;
    std::vector<std::size_t> tuple;
    std::size_t replacement = 0;
    double excess = 0.0;
};

/// Exhaustive membership check (per-coordinate form; equivalent to the
/// two-sided inequality by the triangle inequality). Requires m^n <= 1e6.
std::optional<BdViolation> bd_check(const Functional& f, std::span<const double> c);

/// Tightest per-coordinate sensitivity: c*_i = max_{x, y_i} |f(x) - f(x^{i->y_i})|.
std::vector<double> minimal_c(const Functional& f);

} // namespace ergocert
