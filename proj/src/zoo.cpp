#include "ergocert/zoo.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include "ergocert/errors.hpp"

namespace ergocert {

namespace {

std::vector<std::string> index_labels(std::size_t m) {
    std::vector<std::string> labels(m);
    for (std::size_t i = 0; i < m; ++i) labels[i] = std::to_string(i);
    return labels;
}

/// Ten thresholds k/10 * sum(c), k = 1..10, for unit-weight counting
/// functionals (sum(c) = horizon).
std::vector<double> default_t_grid(double c_sum) {
    std::vector<double> t(10);
    for (std::size_t k = 0; k < 10; ++k) {
        t[k] = c_sum * static_cast<double>(k + 1) / 10.0;
    }
    return t;
}

SampleSpec default_mc() { return SampleSpec{42, 100000, 4}; }

ChainSpec finish(std::vector<std::string> states, std::vector<std::vector<double>> matrix,
                 std::vector<std::string> small_set, std::string start, std::size_t horizon,
                 std::vector<std::string> target) {
    ChainSpec spec;
    spec.states = std::move(states);
    spec.matrix = std::move(matrix);
    spec.small_set = std::move(small_set);
    spec.start = std::move(start);
    spec.horizon = horizon;
    spec.functional.kind = FunctionalKind::Occupation;
    spec.functional.target = std::move(target);
    spec.t_grid = default_t_grid(static_cast<double>(horizon));
    spec.mc = default_mc();
    return spec;
}

} // namespace

ChainSpec two_state_chain(double a, double b, std::size_t horizon) {
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0)) {
        throw_error(ErrorCode::DomainError, "two-state chain needs a, b in (0,1)");
    }
    return finish(index_labels(2), {{1.0 - a, a}, {b, 1.0 - b}}, {"0"}, "0", horizon, {"1"});
}

ChainSpec lazy_cycle_chain(std::size_t m, double laziness, std::size_t horizon) {
    if (m < 2 || !(laziness > 0.0 && laziness < 1.0)) {
        throw_error(ErrorCode::DomainError, "lazy cycle needs m >= 2 and laziness in (0,1)");
    }
    std::vector<std::vector<double>> p(m, std::vector<double>(m, 0.0));
    for (std::size_t x = 0; x < m; ++x) {
        p[x][x] = laziness;
        p[x][(x + 1) % m] = 1.0 - laziness;
    }
    return finish(index_labels(m), std::move(p), {"0"}, "0", horizon, {"0"});
}

ChainSpec birth_death_chain(std::size_t m, double up, double down, std::size_t horizon) {
    if (m < 2 || !(up > 0.0) || !(down > 0.0) || !(up + down <= 1.0)) {
        throw_error(ErrorCode::DomainError, "birth-death needs up, down > 0 with up + down <= 1");
    }
    std::vector<std::vector<double>> p(m, std::vector<double>(m, 0.0));
    for (std::size_t x = 0; x < m; ++x) {
        double stay = 1.0 - up - down;
        if (x + 1 < m) {
            p[x][x + 1] = up;
        } else {
            stay += up;
        }
        if (x > 0) {
            p[x][x - 1] = down;
        } else {
            stay += down;
        }
        p[x][x] = stay;
    }
    return finish(index_labels(m), std::move(p), {"0"}, "0", horizon,
                  {std::to_string(m - 1)});
}

ChainSpec iid_chain(std::vector<double> pi, std::size_t horizon) {
    const std::size_t m = pi.size();
    if (m < 1) throw_error(ErrorCode::DomainError, "iid chain needs a nonempty distribution");
    const double sum = std::accumulate(pi.begin(), pi.end(), 0.0);
    if (!(sum > 0.0)) throw_error(ErrorCode::DomainError, "iid weights must have positive mass");
    for (double& w : pi) w /= sum;
    std::vector<std::vector<double>> p(m, pi);
    std::vector<std::string> all(m);
    for (std::size_t i = 0; i < m; ++i) all[i] = std::to_string(i);
    return finish(index_labels(m), std::move(p), all, "0", horizon,
                  {std::to_string(m - 1)});
}

ChainSpec metropolis_two_valley_chain(std::size_t m, double depth, std::size_t horizon) {
    if (m < 3 || !(depth > 0.0)) {
        throw_error(ErrorCode::DomainError, "metropolis chain needs m >= 3 and depth > 0");
    }
    // Bimodal target: potential peaks mid-path, so the density has a mode at
    // each end separated by a low-probability barrier.
    std::vector<double> target(m);
    const double mid = static_cast<double>(m - 1) / 2.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double tent = 1.0 - std::abs(static_cast<double>(i) - mid) / mid;
        target[i] = std::exp(-depth * tent);
    }

    std::vector<std::vector<double>> p(m, std::vector<double>(m, 0.0));
    for (std::size_t x = 0; x < m; ++x) {
        double stay = 0.0;
        for (int dir : {-1, +1}) {
            const double proposal = 0.5;
            if ((dir < 0 && x == 0) || (dir > 0 && x + 1 == m)) {
                stay += proposal; // off-grid proposal rejected
                continue;
            }
            const std::size_t y = (dir < 0) ? x - 1 : x + 1;
            const double accept = std::min(1.0, target[y] / target[x]);
            p[x][y] = proposal * accept;
            stay += proposal * (1.0 - accept);
        }
        p[x][x] = stay;
    }
    return finish(index_labels(m), std::move(p), {"0"}, "0", horizon,
                  {std::to_string(m - 1)});
}

namespace {

ChainSpec make_two_state() { return two_state_chain(0.1, 0.2, 8); }
ChainSpec make_lazy_cycle() { return lazy_cycle_chain(3, 0.5, 8); }
ChainSpec make_birth_death() { return birth_death_chain(3, 0.3, 0.2, 8); }
ChainSpec make_iid() { return iid_chain({0.5, 0.3, 0.2}, 8); }
ChainSpec make_metropolis() { return metropolis_two_valley_chain(7, 4.0, 8); }

const std::array<ZooEntry, 5> kRegistry{{
    {"two-state", "two-state chain, a = 0.1, b = 0.2", &make_two_state},
    {"lazy-cycle", "lazy cyclic walk on 3 states, laziness 0.5", &make_lazy_cycle},
    {"birth-death", "birth-death walk on 3 states, p = 0.3, q = 0.2", &make_birth_death},
    {"iid", "independent draws from (0.5, 0.3, 0.2)", &make_iid},
    {"metropolis-two-valley", "Metropolis walk on 7 states with a bimodal target (slow mixing)",
     &make_metropolis},
}};

} // namespace

std::span<const ZooEntry> zoo_registry() { return kRegistry; }

ChainSpec zoo_chain(const std::string& name) {
    for (const auto& entry : kRegistry) {
        if (entry.name == name) return entry.make();
    }
    throw_error(ErrorCode::UnknownZooEntry, "no zoo entry named '" + name + "'");
}

} // namespace ergocert
