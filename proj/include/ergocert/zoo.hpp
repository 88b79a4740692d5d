#pragma once

#include <span>
#include <string>
#include <vector>

#include "ergocert/chain_spec.hpp"

namespace ergocert {

struct ZooEntry {
    std::string name;
    std::string summary;
    ChainSpec (*make)();
};

/// Built-in benchmark chains, each a complete runnable chain spec.
std::span<const ZooEntry> zoo_registry();

/// Spec for a registry entry by name; throws UnknownZooEntry.
ChainSpec zoo_chain(const std::string& name);

// Parametric builders behind the registry (the registry instantiates
// defaults; tests sweep parameters).

/// Two states, P = [[1-a, a], [b, 1-b]]; C = {0}.
ChainSpec two_state_chain(double a, double b, std::size_t horizon);

/// Lazy cyclic walk on m states: stay with probability `laziness`, else step
/// to the next state around the cycle; C = {0}.
ChainSpec lazy_cycle_chain(std::size_t m, double laziness, std::size_t horizon);

/// Birth-death walk on {0..m-1}: up with probability `up`, down with `down`,
/// stay otherwise (boundary moves fold into staying); C = {0}.
ChainSpec birth_death_chain(std::size_t m, double up, double down, std::size_t horizon);

/// Independent draws: every row equals pi; C = all states.
ChainSpec iid_chain(std::vector<double> pi, std::size_t horizon);

/// Metropolis walk on a path graph targeting a bimodal distribution
/// pi_i ~ exp(-depth * tent(i)) (modes at both ends, barrier in the middle);
/// +-1 proposals, rejected moves stay. Slow mixing grows with depth. C = {0}.
ChainSpec metropolis_two_valley_chain(std::size_t m, double depth, std::size_t horizon);

} // namespace ergocert
