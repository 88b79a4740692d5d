#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "ergocert/chain_spec.hpp"

namespace ergocert {

inline constexpr const char* kToolName = "ergocert";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// Stable exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAssumptionFailure = 2; // H1/H2/H3 or hypothesis gate
inline constexpr int kExitVerdictViolation = 3;  // a bound or proof check failed
inline constexpr int kExitUsageError = 4;        // parse/budget/argument errors

struct PipelineOptions {
    std::size_t grid_size = 64;
    std::optional<std::size_t> decay_horizon;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::size_t> samples_override;
    std::size_t lemma1_batch = 0; // diagnose: extra randomized coupling checks
};

struct PipelineResult {
    nlohmann::json report;
    int exit_code = kExitOk;
    std::string decay_csv;
    std::string tail_csv; // populated by certify
};

/// Assumption checks, ergodicity fit, drift optimization and the constant.
PipelineResult run_analyze(const ChainSpec& spec, const PipelineOptions& opt = {});

/// Analyze plus per-threshold tail certification (exact when the path count
/// fits the budget, Monte Carlo otherwise).
PipelineResult run_certify(const ChainSpec& spec, const PipelineOptions& opt = {});

/// Proof-internals verification: martingale decomposition, increment
/// bounds, Laplace bound, coupling checks.
PipelineResult run_diagnose(const ChainSpec& spec, const PipelineOptions& opt = {});

/// Exit code for an error escaping the pipeline.
int exit_code_for(const class Error& err);

} // namespace ergocert
