#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "ergocert/chain_spec.hpp"
#include "ergocert/errors.hpp"
#include "ergocert/pipeline.hpp"
#include "ergocert/zoo.hpp"

namespace {

using ergocert::PipelineOptions;
using ergocert::PipelineResult;

struct OutputOptions {
    std::string json_out;
    std::string tail_csv;
    std::string decay_csv;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        throw ergocert::Error(ergocert::ErrorCode::ParseError, "cannot write '" + path + "'");
    }
    out << content;
}

int emit(const PipelineResult& result, const OutputOptions& out) {
    const std::string text = result.report.dump(2) + "\n";
    if (out.json_out.empty()) {
        std::cout << text;
    } else {
        write_file(out.json_out, text);
    }
    if (!out.tail_csv.empty() && !result.tail_csv.empty()) {
        write_file(out.tail_csv, result.tail_csv);
    }
    if (!out.decay_csv.empty() && !result.decay_csv.empty()) {
        write_file(out.decay_csv, result.decay_csv);
    }
    return result.exit_code;
}

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("--json-out", out.json_out, "Write the report to a file instead of stdout");
    cmd->add_option("--decay-csv", out.decay_csv, "Write the TV decay profile as CSV");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Concentration-bound certification for finite-state Markov chains"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string zoo_action;
    std::string zoo_name;
    PipelineOptions opt;
    OutputOptions out;
    std::uint64_t seed = 0;
    std::size_t samples = 0;

    auto* analyze = app.add_subcommand("analyze", "Check assumptions and compute the constant");
    analyze->add_option("spec", spec_path, "Chain spec JSON file")->required();
    analyze->add_option("--grid", opt.grid_size, "u-search grid size (>= 8)");
    add_output_flags(analyze, out);

    auto* certify = app.add_subcommand("certify", "Analyze plus tail certification per threshold");
    certify->add_option("spec", spec_path, "Chain spec JSON file")->required();
    certify->add_option("--grid", opt.grid_size, "u-search grid size (>= 8)");
    auto* seed_opt = certify->add_option("--seed", seed, "Override the Monte Carlo seed");
    auto* samples_opt = certify->add_option("--samples", samples, "Override the Monte Carlo sample count");
    certify->add_option("--csv", out.tail_csv, "Write tail rows as CSV");
    add_output_flags(certify, out);

    auto* diagnose = app.add_subcommand("diagnose", "Verify the proof internals on this chain");
    diagnose->add_option("spec", spec_path, "Chain spec JSON file")->required();
    diagnose->add_option("--lemma1-batch", opt.lemma1_batch,
                         "Extra randomized coupling checks to run");
    add_output_flags(diagnose, out);

    auto* zoo = app.add_subcommand("zoo", "List or run the built-in chains");
    zoo->add_option("action", zoo_action, "'list' or 'run'")->required();
    zoo->add_option("name", zoo_name, "Entry name for 'run'");
    auto* zseed_opt = zoo->add_option("--seed", seed, "Override the Monte Carlo seed");
    zoo->add_option("--csv", out.tail_csv, "Write tail rows as CSV");
    add_output_flags(zoo, out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            return emit(ergocert::run_analyze(ergocert::load_chain_spec(spec_path), opt), out);
        }
        if (certify->parsed()) {
            if (*seed_opt) opt.seed_override = seed;
            if (*samples_opt) opt.samples_override = samples;
            return emit(ergocert::run_certify(ergocert::load_chain_spec(spec_path), opt), out);
        }
        if (diagnose->parsed()) {
            return emit(ergocert::run_diagnose(ergocert::load_chain_spec(spec_path), opt), out);
        }
        if (zoo->parsed()) {
            if (zoo_action == "list") {
                for (const auto& entry : ergocert::zoo_registry()) {
                    std::cout << entry.name << "  -  " << entry.summary << "\n";
                }
                return ergocert::kExitOk;
            }
            if (zoo_action == "run") {
                if (zoo_name.empty()) {
                    std::cerr << "zoo run requires an entry name\n";
                    return ergocert::kExitUsageError;
                }
                if (*zseed_opt) opt.seed_override = seed;
                return emit(ergocert::run_certify(ergocert::zoo_chain(zoo_name), opt), out);
            }
            std::cerr << "unknown zoo action '" << zoo_action << "' (use list|run)\n";
            return ergocert::kExitUsageError;
        }
    } catch (const ergocert::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.code() == ergocert::ErrorCode::BudgetExceeded) {
            std::cerr << "hint: shrink the horizon/state count or raise ERGOCERT_BUDGET\n";
        }
        return ergocert::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ergocert::kExitUsageError;
    }
    return ergocert::kExitUsageError;
}
