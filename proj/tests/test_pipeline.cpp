#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>

#include "ergocert/errors.hpp"
#include "ergocert/hitting.hpp"
#include "ergocert/pipeline.hpp"
#include "ergocert/zoo.hpp"

using namespace ergocert;
using nlohmann::json;

namespace {

json strip_timestamp(json report) {
    report["provenance"].erase("generated_at");
    return report;
}

} // namespace

TEST_CASE("chain spec JSON round trip") {
    const ChainSpec spec = two_state_chain(0.1, 0.2, 6);
    const json j = chain_spec_to_json(spec);
    const ChainSpec back = chain_spec_from_json(j);
    CHECK(chain_spec_to_json(back).dump(2) == j.dump(2));
    CHECK(back.states == spec.states);
    CHECK(back.horizon == 6);
    REQUIRE(back.mc.has_value());
    CHECK(back.mc->seed == spec.mc->seed);
}

TEST_CASE("chain spec parse failures") {
    json good = chain_spec_to_json(two_state_chain(0.1, 0.2, 6));

    auto expect_parse_error = [](json j) {
        try {
            chain_spec_from_json(j);
            FAIL("expected ParseError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
        }
    };

    json missing = good;
    missing.erase("matrix");
    expect_parse_error(missing);

    json bad_version = good;
    bad_version["schema_version"] = 99;
    expect_parse_error(bad_version);

    json bad_grid = good;
    bad_grid["t_grid"] = {1.0, 1.0};
    expect_parse_error(bad_grid);

    json neg_grid = good;
    neg_grid["t_grid"] = {-1.0, 1.0};
    expect_parse_error(neg_grid);

    json bad_label = good;
    bad_label["start"] = "nope";
    try {
        chain_spec_from_json(bad_label);
        FAIL("expected DomainError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainError);
    }
}

TEST_CASE("zoo registry contents") {
    std::set<std::string> names;
    for (const auto& entry : zoo_registry()) names.insert(entry.name);
    for (const char* required :
         {"two-state", "lazy-cycle", "birth-death", "iid", "metropolis-two-valley"}) {
        CHECK(names.count(required) == 1);
    }

    try {
        zoo_chain("no-such-chain");
        FAIL("expected UnknownZooEntry");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownZooEntry);
    }

    // every entry parses, resolves and analyzes
    for (const auto& entry : zoo_registry()) {
        const ChainSpec spec = zoo_chain(entry.name);
        const PipelineResult r = run_analyze(spec);
        CHECK(r.exit_code == kExitOk);
        CHECK(r.report.contains("beta"));
    }
}

TEST_CASE("analyze equals composed module calls on the two-state chain") {
    const ChainSpec spec = two_state_chain(0.1, 0.2, 8);
    PipelineOptions opt;
    opt.grid_size = 64;
    const PipelineResult r = run_analyze(spec, opt);
    REQUIRE(r.exit_code == kExitOk);

    const ResolvedChain rc = resolve_chain(spec);
    const auto pi = stationary_distribution(rc.kernel);
    const double s = slem(rc.kernel);
    const auto erg = fit_ergodicity(rc.kernel, rc.small_set, pi, default_decay_horizon(s));
    const auto opt_drift = optimize_drift(rc.kernel, rc.small_set, erg, 64);

    CHECK(r.report["beta"]["beta"].get<double>() == opt_drift.beta.beta);
    CHECK(r.report["beta"]["u"].get<double>() == opt_drift.beta.u);
    CHECK(r.report["ergodicity"]["L"].get<double>() == erg.L);
    CHECK(r.report["ergodicity"]["r"].get<double>() == erg.r);
    CHECK(r.report["slem"].get<double>() == s);
}

TEST_CASE("assumption failures are structured") {
    ChainSpec cyc;
    cyc.states = {"a", "b", "c"};
    cyc.matrix = {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
    cyc.small_set = {"a"};
    cyc.start = "a";
    cyc.horizon = 4;
    cyc.functional.kind = FunctionalKind::Occupation;
    cyc.functional.target = {"b"};
    cyc.t_grid = {0.5, 1.0};

    const PipelineResult r = run_analyze(cyc);
    CHECK(r.exit_code == kExitAssumptionFailure);
    CHECK(r.report["failure"]["stage"] == "h1");
    CHECK(r.report["h1"]["period"] == 3);
}

TEST_CASE("start outside C warns in analyze and blocks certify") {
    ChainSpec spec = two_state_chain(0.1, 0.2, 6);
    spec.start = "1"; // small_set stays {"0"}

    const PipelineResult analyzed = run_analyze(spec);
    CHECK(analyzed.exit_code == kExitOk);
    CHECK(analyzed.report["warnings"].size() == 1);

    const PipelineResult certified = run_certify(spec);
    CHECK(certified.exit_code == kExitAssumptionFailure);
    CHECK(certified.report["failure"]["stage"] == "hypothesis");
}

TEST_CASE("certify the two-state chain exactly") {
    ChainSpec spec = two_state_chain(0.1, 0.2, 8);
    // 20 thresholds spanning (0, sum c]
    spec.t_grid.clear();
    for (int k = 1; k <= 20; ++k) spec.t_grid.push_back(8.0 * k / 20.0);

    const PipelineResult r = run_certify(spec);
    CHECK(r.exit_code == kExitOk);
    CHECK(r.report["summary"]["method"] == "exact");
    CHECK(r.report["summary"]["violated"] == 0);
    REQUIRE(r.report["tail_rows"].size() == 20);
    for (const auto& row : r.report["tail_rows"]) {
        CHECK(row["verdict"] == "HOLDS");
        CHECK(row["tail"].get<double>() <= row["markov_bound"].get<double>());
    }

    // CSV artifacts
    CHECK(r.tail_csv.rfind("t,markov_bound,iid_bound,tail,ci_low,ci_high\n", 0) == 0);
    CHECK(r.decay_csv.rfind("n,d_n,Lr^n\n", 0) == 0);
}

TEST_CASE("certify the iid entry against both bounds") {
    const ChainSpec spec = zoo_chain("iid");
    const PipelineResult r = run_certify(spec);
    CHECK(r.exit_code == kExitOk);
    for (const auto& row : r.report["tail_rows"]) {
        CHECK(row["tail"].get<double>() <= row["markov_bound"].get<double>());
        CHECK(row["tail"].get<double>() <= row["iid_bound"].get<double>() + 1e-12);
    }
}

TEST_CASE("report JSON round trips byte-identically") {
    const PipelineResult r = run_certify(two_state_chain(0.1, 0.2, 6));
    const std::string once = r.report.dump(2);
    const std::string twice = json::parse(once).dump(2);
    CHECK(once == twice);
}

TEST_CASE("certify is deterministic modulo timestamps") {
    ChainSpec spec = two_state_chain(0.1, 0.2, 6);
    spec.mc = SampleSpec{123, 20000, 4};
    const PipelineResult a = run_certify(spec);
    const PipelineResult b = run_certify(spec);
    CHECK(strip_timestamp(a.report).dump(2) == strip_timestamp(b.report).dump(2));
    CHECK(a.tail_csv == b.tail_csv);
    CHECK(a.decay_csv == b.decay_csv);
}

TEST_CASE("diagnose passes on the two-state chain and fails on budget blowups") {
    ChainSpec spec = two_state_chain(0.1, 0.2, 6);
    PipelineOptions opt;
    opt.lemma1_batch = 25;
    const PipelineResult r = run_diagnose(spec, opt);
    CHECK(r.exit_code == kExitOk);
    CHECK(r.report["diagnostics"]["pass"] == true);
    CHECK(r.report["diagnostics"]["fact1"]["pass"] == true);
    CHECK(r.report["diagnostics"]["fact2"]["pass"] == true);
    CHECK(r.report["diagnostics"]["fact3"]["pass"] == true);
    CHECK(r.report["diagnostics"]["lemma2"]["pass"] == true);
    CHECK(r.report["diagnostics"]["wbar"]["pass"] == true);
    CHECK(r.report["diagnostics"]["lemma1_batch"]["passed"] == 25);

    ChainSpec big;
    big.states.clear();
    for (int i = 0; i < 10; ++i) big.states.push_back(std::to_string(i));
    big.matrix.assign(10, std::vector<double>(10, 0.1));
    big.small_set = {"0"};
    big.start = "0";
    big.horizon = 10;
    big.functional.kind = FunctionalKind::Occupation;
    big.functional.target = {"1"};
    big.t_grid = {1.0};
    try {
        run_diagnose(big);
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
}

TEST_CASE("exit code mapping for escaped errors") {
    CHECK(exit_code_for(Error(ErrorCode::ParseError, "x")) == kExitUsageError);
    CHECK(exit_code_for(Error(ErrorCode::BudgetExceeded, "x")) == kExitUsageError);
    CHECK(exit_code_for(Error(ErrorCode::NotIrreducible, "x")) == kExitAssumptionFailure);
    CHECK(exit_code_for(Error(ErrorCode::NoGeometricDecay, "x")) == kExitAssumptionFailure);
    CHECK(exit_code_for(Error(ErrorCode::EmptyRange, "x")) == kExitAssumptionFailure);
}

TEST_CASE("metropolis entry shows the slow-mixing signature") {
    const PipelineResult r = run_analyze(zoo_chain("metropolis-two-valley"));
    REQUIRE(r.exit_code == kExitOk);
    const double rr = r.report["ergodicity"]["r"].get<double>();
    const double beta = r.report["beta"]["beta"].get<double>();
    CHECK(rr > 0.97);      // r near 1
    CHECK(beta < 1e-9);    // correspondingly tiny constant
}
