#include "ergocert/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <random>
#include <sstream>

#include "ergocert/bound.hpp"
#include "ergocert/budget.hpp"
#include "ergocert/diagnostics.hpp"
#include "ergocert/errors.hpp"
#include "ergocert/exact.hpp"
#include "ergocert/hitting.hpp"
#include "ergocert/montecarlo.hpp"

namespace ergocert {

namespace {

using nlohmann::json;

std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json rng_doc() {
    return json{{"engine", "std::mt19937_64"},
                {"stream_seed", "splitmix64(seed + stream_index)"},
                {"uniform01", "(x >> 11) * 2^-53"}};
}

json provenance(const ChainSpec& spec, std::optional<SampleSpec> mc) {
    json p;
    p["generated_at"] = now_iso8601();
    p["tool"] = json{{"name", kToolName}, {"version", kToolVersion}};
    p["spec_hash"] = fnv1a_hex(chain_spec_to_json(spec).dump());
    if (mc) {
        p["seed"] = mc->seed;
        p["samples"] = mc->samples;
        p["streams"] = mc->streams;
        p["rng"] = rng_doc();
    }
    return p;
}

json beta_to_json(const BetaResult& b) {
    return json{{"beta", b.beta}, {"rho", b.rho},     {"c1", b.c1}, {"c2", b.c2},
                {"c3", b.c3},     {"big_c", b.big_c}, {"u", b.u},   {"M", b.m_bound},
                {"L", b.l_bound}, {"r", b.r}};
}

SampleSpec effective_mc(const ChainSpec& spec, const PipelineOptions& opt) {
    SampleSpec mc = spec.mc.value_or(SampleSpec{});
    if (opt.seed_override) mc.seed = *opt.seed_override;
    if (opt.samples_override) mc.samples = *opt.samples_override;
    return mc;
}

struct AnalyzeState {
    std::optional<ResolvedChain> chain;
    std::optional<Distribution> pi;
    std::optional<ErgodicityCertificate> erg;
    std::optional<DriftOptimum> optimum;
    std::optional<TvDecayProfile> profile;
};

/// Shared analysis front end: fills the report through the beta section or
/// records a structured failure and sets the exit code.
AnalyzeState analyze_core(const ChainSpec& spec, const PipelineOptions& opt,
                          PipelineResult& result) {
    AnalyzeState state;
    json& report = result.report;
    report["schema_version"] = kReportSchemaVersion;

    state.chain = resolve_chain(spec);
    const ResolvedChain& rc = *state.chain;
    const MarkovKernel& p = rc.kernel;

    report["provenance"] = provenance(spec, effective_mc(spec, opt));
    report["chain"] = json{{"states", spec.states},
                           {"start", spec.start},
                           {"small_set", spec.small_set},
                           {"horizon", spec.horizon}};
    report["functional"] = json{{"kind", functional_kind_name(rc.functional.kind())},
                                {"c", rc.functional.c()},
                                {"c_norm_sq", c_norm_sq(rc.functional.c())}};
    report["warnings"] = json::array();

    const H1Report h1 = check_h1(p);
    report["h1"] =
        json{{"irreducible", h1.irreducible}, {"aperiodic", h1.aperiodic}, {"period", h1.period}};
    if (!h1.irreducible || !h1.aperiodic) {
        report["failure"] = json{{"stage", "h1"},
                                 {"message", h1.irreducible
                                                 ? "kernel is periodic (period " +
                                                       std::to_string(h1.period) + ")"
                                                 : "kernel is not irreducible"}};
        result.exit_code = kExitAssumptionFailure;
        return state;
    }

    state.pi = stationary_distribution(p);
    report["stationary"] = state.pi->weights();

    const double slem_value = slem(p);
    report["slem"] = slem_value;
    const std::size_t horizon = opt.decay_horizon.value_or(default_decay_horizon(slem_value));

    try {
        state.erg = fit_ergodicity(p, rc.small_set, *state.pi, horizon);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoGeometricDecay) throw;
        report["failure"] = json{{"stage", "h3"}, {"message", e.what()}};
        result.exit_code = kExitAssumptionFailure;
        return state;
    }
    report["ergodicity"] = json{
        {"L", state.erg->L},
        {"r", state.erg->r},
        {"horizon", state.erg->horizon},
        {"mode", state.erg->mode == CertificateMode::Empirical ? "empirical" : "user-supplied"},
        {"residual", state.erg->residual}};
    state.profile = tv_decay_profile(p, rc.small_set, *state.pi, horizon);
    result.decay_csv = state.profile->to_csv(state.erg->L, state.erg->r);

    try {
        state.optimum = optimize_drift(p, rc.small_set, *state.erg, opt.grid_size);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyRange) throw;
        report["failure"] = json{{"stage", "h2"}, {"message", e.what()}};
        result.exit_code = kExitAssumptionFailure;
        return state;
    }
    const double ceiling = u_max(p, rc.small_set);
    report["drift"] = json{{"u", state.optimum->drift.u},
                           {"M", state.optimum->drift.m_bound},
                           {"u_max", std::isinf(ceiling) ? json("infinite") : json(ceiling)},
                           {"mgf", state.optimum->drift.mgf}};
    report["beta"] = beta_to_json(state.optimum->beta);

    if (!rc.small_set.contains(rc.start)) {
        report["warnings"].push_back(
            "start state is outside the small set: the certified bound only covers starts in C; "
            "certification will refuse this spec");
    }
    return state;
}

const char* verdict_name(int v) {
    switch (v) {
        case 0: return "HOLDS";
        case 1: return "INCONCLUSIVE";
        default: return "VIOLATED";
    }
}

} // namespace

PipelineResult run_analyze(const ChainSpec& spec, const PipelineOptions& opt) {
    PipelineResult result;
    analyze_core(spec, opt, result);
    return result;
}

PipelineResult run_certify(const ChainSpec& spec, const PipelineOptions& opt) {
    PipelineResult result;
    const AnalyzeState state = analyze_core(spec, opt, result);
    if (result.exit_code != kExitOk) return result;
    const ResolvedChain& rc = *state.chain;
    json& report = result.report;

    if (!rc.small_set.contains(rc.start)) {
        report["failure"] =
            json{{"stage", "hypothesis"},
                 {"message", "start state must lie in the small set for the certified bound"}};
        result.exit_code = kExitAssumptionFailure;
        return result;
    }

    const BetaResult& beta = state.optimum->beta;
    const auto& cvec = rc.functional.c();
    const std::size_t budget = enumeration_budget();
    const bool exact = pow_or_saturate(rc.kernel.size(), spec.horizon, budget) <= budget;
    const SampleSpec mc = effective_mc(spec, opt);

    json rows = json::array();
    int violated = 0;
    std::ostringstream csv;
    csv.precision(17);
    csv << "t,markov_bound,iid_bound,tail,ci_low,ci_high\n";

    // beta < 2 makes this bound the looser of the two; a crossing means a
    // computation fault, not a finding.
    auto check_ordering = [](double markov, double iid) {
        if (markov < iid) {
            throw_error(ErrorCode::InternalError, "certified bound fell below the iid baseline");
        }
    };

    if (exact) {
        const PathLaw law(rc.kernel, Distribution::dirac(rc.kernel.space(), rc.start),
                          spec.horizon);
        report["expectation"] = exact_expectation(law, rc.functional);
        const std::vector<double> tails = exact_tail_grid(law, rc.functional, spec.t_grid);
        for (std::size_t j = 0; j < spec.t_grid.size(); ++j) {
            const double t = spec.t_grid[j];
            const double bound = markov_tail_bound(beta, t, cvec).value;
            const double iid = iid_tail_bound(t, cvec).value;
            check_ordering(bound, iid);
            const int verdict = tails[j] <= bound ? 0 : 2;
            violated += verdict == 2;
            rows.push_back(json{{"t", t},
                                {"markov_bound", bound},
                                {"iid_bound", iid},
                                {"method", "exact"},
                                {"tail", tails[j]},
                                {"verdict", verdict_name(verdict)}});
            csv << t << "," << bound << "," << iid << "," << tails[j] << "," << tails[j] << ","
                << tails[j] << "\n";
        }
    } else {
        for (const double t : spec.t_grid) {
            const McTailEstimate est = mc_tail(rc.kernel, rc.start, spec.horizon, rc.functional, t, mc);
            const double bound = markov_tail_bound(beta, t, cvec).value;
            const double iid = iid_tail_bound(t, cvec).value;
            check_ordering(bound, iid);
            int verdict;
            if (est.estimate.ci_high <= bound) {
                verdict = 0;
            } else if (est.estimate.ci_low > bound) {
                verdict = 2;
            } else {
                verdict = 1;
            }
            violated += verdict == 2;
            rows.push_back(json{{"t", t},
                                {"markov_bound", bound},
                                {"iid_bound", iid},
                                {"method", "mc"},
                                {"tail", est.estimate.point},
                                {"ci_low", est.estimate.ci_low},
                                {"ci_high", est.estimate.ci_high},
                                {"center", est.center},
                                {"center_is_mc", est.center_is_mc},
                                {"verdict", verdict_name(verdict)}});
            csv << t << "," << bound << "," << iid << "," << est.estimate.point << ","
                << est.estimate.ci_low << "," << est.estimate.ci_high << "\n";
        }
    }

    report["tail_rows"] = std::move(rows);
    report["summary"] = json{{"rows", spec.t_grid.size()},
                             {"violated", violated},
                             {"method", exact ? "exact" : "mc"}};
    result.tail_csv = csv.str();
    if (violated > 0) result.exit_code = kExitVerdictViolation;
    return result;
}

PipelineResult run_diagnose(const ChainSpec& spec, const PipelineOptions& opt) {
    PipelineResult result;
    const AnalyzeState state = analyze_core(spec, opt, result);
    if (result.exit_code != kExitOk) return result;
    const ResolvedChain& rc = *state.chain;
    json& report = result.report;

    if (!rc.small_set.contains(rc.start)) {
        report["failure"] = json{{"stage", "hypothesis"},
                                 {"message", "diagnostics condition on a start state inside C"}};
        result.exit_code = kExitAssumptionFailure;
        return result;
    }

    const BetaResult& beta = state.optimum->beta;
    json diag;
    bool all_pass = true;

    const MartingaleProfile profile =
        martingale_profile(rc.kernel, rc.start, rc.small_set, spec.horizon, rc.functional);
    const bool profile_ok =
        profile.telescoping_ok() && profile.endpoints_ok() && profile.martingale_ok();
    diag["martingale"] = json{{"paths", profile.path_count()},
                              {"telescoping_worst", profile.telescoping_worst()},
                              {"endpoints_worst", profile.endpoints_worst()},
                              {"zero_mean_worst", profile.martingale_worst()},
                              {"pass", profile_ok}};
    all_pass = all_pass && profile_ok;

    auto finite_or_zero = [](double x) { return std::isfinite(x) ? x : 0.0; };

    const FactCheckResult f1 = fact1_check(profile);
    diag["fact1"] = json{{"pass", f1.pass},
                         {"checked", f1.checked},
                         {"worst_margin", finite_or_zero(f1.worst_margin)}};
    all_pass = all_pass && f1.pass;

    const FactCheckResult f2 = fact2_check(profile, beta.l_bound, beta.r, beta.rho);
    diag["fact2"] = json{{"pass", f2.pass},
                         {"checked", f2.checked},
                         {"worst_margin", finite_or_zero(f2.worst_margin)},
                         {"rho", beta.rho}};
    all_pass = all_pass && f2.pass;

    const Fact3Result f3 = fact3_check(rc.kernel, rc.start, rc.small_set, spec.horizon,
                                       rc.functional, beta);
    // rhs = exp(c3 ||c||^2) routinely overflows; log_rhs stays informative.
    diag["fact3"] = json{{"lhs", f3.lhs},
                         {"rhs", std::isfinite(f3.rhs) ? json(f3.rhs) : json("overflow")},
                         {"log_rhs", beta.c3 * c_norm_sq(rc.functional.c())},
                         {"pass", f3.pass}};
    all_pass = all_pass && f3.pass;

    const Lemma2Result l2 = lemma2_check(rc.kernel, *state.pi, rc.small_set, rc.functional,
                                         *state.erg);
    diag["lemma2"] = json{{"pass", l2.pass},
                          {"checked", l2.checked},
                          {"worst_margin", finite_or_zero(l2.worst_margin)}};
    all_pass = all_pass && l2.pass;

    {
        json wbar = json::array();
        bool wbar_pass = true;
        for (std::size_t i = 0; i < spec.horizon; ++i) {
            const WbarResult w = wbar_check(rc.kernel, rc.functional, i);
            const bool ok = w.sup_abs <= w.c_i + 1e-12;
            wbar_pass = wbar_pass && ok;
            wbar.push_back(json{{"i", i}, {"sup_abs", w.sup_abs}, {"c_i", w.c_i}, {"pass", ok}});
        }
        diag["wbar"] = json{{"coordinates", std::move(wbar)}, {"pass", wbar_pass}};
        all_pass = all_pass && wbar_pass;
    }

    if (opt.lemma1_batch > 0) {
        // Randomized coupling checks on this kernel: random initial pairs and
        // random tabulated functionals at a desk-size horizon.
        const std::size_t n_h = std::min<std::size_t>(spec.horizon, 4);
        const std::size_t m = rc.kernel.size();
        Rng rng(stream_seed(effective_mc(spec, opt).seed, 977));
        std::size_t passed = 0;
        double worst = -1.0;
        for (std::size_t k = 0; k < opt.lemma1_batch; ++k) {
            auto random_dist = [&]() {
                std::vector<double> w(m);
                double sum = 0.0;
                for (double& x : w) {
                    x = rng.uniform01() + 1e-9;
                    sum += x;
                }
                for (double& x : w) x /= sum;
                return Distribution::validated(rc.kernel.space(), std::move(w));
            };
            const Distribution xi = random_dist();
            const Distribution xi_prime = random_dist();
            std::vector<double> values(pow_or_saturate(m, n_h, 1000000));
            for (double& v : values) v = rng.uniform01();
            const Functional h = Functional::tabulated(m, n_h, std::move(values));
            const Lemma1Gap gap = lemma1_gap(rc.kernel, xi, xi_prime, h);
            worst = std::max(worst, gap.lhs - gap.rhs);
            if (gap.lhs <= gap.rhs + 1e-12) ++passed;
        }
        const bool l1_pass = passed == opt.lemma1_batch;
        diag["lemma1_batch"] = json{{"count", opt.lemma1_batch},
                                    {"passed", passed},
                                    {"worst_margin", worst},
                                    {"pass", l1_pass}};
        all_pass = all_pass && l1_pass;
    }

    diag["pass"] = all_pass;
    report["diagnostics"] = std::move(diag);
    if (!all_pass) result.exit_code = kExitVerdictViolation;
    return result;
}

int exit_code_for(const Error& err) {
    switch (err.code()) {
        case ErrorCode::NotIrreducible:
        case ErrorCode::NoGeometricDecay:
        case ErrorCode::EmptyRange:
        case ErrorCode::StartNotInC:
            return kExitAssumptionFailure;
        default:
            return kExitUsageError;
    }
}

} // namespace ergocert
