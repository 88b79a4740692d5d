#include "ergocert/chain_spec.hpp"

#include <fstream>
#include <sstream>

#include "ergocert/errors.hpp"

namespace ergocert {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) {
    throw_error(ErrorCode::ParseError, what);
}

const json& require_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) parse_fail(std::string("missing field '") + key + "'");
    return *it;
}

template <typename T>
T as(const json& j, const char* what) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        parse_fail(std::string("bad value for ") + what + ": " + e.what());
    }
}

FunctionalKind kind_from_string(const std::string& s) {
    if (s == "additive") return FunctionalKind::Additive;
    if (s == "occupation") return FunctionalKind::Occupation;
    if (s == "sup_of_class") return FunctionalKind::SupOfClass;
    if (s == "tabulated") return FunctionalKind::Tabulated;
    parse_fail("unknown functional kind '" + s + "'");
}

FunctionalSpec functional_from_json(const json& j) {
    FunctionalSpec f;
    f.kind = kind_from_string(as<std::string>(require_field(j, "kind"), "functional.kind"));
    switch (f.kind) {
        case FunctionalKind::Additive:
            f.tables = as<std::vector<std::vector<double>>>(require_field(j, "tables"),
                                                            "functional.tables");
            break;
        case FunctionalKind::Occupation:
            f.target = as<std::vector<std::string>>(require_field(j, "target"), "functional.target");
            if (j.contains("weights")) {
                f.weights = as<std::vector<double>>(j.at("weights"), "functional.weights");
            }
            break;
        case FunctionalKind::SupOfClass:
            f.members = as<std::vector<std::vector<double>>>(require_field(j, "members"),
                                                             "functional.members");
            break;
        case FunctionalKind::Tabulated:
            f.values = as<std::vector<double>>(require_field(j, "values"), "functional.values");
            break;
    }
    if (j.contains("c")) {
        f.c = as<std::vector<double>>(j.at("c"), "functional.c");
    }
    return f;
}

json functional_to_json(const FunctionalSpec& f) {
    json j;
    j["kind"] = functional_kind_name(f.kind);
    switch (f.kind) {
        case FunctionalKind::Additive:
            j["tables"] = f.tables;
            break;
        case FunctionalKind::Occupation:
            j["target"] = f.target;
            if (!f.weights.empty()) j["weights"] = f.weights;
            break;
        case FunctionalKind::SupOfClass:
            j["members"] = f.members;
            break;
        case FunctionalKind::Tabulated:
            j["values"] = f.values;
            break;
    }
    if (f.c) j["c"] = *f.c;
    return j;
}

} // namespace

ChainSpec chain_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) parse_fail("chain spec must be a JSON object");
    const int version = as<int>(require_field(j, "schema_version"), "schema_version");
    if (version != kChainSpecSchemaVersion) {
        parse_fail("unsupported schema_version " + std::to_string(version));
    }

    ChainSpec spec;
    spec.states = as<std::vector<std::string>>(require_field(j, "states"), "states");
    spec.matrix = as<std::vector<std::vector<double>>>(require_field(j, "matrix"), "matrix");
    spec.small_set = as<std::vector<std::string>>(require_field(j, "small_set"), "small_set");
    spec.start = as<std::string>(require_field(j, "start"), "start");
    spec.horizon = as<std::size_t>(require_field(j, "horizon"), "horizon");
    if (spec.horizon < 1) parse_fail("horizon must be >= 1");
    spec.functional = functional_from_json(require_field(j, "functional"));
    spec.t_grid = as<std::vector<double>>(require_field(j, "t_grid"), "t_grid");
    if (spec.t_grid.empty()) parse_fail("t_grid must be nonempty");
    for (std::size_t i = 0; i < spec.t_grid.size(); ++i) {
        if (!(spec.t_grid[i] > 0.0)) parse_fail("t_grid entries must be > 0");
        if (i > 0 && !(spec.t_grid[i - 1] < spec.t_grid[i])) {
            parse_fail("t_grid must be strictly increasing");
        }
    }
    if (j.contains("mc")) {
        const json& mc = j.at("mc");
        SampleSpec s;
        s.seed = as<std::uint64_t>(require_field(mc, "seed"), "mc.seed");
        s.samples = as<std::size_t>(require_field(mc, "samples"), "mc.samples");
        if (mc.contains("streams")) s.streams = as<std::size_t>(mc.at("streams"), "mc.streams");
        if (s.samples < 1 || s.streams < 1) parse_fail("mc.samples and mc.streams must be >= 1");
        spec.mc = s;
    }

    // Label references must resolve.
    StateSpace space{spec.states};
    for (const auto& l : spec.small_set) space.index_of(l);
    space.index_of(spec.start);
    if (spec.functional.kind == FunctionalKind::Occupation) {
        for (const auto& l : spec.functional.target) space.index_of(l);
    }
    return spec;
}

nlohmann::json chain_spec_to_json(const ChainSpec& spec) {
    json j;
    j["schema_version"] = kChainSpecSchemaVersion;
    j["states"] = spec.states;
    j["matrix"] = spec.matrix;
    j["small_set"] = spec.small_set;
    j["start"] = spec.start;
    j["horizon"] = spec.horizon;
    j["functional"] = functional_to_json(spec.functional);
    j["t_grid"] = spec.t_grid;
    if (spec.mc) {
        j["mc"] = {{"seed", spec.mc->seed}, {"samples", spec.mc->samples}, {"streams", spec.mc->streams}};
    }
    return j;
}

ChainSpec load_chain_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) parse_fail("cannot open spec file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        parse_fail(std::string("invalid JSON: ") + e.what());
    }
    return chain_spec_from_json(j);
}

ResolvedChain resolve_chain(const ChainSpec& spec) {
    MarkovKernel kernel = validate_kernel(spec.matrix, spec.states);
    const StateSpace& space = kernel.space();
    const std::size_t m = space.size();
    const std::size_t n = spec.horizon;

    std::vector<std::size_t> c_indices;
    c_indices.reserve(spec.small_set.size());
    for (const auto& l : spec.small_set) c_indices.push_back(space.index_of(l));
    SmallSet small_set = SmallSet::of(std::move(c_indices), m);

    const FunctionalSpec& fs = spec.functional;
    auto functional = [&]() -> Functional {
        switch (fs.kind) {
            case FunctionalKind::Additive:
                return Functional::additive(m, fs.tables, fs.c);
            case FunctionalKind::Occupation: {
                std::vector<std::size_t> target;
                target.reserve(fs.target.size());
                for (const auto& l : fs.target) target.push_back(space.index_of(l));
                return Functional::occupation(m, n, std::move(target), fs.weights, fs.c);
            }
            case FunctionalKind::SupOfClass:
                return Functional::sup_of_class(m, n, fs.members, fs.c);
            case FunctionalKind::Tabulated:
                return Functional::tabulated(m, n, fs.values, fs.c);
        }
        throw_error(ErrorCode::InternalError, "unhandled functional kind");
    }();
    if (functional.horizon() != n) {
        throw_error(ErrorCode::ParseError, "functional horizon does not match spec horizon");
    }

    const std::size_t start = space.index_of(spec.start);
    return ResolvedChain{std::move(kernel), std::move(small_set), start, std::move(functional)};
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

} // namespace ergocert
