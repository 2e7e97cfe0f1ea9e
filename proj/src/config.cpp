#include "dysonclt/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace dysonclt {

namespace {

using nlohmann::json;

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }

const json& require(const json& obj, const char* key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(child(path, key), "missing required field");
    return *it;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) throw ConfigError(child(path, key), "unknown field");
    }
}

int get_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError(path, "must be an integer");
    return v.get<int>();
}

double get_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "must be a number");
    return v.get<double>();
}

std::string get_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError(path, "must be a string");
    return v.get<std::string>();
}

std::uint64_t get_seed(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(path, "must be a non-negative integer");
}

std::vector<double> get_number_array(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw ConfigError(path, "must be a non-empty array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(get_number(v[i], child(path, std::to_string(i))));
    return out;
}

CovarianceFn parse_covariance(const json& v, const std::string& path) {
    if (!v.is_object()) throw ConfigError(path, "must be an object");
    const std::string kind = get_string(require(v, "kind", path), child(path, "kind"));
    try {
        if (kind == "constant") {
            check_keys(v, {"kind", "value"}, path);
            return CovarianceFn::constant(get_number(require(v, "value", path), child(path, "value")));
        }
        if (kind == "ou") {
            check_keys(v, {"kind", "rate"}, path);
            return CovarianceFn::ornstein_uhlenbeck(
                get_number(require(v, "rate", path), child(path, "rate")));
        }
        if (kind == "table") {
            check_keys(v, {"kind", "s_grid", "t_grid", "values"}, path);
            const std::vector<double> s =
                get_number_array(require(v, "s_grid", path), child(path, "s_grid"));
            const std::vector<double> t =
                get_number_array(require(v, "t_grid", path), child(path, "t_grid"));
            const json& rows = require(v, "values", path);
            if (!rows.is_array()) throw ConfigError(child(path, "values"), "must be an array");
            std::vector<std::vector<double>> values;
            for (std::size_t i = 0; i < rows.size(); ++i)
                values.push_back(
                    get_number_array(rows[i], child(child(path, "values"), std::to_string(i))));
            return CovarianceFn::table(s, t, values);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(child(path, "kind"), "must be one of: constant, ou, table");
}

EntryProcessSpec parse_entry_process(const json& v, int beta, const std::string& path) {
    if (!v.is_object()) throw ConfigError(path, "must be an object");
    check_keys(v, {"family", "covariance", "static_distribution"}, path);

    EntryProcessSpec spec;
    spec.beta = beta;
    const std::string family = get_string(require(v, "family", path), child(path, "family"));
    if (family == "gaussian")
        spec.family = EntryFamily::GaussianStationary;
    else if (family == "frozen_three_point")
        spec.family = EntryFamily::FrozenThreePoint;
    else if (family == "static_iid")
        spec.family = EntryFamily::StaticIID;
    else
        throw ConfigError(child(path, "family"),
                          "must be one of: gaussian, frozen_three_point, static_iid");

    if (v.contains("covariance"))
        spec.covariance = parse_covariance(v["covariance"], child(path, "covariance"));
    if (v.contains("static_distribution"))
        spec.static_distribution = get_string(v["static_distribution"],
                                              child(path, "static_distribution"));
    return spec;
}

IndexSet parse_set(const json& v, const std::string& path) {
    try {
        if (v.is_array()) {
            std::vector<int> elements;
            elements.reserve(v.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                elements.push_back(get_int(v[i], child(path, std::to_string(i))));
            return IndexSet::from(std::move(elements));
        }
        if (v.is_object()) {
            check_keys(v, {"prefix"}, path);
            return IndexSet::prefix(get_int(require(v, "prefix", path), child(path, "prefix")));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path, "must be an array of indices or {\"prefix\": n}");
}

ObservableSpec parse_observable(const json& v, const std::string& path) {
    if (!v.is_object()) throw ConfigError(path, "must be an object");
    check_keys(v, {"set", "time", "statistic", "k"}, path);
    ObservableSpec o;
    o.set_id = get_string(require(v, "set", path), child(path, "set"));
    o.time = get_number(require(v, "time", path), child(path, "time"));
    o.k = get_int(require(v, "k", path), child(path, "k"));
    const std::string stat = get_string(require(v, "statistic", path), child(path, "statistic"));
    if (stat == "trace_power")
        o.statistic = StatisticKind::TracePower;
    else if (stat == "chebyshev_trace")
        o.statistic = StatisticKind::ChebyshevTrace;
    else
        throw ConfigError(child(path, "statistic"),
                          "must be one of: trace_power, chebyshev_trace");
    return o;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("/", std::string("not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("/", "top level must be an object");
    check_keys(root,
               {"schema", "L", "beta", "ambient_dim", "entry_process", "times", "sets",
                "observables", "n_samples", "seed", "z_max", "threads"},
               "");

    const int schema = get_int(require(root, "schema", ""), "/schema");
    if (schema != 1) throw ConfigError("/schema", "unsupported schema version (expected 1)");

    ExperimentConfig cfg;
    cfg.L = get_int(require(root, "L", ""), "/L");
    const int beta = get_int(require(root, "beta", ""), "/beta");
    if (beta != 1 && beta != 2) throw ConfigError("/beta", "must be 1 or 2");
    if (root.contains("ambient_dim")) cfg.ambient_dim = get_int(root["ambient_dim"], "/ambient_dim");
    cfg.entry = parse_entry_process(require(root, "entry_process", ""), beta, "/entry_process");
    cfg.times = get_number_array(require(root, "times", ""), "/times");

    const json& sets = require(root, "sets", "");
    if (!sets.is_object() || sets.empty())
        throw ConfigError("/sets", "must be a non-empty object of named index sets");
    for (const auto& [name, value] : sets.items())
        cfg.sets.emplace(name, parse_set(value, child("/sets", name)));

    const json& observables = require(root, "observables", "");
    if (!observables.is_array() || observables.empty())
        throw ConfigError("/observables", "must be a non-empty array");
    for (std::size_t i = 0; i < observables.size(); ++i)
        cfg.observables.push_back(
            parse_observable(observables[i], child("/observables", std::to_string(i))));

    cfg.n_samples = get_int(require(root, "n_samples", ""), "/n_samples");
    cfg.seed = get_seed(require(root, "seed", ""), "/seed");
    if (root.contains("z_max")) cfg.z_max = get_number(root["z_max"], "/z_max");
    if (root.contains("threads")) cfg.threads = get_int(root["threads"], "/threads");

    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError("/", e.what());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("/", "cannot read config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config(buffer.str());
}

}  // namespace dysonclt
