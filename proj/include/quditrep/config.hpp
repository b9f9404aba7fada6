#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "quditrep/channels.hpp"
#include "quditrep/errors.hpp"
#include "quditrep/explorer.hpp"
#include "quditrep/math.hpp"
#include "quditrep/qecc.hpp"
#include "quditrep/statistics.hpp"
#include "quditrep/version.hpp"

namespace quditrep {

inline constexpr const char* kConfigSchema = "quditrep.config/1";

/// Code selection as written in configs: the polynomial family needs only
/// the dimension, custom codes carry (n, d) explicitly.
struct CodeSelection {
    std::string type = "polynomial";  // "polynomial" | "custom"
    int dim = 13;
    int n = 0;
    int d = 0;

    CodeParams make() const {
        if (type == "polynomial") return polynomial_code(dim);
        if (type == "custom") return custom_code(dim, n, d);
        throw ValidationError("unknown code type '" + type + "'");
    }
};

/// Geometry selection: total distance plus either the link count or the
/// spacing (converted to the nearest even link count).
struct TopologySelection {
    double total_km = 0.0;
    std::optional<long long> n_links;
    std::optional<double> spacing_km;

    Topology make() const {
        if (n_links && spacing_km) {
            throw ValidationError("give either the link count or the spacing, not both");
        }
        if (n_links) return Topology(total_km, *n_links);
        if (spacing_km) {
            if (!(*spacing_km > 0.0)) throw ValidationError("spacing must be > 0 km");
            return Topology(total_km, nearest_even_links(total_km / *spacing_km));
        }
        throw ValidationError("topology needs a link count or a spacing");
    }
};

struct SweepSettings {
    std::string variable = "L0";
    double from = 0.0;
    double to = 0.0;
    int points = 2;
    bool log_scale = true;
    double fraction = 0.9;
};

struct OracleSettings {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
};

struct OutputSettings {
    std::string format = "csv";  // "csv" | "json"
    std::string path;            // empty = stdout
};

/// Full configuration document. Defaults are the baseline parameter set;
/// command-line flags override file values which override defaults.
struct RunConfig {
    PhysicalParams phys;
    Encoding encoding = Encoding::Multimode;
    CodeSelection code;
    std::optional<TopologySelection> topology;
    std::optional<SweepSettings> sweep;
    OracleSettings oracle;
    OutputSettings output;

    void validate() const {
        quditrep::validate(phys);
        code.make();
        if (topology) {
            if (!(topology->total_km > 0.0)) {
                throw ValidationError("total distance must be > 0 km");
            }
            if (topology->n_links && topology->spacing_km) {
                throw ValidationError("give either the link count or the spacing, not both");
            }
            // A length-only topology is enough for sweeps; single-point
            // commands materialize the full geometry via make_scenario().
            if (topology->n_links || topology->spacing_km) topology->make();
        }
        if (sweep) {
            sweep_variable_from_string(sweep->variable);
            if (sweep->points < 2) throw ValidationError("sweep needs at least 2 points");
            if (!(sweep->fraction > 0.0 && sweep->fraction <= 1.0)) {
                throw ValidationError("operating-point fraction must lie in (0, 1]");
            }
        }
        if (output.format != "csv" && output.format != "json") {
            throw ValidationError("output format must be csv or json");
        }
        if (oracle.samples < 1) throw ValidationError("oracle sample count must be >= 1");
    }

    RepeaterSpec make_spec() const { return RepeaterSpec{phys, code.make(), encoding}; }

    Scenario make_scenario() const {
        if (!topology) throw ValidationError("this command needs a single-point topology");
        return Scenario{phys, topology->make(), code.make(), encoding};
    }
};

namespace detail {

template <typename T>
T get_field(const nlohmann::json& j, const std::string& key, const T& fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("bad value for '" + key + "': " + e.what());
    }
}

inline void reject_unknown_keys(const nlohmann::json& j,
                                std::initializer_list<const char*> known,
                                const std::string& where) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known) {
            if (item.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ValidationError("unknown key '" + item.key() + "' in " + where);
    }
}

}  // namespace detail

inline nlohmann::json to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["schema"] = kConfigSchema;
    j["physical"] = {{"alpha_db_per_km", cfg.phys.alpha_db_per_km},
                     {"f_m", cfg.phys.f_m},
                     {"f_g", cfg.phys.f_g},
                     {"gamma_db_per_ms", cfg.phys.gamma_db_per_ms},
                     {"c_km_per_ms", cfg.phys.c_km_per_ms}};
    j["encoding"] = to_string(cfg.encoding);
    if (cfg.code.type == "polynomial") {
        j["code"] = {{"type", "polynomial"}, {"dim", cfg.code.dim}};
    } else {
        j["code"] = {{"type", cfg.code.type},
                     {"dim", cfg.code.dim},
                     {"n", cfg.code.n},
                     {"d", cfg.code.d}};
    }
    if (cfg.topology) {
        nlohmann::json t;
        t["total_km"] = cfg.topology->total_km;
        if (cfg.topology->n_links) t["n_links"] = *cfg.topology->n_links;
        if (cfg.topology->spacing_km) t["spacing_km"] = *cfg.topology->spacing_km;
        j["topology"] = t;
    }
    if (cfg.sweep) {
        j["sweep"] = {{"variable", cfg.sweep->variable}, {"from", cfg.sweep->from},
                      {"to", cfg.sweep->to},             {"points", cfg.sweep->points},
                      {"log", cfg.sweep->log_scale},     {"fraction", cfg.sweep->fraction}};
    }
    j["oracle"] = {{"samples", cfg.oracle.samples}, {"seed", cfg.oracle.seed}};
    j["output"] = {{"format", cfg.output.format}, {"path", cfg.output.path}};
    return j;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    detail::reject_unknown_keys(
        j, {"schema", "physical", "encoding", "code", "topology", "sweep", "oracle", "output"},
        "config");
    const std::string schema = detail::get_field<std::string>(j, "schema", kConfigSchema);
    if (schema != kConfigSchema) {
        throw ValidationError("unsupported config schema '" + schema + "'");
    }
    if (j.contains("physical")) {
        const auto& p = j.at("physical");
        detail::reject_unknown_keys(
            p, {"alpha_db_per_km", "f_m", "f_g", "gamma_db_per_ms", "c_km_per_ms"}, "physical");
        cfg.phys.alpha_db_per_km =
            detail::get_field(p, "alpha_db_per_km", cfg.phys.alpha_db_per_km);
        cfg.phys.f_m = detail::get_field(p, "f_m", cfg.phys.f_m);
        cfg.phys.f_g = detail::get_field(p, "f_g", cfg.phys.f_g);
        cfg.phys.gamma_db_per_ms =
            detail::get_field(p, "gamma_db_per_ms", cfg.phys.gamma_db_per_ms);
        cfg.phys.c_km_per_ms = detail::get_field(p, "c_km_per_ms", cfg.phys.c_km_per_ms);
    }
    cfg.encoding = encoding_from_string(
        detail::get_field<std::string>(j, "encoding", to_string(cfg.encoding)));
    if (j.contains("code")) {
        const auto& c = j.at("code");
        detail::reject_unknown_keys(c, {"type", "dim", "n", "d"}, "code");
        cfg.code.type = detail::get_field<std::string>(c, "type", "polynomial");
        cfg.code.dim = detail::get_field(c, "dim", cfg.code.dim);
        cfg.code.n = detail::get_field(c, "n", 0);
        cfg.code.d = detail::get_field(c, "d", 0);
    }
    if (j.contains("topology")) {
        const auto& t = j.at("topology");
        detail::reject_unknown_keys(t, {"total_km", "n_links", "spacing_km"}, "topology");
        TopologySelection ts;
        ts.total_km = detail::get_field(t, "total_km", 0.0);
        if (t.contains("n_links")) ts.n_links = t.at("n_links").get<long long>();
        if (t.contains("spacing_km")) ts.spacing_km = t.at("spacing_km").get<double>();
        cfg.topology = ts;
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        detail::reject_unknown_keys(s, {"variable", "from", "to", "points", "log", "fraction"},
                                    "sweep");
        SweepSettings ss;
        ss.variable = detail::get_field<std::string>(s, "variable", ss.variable);
        ss.from = detail::get_field(s, "from", ss.from);
        ss.to = detail::get_field(s, "to", ss.to);
        ss.points = detail::get_field(s, "points", ss.points);
        ss.log_scale = detail::get_field(s, "log", ss.log_scale);
        ss.fraction = detail::get_field(s, "fraction", ss.fraction);
        cfg.sweep = ss;
    }
    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        detail::reject_unknown_keys(o, {"samples", "seed"}, "oracle");
        cfg.oracle.samples = detail::get_field(o, "samples", cfg.oracle.samples);
        cfg.oracle.seed = detail::get_field(o, "seed", cfg.oracle.seed);
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        detail::reject_unknown_keys(o, {"format", "path"}, "output");
        cfg.output.format = detail::get_field<std::string>(o, "format", cfg.output.format);
        cfg.output.path = detail::get_field<std::string>(o, "path", cfg.output.path);
    }
    return cfg;
}

inline RunConfig config_from_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

/// Canonical single-line form: keys sorted, shortest round-trip numbers.
/// Serializing, re-reading, and serializing again is byte-identical.
inline std::string canonical_config(const RunConfig& cfg) { return to_json(cfg).dump(); }

inline std::string config_hash(const RunConfig& cfg) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_config(cfg))));
    return std::string("fnv1a64:") + buf;
}

/// Meta block embedded in every dataset: enough to reproduce the run.
inline nlohmann::json dataset_meta(const RunConfig& cfg, const std::string& command) {
    nlohmann::json meta;
    meta["version"] = kVersion;
    meta["command"] = command;
    meta["config"] = to_json(cfg);
    meta["config_hash"] = config_hash(cfg);
    meta["seed"] = cfg.oracle.seed;
    return meta;
}

}  // namespace quditrep
