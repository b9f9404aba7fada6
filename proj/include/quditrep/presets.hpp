#pragma once

#include <string>
#include <vector>

#include "quditrep/config.hpp"
#include "quditrep/dataset.hpp"
#include "quditrep/explorer.hpp"

namespace quditrep {

/// Canonical grids behind the named dataset presets. The acceptance suite
/// runs on exactly these, so CLI output and test results always agree.
namespace presets {

inline std::vector<int> spacing_sweep_dims() { return {13, 17, 29, 37}; }

inline std::vector<int> budget_table_dims() { return {13, 17, 29, 73}; }

inline std::vector<double> budget_table_mm_lengths() {
    std::vector<double> grid;
    for (double length = 100.0; length <= 350.0; length += 2.0) grid.push_back(length);
    return grid;
}

inline std::vector<double> budget_table_fock_lengths() {
    std::vector<double> grid;
    for (double length = 40.0; length <= 160.0; length += 1.0) grid.push_back(length);
    return grid;
}

inline std::vector<double> station_density_lengths() {
    return value_grid(40.0, 30000.0, 60, true);
}

inline std::vector<double> entropy_profile_lengths() {
    return {5000.0, 10000.0, 15000.0, 20000.0, 25000.0};
}

inline std::vector<double> entropy_profile_density_grid() {
    return value_grid(0.5, 3000.0, 150, true);
}

inline std::vector<int> operational_error_dims() { return {7, 11, 13, 17, 29}; }

}  // namespace presets

namespace detail {

inline std::vector<std::string> sweep_columns(const std::string& swept_name) {
    return {"encoding", "dim",    "n",     "d",     swept_name, "N",
            "L0_km",    "B_rep",  "B_plob", "H",    "delta",    "B_max",
            "valid",    "no_capacity", "extrapolated"};
}

inline void append_sweep_row(Dataset& ds, const SweepRow& row, const CodeParams& code) {
    nlohmann::json b_rep, b_plob, h, delta, b_max;
    if (row.report) {
        b_rep = row.report->capacity_lower;
        b_plob = row.report->plob_upper;
        h = row.report->entropy_bits;
        delta = row.report->gain;
    }
    if (row.b_max) b_max = *row.b_max;
    ds.add_row({to_string(row.encoding), code.dim, code.n, code.distance, row.swept_value,
                row.n_links, row.spacing_km, b_rep, b_plob, h, delta, b_max,
                static_cast<bool>(row.report), row.no_capacity, row.beyond_reference_range});
}

}  // namespace detail

/// Single-point report dataset (the `gain` command).
inline Dataset gain_dataset(const RunConfig& cfg, const GainReport& rep,
                            const std::string& command) {
    Dataset ds;
    ds.columns = {"encoding",   "dim",
                  "n",          "d",
                  "L_km",       "N",
                  "L0_km",      "modes",
                  "B_rep",      "B_plob",
                  "H",          "delta",
                  "p_succ_rep", "p_succ_first_rep",
                  "p_succ_bob_x", "p_succ_bob_z"};
    ds.meta = dataset_meta(cfg, command);
    const auto& sc = rep.scenario;
    ds.add_row({to_string(sc.encoding), sc.code.dim, sc.code.n, sc.code.distance,
                sc.topo.total_km(), sc.topo.n_links(), sc.topo.spacing_km(), rep.modes,
                rep.capacity_lower, rep.plob_upper, rep.entropy_bits, rep.gain,
                rep.succ.rep.success, rep.succ.first_rep.success, rep.succ.bob_x.success,
                rep.succ.bob_z.success});
    return ds;
}

/// Gain versus repeater spacing at fixed total distance, for the standard
/// dimension set and both encodings.
inline Dataset spacing_sweep_dataset(const RunConfig& cfg, const std::string& command,
                                     const ExplorerOptions& opts = {}) {
    const double total_km = cfg.topology ? cfg.topology->total_km : 200.0;
    Dataset ds;
    ds.columns = detail::sweep_columns("L0_req_km");
    ds.meta = dataset_meta(cfg, command);
    for (int dim : presets::spacing_sweep_dims()) {
        for (Encoding enc : {Encoding::Multimode, Encoding::Fock}) {
            SweepSpec sweep;
            sweep.variable = SweepVariable::Spacing;
            sweep.from = 1e-3;
            sweep.to = 10.0;
            sweep.points = 200;
            sweep.log_scale = true;
            sweep.base = RepeaterSpec{cfg.phys, polynomial_code(dim), enc};
            sweep.encodings = {enc};
            sweep.total_km = total_km;
            const RegimeResult result = run_sweep(sweep, opts);
            for (const auto& row : result.rows) {
                detail::append_sweep_row(ds, row, sweep.base.code);
            }
        }
    }
    return ds;
}

/// Gain over the (total length, dimension) plane at the 0.9 operating
/// point. Fock dimensions above the closed-form extension threshold carry
/// the extrapolation flag.
inline Dataset regime_map_dataset(const RunConfig& cfg, const std::string& command,
                                  const ExplorerOptions& opts = {}) {
    Dataset ds;
    ds.columns = detail::sweep_columns("L_km");
    ds.meta = dataset_meta(cfg, command);
    for (Encoding enc : {Encoding::Multimode, Encoding::Fock}) {
        const int dim_cap = enc == Encoding::Multimode ? 93 : 33;
        for (int dim : odd_distance_prime_dims(5, dim_cap)) {
            SweepSpec sweep;
            sweep.variable = SweepVariable::TotalLength;
            sweep.from = 25.0;
            sweep.to = 500.0;
            sweep.points = 20;
            sweep.log_scale = false;
            sweep.base = RepeaterSpec{cfg.phys, polynomial_code(dim), enc};
            sweep.encodings = {enc};
            sweep.fraction = 0.9;
            const RegimeResult result = run_sweep(sweep, opts);
            for (const auto& row : result.rows) {
                detail::append_sweep_row(ds, row, sweep.base.code);
            }
        }
    }
    return ds;
}

/// Gain versus measurement error rate at the 0.9 operating point.
inline Dataset operational_error_dataset(const RunConfig& cfg, const std::string& command,
                                         const ExplorerOptions& opts = {}) {
    const double total_km = cfg.topology ? cfg.topology->total_km : 200.0;
    Dataset ds;
    ds.columns = detail::sweep_columns("f_m");
    ds.meta = dataset_meta(cfg, command);
    for (int dim : presets::operational_error_dims()) {
        for (Encoding enc : {Encoding::Multimode, Encoding::Fock}) {
            SweepSpec sweep;
            sweep.variable = SweepVariable::MeasurementError;
            sweep.from = 1e-5;
            sweep.to = 1e-1;
            sweep.points = 25;
            sweep.log_scale = true;
            sweep.base = RepeaterSpec{cfg.phys, polynomial_code(dim), enc};
            sweep.encodings = {enc};
            sweep.total_km = total_km;
            sweep.fraction = 0.9;
            const RegimeResult result = run_sweep(sweep, opts);
            for (const auto& row : result.rows) {
                detail::append_sweep_row(ds, row, sweep.base.code);
            }
        }
    }
    return ds;
}

/// Minimal station count per unit length as a function of total length.
inline Dataset station_density_dataset(const RunConfig& cfg, const std::string& command,
                                       const ExplorerOptions& opts = {}) {
    Dataset ds;
    ds.columns = {"encoding", "dim",  "n",       "d",           "L_km",
                  "N_min",    "N_min_per_km", "delta", "no_gain", "cap_reached"};
    ds.meta = dataset_meta(cfg, command);
    const auto lengths = presets::station_density_lengths();
    struct Entry {
        Encoding enc;
        int dim;
    };
    std::vector<Entry> entries;
    for (int dim : presets::budget_table_dims()) entries.push_back({Encoding::Multimode, dim});
    entries.push_back({Encoding::Fock, 17});
    entries.push_back({Encoding::Fock, 29});
    for (const Entry& e : entries) {
        const RepeaterSpec spec{cfg.phys, polynomial_code(e.dim), e.enc};
        const auto curve = stations_per_length_curve(spec, lengths, opts);
        for (const auto& pt : curve) {
            nlohmann::json n_min, per_km, delta;
            if (pt.result.n_links) {
                n_min = *pt.result.n_links;
                per_km = static_cast<double>(*pt.result.n_links) / pt.total_km;
                delta = pt.result.report->gain;
            }
            ds.add_row({to_string(e.enc), spec.code.dim, spec.code.n, spec.code.distance,
                        pt.total_km, n_min, per_km, delta, !pt.result.n_links,
                        pt.result.cap_reached});
        }
    }
    return ds;
}

/// Entropy of the final error distribution as a function of station density.
inline Dataset entropy_profile_dataset(const RunConfig& cfg, const std::string& command,
                                       const ExplorerOptions& opts = {}) {
    Dataset ds;
    ds.columns = {"encoding", "dim", "L_km", "N_per_km", "N", "H", "valid"};
    ds.meta = dataset_meta(cfg, command);
    const RepeaterSpec spec{cfg.phys, polynomial_code(29), Encoding::Multimode};
    const auto grid = presets::entropy_profile_density_grid();
    for (double total_km : presets::entropy_profile_lengths()) {
        const auto profile = entropy_profile(spec, total_km, grid, opts);
        for (const auto& pt : profile) {
            nlohmann::json h;
            if (pt.entropy_bits) h = *pt.entropy_bits;
            ds.add_row({to_string(spec.encoding), spec.code.dim, total_km, pt.n_per_km,
                        pt.n_links, h, static_cast<bool>(pt.entropy_bits)});
        }
    }
    return ds;
}

/// Global minimum station budgets. `N_stations` reports the off-by-one
/// convention (intermediate stations = links - 1) next to the link count.
inline Dataset station_budget_dataset(const RunConfig& cfg, const std::string& command,
                                      const ExplorerOptions& opts = {}) {
    Dataset ds;
    ds.columns = {"encoding", "dim",     "n",       "d",           "N_min_links",
                  "N_stations", "L_km",  "delta",   "no_gain",     "cap_reached",
                  "extrapolated"};
    ds.meta = dataset_meta(cfg, command);
    for (Encoding enc : {Encoding::Multimode, Encoding::Fock}) {
        const auto lengths = enc == Encoding::Multimode ? presets::budget_table_mm_lengths()
                                                        : presets::budget_table_fock_lengths();
        for (int dim : presets::budget_table_dims()) {
            const RepeaterSpec spec{cfg.phys, polynomial_code(dim), enc};
            const StationBudget budget = min_stations_over_length(spec, lengths, opts);
            nlohmann::json n_links, n_stations, l_at, delta;
            if (budget.n_min) {
                n_links = *budget.n_min;
                n_stations = *budget.n_min - 1;
                l_at = budget.total_km_at_min;
                delta = budget.report->gain;
            }
            ds.add_row({to_string(enc), spec.code.dim, spec.code.n, spec.code.distance,
                        n_links, n_stations, l_at, delta, !budget.n_min, budget.cap_reached,
                        beyond_reference_dim(enc, dim)});
        }
    }
    return ds;
}

/// Generic sweep from the config's sweep block.
inline Dataset generic_sweep_dataset(const RunConfig& cfg, const std::string& command,
                                     const ExplorerOptions& opts = {}) {
    if (!cfg.sweep) throw ValidationError("sweep command needs a sweep specification");
    SweepSpec sweep;
    sweep.variable = sweep_variable_from_string(cfg.sweep->variable);
    sweep.from = cfg.sweep->from;
    sweep.to = cfg.sweep->to;
    sweep.points = cfg.sweep->points;
    sweep.log_scale = cfg.sweep->log_scale;
    sweep.base = cfg.make_spec();
    sweep.encodings = {cfg.encoding};
    sweep.total_km = cfg.topology ? cfg.topology->total_km : 200.0;
    sweep.fraction = cfg.sweep->fraction;

    Dataset ds;
    ds.columns = detail::sweep_columns(cfg.sweep->variable);
    ds.meta = dataset_meta(cfg, command);
    const RegimeResult result = run_sweep(sweep, opts);
    for (const auto& row : result.rows) {
        // Dimension sweeps change the code per row; rebuild it for the row.
        const CodeParams code = sweep.variable == SweepVariable::Dimension
                                    ? polynomial_code(static_cast<int>(row.swept_value))
                                    : sweep.base.code;
        detail::append_sweep_row(ds, row, code);
    }
    return ds;
}

}  // namespace quditrep
