#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "quditrep/statistics.hpp"

namespace quditrep {

/// Everything that defines a repeater line except its geometry.
struct RepeaterSpec {
    PhysicalParams phys;
    CodeParams code;
    Encoding encoding = Encoding::Multimode;
};

struct ExplorerOptions {
    long long n_cap = 1'000'000;     // largest link count considered
    int coarse_points = 160;         // points per logarithmic scan pass
    long long exhaustive_span = 400; // brackets below this are scanned directly
    unsigned threads = 0;            // 0 = hardware concurrency
};

inline std::optional<GainReport> evaluate_links(const RepeaterSpec& spec, double total_km,
                                                long long n_links) {
    return try_evaluate(Scenario{spec.phys, Topology(total_km, n_links), spec.code,
                                 spec.encoding});
}

namespace detail {

/// Ordered, deterministic parallel loop: results are keyed by index and the
/// work split never changes outcomes. The first exception wins and is
/// rethrown on the caller thread.
template <typename Body>
void parallel_for_index(std::size_t count, unsigned threads, Body&& body) {
    unsigned hw = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    hw = static_cast<unsigned>(std::min<std::size_t>(hw, count));
    if (hw <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(hw);
    for (unsigned w = 0; w < hw; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += hw) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline std::vector<long long> even_log_grid(long long lo, long long hi, int points) {
    lo = std::max<long long>(2, lo + (lo % 2));
    hi = std::max(lo, hi - (hi % 2));
    std::vector<long long> grid;
    grid.reserve(points);
    const double log_lo = std::log(static_cast<double>(lo));
    const double log_hi = std::log(static_cast<double>(hi));
    for (int i = 0; i < points; ++i) {
        const double f = points > 1 ? static_cast<double>(i) / (points - 1) : 0.0;
        long long n = nearest_even_links(std::exp(log_lo + f * (log_hi - log_lo)));
        n = std::clamp(n, lo, hi);
        if (grid.empty() || grid.back() != n) grid.push_back(n);
    }
    return grid;
}

struct CurvePoint {
    long long n_links = 0;
    double b_rep = -1.0;  // -1 marks an out-of-regime point
    bool valid = false;
};

inline std::vector<CurvePoint> scan_capacity(const RepeaterSpec& spec, double total_km,
                                             const std::vector<long long>& grid,
                                             unsigned threads) {
    std::vector<CurvePoint> curve(grid.size());
    parallel_for_index(grid.size(), threads, [&](std::size_t i) {
        CurvePoint pt;
        pt.n_links = grid[i];
        if (auto rep = evaluate_links(spec, total_km, grid[i])) {
            pt.b_rep = rep->capacity_lower;
            pt.valid = true;
        }
        curve[i] = pt;
    });
    return curve;
}

/// True when the strictly-positive entries of `flags` form one contiguous
/// run; used as the cheap empirical unimodality check before binary search.
inline bool single_positive_run(const std::vector<bool>& flags) {
    int transitions = 0;
    for (std::size_t i = 1; i < flags.size(); ++i) {
        if (flags[i] != flags[i - 1]) ++transitions;
    }
    if (flags.empty()) return true;
    const int runs_allowed = flags.front() ? 1 : 2;
    return transitions <= runs_allowed;
}

struct CapacityMaximum {
    long long n_links = 0;
    GainReport report;
    std::vector<CurvePoint> coarse_curve;
};

/// Locate the even link count maximizing the capacity lower bound B_rep,
/// by a coarse logarithmic scan refined around the best point down to an
/// exhaustive window. Ties resolve to the smallest link count.
inline std::optional<CapacityMaximum> find_capacity_maximum(const RepeaterSpec& spec,
                                                            double total_km,
                                                            const ExplorerOptions& opts) {
    const long long cap = std::max<long long>(2, opts.n_cap - (opts.n_cap % 2));
    std::vector<long long> grid = even_log_grid(2, cap, opts.coarse_points);
    std::vector<CurvePoint> coarse = scan_capacity(spec, total_km, grid, opts.threads);

    auto best_index = [](const std::vector<CurvePoint>& curve) -> std::optional<std::size_t> {
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < curve.size(); ++i) {
            if (!curve[i].valid) continue;
            if (!best || curve[i].b_rep > curve[*best].b_rep) best = i;
        }
        return best;
    };

    auto idx = best_index(coarse);
    if (!idx) return std::nullopt;

    long long lo = *idx > 0 ? coarse[*idx - 1].n_links : grid.front();
    long long hi = *idx + 1 < coarse.size() ? coarse[*idx + 1].n_links : grid.back();
    while (hi - lo > 2 * opts.exhaustive_span) {
        std::vector<long long> fine = even_log_grid(lo, hi, opts.coarse_points);
        std::vector<CurvePoint> curve = scan_capacity(spec, total_km, fine, opts.threads);
        auto fine_idx = best_index(curve);
        if (!fine_idx) break;
        lo = *fine_idx > 0 ? curve[*fine_idx - 1].n_links : fine.front();
        hi = *fine_idx + 1 < curve.size() ? curve[*fine_idx + 1].n_links : fine.back();
    }

    std::vector<long long> window;
    for (long long n = lo; n <= hi; n += 2) window.push_back(n);
    std::vector<CurvePoint> final_curve = scan_capacity(spec, total_km, window, opts.threads);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < final_curve.size(); ++i) {
        if (!final_curve[i].valid) continue;
        if (!best || final_curve[i].b_rep > final_curve[*best].b_rep) best = i;
    }
    if (!best) return std::nullopt;

    const long long n_best = final_curve[*best].n_links;
    auto report = evaluate_links(spec, total_km, n_best);
    if (!report) return std::nullopt;
    return CapacityMaximum{n_best, *report, std::move(coarse)};
}

/// Smallest even link count in [2, n_upper] satisfying `pred`, assuming a
/// single false->true transition on that range. The assumption is checked
/// against the already-scanned coarse curve (threshold on stored B_rep) and
/// the boundary is re-verified directly; a full scan is the fallback.
/// `pred(n_upper)` must be true.
inline long long smallest_links_satisfying(const std::function<bool(long long)>& pred,
                                           long long n_upper, double b_threshold,
                                           const std::vector<CurvePoint>& coarse_hint) {
    std::vector<bool> flags;
    flags.reserve(coarse_hint.size());
    for (const auto& pt : coarse_hint) {
        if (pt.n_links > n_upper) break;
        flags.push_back(pt.valid && pt.b_rep >= b_threshold);
    }
    const bool hint_clean = single_positive_run(flags);

    if (hint_clean) {
        if (pred(2)) return 2;
        long long lo = 2;        // pred false
        long long hi = n_upper;  // pred true
        while (hi - lo > 2) {
            long long mid = lo + (hi - lo) / 2;
            mid -= mid % 2;
            if (mid <= lo) mid = lo + 2;
            if (pred(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if (hi == 2 || !pred(hi - 2)) return hi;
    }
    for (long long n = 2; n <= n_upper; n += 2) {
        if (pred(n)) return n;
    }
    return n_upper;
}

}  // namespace detail

/// Result of maximizing the gain over the repeater spacing at fixed total
/// distance. `no_plateau` is set when B_rep vanishes for every spacing, in
/// which case the gain is -B_PLOB everywhere.
struct SpacingOptimum {
    long long n_links = 0;
    double spacing_km = 0.0;
    GainReport report;
    bool no_plateau = false;
};

inline SpacingOptimum optimize_spacing(const RepeaterSpec& spec, double total_km,
                                       const ExplorerOptions& opts = {}) {
    auto max = detail::find_capacity_maximum(spec, total_km, opts);
    if (!max) {
        throw InvalidRegimeError("no admissible link count below the search cap for " +
                                 spec.code.label());
    }
    return SpacingOptimum{max->n_links, total_km / static_cast<double>(max->n_links),
                          max->report, max->report.capacity_lower <= 0.0};
}

/// Operating point: the largest spacing (smallest even link count) whose
/// capacity lower bound still reaches `fraction` of the best achievable.
/// Empty when no spacing yields positive capacity.
struct OperatingPoint {
    long long n_links = 0;
    double spacing_km = 0.0;
    GainReport report;
    double b_max = 0.0;
};

inline std::optional<OperatingPoint> operating_point(const RepeaterSpec& spec, double total_km,
                                                     double fraction,
                                                     const ExplorerOptions& opts = {}) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw ValidationError("operating-point fraction must lie in (0, 1]");
    }
    auto max = detail::find_capacity_maximum(spec, total_km, opts);
    if (!max || max->report.capacity_lower <= 0.0) return std::nullopt;
    const double threshold = fraction * max->report.capacity_lower;
    const auto pred = [&](long long n) {
        auto rep = evaluate_links(spec, total_km, n);
        return rep && rep->capacity_lower >= threshold;
    };
    const long long n_op = detail::smallest_links_satisfying(pred, max->n_links, threshold,
                                                             max->coarse_curve);
    auto report = evaluate_links(spec, total_km, n_op);
    return OperatingPoint{n_op, total_km / static_cast<double>(n_op), *report,
                          max->report.capacity_lower};
}

/// Smallest even link count with strictly positive gain, or NoGain.
struct MinStations {
    std::optional<long long> n_links;
    bool cap_reached = false;
    std::optional<GainReport> report;
};

inline MinStations min_stations(const RepeaterSpec& spec, double total_km,
                                const ExplorerOptions& opts = {}) {
    auto max = detail::find_capacity_maximum(spec, total_km, opts);
    if (!max) return MinStations{std::nullopt, true, std::nullopt};
    if (max->report.gain <= 0.0) {
        // Flag when the best point sits at the cap: a larger budget of
        // stations might still change the answer.
        const bool at_cap = max->n_links >= opts.n_cap - 1;
        return MinStations{std::nullopt, at_cap, std::nullopt};
    }
    const auto pred = [&](long long n) {
        auto rep = evaluate_links(spec, total_km, n);
        return rep && rep->gain > 0.0;
    };
    // gain > 0 is equivalent to B_rep exceeding the (N-independent) PLOB bound
    const double b_threshold =
        std::nextafter(max->report.plob_upper, std::numeric_limits<double>::infinity());
    const long long n_min = detail::smallest_links_satisfying(pred, max->n_links, b_threshold,
                                                              max->coarse_curve);
    return MinStations{n_min, false, evaluate_links(spec, total_km, n_min)};
}

struct LengthPoint {
    double total_km = 0.0;
    MinStations result;
};

/// Minimal station budget per total length over a grid of lengths.
inline std::vector<LengthPoint> stations_per_length_curve(const RepeaterSpec& spec,
                                                          const std::vector<double>& lengths_km,
                                                          const ExplorerOptions& opts = {}) {
    std::vector<LengthPoint> out(lengths_km.size());
    ExplorerOptions point_opts = opts;
    point_opts.threads = 1;  // parallelism lives across grid points here
    detail::parallel_for_index(lengths_km.size(), opts.threads, [&](std::size_t i) {
        out[i] = LengthPoint{lengths_km[i], min_stations(spec, lengths_km[i], point_opts)};
    });
    return out;
}

/// Global minimum of the station budget over a length grid.
struct StationBudget {
    std::optional<long long> n_min;
    double total_km_at_min = 0.0;
    bool cap_reached = false;
    std::optional<GainReport> report;
    std::vector<LengthPoint> curve;
};

inline StationBudget min_stations_over_length(const RepeaterSpec& spec,
                                              const std::vector<double>& lengths_km,
                                              const ExplorerOptions& opts = {}) {
    StationBudget out;
    out.curve = stations_per_length_curve(spec, lengths_km, opts);
    for (const auto& pt : out.curve) {
        if (pt.result.cap_reached) out.cap_reached = true;
        if (!pt.result.n_links) continue;
        if (!out.n_min || *pt.result.n_links < *out.n_min) {
            out.n_min = pt.result.n_links;
            out.total_km_at_min = pt.total_km;
            out.report = pt.result.report;
        }
    }
    return out;
}

struct EntropyPoint {
    double n_per_km = 0.0;
    long long n_links = 0;
    std::optional<double> entropy_bits;  // empty where the regime is invalid
};

/// Final-state entropy H(P) as a function of the station density N/L.
inline std::vector<EntropyPoint> entropy_profile(const RepeaterSpec& spec, double total_km,
                                                 const std::vector<double>& n_per_km_grid,
                                                 const ExplorerOptions& opts = {}) {
    std::vector<EntropyPoint> out(n_per_km_grid.size());
    detail::parallel_for_index(n_per_km_grid.size(), opts.threads, [&](std::size_t i) {
        const long long n = nearest_even_links(n_per_km_grid[i] * total_km);
        EntropyPoint pt{n_per_km_grid[i], n, std::nullopt};
        if (auto rep = evaluate_links(spec, total_km, n)) pt.entropy_bits = rep->entropy_bits;
        out[i] = pt;
    });
    return out;
}

/// Entropy profiles for a list of total lengths over a shared density grid.
inline std::vector<std::vector<EntropyPoint>> entropy_curve(
    const RepeaterSpec& spec, const std::vector<double>& lengths_km,
    const std::vector<double>& n_per_km_grid, const ExplorerOptions& opts = {}) {
    std::vector<std::vector<EntropyPoint>> out;
    out.reserve(lengths_km.size());
    for (double total_km : lengths_km) {
        out.push_back(entropy_profile(spec, total_km, n_per_km_grid, opts));
    }
    return out;
}

enum class SweepVariable { Spacing, TotalLength, Dimension, MeasurementError, StationsPerLength };

inline std::string to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::Spacing: return "L0";
        case SweepVariable::TotalLength: return "L";
        case SweepVariable::Dimension: return "D";
        case SweepVariable::MeasurementError: return "fM";
        case SweepVariable::StationsPerLength: return "N_per_L";
    }
    return "?";
}

inline SweepVariable sweep_variable_from_string(const std::string& s) {
    if (s == "L0") return SweepVariable::Spacing;
    if (s == "L") return SweepVariable::TotalLength;
    if (s == "D") return SweepVariable::Dimension;
    if (s == "fM" || s == "fm") return SweepVariable::MeasurementError;
    if (s == "N_per_L" || s == "NperL") return SweepVariable::StationsPerLength;
    throw ValidationError("unknown sweep variable '" + s +
                          "' (expected L0, L, D, fM, or N_per_L)");
}

struct SweepSpec {
    SweepVariable variable = SweepVariable::Spacing;
    double from = 0.0;
    double to = 0.0;
    int points = 2;
    bool log_scale = true;
    RepeaterSpec base;
    std::vector<Encoding> encodings;  // runs once per encoding
    double total_km = 200.0;          // fixed length where the variable is not L
    double fraction = 0.9;            // operating-point rule for L/D/fM sweeps
};

inline std::vector<double> value_grid(double from, double to, int points, bool log_scale) {
    if (points < 2) throw ValidationError("sweep needs at least 2 points");
    if (!(to > from)) throw ValidationError("sweep range must be non-empty");
    if (log_scale && !(from > 0.0)) {
        throw ValidationError("logarithmic sweep needs a positive lower bound");
    }
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / (points - 1);
        grid[i] = log_scale ? from * std::pow(to / from, f) : from + f * (to - from);
    }
    return grid;
}

/// Dimensions swept for polynomial codes: primes congruent to 1 mod 4, so
/// that the code distance (D+1)/2 is odd and t = (d-1)/2.
inline std::vector<int> odd_distance_prime_dims(int from, int to) {
    std::vector<int> dims;
    for (int d = std::max(5, from); d <= to; ++d) {
        if (d % 4 == 1 && is_prime(d)) dims.push_back(d);
    }
    return dims;
}

struct SweepRow {
    Encoding encoding = Encoding::Multimode;
    double swept_value = 0.0;
    long long n_links = 0;
    double spacing_km = 0.0;
    std::optional<GainReport> report;
    std::optional<double> b_max;         // best capacity over spacings (operating-point sweeps)
    bool no_capacity = false;            // operating point does not exist
    bool beyond_reference_range = false; // closed form extends past tabulated dimensions
};

struct RegimeResult {
    std::vector<SweepRow> rows;  // sorted by encoding, then swept value
    std::optional<double> max_gain;
    std::optional<long long> best_n_links;
    std::optional<double> best_spacing_km;
};

/// Dimensions beyond these are reachable only because the block-success sum
/// is collapsed in closed form; rows there carry the extrapolation flag.
inline bool beyond_reference_dim(Encoding enc, int dim) {
    return enc == Encoding::Fock ? dim > 33 : dim > 93;
}

inline RegimeResult run_sweep(const SweepSpec& sweep, const ExplorerOptions& opts = {}) {
    std::vector<Encoding> encodings = sweep.encodings;
    if (encodings.empty()) encodings.push_back(sweep.base.encoding);

    RegimeResult result;
    for (Encoding enc : encodings) {
        RepeaterSpec spec = sweep.base;
        spec.encoding = enc;
        std::vector<SweepRow> rows;

        if (sweep.variable == SweepVariable::Dimension) {
            const auto dims = odd_distance_prime_dims(static_cast<int>(sweep.from),
                                                      static_cast<int>(sweep.to));
            rows.resize(dims.size());
            detail::parallel_for_index(dims.size(), opts.threads, [&](std::size_t i) {
                RepeaterSpec point_spec = spec;
                point_spec.code = polynomial_code(dims[i]);
                ExplorerOptions point_opts = opts;
                point_opts.threads = 1;
                SweepRow row;
                row.encoding = enc;
                row.swept_value = dims[i];
                row.beyond_reference_range = beyond_reference_dim(enc, dims[i]);
                if (auto op = operating_point(point_spec, sweep.total_km, sweep.fraction,
                                              point_opts)) {
                    row.n_links = op->n_links;
                    row.spacing_km = op->spacing_km;
                    row.report = op->report;
                    row.b_max = op->b_max;
                } else {
                    row.no_capacity = true;
                }
                rows[i] = row;
            });
        } else {
            const auto values = value_grid(sweep.from, sweep.to, sweep.points, sweep.log_scale);
            rows.resize(values.size());
            detail::parallel_for_index(values.size(), opts.threads, [&](std::size_t i) {
                const double v = values[i];
                SweepRow row;
                row.encoding = enc;
                row.swept_value = v;
                row.beyond_reference_range = beyond_reference_dim(enc, spec.code.dim);
                ExplorerOptions point_opts = opts;
                point_opts.threads = 1;
                switch (sweep.variable) {
                    case SweepVariable::Spacing: {
                        row.n_links = nearest_even_links(sweep.total_km / v);
                        row.spacing_km = sweep.total_km / static_cast<double>(row.n_links);
                        row.report = evaluate_links(spec, sweep.total_km, row.n_links);
                        break;
                    }
                    case SweepVariable::TotalLength: {
                        if (auto op = operating_point(spec, v, sweep.fraction, point_opts)) {
                            row.n_links = op->n_links;
                            row.spacing_km = op->spacing_km;
                            row.report = op->report;
                            row.b_max = op->b_max;
                        } else {
                            row.no_capacity = true;
                        }
                        break;
                    }
                    case SweepVariable::MeasurementError: {
                        RepeaterSpec point_spec = spec;
                        point_spec.phys.f_m = v;
                        if (auto op = operating_point(point_spec, sweep.total_km,
                                                      sweep.fraction, point_opts)) {
                            row.n_links = op->n_links;
                            row.spacing_km = op->spacing_km;
                            row.report = op->report;
                            row.b_max = op->b_max;
                        } else {
                            row.no_capacity = true;
                        }
                        break;
                    }
                    case SweepVariable::StationsPerLength: {
                        row.n_links = nearest_even_links(v * sweep.total_km);
                        row.spacing_km = sweep.total_km / static_cast<double>(row.n_links);
                        row.report = evaluate_links(spec, sweep.total_km, row.n_links);
                        break;
                    }
                    case SweepVariable::Dimension:
                        break;  // handled above
                }
                rows[i] = row;
            });
        }

        for (auto& row : rows) {
            if (row.report) {
                const double g = row.report->gain;
                if (!result.max_gain || g > *result.max_gain) {
                    result.max_gain = g;
                    result.best_n_links = row.n_links;
                    result.best_spacing_km = row.spacing_km;
                }
            }
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

}  // namespace quditrep
