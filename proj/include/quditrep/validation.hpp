#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "quditrep/config.hpp"
#include "quditrep/dataset.hpp"
#include "quditrep/oracle.hpp"

namespace quditrep {

/// One analytic-vs-empirical comparison of the oracle run.
struct OracleComparison {
    std::string quantity;
    double analytic = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;

    double sigma_distance() const {
        const double diff = std::fabs(empirical - analytic);
        if (diff == 0.0) return 0.0;
        if (std_error == 0.0) return std::numeric_limits<double>::infinity();
        return diff / std_error;
    }
};

struct ValidationReport {
    std::vector<OracleComparison> comparisons;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    double max_sigma() const {
        double m = 0.0;
        for (const auto& c : comparisons) m = std::max(m, c.sigma_distance());
        return m;
    }
    bool within(double sigmas) const { return max_sigma() <= sigmas; }
};

/// Run the Monte Carlo oracle against the analytic pipeline for one
/// scenario. `analytic_bias` shifts every analytic reference value and
/// exists for negative-control tests of the comparison itself.
inline ValidationReport run_validation(const Scenario& sc, std::uint64_t samples,
                                       std::uint64_t seed, double analytic_bias = 0.0,
                                       unsigned threads = 0) {
    ValidationReport out;
    out.samples = samples;
    out.seed = seed;

    const StationDistributions dists =
        station_distributions(sc.phys, sc.topo, sc.code, sc.encoding);
    const SuccessProbs succ = success_probabilities(dists, sc.code);
    const FinalErrorDistribution fin = final_distribution(succ, sc.topo, sc.code.dim);

    const EmpiricalDistribution emp =
        simulate_chain(sc.phys, sc.topo, sc.code, sc.encoding, samples, seed, threads);
    const double px0_hat = emp.marginal_x(0);
    const double pz0_hat = emp.marginal_z(0);
    out.comparisons.push_back({"p_x[0]", fin.px0() + analytic_bias, px0_hat,
                               emp.std_error(px0_hat)});
    out.comparisons.push_back({"p_z[0]", fin.pz0() + analytic_bias, pz0_hat,
                               emp.std_error(pz0_hat)});

    const struct {
        const char* name;
        const SingleQuditErrorDist& dist;
        double analytic;
        std::uint64_t salt;
    } blocks[] = {
        {"p_succ_rep", dists.rep, succ.rep.success, 11},
        {"p_succ_first_rep", dists.first_rep, succ.first_rep.success, 12},
        {"p_succ_bob_x", dists.bob_x, succ.bob_x.success, 13},
        {"p_succ_bob_z", dists.bob_z, succ.bob_z.success, 14},
    };
    for (const auto& b : blocks) {
        const BlockSuccessEstimate est =
            estimate_block_success(b.dist, sc.code, samples, seed + b.salt, threads);
        out.comparisons.push_back(
            {b.name, b.analytic + analytic_bias, est.success, est.std_error});
    }
    return out;
}

inline Dataset validation_dataset(const RunConfig& cfg, const ValidationReport& rep,
                                  const std::string& command) {
    Dataset ds;
    ds.columns = {"quantity", "analytic", "empirical", "std_error", "sigma_distance"};
    ds.meta = dataset_meta(cfg, command);
    ds.meta["samples"] = rep.samples;
    ds.meta["seed"] = rep.seed;
    for (const auto& c : rep.comparisons) {
        ds.add_row({c.quantity, c.analytic, c.empirical, c.std_error, c.sigma_distance()});
    }
    return ds;
}

}  // namespace quditrep
