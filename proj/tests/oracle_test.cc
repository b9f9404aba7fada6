#include "quditrep/oracle.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "quditrep/validation.hpp"

using namespace quditrep;

namespace {

PhysicalParams noiseless() {
    PhysicalParams p;
    p.alpha_db_per_km = 0.0;
    p.f_m = 0.0;
    p.f_g = 0.0;
    p.gamma_db_per_ms = 0.0;
    return p;
}

constexpr std::uint64_t kSamples = 200'000;

}  // namespace

TEST(simulate_chain, zero_noise_is_point_mass_for_any_seed) {
    const Topology topo(100.0, 4);
    const CodeParams code = polynomial_code(3);
    for (std::uint64_t seed : {1ull, 77ull, 123456789ull}) {
        const EmpiricalDistribution emp =
            simulate_chain(noiseless(), topo, code, Encoding::Multimode, 50'000, seed);
        EXPECT_EQ(emp.count(0, 0), emp.samples);
    }
}

TEST(simulate_chain, deterministic_across_thread_counts) {
    const Topology topo(30.0, 6);
    const CodeParams code = custom_code(3, 5, 3);
    const EmpiricalDistribution a =
        simulate_chain(PhysicalParams{}, topo, code, Encoding::Multimode, kSamples, 42, 1);
    const EmpiricalDistribution b =
        simulate_chain(PhysicalParams{}, topo, code, Encoding::Multimode, kSamples, 42, 4);
    const EmpiricalDistribution c =
        simulate_chain(PhysicalParams{}, topo, code, Encoding::Multimode, kSamples, 42, 0);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.counts, c.counts);
    const EmpiricalDistribution other =
        simulate_chain(PhysicalParams{}, topo, code, Encoding::Multimode, kSamples, 43, 0);
    EXPECT_NE(a.counts, other.counts);
}

TEST(simulate_chain, guessing_dominates_when_measurements_are_fully_depolarized) {
    PhysicalParams p = noiseless();
    p.f_m = 1.0;  // every station pattern is uniform; corrections almost never succeed
    const Topology topo(10.0, 4);
    const CodeParams code = custom_code(5, 5, 3);
    const EmpiricalDistribution emp =
        simulate_chain(p, topo, code, Encoding::Multimode, 1'000'000, 7);
    for (int r = 0; r < 5; ++r) {
        const double freq = emp.marginal_x(r);
        EXPECT_NEAR(freq, 0.2, 4.0 * emp.std_error(0.2)) << "r=" << r;
    }
}

TEST(simulate_chain, agrees_with_analytics_at_default_rates) {
    const Scenario sc{PhysicalParams{}, Topology(20.0, 4), custom_code(3, 3, 2),
                      Encoding::Multimode};
    const ValidationReport rep = run_validation(sc, 1'000'000, 2024);
    for (const auto& c : rep.comparisons) {
        EXPECT_LE(c.sigma_distance(), 4.0) << c.quantity;
    }
}

TEST(simulate_chain, flat_tail_symmetry_of_empirical_marginals) {
    const Scenario sc{PhysicalParams{}, Topology(20.0, 4), custom_code(5, 5, 3),
                      Encoding::Multimode};
    const EmpiricalDistribution emp = simulate_chain(sc.phys, sc.topo, sc.code, sc.encoding,
                                                     1'000'000, 99);
    double lo = 1.0, hi = 0.0;
    for (int r = 1; r < 5; ++r) {
        const double f = emp.marginal_x(r);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    // Nontrivial exponents are exchangeable; frequencies agree within noise.
    EXPECT_LE(hi - lo, 6.0 * emp.std_error(hi));
}

TEST(estimate_block_success, point_mass_is_exact) {
    const SingleQuditErrorDist point = flat_error_dist(3, 0.0);
    const BlockSuccessEstimate est =
        estimate_block_success(point, polynomial_code(3), 10'000, 5);
    EXPECT_DOUBLE_EQ(est.success, 1.0);
}

TEST(estimate_block_success, matches_hand_value) {
    const SingleQuditErrorDist d = flat_error_dist(3, 0.15);  // p = (0.9, 0.05, 0.05)
    const CodeParams code{3, 3, 3, 1};
    const BlockSuccessEstimate est = estimate_block_success(d, code, 1'000'000, 11);
    EXPECT_NEAR(est.success, 0.972, 4.0 * est.std_error);
}

TEST(estimate_block_success, matches_general_formula_for_fock_profile) {
    const FockLossApprox approx = build_fock_approx(5, 0.999);
    const SingleQuditErrorDist d = fock_error_dist(approx, 0.01);
    const CodeParams code = custom_code(5, 5, 3);
    const BlockSuccessEstimate est = estimate_block_success(d, code, 1'000'000, 13);
    const double analytic = block_success_general(d, code).success;
    EXPECT_NEAR(est.success, analytic, 4.0 * est.std_error);
}

TEST(estimate_block_success, deterministic_given_seed) {
    const SingleQuditErrorDist d = flat_error_dist(4, 0.3);
    const CodeParams code = custom_code(4, 5, 3);
    const BlockSuccessEstimate a = estimate_block_success(d, code, kSamples, 21, 1);
    const BlockSuccessEstimate b = estimate_block_success(d, code, kSamples, 21, 8);
    EXPECT_DOUBLE_EQ(a.success, b.success);
}

TEST(run_validation, bias_injection_is_detected) {
    const Scenario sc{PhysicalParams{}, Topology(20.0, 4), custom_code(3, 3, 2),
                      Encoding::Multimode};
    const ValidationReport clean = run_validation(sc, 200'000, 5);
    EXPECT_TRUE(clean.within(4.0));
    const ValidationReport biased = run_validation(sc, 200'000, 5, 0.05);
    EXPECT_FALSE(biased.within(4.0));
}

TEST(rng, stream_is_reproducible) {
    rng::Stream a(12345);
    rng::Stream b(12345);
    for (int i = 0; i < 1000; ++i) {
        ASSERT_DOUBLE_EQ(a.uniform(), b.uniform());
    }
    rng::Stream c(1);
    rng::Stream d(2);
    int diff = 0;
    for (int i = 0; i < 100; ++i) {
        if (c.uniform() != d.uniform()) ++diff;
    }
    EXPECT_GT(diff, 90);
}

TEST(rng, uniform_index_stays_in_range) {
    rng::Stream s(9);
    for (int n : {2, 3, 7, 13}) {
        for (int i = 0; i < 10'000; ++i) {
            const int v = s.uniform_index(n);
            ASSERT_GE(v, 0);
            ASSERT_LT(v, n);
        }
    }
}
