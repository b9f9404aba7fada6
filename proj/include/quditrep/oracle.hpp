#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "quditrep/statistics.hpp"

namespace quditrep {

namespace rng {

/// SplitMix64 scrambler; used to derive independent per-chunk seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic sampling stream. The engine is std::mt19937_64 (its output
/// sequence is fixed by the standard), and all variates are derived from raw
/// engine words, so identical seeds give identical samples on any platform.
class Stream {
  public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Uses floor(u*n); the O(n/2^53) bias is far
    /// below the statistical resolution of any test here.
    int uniform_index(int n) {
        const int v = static_cast<int>(uniform() * n);
        return v >= n ? n - 1 : v;
    }

  private:
    std::mt19937_64 engine_;
};

/// Seed for sampling chunk `chunk` of a run keyed by `seed`.
inline std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
    return splitmix64(splitmix64(seed) ^ (chunk * 0xD1342543DE82EF95ULL + 0x1ULL));
}

}  // namespace rng

/// Cumulative table for drawing error exponents from a per-qudit
/// distribution by inverse transform.
class DiscreteSampler {
  public:
    explicit DiscreteSampler(const SingleQuditErrorDist& dist)
        : cumulative_(dist.p.size()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < dist.p.size(); ++i) {
            acc += dist.p[i];
            cumulative_[i] = acc;
        }
    }

    int draw(rng::Stream& stream) const {
        const double u = stream.uniform();
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        const std::size_t idx = static_cast<std::size_t>(it - cumulative_.begin());
        return static_cast<int>(std::min(idx, cumulative_.size() - 1));
    }

    /// Number of nonzero exponents among n independent draws.
    int draw_pattern_weight(rng::Stream& stream, int n) const {
        int weight = 0;
        for (int i = 0; i < n; ++i) {
            if (draw(stream) != 0) ++weight;
        }
        return weight;
    }

  private:
    std::vector<double> cumulative_;
};

/// One simulated run of the chain: signed byproduct accumulators and the
/// resulting logical exponents on Bob's side.
struct ChainSample {
    int c_even = 0;  // accumulated X-type byproduct exponent (mod D)
    int c_odd = 0;   // accumulated Z-type byproduct exponent (mod D)
    int x_exponent = 0;
    int z_exponent = 0;
};

/// Empirical joint distribution over (X, Z) logical exponent pairs.
struct EmpiricalDistribution {
    int dim = 0;
    std::vector<std::uint64_t> counts;  // row-major (r, s)
    std::uint64_t samples = 0;

    std::uint64_t count(int r, int s) const { return counts[r * dim + s]; }

    double frequency(int r, int s) const {
        return static_cast<double>(count(r, s)) / static_cast<double>(samples);
    }

    double marginal_x(int r) const {
        std::uint64_t acc = 0;
        for (int s = 0; s < dim; ++s) acc += count(r, s);
        return static_cast<double>(acc) / static_cast<double>(samples);
    }

    double marginal_z(int s) const {
        std::uint64_t acc = 0;
        for (int r = 0; r < dim; ++r) acc += count(r, s);
        return static_cast<double>(acc) / static_cast<double>(samples);
    }

    /// Binomial standard error of an empirical frequency.
    double std_error(double freq) const {
        return std::sqrt(std::max(freq * (1.0 - freq), 0.0) /
                         static_cast<double>(samples));
    }
};

namespace detail {

struct ChainSamplers {
    DiscreteSampler rep;
    DiscreteSampler first_rep;
    DiscreteSampler bob_x;
    DiscreteSampler bob_z;
};

/// Propagate one shot through the chain at the error-exponent level.
/// Station i measures n qudits; a pattern of weight <= t is corrected and
/// contributes nothing, anything heavier contributes a uniformly guessed
/// logical exponent. Even stations feed the X byproduct, odd stations the Z
/// byproduct, with the alternating signs of the swapping chain; Bob's two
/// stabilizer rounds feed X and Z directly.
inline ChainSample sample_chain_once(const ChainSamplers& samplers, const Topology& topo,
                                     const CodeParams& code, rng::Stream& stream) {
    const int dim = code.dim;
    const long long n_links = topo.n_links();
    ChainSample sample;
    for (long long station = 1; station <= n_links; ++station) {
        const DiscreteSampler& dist = (station == 1) ? samplers.first_rep : samplers.rep;
        const int weight = dist.draw_pattern_weight(stream, code.n);
        if (weight <= code.t) continue;
        const int guess = stream.uniform_index(dim);
        if (station % 2 == 0) {
            const long long i = station / 2;                 // c_even term index
            const int sign = (i % 2 == 0) ? 1 : -1;          // (-1)^i
            sample.c_even = ((sample.c_even + sign * guess) % dim + dim) % dim;
        } else {
            const long long i = (n_links + 1 - station) / 2;  // c_odd term index
            const int sign = (i % 2 == 0) ? -1 : 1;           // (-1)^(i+1)
            sample.c_odd = ((sample.c_odd + sign * guess) % dim + dim) % dim;
        }
    }
    sample.x_exponent = sample.c_even;
    sample.z_exponent = sample.c_odd;
    if (samplers.bob_x.draw_pattern_weight(stream, code.n) > code.t) {
        sample.x_exponent = (sample.x_exponent + stream.uniform_index(dim)) % dim;
    }
    if (samplers.bob_z.draw_pattern_weight(stream, code.n) > code.t) {
        sample.z_exponent = (sample.z_exponent + stream.uniform_index(dim)) % dim;
    }
    return sample;
}

inline constexpr std::uint64_t kChunkSize = 1 << 16;

/// Deterministic chunked parallel sampling: the chunk layout and per-chunk
/// seeds depend only on (samples, seed), never on the thread count, and
/// counts are merged in chunk order.
template <typename Body>
void run_chunks(std::uint64_t samples, unsigned threads, Body&& body) {
    const std::uint64_t n_chunks = (samples + kChunkSize - 1) / kChunkSize;
    unsigned hw = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    hw = static_cast<unsigned>(std::min<std::uint64_t>(hw, n_chunks));
    if (hw <= 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) body(c);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(hw);
    for (unsigned w = 0; w < hw; ++w) {
        pool.emplace_back([&, w] {
            for (std::uint64_t c = w; c < n_chunks; c += hw) body(c);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

/// Monte Carlo estimate of the final (X, Z) exponent distribution of the
/// chain, using the same per-round single-qudit distributions as the
/// analytic path but composing them by direct simulation.
inline EmpiricalDistribution simulate_chain(const PhysicalParams& phys, const Topology& topo,
                                            const CodeParams& code, Encoding enc,
                                            std::uint64_t samples, std::uint64_t seed,
                                            unsigned threads = 0) {
    if (samples < 1) throw ValidationError("sample count must be >= 1");
    const StationDistributions dists = station_distributions(phys, topo, code, enc);
    const detail::ChainSamplers samplers{
        DiscreteSampler(dists.rep), DiscreteSampler(dists.first_rep),
        DiscreteSampler(dists.bob_x), DiscreteSampler(dists.bob_z)};

    const int dim = code.dim;
    const std::uint64_t n_chunks = (samples + detail::kChunkSize - 1) / detail::kChunkSize;
    std::vector<std::vector<std::uint64_t>> chunk_counts(
        n_chunks, std::vector<std::uint64_t>());

    detail::run_chunks(samples, threads, [&](std::uint64_t c) {
        rng::Stream stream(rng::chunk_seed(seed, c));
        std::vector<std::uint64_t> local(static_cast<std::size_t>(dim) * dim, 0);
        const std::uint64_t begin = c * detail::kChunkSize;
        const std::uint64_t end = std::min(begin + detail::kChunkSize, samples);
        for (std::uint64_t i = begin; i < end; ++i) {
            const ChainSample s = detail::sample_chain_once(samplers, topo, code, stream);
            ++local[static_cast<std::size_t>(s.x_exponent) * dim + s.z_exponent];
        }
        chunk_counts[c] = std::move(local);
    });

    EmpiricalDistribution out;
    out.dim = dim;
    out.samples = samples;
    out.counts.assign(static_cast<std::size_t>(dim) * dim, 0);
    for (const auto& local : chunk_counts) {
        for (std::size_t i = 0; i < out.counts.size(); ++i) out.counts[i] += local[i];
    }
    return out;
}

struct BlockSuccessEstimate {
    double success = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

/// Monte Carlo estimate of the block success probability: the fraction of
/// sampled n-qudit patterns with weight <= t.
inline BlockSuccessEstimate estimate_block_success(const SingleQuditErrorDist& dist,
                                                   const CodeParams& code,
                                                   std::uint64_t samples, std::uint64_t seed,
                                                   unsigned threads = 0) {
    if (samples < 1) throw ValidationError("sample count must be >= 1");
    const DiscreteSampler sampler(dist);
    const std::uint64_t n_chunks = (samples + detail::kChunkSize - 1) / detail::kChunkSize;
    std::vector<std::uint64_t> chunk_hits(n_chunks, 0);

    detail::run_chunks(samples, threads, [&](std::uint64_t c) {
        rng::Stream stream(rng::chunk_seed(seed, c));
        std::uint64_t hits = 0;
        const std::uint64_t begin = c * detail::kChunkSize;
        const std::uint64_t end = std::min(begin + detail::kChunkSize, samples);
        for (std::uint64_t i = begin; i < end; ++i) {
            if (sampler.draw_pattern_weight(stream, code.n) <= code.t) ++hits;
        }
        chunk_hits[c] = hits;
    });

    std::uint64_t hits = 0;
    for (std::uint64_t h : chunk_hits) hits += h;
    BlockSuccessEstimate out;
    out.samples = samples;
    out.success = static_cast<double>(hits) / static_cast<double>(samples);
    out.std_error =
        std::sqrt(std::max(out.success * (1.0 - out.success), 0.0) / static_cast<double>(samples));
    return out;
}

}  // namespace quditrep
