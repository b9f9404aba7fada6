#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "quditrep/errors.hpp"
#include "quditrep/math.hpp"

namespace quditrep {

/// Device and fiber parameters. Defaults are the baseline used throughout:
/// standard telecom fiber attenuation, percent-level measurement errors,
/// optimistic gates, and a matter-based quantum memory.
struct PhysicalParams {
    double alpha_db_per_km = 0.2;    // fiber attenuation
    double f_m = 1e-2;               // measurement depolarizing rate
    double f_g = 1e-3;               // gate depolarizing rate
    double gamma_db_per_ms = 1e-2;   // memory decay rate
    double c_km_per_ms = 200.0;      // signal speed in fiber
};

inline void validate(const PhysicalParams& p) {
    if (!(p.alpha_db_per_km >= 0.0)) throw ValidationError("alpha must be >= 0 dB/km");
    if (!(p.gamma_db_per_ms >= 0.0)) throw ValidationError("gamma must be >= 0 dB/ms");
    if (!(p.c_km_per_ms > 0.0)) throw ValidationError("signal speed must be > 0 km/ms");
    if (!(p.f_m >= 0.0 && p.f_m < 1.0)) throw ValidationError("f_M must lie in [0, 1)");
    if (!(p.f_g >= 0.0 && p.f_g < 1.0)) throw ValidationError("f_G must lie in [0, 1)");
}

/// Geometry of the repeater line: total distance split into an even number
/// of elementary links. The spacing is always derived, never stored.
class Topology {
  public:
    Topology(double total_km, long long n_links) : total_km_(total_km), n_links_(n_links) {
        if (!(total_km > 0.0)) throw ValidationError("total distance must be > 0 km");
        if (n_links < 2 || n_links % 2 != 0) {
            throw ValidationError("number of elementary links must be even and >= 2, got " +
                                  std::to_string(n_links));
        }
    }

    double total_km() const { return total_km_; }
    long long n_links() const { return n_links_; }
    double spacing_km() const { return total_km_ / static_cast<double>(n_links_); }

  private:
    double total_km_;
    long long n_links_;
};

/// Transmissivity of a fiber link: 10^(-alpha*L/10).
inline double link_transmissivity(double alpha_db_per_km, double length_km) {
    if (!(alpha_db_per_km >= 0.0)) throw ValidationError("alpha must be >= 0 dB/km");
    if (!(length_km >= 0.0)) throw ValidationError("length must be >= 0 km");
    return std::pow(10.0, -alpha_db_per_km * length_km / 10.0);
}

/// 1 - 10^(-alpha*L/10), stable for short links where the loss is tiny.
inline double link_loss_fraction(double alpha_db_per_km, double length_km) {
    if (!(alpha_db_per_km >= 0.0)) throw ValidationError("alpha must be >= 0 dB/km");
    if (!(length_km >= 0.0)) throw ValidationError("length must be >= 0 km");
    return -std::expm1(-alpha_db_per_km * length_km / 10.0 * kLn10);
}

/// Memory depolarizing rate accumulated while storing for the signal
/// flight time L/c: f_S = 1 - 10^(-gamma*(L/c)/10).
inline double storage_error_rate(double gamma_db_per_ms, double total_km, double c_km_per_ms) {
    if (!(gamma_db_per_ms >= 0.0)) throw ValidationError("gamma must be >= 0 dB/ms");
    if (!(total_km >= 0.0)) throw ValidationError("distance must be >= 0 km");
    if (!(c_km_per_ms > 0.0)) throw ValidationError("signal speed must be > 0 km/ms");
    return -std::expm1(-gamma_db_per_ms * (total_km / c_km_per_ms) / 10.0 * kLn10);
}

/// Probability that a k-photon Fock state loses exactly r photons in a
/// pure-loss channel of transmissivity eta0: C(k,r) eta0^(k-r) (1-eta0)^r.
inline double fock_loss_probability(int k, int r, double eta0) {
    if (k < 0 || r < 0) throw ValidationError("photon counts must be non-negative");
    if (!(eta0 >= 0.0 && eta0 <= 1.0)) throw ValidationError("transmissivity must lie in [0, 1]");
    if (r > k) return 0.0;
    if (r == 0) return std::pow(eta0, k);
    if (eta0 == 0.0) return (r == k) ? 1.0 : 0.0;
    const double log_p =
        log_binomial(k, r) + (k - r) * std::log(eta0) + r * std::log1p(-eta0);
    return std::exp(log_p);
}

/// Input photon number the asymptotic analysis predicts as the most likely
/// to lose exactly r photons: min{rd(r/(1-eta0)), D-1}, halves rounding up.
/// Kept as a cross-check against the exact maximization.
inline int rounded_loss_maximizer(int r, double eta0, int dim) {
    const double x = static_cast<double>(r) / (1.0 - eta0);
    const double capped = std::min(x, static_cast<double>(dim - 1));
    return static_cast<int>(std::min<long long>(round_half_up(capped), dim - 1));
}

/// Worst-case Pauli approximation of the pure-loss channel on Fock qudits.
/// p[r] is the probability assigned to losing r photons, r in {0,...,D-1};
/// each r >= 1 entry is maximized over all admissible input photon numbers.
struct FockLossApprox {
    int dim = 0;
    double eta0 = 1.0;
    std::vector<double> p;          // index r = photons lost
    std::vector<int> maximizer;     // argmax input photon number per r (index 0 unused)
    double tail_mass = 0.0;         // sum of p[r] for r >= 1, accumulated separately
};

inline std::optional<FockLossApprox> try_build_fock_approx(int dim, double eta0) {
    if (dim < 2) throw ValidationError("qudit dimension must be >= 2");
    if (!(eta0 > 0.0 && eta0 <= 1.0)) throw ValidationError("transmissivity must lie in (0, 1]");

    FockLossApprox out;
    out.dim = dim;
    out.eta0 = eta0;
    out.p.assign(dim, 0.0);
    out.maximizer.assign(dim, 0);

    // Local table of lgamma(i+1) so the k-r scan stays cheap for large D.
    std::vector<double> lgam(dim + 1);
    for (int i = 0; i <= dim; ++i) lgam[i] = std::lgamma(i + 1.0);
    const double log_eta = std::log(eta0);
    const double log_loss = (eta0 < 1.0) ? std::log1p(-eta0)
                                         : -std::numeric_limits<double>::infinity();

    double tail = 0.0;
    for (int r = 1; r < dim; ++r) {
        double best = 0.0;
        int best_k = r;
        for (int k = r; k < dim; ++k) {
            const double log_p =
                (lgam[k] - lgam[r] - lgam[k - r]) + (k - r) * log_eta + r * log_loss;
            const double v = std::exp(log_p);
            if (v >= best) {  // prefer the larger input on exact ties
                best = v;
                best_k = k;
            }
        }
        out.p[r] = best;
        out.maximizer[r] = best_k;
        tail += best;
    }
    if (tail > 1.0) return std::nullopt;
    out.p[0] = 1.0 - tail;
    out.tail_mass = tail;
    return out;
}

inline FockLossApprox build_fock_approx(int dim, double eta0) {
    auto approx = try_build_fock_approx(dim, eta0);
    if (!approx) {
        throw InvalidRegimeError(
            "worst-case loss approximation breaks down: repeater spacing too "
            "large for dimension " + std::to_string(dim) +
            " at link transmissivity " + std::to_string(eta0));
    }
    return *approx;
}

/// Probability of each nontrivial Pauli error under a depolarizing channel
/// of rate f: f/D^2. The trivial error keeps 1 - f + f/D^2.
inline double depolarizing_offdiagonal(int dim, double f) {
    if (dim < 2) throw ValidationError("qudit dimension must be >= 2");
    if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("depolarizing rate must lie in [0, 1]");
    return f / (static_cast<double>(dim) * static_cast<double>(dim));
}

}  // namespace quditrep
