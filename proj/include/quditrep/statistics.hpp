#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "quditrep/channels.hpp"
#include "quditrep/errors.hpp"
#include "quditrep/math.hpp"
#include "quditrep/qecc.hpp"

namespace quditrep {

enum class Encoding { Multimode, Fock };

inline std::string to_string(Encoding e) {
    return e == Encoding::Multimode ? "mm" : "fock";
}

inline Encoding encoding_from_string(const std::string& s) {
    if (s == "mm" || s == "multimode") return Encoding::Multimode;
    if (s == "fock") return Encoding::Fock;
    throw ValidationError("unknown encoding '" + s + "' (expected mm or fock)");
}

/// Error-exponent distribution of one physical qudit at one correction round.
/// tail_mass (the total nontrivial probability) is accumulated on its own so
/// that it stays accurate when it is many orders below 1.
struct SingleQuditErrorDist {
    int dim = 0;
    std::vector<double> p;
    double tail_mass = 0.0;
    bool flat_tail = true;  // all nontrivial entries equal

    double p0() const { return p[0]; }
};

/// Flat-tail distribution: every nontrivial exponent carries bracket/D,
/// where bracket = 1 - prod(1 - f_i) over the contributing error sources.
inline SingleQuditErrorDist flat_error_dist(int dim, double bracket) {
    SingleQuditErrorDist d;
    d.dim = dim;
    const double tail_entry = bracket / dim;
    d.tail_mass = (dim - 1) * tail_entry;
    d.p.assign(dim, tail_entry);
    d.p[0] = 1.0 - d.tail_mass;
    d.flat_tail = true;
    return d;
}

/// Fock-type distribution: loss-approximation entries damped by the
/// operational factor g, mixed with a uniform depolarizing floor (1-g)/D.
inline SingleQuditErrorDist fock_error_dist(const FockLossApprox& approx, double one_minus_g) {
    SingleQuditErrorDist d;
    d.dim = approx.dim;
    const double g = 1.0 - one_minus_g;
    const double floor_entry = one_minus_g / approx.dim;
    d.p.resize(approx.dim);
    for (int e = 0; e < approx.dim; ++e) d.p[e] = approx.p[e] * g + floor_entry;
    d.tail_mass = approx.tail_mass * g + (approx.dim - 1) * floor_entry;
    d.flat_tail = false;
    return d;
}

struct StationDistributions {
    SingleQuditErrorDist rep;        // every station but the first
    SingleQuditErrorDist first_rep;  // first station
    SingleQuditErrorDist bob_x;      // X errors at Bob's stabilizer round
    SingleQuditErrorDist bob_z;      // Z errors at Bob's stabilizer round
};

/// Per-qudit error distributions for the four correction rounds.
///
/// Multimode: transmission loss is treated as depolarizing noise with rate
/// f_T = 1 - eta0, so every round has a flat tail. Fock: the loss
/// approximation enters the repeater and Bob-Z rounds with its uneven
/// photon-loss profile, damped by the operational error factor.
inline StationDistributions station_distributions(const PhysicalParams& phys,
                                                  const Topology& topo,
                                                  const CodeParams& code,
                                                  Encoding enc) {
    const int dim = code.dim;
    const double f_t = link_loss_fraction(phys.alpha_db_per_km, topo.spacing_km());
    const double f_s =
        storage_error_rate(phys.gamma_db_per_ms, topo.total_km(), phys.c_km_per_ms);
    const double f_g = phys.f_g;
    const double f_m = phys.f_m;

    StationDistributions out;
    if (enc == Encoding::Multimode) {
        out.rep = flat_error_dist(
            dim, one_minus_product_of_complements({f_t, f_t, f_g, f_g, f_g, f_m}));
        out.first_rep =
            flat_error_dist(dim, one_minus_product_of_complements({f_t, f_g, f_g, f_m}));
        out.bob_x = flat_error_dist(dim, one_minus_product_of_complements({f_g, f_g, f_s}));
        out.bob_z =
            flat_error_dist(dim, one_minus_product_of_complements({f_t, f_g, f_g, f_g, f_s}));
    } else {
        const double eta0 = link_transmissivity(phys.alpha_db_per_km, topo.spacing_km());
        const FockLossApprox approx = build_fock_approx(dim, eta0);
        out.rep = fock_error_dist(approx,
                                  one_minus_product_of_complements({f_g, f_g, f_g, f_m}));
        out.first_rep =
            flat_error_dist(dim, one_minus_product_of_complements({f_g, f_g, f_m}));
        out.bob_x = flat_error_dist(dim, one_minus_product_of_complements({f_g, f_g, f_s}));
        out.bob_z = fock_error_dist(approx,
                                    one_minus_product_of_complements({f_g, f_g, f_g, f_s}));
    }
    return out;
}

/// A probability stored together with its complement; both sides are
/// accumulated as sums of positive terms, so the smaller one keeps full
/// relative precision even when the other is within 1e-16 of 1.
struct SuccessProb {
    double success = 1.0;
    double failure = 0.0;
};

/// Shared kernel: success = sum_{k<=t} C(n,k) p0^(n-k) S^k and failure the
/// complementary sum, where S is the total per-qudit nontrivial probability.
/// Valid for flat and uneven tails alike: the inner sum of the pattern
/// probabilities over nontrivial exponents collapses to S^k by the
/// multinomial theorem.
inline SuccessProb block_success_from_tail_mass(double tail_mass, const CodeParams& code) {
    const int n = code.n;
    const int t = code.t;
    const double s = tail_mass;
    if (s <= 0.0) return {1.0, 0.0};
    if (s >= 1.0) {
        // No qudit ever stays clean: only the full-weight pattern occurs.
        return (n <= t) ? SuccessProb{1.0, 0.0} : SuccessProb{0.0, 1.0};
    }
    const double log_s = std::log(s);
    const double log_p0 = std::log1p(-s);
    double success = 0.0;
    double failure = 0.0;
    double log_choose = 0.0;  // log C(n,0)
    for (int k = 0; k <= n; ++k) {
        const double term = std::exp(log_choose + (n - k) * log_p0 + k * log_s);
        if (k <= t) {
            success += term;
        } else {
            failure += term;
        }
        log_choose += std::log((n - k) / (k + 1.0));  // -> log C(n,k+1)
    }
    return {success, failure};
}

/// Probability of a correctable pattern for a flat-tail distribution:
/// sum_{k<=t} (D-1)^k C(n,k) p0^(n-k) p_tail^k.
inline SuccessProb block_success_uniform(const SingleQuditErrorDist& dist,
                                         const CodeParams& code) {
    if (!dist.flat_tail) {
        throw ValidationError("block_success_uniform requires a flat-tail distribution");
    }
    return block_success_from_tail_mass(dist.tail_mass, code);
}

/// Probability of a correctable pattern for an arbitrary per-exponent
/// distribution. The weight-k pattern sum factorizes exactly, so only the
/// total nontrivial mass enters.
inline SuccessProb block_success_general(const SingleQuditErrorDist& dist,
                                         const CodeParams& code) {
    return block_success_from_tail_mass(dist.tail_mass, code);
}

struct SuccessProbs {
    SuccessProb rep;
    SuccessProb first_rep;
    SuccessProb bob_x;
    SuccessProb bob_z;
};

inline SuccessProbs success_probabilities(const StationDistributions& dists,
                                          const CodeParams& code) {
    SuccessProbs out;
    out.rep = block_success_general(dists.rep, code);
    out.first_rep = block_success_uniform(dists.first_rep, code);
    out.bob_x = block_success_uniform(dists.bob_x, code);
    out.bob_z = block_success_general(dists.bob_z, code);
    return out;
}

/// Product-form final error distribution on the distributed pair. Each
/// marginal has a flat tail: p[0] = (1 + (D-1)A)/D and p[e!=0] = (1-A)/D,
/// where A is the product of the success probabilities of the rounds
/// feeding that marginal. 1-A is carried through expm1/log1p so that
/// near-perfect chains keep an accurate entropy.
class FinalErrorDistribution {
  public:
    FinalErrorDistribution(int dim, double one_minus_ax, double one_minus_az)
        : dim_(dim), one_minus_ax_(one_minus_ax), one_minus_az_(one_minus_az) {}

    int dim() const { return dim_; }

    double px0() const { return 1.0 - (dim_ - 1) * px_tail(); }
    double pz0() const { return 1.0 - (dim_ - 1) * pz_tail(); }
    double px_tail() const { return one_minus_ax_ / dim_; }
    double pz_tail() const { return one_minus_az_ / dim_; }

    std::vector<double> p_x() const { return marginal(px_tail()); }
    std::vector<double> p_z() const { return marginal(pz_tail()); }

    /// Joint probability of the Pauli exponent pair (r, s).
    double joint(int r, int s) const {
        const double px = (r == 0) ? px0() : px_tail();
        const double pz = (s == 0) ? pz0() : pz_tail();
        return px * pz;
    }

    double entropy_x_bits() const { return marginal_entropy(one_minus_ax_); }
    double entropy_z_bits() const { return marginal_entropy(one_minus_az_); }

  private:
    std::vector<double> marginal(double tail) const {
        std::vector<double> p(dim_, tail);
        p[0] = 1.0 - (dim_ - 1) * tail;
        return p;
    }

    // H = -p0 log2 p0 - (D-1) q log2 q with q = (1-A)/D; the p0 term uses
    // log1p so it survives q -> 0, and q = 0 contributes exactly 0.
    double marginal_entropy(double one_minus_a) const {
        const double q = one_minus_a / dim_;
        if (q <= 0.0) return 0.0;
        const double tail_total = (dim_ - 1) * q;
        const double p0 = 1.0 - tail_total;
        const double p0_term = (p0 > 0.0) ? -p0 * std::log1p(-tail_total) / kLn2 : 0.0;
        return p0_term - (dim_ - 1) * xlog2x(q);
    }

    int dim_;
    double one_minus_ax_;
    double one_minus_az_;
};

/// Combine the per-round success probabilities into the final distribution:
/// A_x = rep^(N/2) * bobX and A_z = firstRep * rep^(N/2-1) * bobZ.
inline FinalErrorDistribution final_distribution(const SuccessProbs& succ,
                                                 const Topology& topo, int dim) {
    const double half_links = static_cast<double>(topo.n_links()) / 2.0;
    const double log_rep = std::log1p(-succ.rep.failure);
    const double log_ax = half_links * log_rep + std::log1p(-succ.bob_x.failure);
    const double log_az = std::log1p(-succ.first_rep.failure) + (half_links - 1.0) * log_rep +
                          std::log1p(-succ.bob_z.failure);
    return FinalErrorDistribution(dim, -std::expm1(log_ax), -std::expm1(log_az));
}

/// Shannon entropy of the product-form distribution, in bits.
inline double entropy(const FinalErrorDistribution& dist) {
    return dist.entropy_x_bits() + dist.entropy_z_bits();
}

/// One fully specified evaluation point.
struct Scenario {
    PhysicalParams phys;
    Topology topo;
    CodeParams code;
    Encoding encoding = Encoding::Multimode;
};

inline long long mode_count(const CodeParams& code, Encoding enc) {
    return enc == Encoding::Fock ? code.n
                                 : static_cast<long long>(code.n) * code.dim;
}

/// Repeaterless upper bound for M parallel modes over the full distance:
/// -M log2(1 - eta). Returns +infinity at zero distance.
inline double plob_upper_bound(double alpha_db_per_km, double total_km, long long modes) {
    const double eta = link_transmissivity(alpha_db_per_km, total_km);
    return -static_cast<double>(modes) * std::log1p(-eta) / kLn2;
}

inline double capacity_lower_bound(int dim, double entropy_bits) {
    return std::max(0.0, std::log2(static_cast<double>(dim)) - entropy_bits);
}

struct GainReport {
    Scenario scenario;
    SuccessProbs succ;
    double one_minus_ax = 0.0;
    double one_minus_az = 0.0;
    double entropy_bits = 0.0;
    double capacity_lower = 0.0;  // B_rep, bits
    double plob_upper = 0.0;      // B_PLOB, bits (+inf at zero distance)
    double gain = 0.0;            // delta = B_rep - B_PLOB
    long long modes = 0;

    FinalErrorDistribution final_dist() const {
        return FinalErrorDistribution(scenario.code.dim, one_minus_ax, one_minus_az);
    }
};

inline GainReport capacity_bounds(const Scenario& sc, const SuccessProbs& succ,
                                  const FinalErrorDistribution& fin) {
    const double entropy_bits = entropy(fin);
    const long long modes = mode_count(sc.code, sc.encoding);
    const double b_rep = capacity_lower_bound(sc.code.dim, entropy_bits);
    const double b_plob =
        plob_upper_bound(sc.phys.alpha_db_per_km, sc.topo.total_km(), modes);
    return GainReport{sc,
                      succ,
                      fin.dim() * fin.px_tail(),
                      fin.dim() * fin.pz_tail(),
                      entropy_bits,
                      b_rep,
                      b_plob,
                      b_rep - b_plob,
                      modes};
}

/// Full pipeline for one scenario. Throws InvalidRegimeError where the Fock
/// loss approximation rejects the spacing.
inline GainReport evaluate(const Scenario& sc) {
    const StationDistributions dists =
        station_distributions(sc.phys, sc.topo, sc.code, sc.encoding);
    const SuccessProbs succ = success_probabilities(dists, sc.code);
    const FinalErrorDistribution fin = final_distribution(succ, sc.topo, sc.code.dim);
    return capacity_bounds(sc, succ, fin);
}

/// Like evaluate(), but reports an out-of-regime spacing as nullopt instead
/// of throwing; parameter sweeps treat those points as data.
inline std::optional<GainReport> try_evaluate(const Scenario& sc) {
    if (sc.encoding == Encoding::Fock) {
        const double eta0 = link_transmissivity(sc.phys.alpha_db_per_km, sc.topo.spacing_km());
        if (!try_build_fock_approx(sc.code.dim, eta0)) return std::nullopt;
    }
    return evaluate(sc);
}

/// Crossing of the physical error rate (D-1)p against the logical failure
/// rate 1 - p_succ, solved for the flat-tail per-exponent rate p in
/// (0, 1/D). Reported in three conventions; `physical_rate` is the common
/// value of the two rates at the crossing.
struct Pseudothreshold {
    double per_exponent_rate = 0.0;   // p*
    double physical_rate = 0.0;       // (D-1) p*
    double depolarizing_rate = 0.0;   // D p*, the uniform depolarizing rate inducing p*
};

inline std::optional<Pseudothreshold> pseudothreshold(const CodeParams& code) {
    const int dim = code.dim;
    const auto excess = [&](double p) {
        const SuccessProb s = block_success_from_tail_mass((dim - 1) * p, code);
        return s.failure - (dim - 1) * p;
    };
    // Logical must beat physical at small rates, then cross back above it.
    // Codes without correction (t = 0) satisfy logical >= physical with
    // equality at n = 1; the noise band keeps round-off from faking a
    // crossing there.
    const double p_max = 1.0 / dim;
    const int grid = 4096;
    double lo = 0.0;
    double hi = 0.0;
    bool seen_negative = false;
    for (int i = 1; i <= grid; ++i) {
        const double p = p_max * i / (grid + 1.0);
        const double f = excess(p);
        const double band = 1e-9 * (dim - 1) * p;
        if (f < -band) {
            seen_negative = true;
            lo = p;
        } else if (seen_negative && f > band) {
            hi = p;
            break;
        }
    }
    if (!seen_negative || hi == 0.0) return std::nullopt;
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-15 * p_max; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    const double p_star = 0.5 * (lo + hi);
    return Pseudothreshold{p_star, (dim - 1) * p_star, dim * p_star};
}

}  // namespace quditrep
