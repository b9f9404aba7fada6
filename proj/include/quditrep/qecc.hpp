#pragma once

#include <string>

#include "quditrep/errors.hpp"
#include "quditrep/math.hpp"

namespace quditrep {

/// Parameters of an [[n, 1, d]]_D code. Only these numbers enter the rate
/// formulas; no stabilizers or encoding circuits are modeled.
struct CodeParams {
    int dim = 0;       // qudit dimension D
    int n = 0;         // physical qudits per logical qudit
    int distance = 0;  // code distance d
    int t = 0;         // correctable errors, floor((d-1)/2)

    bool even_distance() const { return distance % 2 == 0; }
    std::string label() const {
        return "[[" + std::to_string(n) + ",1," + std::to_string(distance) + "]]_" +
               std::to_string(dim);
    }
};

/// Validated general code; rejects parameter sets violating 2d - 1 <= n.
inline CodeParams custom_code(int dim, int n, int distance) {
    if (dim < 2) throw ValidationError("qudit dimension must be >= 2");
    if (n < 1) throw ValidationError("code length must be >= 1");
    if (distance < 1) throw ValidationError("code distance must be >= 1");
    if (2 * distance - 1 > n) {
        throw ValidationError("singleton bound violated: 2d-1 = " +
                              std::to_string(2 * distance - 1) + " exceeds n = " +
                              std::to_string(n));
    }
    return CodeParams{dim, n, distance, (distance - 1) / 2};
}

/// The singleton-saturating polynomial code [[D, 1, (D+1)/2]]_D for prime D.
inline CodeParams polynomial_code(int dim) {
    if (dim < 3) throw ValidationError("polynomial codes need dimension >= 3");
    if (!is_prime(dim)) {
        throw ValidationError("polynomial codes need a prime dimension, got " +
                              std::to_string(dim));
    }
    return custom_code(dim, dim, (dim + 1) / 2);
}

}  // namespace quditrep
