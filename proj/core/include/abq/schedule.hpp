#pragma once

#include <vector>

namespace abq {

/// Low-dimensional parameterization of a depth-p schedule. u drives the
/// phase angles, v the mixing angles; the number of layers equals the number
/// of coefficients.
struct FourierPoint {
    std::vector<double> u;
    std::vector<double> v;
};

/// Concrete layer angles; layer k applies the phase with gammas[k] first and
/// the mixer with betas[k] second.
struct Schedule {
    std::vector<double> gammas;
    std::vector<double> betas;
};

/// Expands Fourier coefficients to layer angles:
///   gamma_k = sum_l u_l sin[(l - 1/2)(k - 1/2) pi / p]
///   beta_k  = sum_l v_l cos[(l - 1/2)(k - 1/2) pi / p]
/// with k, l = 1..p. Throws ConfigError on empty or mismatched coefficient
/// vectors.
Schedule to_schedule(const FourierPoint& point);

}  // namespace abq
