#include "abq/schedule.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "abq/errors.hpp"

namespace abq {

Schedule to_schedule(const FourierPoint& point) {
    const std::size_t p = point.u.size();
    if (p == 0) throw ConfigError("Fourier point has no coefficients");
    if (point.v.size() != p)
        throw ConfigError("Fourier coefficient count mismatch: " + std::to_string(p) +
                          " u vs " + std::to_string(point.v.size()) + " v");

    Schedule sched;
    sched.gammas.assign(p, 0.0);
    sched.betas.assign(p, 0.0);
    const double step = std::numbers::pi / static_cast<double>(p);
    for (std::size_t k = 0; k < p; ++k) {
        const double kk = (static_cast<double>(k) + 0.5) * step;
        double gamma = 0.0;
        double beta = 0.0;
        for (std::size_t l = 0; l < p; ++l) {
            const double phase = (static_cast<double>(l) + 0.5) * kk;
            gamma += point.u[l] * std::sin(phase);
            beta += point.v[l] * std::cos(phase);
        }
        sched.gammas[k] = gamma;
        sched.betas[k] = beta;
    }
    return sched;
}

}  // namespace abq
