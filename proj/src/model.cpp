#include "mont/model.hpp"

#include <cmath>
#include <string>

namespace mont::model {

TurningPoints turning_points(double E) {
    if (!(E >= 0))
        throw std::invalid_argument("turning_points: energy must be >= 0, got " +
                                    std::to_string(E));
    TurningPoints tp;
    tp.x_plus = std::sqrt(2 + 2 * std::sqrt(E));
    tp.x_minus = E < 1 ? std::sqrt(2 - 2 * std::sqrt(E)) : 0.0;
    return tp;
}

double rescale_alpha_to_h(double alpha) {
    if (!(alpha > 0))
        throw std::invalid_argument("rescale_alpha_to_h: alpha must be > 0, got " +
                                    std::to_string(alpha));
    return std::pow(alpha, -1.5);
}

double rescale_h_to_alpha(double h) {
    if (!(h > 0))
        throw std::invalid_argument("rescale_h_to_alpha: h must be > 0, got " +
                                    std::to_string(h));
    return std::pow(h, -2.0 / 3.0);
}

ModelParams make_params(double alpha, BcMode bc) {
    ModelParams p;
    p.alpha = alpha;
    p.h = alpha > 0 ? rescale_alpha_to_h(alpha) : 0.0;
    p.bc_mode = bc;
    return p;
}

}  // namespace mont::model
