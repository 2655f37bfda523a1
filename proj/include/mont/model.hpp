#pragma once

#include <stdexcept>

/** Problem definition shared by every other module: the quartic potential
    family, its turning points, and the coupling <-> semiclassical rescaling.

    Two coordinate systems appear throughout.  In "unscaled" coordinates the
    operator is  -d^2/dt^2 + (t^2/2 - alpha)^2  on the real line.  Scaling
    t = sqrt(alpha) x (alpha > 0) turns it into  alpha^2 (-h^2 d^2/dx^2 + V(x))
    with the fixed double well V(x) = (x^2/2 - 1)^2 and h = alpha^{-3/2};
    eigenvalues map as E = lambda / alpha^2. */
namespace mont::model {

/// Boundary treatment of a discretized operator.
enum class BcMode {
    FullLine,           ///< Dirichlet box [-L, L]
    HalfLineNeumann,    ///< even-parity reduction, u'(0) = 0
    HalfLineDirichlet,  ///< odd-parity reduction, u(0) = 0
};

/// Coupling alpha plus derived quantities used when rescaling.
struct ModelParams {
    double alpha = 0.0;
    double h = 0.0;  ///< alpha^{-3/2}; meaningful only for alpha > 0
    BcMode bc_mode = BcMode::FullLine;
};

/// A spectral point in rescaled coordinates: E = lambda / alpha^2.
struct EnergyPoint {
    double E = 0.0;
    double lambda = 0.0;
    double alpha = 0.0;
};

/// Classical turning points of V at energy E (nonnegative branch).
struct TurningPoints {
    double x_minus = 0.0;  ///< inner point, 0 once E >= 1 (the well merges)
    double x_plus = 0.0;   ///< outer point sqrt(2 + 2 sqrt(E))
};

/// Double-well potential V(x) = (x^2/2 - 1)^2 in rescaled coordinates.
inline double potential_value(double x) {
    double w = x * x / 2 - 1;
    return w * w;
}

/// Unscaled potential (t^2/2 - alpha)^2.
inline double montgomery_potential_value(double t, double alpha) {
    double w = t * t / 2 - alpha;
    return w * w;
}

/// Turning points of the rescaled well at energy E >= 0.
TurningPoints turning_points(double E);

/// Semiclassical parameter h = alpha^{-3/2}; requires alpha > 0.
double rescale_alpha_to_h(double alpha);

/// Inverse map alpha = h^{-2/3}; requires h > 0.
double rescale_h_to_alpha(double h);

/// Bundle alpha with its h value (h left 0 when alpha <= 0).
ModelParams make_params(double alpha, BcMode bc = BcMode::FullLine);

}  // namespace mont::model
