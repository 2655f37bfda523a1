#include "mont/quad.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace mont::quad {

namespace {

// Truncation of the t-axis: the node weight decays like exp(-pi sinh|t|),
// which underflows well before |t| = 6.1, so nothing is lost.
const double T_MAX = 6.1;
// Non-finite integrand values this close to an endpoint are attributed to
// roundoff in the caller's singular factor and contribute zero.
const double ENDPOINT_GUARD = 1e-14;
// Level-to-level differences below this multiple of the accumulated |f|
// mass are indistinguishable from roundoff; accept them as converged.
const double FLOOR_FACTOR = 50 * std::numeric_limits<double>::epsilon();

struct NodeSums {
    double signed_sum = 0.0;  // sum of w * f over nodes, step factored out
    double abs_sum = 0.0;     // sum of w * |f|
};

void check_spec(const QuadratureSpec& spec) {
    if (!std::isfinite(spec.a) || !std::isfinite(spec.b) || !(spec.a < spec.b))
        throw std::invalid_argument("quadrature: interval must satisfy a < b");
    if (!(spec.rel_tol > 0) || !(spec.rel_tol < 1e-2))
        throw std::invalid_argument("quadrature: rel_tol must lie in (0, 1e-2)");
    if (spec.max_levels < 1 || spec.max_levels > 20)
        throw std::invalid_argument("quadrature: max_levels must lie in [1, 20]");
}

/// Evaluate one node at parameter t (t != 0 handled in mirrored pairs by the
/// caller); accumulates w * f with the exact endpoint distances.
void accumulate_node(const Integrand& f, const QuadratureSpec& spec, double r,
                     double t, NodeSums& sums) {
    double s = 1.5707963267948966 * std::sinh(std::fabs(t));
    double q = s < 350 ? std::exp(-2 * s) : 0.0;
    if (q == 0.0)
        return;  // weight underflows; the tail is beyond double range anyway
    double near = r * 2 * q / (1 + q);  // distance to the endpoint t leans on
    double far = r * 2 / (1 + q);       // distance to the other endpoint
    double ua, ub, x;
    if (t >= 0) {
        ua = far;
        ub = near;
        x = spec.b - near;
    } else {
        ua = near;
        ub = far;
        x = spec.a + near;
    }
    double sech = 2 * std::sqrt(q) / (1 + q);
    double w = 1.5707963267948966 * std::cosh(t) * sech * sech;
    double fx = f(x, ua, ub);
    if (!std::isfinite(fx)) {
        if (near <= ENDPOINT_GUARD)
            return;  // turning-point roundoff at the very edge: treat as 0
        throw QuadratureError(
            "quadrature: integrand returned a non-finite value at x = " +
                std::to_string(x) + " (distance " + std::to_string(near) +
                " from the nearer endpoint)",
            std::numeric_limits<double>::quiet_NaN(),
            std::numeric_limits<double>::infinity(), 0);
    }
    sums.signed_sum += w * fx;
    sums.abs_sum += w * std::fabs(fx);
}

QuadratureResult de_integrate(const Integrand& f, const QuadratureSpec& spec) {
    check_spec(spec);
    double r = 0.5 * (spec.b - spec.a);

    NodeSums sums;
    double prev_value = 0.0;
    double value = 0.0;
    double err = std::numeric_limits<double>::infinity();
    int level = 1;
    for (;; ++level) {
        double h = std::ldexp(1.0, 1 - level);  // 2^(1-level)
        if (level == 1) {
            accumulate_node(f, spec, r, 0.0, sums);
            for (double t = h; t <= T_MAX; t += h) {
                accumulate_node(f, spec, r, t, sums);
                accumulate_node(f, spec, r, -t, sums);
            }
        } else {
            // refine: only odd multiples of the new step are new nodes
            for (double t = h; t <= T_MAX; t += 2 * h) {
                accumulate_node(f, spec, r, t, sums);
                accumulate_node(f, spec, r, -t, sums);
            }
        }
        prev_value = value;
        value = r * h * sums.signed_sum;
        if (level >= 2)
            err = std::fabs(value - prev_value);
        // Levels 1-2 sample too coarsely for the difference to mean anything.
        if (level >= 3) {
            double floor = FLOOR_FACTOR * r * h * sums.abs_sum;
            if (err <= spec.rel_tol * std::fabs(value) || err <= floor)
                return {value, err, level};
        }
        if (level >= spec.max_levels)
            break;
    }
    throw QuadratureError(
        "quadrature: no convergence after " + std::to_string(spec.max_levels) +
            " levels (best estimate " + std::to_string(value) +
            ", last refinement changed it by " + std::to_string(err) + ")",
        value, err, level);
}

Integrand wrap(const std::function<double(double)>& f) {
    return [f](double x, double, double) { return f(x); };
}

}  // namespace

QuadratureResult integrate_singular(const Integrand& f, const QuadratureSpec& spec) {
    return de_integrate(f, spec);
}

QuadratureResult integrate_smooth(const Integrand& f, const QuadratureSpec& spec) {
    return de_integrate(f, spec);
}

QuadratureResult integrate_singular(const std::function<double(double)>& f,
                                    const QuadratureSpec& spec) {
    return de_integrate(wrap(f), spec);
}

QuadratureResult integrate_smooth(const std::function<double(double)>& f,
                                  const QuadratureSpec& spec) {
    return de_integrate(wrap(f), spec);
}

}  // namespace mont::quad
