#pragma once

#include <functional>
#include <stdexcept>
#include <string>

/** Double-exponential (tanh-sinh) quadrature on a finite interval.

    The substitution x = c + r tanh((pi/2) sinh t) pushes the endpoints to
    t = +-inf; the trapezoid rule in t then converges geometrically even when
    the integrand carries inverse-square-root endpoint singularities, which is
    the case of interest here (turning-point integrals).  Levels halve the
    step in t and reuse previous nodes, so the cost of level L is ~2^L
    evaluations total.

    Endpoint precision: nodes crowd double-exponentially close to the
    endpoints, far below the spacing of representable doubles around a and b.
    The engine therefore hands the integrand the exact distances to both
    endpoints along with the (rounded) coordinate; singular factors written in
    terms of those distances evaluate at full precision where the raw
    coordinate has already collapsed onto the endpoint.  A coordinate-only
    overload exists for convenience, with accuracy near off-zero singular
    endpoints limited to roughly sqrt(machine epsilon) of the local mass. */
namespace mont::quad {

struct QuadratureSpec {
    double a = 0.0;
    double b = 1.0;
    double rel_tol = 1e-10;
    int max_levels = 12;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  ///< |last level - previous level|
    int levels_used = 0;
};

/// Raised on non-convergence (carrying the best estimate reached) and on
/// non-finite integrand values away from the endpoints.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double best, double err, int levels)
        : std::runtime_error(what), best_estimate(best), error_estimate(err),
          levels_used(levels) {}
    double best_estimate;
    double error_estimate;
    int levels_used;
};

/// Integrand evaluated at strictly interior nodes; `ua` = x - a and
/// `ub` = b - x are exact even where `x` itself has rounded.
using Integrand = std::function<double(double x, double ua, double ub)>;

/// Integrate f over (spec.a, spec.b); f may be singular like c (x-a)^{-1/2}
/// or c (b-x)^{-1/2} at either endpoint.  Refines levels until the
/// level-to-level difference drops below rel_tol * |value| (or the roundoff
/// floor of the accumulated |f| mass); throws QuadratureError otherwise.
/// A non-finite integrand value within 1e-14 of an endpoint is treated as 0
/// (turning-point roundoff); anywhere else it raises QuadratureError naming
/// the node.
QuadratureResult integrate_singular(const Integrand& f, const QuadratureSpec& spec);

/// Same engine and contract for integrands smooth up to the boundary.
QuadratureResult integrate_smooth(const Integrand& f, const QuadratureSpec& spec);

// Coordinate-only convenience forms.
QuadratureResult integrate_singular(const std::function<double(double)>& f,
                                    const QuadratureSpec& spec);
QuadratureResult integrate_smooth(const std::function<double(double)>& f,
                                  const QuadratureSpec& spec);

}  // namespace mont::quad
