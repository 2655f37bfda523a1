/**
 * Level curves alpha -> lambda_j(alpha) of the quartic double-well family
 *
 *     H(alpha) = -d^2/dt^2 + (t^2/2 - alpha)^2   on L^2(R)
 *
 * and the diagnostics derived from them: first derivatives through the
 * Feynman-Hellmann quadrature, second derivatives through the shifted
 * orthogonal solve, critical points, integral-identity residuals,
 * closed-form bound checks, level quotients, and the comparison with the
 * semiclassical functionals.
 *
 * Discretization policy shared by every operation in this module:
 *
 *  - The box and base grid come from fdop::choose_box(alpha, j).  Every
 *    reported scalar is computed on that grid and on its refinement and
 *    combined by one Richardson step, which upgrades the second-order
 *    stencil to fourth order.
 *  - Levels are 1-based on the full line.  Because the potential is even,
 *    level j is exactly half-line Neumann level (j-1)/2 for odd j and
 *    half-line Dirichlet level j/2-1 for even j.  At or above
 *    kParityPathThreshold the solver always works in those half-line
 *    families, where the exponentially close even/odd pairs are separated
 *    by construction; below it, full-line Sturm counting orders the
 *    levels directly.
 *  - Evaluations that need boundary data at t = 0 (identity residuals,
 *    second derivatives) use the half-line representation at every alpha;
 *    the parity reduction is exact algebra, not an approximation.
 *
 * Functionals of the eigenvector use the trapezoid rule on the grid,
 * consistent with the stencil order; u'(0) uses the one-sided
 * second-order difference.
 */
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mont/fdop.hpp"

namespace mont::curves {

/// Alpha at and above which level bookkeeping switches from full-line
/// Sturm counting to the half-line Neumann/Dirichlet families.
inline constexpr double kParityPathThreshold = 3.0;

/// Absolute tolerance in alpha to which critical points are located.
inline constexpr double kCriticalTol = 1e-6;

/// Step of the auto-bracketing scan used by find_critical(j).
inline constexpr double kScanStep = 0.05;

/// Slack added to the closed-form bound comparisons to absorb
/// discretization error in lambda.
inline constexpr double kBoundSlack = 1e-6;

/// Geometry actually used to produce a sample.
struct MethodMeta {
    double box_half_width = 0;  ///< half-width L of the truncation box
    double dx_coarse = 0;       ///< spacing of the base grid
    int points_coarse = 0;      ///< full-line point count, base grid
    int points_refined = 0;     ///< full-line point count, refined grid
    bool parity_path = false;   ///< half-line families used for this sample
};

/// One point of a level curve.
struct CurveSample {
    double alpha = 0;
    int j = 0;                           ///< 1-based full-line level index
    double lambda = 0;                   ///< eigenvalue lambda_j(alpha)
    double lambda_prime = 0;             ///< d lambda / d alpha (Feynman-Hellmann)
    std::optional<double> lambda_second; ///< filled by lambda_second(), not here
    std::optional<double> E;             ///< lambda / alpha^2 when alpha > 0
    MethodMeta meta;
};

/// A located zero of lambda_j'.
struct CriticalPoint {
    int j = 0;
    double alpha_c = 0;      ///< root of lambda', alpha_c > 0
    double lambda_at = 0;    ///< lambda_j(alpha_c)
    double second_deriv = 0; ///< lambda_j''(alpha_c); > 0 classifies a minimum
    double quotient = 0;     ///< lambda_at / alpha_c^2
};

/// Residuals of the integral identities satisfied by an exact eigenpair.
/// Each entry is an absolute residual; compare against `lambda` for a
/// relative reading.  `critical` vanishes only where lambda' does.
struct IdentityResiduals {
    double dilation = 0;     ///< |alpha lambda' + lambda - 3 ||(t^2/2-alpha)u||^2|
    double virial = 0;       ///< half-line integration-by-parts identity (see below)
    double critical = 0;     ///< |3 ||(t^2/2-alpha)u||^2 - lambda|
    double energy_split = 0; ///< |lambda - ||u'||^2 - ||(t^2/2-alpha)u||^2|
    double lambda = 0;       ///< the eigenvalue, for scaling the residuals
};

/// Quotient curve lambda_{j_high}/lambda_{j_low} over an alpha range.
struct QuotientScan {
    int j_low = 0;
    int j_high = 0;
    std::vector<double> alpha;
    std::vector<double> ratio;
    double min_ratio = 0;
    double argmin = 0; ///< alpha at which min_ratio is attained
};

/// Lower bound for lambda_j'' at a critical point, derived from the gap
/// to the next level of the same parity.
struct GapBound {
    double bound = 0;         ///< (2/3) (3 lambda_{j+2} - 7 lambda_j) / (lambda_{j+2} - lambda_j)
    bool hypothesis = false;  ///< 3 lambda_{j+2} > 7 lambda_j at alpha_c
    double lambda_j = 0;
    double lambda_j2 = 0;     ///< lambda_{j+2}
};

/// Closed-form bound checks at one alpha.  Booleans include kBoundSlack.
/// The two inverse bounds apply only for alpha > 0 and are vacuously true
/// (with empty values) otherwise.
struct BoundsCheck {
    double alpha = 0;
    double gamma = 0;          ///< harmonic-comparison parameter used for the floor
    double lambda1 = 0;
    double lambda3 = 0;
    double gaussian_bound = 0; ///< alpha^2 - 6^{-1/3} alpha + (3/4)^{4/3}
    std::optional<double> inverse_bound;  ///< 1/(4 alpha) + (3/4) alpha^2
    std::optional<double> inverse_bound2; ///< 3/(10 alpha) + (11/16) alpha^2
    double harmonic_floor = 0; ///< 5 gamma^{1/2} - 2 gamma alpha - gamma^2, floor for lambda_3
    bool gaussian_ok = false;
    bool inverse_ok = false;
    bool inverse2_ok = false;
    bool floor_ok = false;
};

/// Side-by-side comparison of a high level with the semiclassical
/// predictions at h = alpha^{-3/2}.
struct SemiclassicalComparison {
    double alpha = 0;
    int j = 0;
    double h = 0;               ///< semiclassical parameter alpha^{-3/2}
    double E = 0;               ///< lambda / alpha^2
    double lambda_prime_over_alpha = 0;
    double phi = 0;             ///< transport prediction Phi(E) for lambda'/alpha
    double phi_diff = 0;        ///< |lambda'/alpha - Phi(E)|
    double bs_energy = 0;       ///< Bohr-Sommerfeld prediction mu_j(h)
    double bs_diff = 0;         ///< |E - bs_energy|
    double grid_moment2 = 0;    ///< int x^2 v(x)^2 dx from the eigenvector
    double measure_moment2 = 0; ///< second moment of the limiting measure at E
    double moment_diff = 0;     ///< |grid_moment2 - measure_moment2|
};

/// Compute lambda_j(alpha) and its Feynman-Hellmann derivative
///   lambda'(alpha) = -2 int (t^2/2 - alpha) u^2 dt
/// with the box chosen by fdop::choose_box and the path rule described in
/// the module header.  Requires j >= 1 and finite alpha; solver failures
/// propagate.
CurveSample eigen_curve(int j, double alpha);

/// Same computation on caller-supplied geometry.  Intended for
/// finite-difference cross-checks, which need the box held fixed while
/// alpha varies so that discretization error cancels in the differences.
CurveSample eigen_curve_on_box(int j, double alpha, const fdop::BoxSpec& box,
                               bool parity_path);

/// Evaluate eigen_curve at each alpha.  Samples are independent solves;
/// when the environment variable MONT_THREADS is set above 1 they run
/// concurrently, and results are always assembled in input order, so the
/// output is identical to the sequential one.
std::vector<CurveSample> eigen_curve_sweep(int j, const std::vector<double>& alphas);

/// Second derivative lambda_j''(alpha) via the derivative of the
/// eigenfunction: solve (H - lambda) w = [2(t^2/2 - alpha) + lambda'] u
/// orthogonally to u, then
///   lambda'' = 2 - 4 int (t^2/2 - alpha) u w dt.
/// Always evaluated in the half-line families.  A centered difference of
/// lambda' is the cross-check used by the tests, not this routine.
double lambda_second(int j, double alpha);

/// Locate a zero of lambda_j' inside the given bracket (endpoints
/// included) to kCriticalTol in alpha, then classify it by the sign of
/// lambda_second.  Throws std::invalid_argument if lambda' does not
/// change sign on the bracket.
CriticalPoint find_critical(int j, std::pair<double, double> bracket);

/// Auto-bracketing variant: scan alpha over (0, 3 + j/2] in steps of
/// kScanStep until lambda_j' changes sign, then refine as above.  Throws
/// std::runtime_error listing the scanned values if no sign change is
/// found; such a failure never asserts that no critical point exists.
CriticalPoint find_critical(int j);

/// Residuals of the eigenpair identities at (j, alpha), alpha > 0:
///
///  - dilation:     alpha lambda' + lambda = 3 ||(t^2/2 - alpha) u||^2
///  - virial:       2 int_0^inf (t - sqrt(2 alpha)) (t^2/2 - alpha) u^2 dt
///                    - sqrt(alpha/2) lambda'
///                    = (lambda - alpha^2) u(0)^2 + u'(0)^2
///  - critical:     3 ||(t^2/2 - alpha) u||^2 = lambda   (holds at zeros of lambda')
///  - energy_split: lambda = ||u'||^2 + ||(t^2/2 - alpha) u||^2
///
/// Boundary values come from the half-line grid: u(0) is the fold node,
/// u'(0) the one-sided second-order difference.  ||u'||^2 is rebuilt from
/// centered differences of the eigenvector, independent of the matrix
/// quadratic form.
IdentityResiduals identity_residuals(int j, double alpha);

/// Ratio curve lambda_{j_high}/lambda_{j_low} sampled over
/// [alpha_lo, alpha_hi] in the given step (right endpoint included up to
/// half a step of roundoff).  The levels must have equal parity so both
/// belong to one half-line family.  Honors MONT_THREADS like
/// eigen_curve_sweep.
QuotientScan quotient_scan(int j_low, int j_high, double alpha_lo,
                           double alpha_hi, double step);

/// Gap lower bound for lambda_j'' at a located critical point, j in {1, 2}:
///   (2/3) (3 lambda_{j+2} - 7 lambda_j) / (lambda_{j+2} - lambda_j),
/// valid when the reported hypothesis 3 lambda_{j+2} > 7 lambda_j holds.
GapBound gap_second_derivative_bound(int j, double alpha_c);

/// Check lambda_1 against its closed-form upper bounds and lambda_3
/// against the harmonic-comparison lower bound at one alpha:
///
///   lambda_1 <= alpha^2 - 6^{-1/3} alpha + (3/4)^{4/3}      (all alpha)
///   lambda_1 <= 1/(4 alpha) + (3/4) alpha^2                 (alpha > 0)
///   lambda_1 <= 3/(10 alpha) + (11/16) alpha^2              (alpha > 0)
///   lambda_3 >= 5 gamma^{1/2} - 2 gamma alpha - gamma^2     (any gamma > 0)
///
/// gamma defaults to 3/5, the choice that makes the floor useful on the
/// window where the critical point of lambda_1 lives.
BoundsCheck analytic_bounds_check(double alpha, double gamma = 0.6);

/// Compare level j at one alpha against the semiclassical predictions:
/// the transport value Phi(E) for lambda'/alpha, the Bohr-Sommerfeld
/// energy for E itself, and the limiting measure's second moment for
/// int x^2 v^2 dx (v the eigenvector rescaled by x = t / sqrt(alpha)).
/// Requires E = lambda/alpha^2 inside (1 + guard, 5); throws
/// std::domain_error otherwise, as the functionals are singular across
/// the barrier energy.
SemiclassicalComparison semiclassical_comparison(int j, double alpha);

} // namespace mont::curves
