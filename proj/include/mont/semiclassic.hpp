#pragma once

#include <utility>

/** Semiclassical functionals of the rescaled double well V = (x^2/2 - 1)^2.

    Everything here lives at the classical level: period-type integrals over
    the allowed region {V < E}, the transport average Phi that governs the
    limit of lambda'/alpha, the limiting measures' moments, the action used
    by the Bohr-Sommerfeld rule, and the critical energy E_c where the
    average of 2 - x^2 changes sign.

    All integrals run between the turning points, where the integrands carry
    inverse-square-root singularities; they are evaluated with the
    distance-aware tanh-sinh engine (see quad.hpp) so the singular factors
    never lose precision at the edges.  E = 1 is the barrier top: C and F
    diverge logarithmically there, and a guard band |E - 1| < 1e-3 around it
    is excluded from the C/F domain (Phi falls back to its limiting value 2).
*/
namespace mont::semiclassic {

/// Half-width of the excluded band around the barrier energy E = 1.
inline constexpr double kBarrierGuard = 1e-3;

/// Normalization C(E) = ( integral of (E-V)^{-1/2} over [x_-, x_+] )^{-1}.
/// Domain: E > 0 with |E - 1| >= kBarrierGuard.
double capital_C(double E);

/// F(E) = integral of (2 - x^2)(E - V)^{-1/2} over [x_-, x_+]; positive on
/// (0, 1), strictly decreasing through its unique zero E_c on (1, infinity).
/// Same domain restriction as capital_C.
double capital_F(double E);

/// theta_plus(eta) = integral over (-eta, 1) of tau (1-tau^2)^{-1/2}
/// (tau+eta)^{-1/2} d tau, for eta in (0, 1).  Substitution form of F above
/// the barrier: F(E) = -sqrt(2) eta^{-1/2} theta_plus(eta), eta = E^{-1/2}.
double theta_plus(double eta);

/// Same integrand over (-1, 1), for eta in (1, infinity); this is the
/// below-barrier branch (E in (0,1)) and is strictly negative there.
double theta_minus(double eta);

/// F(E) recomputed through theta_plus / theta_minus; independent evaluation
/// path used to cross-check capital_F.
double capital_F_via_theta(double E);

/// Transport average Phi(E) = C(E) F(E), extended by continuity: 0 at E = 0,
/// the limiting value 2 inside the guard band around E = 1.
double phi(double E);

/// k-th moment of the limiting spectral measure at energy E (k <= 8).
/// Odd moments vanish by symmetry; E = 0 and E = 1 are the Dirac branches
/// (mass at +-sqrt(2), respectively at 0).
double measure_moment(double E, int k);

/// Action E(mu) = (1/pi) integral of sqrt(mu - V) over [-x_+, x_+], mu > 1.
double action(double mu);

/// d/dmu of the action: (1/(2 pi)) integral of (mu - V)^{-1/2}, mu > 1.
double action_deriv(double mu);

/// Unique zero of capital_F in (lo, hi); defaults bracket the known root.
/// Bisection-secant hybrid, absolute tolerance 1e-8 in E.
double find_Ec(double lo = 1.5, double hi = 4.0);

/// G(E) = (integral of (E-V)^{1/2}) * (integral of (E-V)^{-1/2})^{-2},
/// both over [0, x_+], for E > 1.
double capital_G(double E);

/// Limiting curvature of the eigenvalue branches at their critical points:
/// -3 F'(E_c) G(E_c), with F' taken by extrapolated central differences
/// (steps 1e-2 and 5e-3, cross-checked against each other).
double second_derivative_limit();

/// Solve E(mu) = (j + 1/2) h for mu; j >= 0 is the Bohr-Sommerfeld index.
/// The monotone action is bracketed on [1 + guard, 50] and inverted to an
/// absolute width of 1e-11 in mu.
double bohr_sommerfeld(int j, double h);

/// (K_1, limit) for the deep-negative-coupling regime: K_1 normalizes the
/// classical measure of -d^2 + s^4/4 at unit energy and the limit is
/// -K_1 * integral of s^2 (1 - s^4/4)^{-1/2} over [-sqrt(2), sqrt(2)].
std::pair<double, double> regime1_constants();

/// Lower-bound profile 4 / (3 x_+(E) + sqrt(2)) for the bottom regime,
/// defined for E in [0, 1); equals 1/sqrt(2) at E = 0.
double bottom_regime_bound(double E);

}  // namespace mont::semiclassic
