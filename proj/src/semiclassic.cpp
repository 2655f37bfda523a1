#include "mont/semiclassic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mont/model.hpp"
#include "mont/quad.hpp"
#include "mont/rootfind.hpp"

namespace mont::semiclassic {

namespace {

const double SQRT2 = 1.4142135623730951;

/// Turning-point data for one energy, with the guard band enforced.
struct Well {
    double E;
    double sqrtE;
    double xm, xp;   // turning points (xm = 0 above the barrier)
    bool below;      // E < 1
};

Well make_well(double E, bool enforce_guard = true) {
    if (!(E > 0))
        throw std::domain_error("semiclassic: requires E > 0, got " +
                                std::to_string(E));
    if (enforce_guard && std::fabs(E - 1) < kBarrierGuard)
        throw std::domain_error(
            "semiclassic: the period integrals diverge logarithmically at the "
            "barrier energy E = 1; |E - 1| < " + std::to_string(kBarrierGuard) +
            " is outside the supported range (E = " + std::to_string(E) + ")");
    Well w;
    w.E = E;
    w.sqrtE = std::sqrt(E);
    auto tp = model::turning_points(E);
    w.xm = tp.x_minus;
    w.xp = tp.x_plus;
    w.below = E < 1;
    return w;
}

/// E - V(x) in factored form.  `ua`/`ub` are the exact distances to the
/// integration endpoints, which coincide with the turning points for the
/// singular integrals below; the factors therefore keep their sign and full
/// relative precision arbitrarily close to the edges.
double energy_minus_V(const Well& w, double x, double ua, double ub) {
    double outer = ub * (x + w.xp) / 2;  // (x_+ - x)(x_+ + x)/2
    double inner = w.below ? ua * (x + w.xm) / 2
                           : (x * x + 2 * (w.sqrtE - 1)) / 2;
    return outer * inner;
}

/// integral of g(x) (E - V)^{-1/2} over (x_-, x_+).
template <typename G>
double well_integral(const Well& w, G&& g) {
    quad::QuadratureSpec spec;
    spec.a = w.xm;
    spec.b = w.xp;
    auto f = [&](double x, double ua, double ub) {
        return g(x) / std::sqrt(energy_minus_V(w, x, ua, ub));
    };
    return quad::integrate_singular(quad::Integrand(f), spec).value;
}

double time_integral(const Well& w) {
    return well_integral(w, [](double) { return 1.0; });
}

}  // namespace

double capital_C(double E) {
    return 1.0 / time_integral(make_well(E));
}

double capital_F(double E) {
    return well_integral(make_well(E), [](double x) { return 2 - x * x; });
}

double theta_plus(double eta) {
    if (!(eta > 0) || !(eta < 1))
        throw std::domain_error("theta_plus: eta must lie in (0, 1), got " +
                                std::to_string(eta));
    quad::QuadratureSpec spec;
    spec.a = -eta;
    spec.b = 1.0;
    // tau (1 - tau^2)^{-1/2} (tau + eta)^{-1/2};  tau + eta = ua and
    // 1 - tau = ub exactly, 1 + tau = (1 - eta) + ua stays positive.
    auto f = [eta](double tau, double ua, double ub) {
        return tau / std::sqrt(ub * ((1 - eta) + ua) * ua);
    };
    return quad::integrate_singular(quad::Integrand(f), spec).value;
}

double theta_minus(double eta) {
    if (!(eta > 1))
        throw std::domain_error("theta_minus: eta must be > 1, got " +
                                std::to_string(eta));
    quad::QuadratureSpec spec;
    spec.a = -1.0;
    spec.b = 1.0;
    auto f = [eta](double tau, double ua, double ub) {
        return tau / std::sqrt(ua * ub * ((eta - 1) + ua));
    };
    return quad::integrate_singular(quad::Integrand(f), spec).value;
}

double capital_F_via_theta(double E) {
    Well w = make_well(E);  // validates domain, including the guard band
    double eta = 1 / w.sqrtE;
    double th = w.below ? theta_minus(eta) : theta_plus(eta);
    // F = -sqrt(2) eta^{-1/2} theta = -sqrt(2) E^{1/4} theta
    return -SQRT2 * std::pow(E, 0.25) * th;
}

double phi(double E) {
    if (!(E >= 0))
        throw std::domain_error("phi: requires E >= 0, got " + std::to_string(E));
    if (E == 0)
        return 0.0;
    if (std::fabs(E - 1) < kBarrierGuard)
        return 2.0;  // limiting value: the log-divergent parts of C^-1 and F
                     // share the weight of 2 - x^2 at the barrier point x = 0
    return capital_C(E) * capital_F(E);
}

double measure_moment(double E, int k) {
    if (k < 0 || k > 8)
        throw std::invalid_argument(
            "measure_moment: moment order must lie in [0, 8], got " +
            std::to_string(k));
    if (!(E >= 0))
        throw std::domain_error("measure_moment: requires E >= 0");
    if (k % 2 == 1)
        return 0.0;  // the measures are even
    if (E == 0)
        return std::pow(2.0, k / 2);  // mass 1/2 at each of +-sqrt(2)
    if (E == 1)
        return k == 0 ? 1.0 : 0.0;    // Dirac at the barrier point
    Well w = make_well(E);
    double num = well_integral(w, [k](double x) { return std::pow(x, k); });
    return num / time_integral(w);
}

double action(double mu) {
    if (!(mu > 1))
        throw std::domain_error("action: defined for mu > 1, got " +
                                std::to_string(mu));
    Well w = make_well(mu, false);  // no guard: sqrt(mu - V) stays integrable
    quad::QuadratureSpec spec;
    spec.a = 0.0;
    spec.b = w.xp;
    auto f = [&w](double x, double ua, double ub) {
        return std::sqrt(energy_minus_V(w, x, ua, ub));
    };
    // (1/pi) over [-x_+, x_+] = (2/pi) over [0, x_+] by symmetry
    return 2 / M_PI * quad::integrate_singular(quad::Integrand(f), spec).value;
}

double action_deriv(double mu) {
    if (!(mu > 1))
        throw std::domain_error("action_deriv: defined for mu > 1, got " +
                                std::to_string(mu));
    return time_integral(make_well(mu, false)) / M_PI;
}

double find_Ec(double lo, double hi) {
    if (!(lo > 1 + kBarrierGuard) || !(lo < hi))
        throw std::invalid_argument("find_Ec: bracket must satisfy 1 < lo < hi");
    double flo = capital_F(lo);
    double fhi = capital_F(hi);
    if (!(flo > 0) || !(fhi < 0))
        throw std::invalid_argument(
            "find_Ec: F does not change sign from + to - on [" +
            std::to_string(lo) + ", " + std::to_string(hi) +
            "]; widen the bracket");
    return rootfind::solve_bracketed([](double E) { return capital_F(E); }, lo,
                                     hi, flo, fhi, 1e-8);
}

double capital_G(double E) {
    if (!(E > 1))
        throw std::domain_error("capital_G: defined for E > 1, got " +
                                std::to_string(E));
    Well w = make_well(E, false);
    quad::QuadratureSpec spec;
    spec.a = 0.0;
    spec.b = w.xp;
    auto f = [&w](double x, double ua, double ub) {
        return std::sqrt(energy_minus_V(w, x, ua, ub));
    };
    double I1 = quad::integrate_singular(quad::Integrand(f), spec).value;
    double I2 = time_integral(w);
    return I1 / (I2 * I2);
}

double second_derivative_limit() {
    double Ec = find_Ec();
    auto slope = [Ec](double s) {
        return (capital_F(Ec + s) - capital_F(Ec - s)) / (2 * s);
    };
    // Central differences with O(s^2) error.  The steps are deliberately
    // large: quadrature noise in F is amplified by 1/s, so shrinking s past
    // the noise floor loses digits.  One extrapolation step removes the s^2
    // term instead.
    double d_coarse = slope(1e-2);
    double d_fine = slope(5e-3);
    if (std::fabs(d_fine - d_coarse) > 1e-3 * std::fabs(d_fine))
        throw std::runtime_error(
            "second_derivative_limit: F' finite differences at steps 1e-2 and "
            "5e-3 disagree beyond 1e-3 relative");
    double dF = (4 * d_fine - d_coarse) / 3;
    return -3 * dF * capital_G(Ec);
}

double bohr_sommerfeld(int j, double h) {
    if (j < 0)
        throw std::invalid_argument("bohr_sommerfeld: index must be >= 0");
    if (!(h > 0))
        throw std::invalid_argument("bohr_sommerfeld: requires h > 0");
    const double mu_lo = 1 + kBarrierGuard;
    const double mu_hi = 50.0;
    double target = (j + 0.5) * h;
    double a_lo = action(mu_lo);
    double a_hi = action(mu_hi);
    if (!(target >= a_lo) || !(target <= a_hi))
        throw std::domain_error(
            "bohr_sommerfeld: quantization target " + std::to_string(target) +
            " lies outside the invertible action range [" + std::to_string(a_lo) +
            ", " + std::to_string(a_hi) + "] for mu in [1.001, 50]");
    auto g = [target](double mu) { return action(mu) - target; };
    return rootfind::solve_bracketed(g, mu_lo, mu_hi, a_lo - target,
                                     a_hi - target, 1e-11);
}

std::pair<double, double> regime1_constants() {
    quad::QuadratureSpec spec;
    spec.a = -SQRT2;
    spec.b = SQRT2;
    // 1 - s^4/4 = (sqrt2 - s)(sqrt2 + s)(2 + s^2)/4 = ua ub (2 + s^2)/4
    auto base = [](double s, double ua, double ub) {
        return 2 / std::sqrt(ua * ub * (2 + s * s));
    };
    auto weighted = [&base](double s, double ua, double ub) {
        return s * s * base(s, ua, ub);
    };
    double I1 = quad::integrate_singular(quad::Integrand(base), spec).value;
    double I2 = quad::integrate_singular(quad::Integrand(weighted), spec).value;
    double K1 = 1 / I1;
    return {K1, -K1 * I2};
}

double bottom_regime_bound(double E) {
    if (!(E >= 0) || !(E < 1))
        throw std::domain_error(
            "bottom_regime_bound: defined for E in [0, 1), got " +
            std::to_string(E));
    double xp = model::turning_points(E).x_plus;
    return 4 / (3 * xp + SQRT2);
}

}  // namespace mont::semiclassic
