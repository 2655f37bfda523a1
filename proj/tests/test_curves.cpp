#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "mont/curves.hpp"
#include "mont/fdop.hpp"
#include "mont/semiclassic.hpp"

using namespace mont;

namespace {

// Centered difference of f with one Richardson refinement: kills the h^2
// term, leaving an h^4 error.  Used to cross-check the analytic
// derivative routes on a frozen box, where grid error cancels between
// nearby alpha.
template <typename F>
double refined_fd(F&& f, double x, double h) {
    double d1 = (f(x + h) - f(x - h)) / (2 * h);
    double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
    return (4 * d2 - d1) / 3;
}

// Level index whose rescaled energy lands near the critical energy for
// this alpha, by inverting the phase-space area at the limiting value.
int level_near_critical_energy(double alpha) {
    double h = std::pow(alpha, -1.5);
    int j = static_cast<int>(std::lround(semiclassic::action(2.35) / h + 0.5));
    return j < 1 ? 1 : j;
}

}  // namespace

TEST_CASE("ground level at alpha = 0 reproduces the pure quartic energy") {
    auto s = curves::eigen_curve(1, 0.0);
    // reference computed on a sequence of fine grids, frozen to ten digits
    CHECK(s.lambda == doctest::Approx(0.6679862590).epsilon(1e-7));
    CHECK(std::fabs(s.lambda - 0.6679862590) < 5e-8);
    CHECK(s.lambda_prime < 0);  // curve still descending at alpha = 0
    CHECK_FALSE(s.E.has_value());
    CHECK_FALSE(s.lambda_second.has_value());
    CHECK_FALSE(s.meta.parity_path);
    CHECK(s.meta.points_refined == 2 * s.meta.points_coarse + 1);
}

TEST_CASE("negative alpha: eigenvalue sits above alpha^2 and still descends") {
    auto s = curves::eigen_curve(1, -2.0);
    CHECK(s.lambda >= 4.0);
    CHECK(s.lambda_prime < 0);
    CHECK_FALSE(s.E.has_value());
}

TEST_CASE("E field populated exactly for positive alpha") {
    auto s = curves::eigen_curve(2, 1.5);
    REQUIRE(s.E.has_value());
    CHECK(*s.E == doctest::Approx(s.lambda / 2.25).epsilon(1e-15));
    CHECK(s.lambda > 0);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(curves::eigen_curve(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(curves::eigen_curve(-3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(curves::eigen_curve(1, std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(curves::lambda_second(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(curves::identity_residuals(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(curves::identity_residuals(1, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(curves::quotient_scan(1, 2, 0.1, 1.0, 0.1),
                    std::invalid_argument);  // mixed parity
    CHECK_THROWS_AS(curves::quotient_scan(3, 1, 0.1, 1.0, 0.1),
                    std::invalid_argument);  // reversed order
    CHECK_THROWS_AS(curves::quotient_scan(1, 3, 0.1, 1.0, 0.0),
                    std::invalid_argument);  // bad step
    CHECK_THROWS_AS(curves::gap_second_derivative_bound(3, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(curves::analytic_bounds_check(0.5, -1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(curves::semiclassical_comparison(1, -2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(curves::find_critical(1, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("Feynman-Hellmann derivative matches refined finite differences") {
    // fixed box per (j, alpha) so that discretization error cancels in the
    // centered differences
    for (int j : {1, 2, 3}) {
        for (double a : {0.5, 1.0, 2.0}) {
            auto box = fdop::choose_box(a, j);
            auto lam = [&](double x) {
                return curves::eigen_curve_on_box(j, x, box, false).lambda;
            };
            double fd = refined_fd(lam, a, 1e-3);
            auto s = curves::eigen_curve_on_box(j, a, box, false);
            CHECK(std::fabs(s.lambda_prime - fd) <=
                  1e-5 * std::max(1.0, std::fabs(fd)));
        }
    }
}

TEST_CASE("levels are strictly ordered in j at every alpha tested") {
    for (double a : {-1.0, 0.0, 0.7, 2.0, 5.0}) {
        double prev = 0;
        for (int j = 1; j <= 6; ++j) {
            double lam = curves::eigen_curve(j, a).lambda;
            CHECK(lam > prev);
            prev = lam;
        }
    }
}

TEST_CASE("parity and full-line paths agree across the switchover") {
    // same level computed both ways just below the threshold
    auto box = fdop::choose_box(2.5, 2);
    auto full = curves::eigen_curve_on_box(2, 2.5, box, false);
    auto half = curves::eigen_curve_on_box(2, 2.5, box, true);
    CHECK(full.lambda == doctest::Approx(half.lambda).epsilon(1e-10));
    CHECK(full.lambda_prime == doctest::Approx(half.lambda_prime).epsilon(1e-8));
    CHECK(curves::eigen_curve(1, 1.0).meta.parity_path == false);
    CHECK(curves::eigen_curve(1, 5.0).meta.parity_path == true);
}

TEST_CASE("sweep merges samples in input order and honors the thread cap") {
    std::vector<double> alphas = {1.25, 0.4, 2.0, -0.3, 0.9};
    auto seq = curves::eigen_curve_sweep(2, alphas);
    REQUIRE(seq.size() == alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i)
        CHECK(seq[i].alpha == alphas[i]);

    setenv("MONT_THREADS", "3", 1);
    auto par = curves::eigen_curve_sweep(2, alphas);
    unsetenv("MONT_THREADS");
    REQUIRE(par.size() == seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        CHECK(par[i].lambda == seq[i].lambda);  // bitwise: same solves
        CHECK(par[i].lambda_prime == seq[i].lambda_prime);
    }
}

TEST_CASE("second derivative: linear-solve route vs finite differences") {
    auto box = fdop::choose_box(0.0, 1);
    auto lp = [&](double x) {
        return curves::eigen_curve_on_box(1, x, box, false).lambda_prime;
    };
    double fd = refined_fd(lp, 0.0, 1e-3);
    double ls = curves::lambda_second(1, 0.0);
    CHECK(std::fabs(ls - fd) <= 1e-4 * std::fabs(fd));
}

TEST_CASE("critical point of the ground curve") {
    auto cp = curves::find_critical(1);
    CHECK(cp.j == 1);
    CHECK(std::fabs(cp.alpha_c - 0.35) <= 0.02);
    CHECK(std::fabs(cp.quotient - 4.78) <= 0.05);
    CHECK(cp.second_deriv > 0);  // nondegenerate minimum
    CHECK(cp.alpha_c < std::pow(24.0 / 25.0, 1.0 / 3.0));
    CHECK(cp.quotient > 1.0);  // alpha_c^2 < lambda for odd levels
    // the located root really is a zero of lambda' at the advertised tol
    double slope = curves::eigen_curve(1, cp.alpha_c).lambda_prime;
    CHECK(std::fabs(slope) <= 4 * cp.second_deriv * curves::kCriticalTol);

    // explicit bracket lands on the same point
    auto cp2 = curves::find_critical(1, {0.2, 0.6});
    CHECK(cp2.alpha_c == doctest::Approx(cp.alpha_c).epsilon(1e-4));

    // lambda' does not change sign on (2, 3) for the ground curve
    CHECK_THROWS_AS(curves::find_critical(1, {2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("critical points of levels 2..6 land on the reference table") {
    const double alpha_ref[] = {1.13, 1.14, 1.55, 1.78, 2.06};
    const double quot_ref[] = {1.27, 2.69, 2.25, 2.41, 2.34};
    for (int j = 2; j <= 6; ++j) {
        auto cp = curves::find_critical(j);
        CHECK(std::fabs(cp.alpha_c - alpha_ref[j - 2]) <= 0.02);
        CHECK(std::fabs(cp.quotient - quot_ref[j - 2]) <= 0.05);
        CHECK(cp.second_deriv > 0);
        if (j % 2 == 1)
            CHECK(cp.quotient > 1.0);
    }
}

TEST_CASE("critical quotients drift toward the limiting rescaled energy") {
    double e_c = semiclassic::find_Ec();
    auto cp4 = curves::find_critical(4);
    auto cp6 = curves::find_critical(6);
    CHECK(std::fabs(cp6.quotient - e_c) < std::fabs(cp4.quotient - e_c));
}

TEST_CASE("second derivative at high critical points approaches its limit") {
    double lim = semiclassic::second_derivative_limit();
    auto cp10 = curves::find_critical(10);
    auto cp30 = curves::find_critical(30);
    double gap10 = std::fabs(cp10.second_deriv - lim) / std::fabs(lim);
    double gap30 = std::fabs(cp30.second_deriv - lim) / std::fabs(lim);
    CHECK(gap30 < gap10);
    CHECK(gap30 < 0.15);
}

TEST_CASE("integral identity residuals on the standard grid") {
    for (int j : {1, 2, 3}) {
        for (double a : {0.5, 1.0, 2.0}) {
            auto id = curves::identity_residuals(j, a);
            CAPTURE(j);
            CAPTURE(a);
            CHECK(id.lambda > 0);
            CHECK(id.dilation <= 1e-5 * id.lambda);
            CHECK(id.virial <= 1e-4 * id.lambda);
            CHECK(id.energy_split <= 1e-5 * id.lambda);
        }
    }
}

TEST_CASE("balance identity closes at the critical point") {
    auto cp = curves::find_critical(1);
    auto id = curves::identity_residuals(1, cp.alpha_c);
    CHECK(id.critical <= 1e-4 * id.lambda);
    // away from the critical point the same expression does not vanish
    auto off = curves::identity_residuals(1, 1.5);
    CHECK(off.critical > 1e-2 * off.lambda);
}

TEST_CASE("quotient scan of levels 1 and 3 over the unit window") {
    auto scan = curves::quotient_scan(1, 3, 0.05, 1.0, 0.05);
    REQUIRE(scan.alpha.size() == 20);  // endpoint included, no truncation
    CHECK(scan.alpha.back() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(scan.min_ratio - 4.075) <= 0.01);
    // the minimum sits at the right edge of this window
    CHECK(scan.argmin == doctest::Approx(1.0).epsilon(1e-12));
    for (double r : scan.ratio) CHECK(r >= scan.min_ratio);
}

TEST_CASE("quotient scan of levels 2 and 4 attains its global minimum") {
    auto scan = curves::quotient_scan(2, 4, 0.05, 6.0, 0.05);
    CHECK(std::fabs(scan.min_ratio - 2.82) <= 0.02);
    // interior minimum: strictly larger at both window edges
    CHECK(scan.ratio.front() > scan.min_ratio + 0.1);
    CHECK(scan.ratio.back() > scan.min_ratio + 0.1);
    CHECK(scan.argmin > 2.0);
    CHECK(scan.argmin < 3.5);
}

TEST_CASE("quotient of levels 3 and 1 tends to the harmonic value 3") {
    double prev = 10;
    for (double a : {10.0, 25.0, 50.0}) {
        double r = curves::eigen_curve(3, a).lambda /
                   curves::eigen_curve(1, a).lambda;
        CHECK(std::fabs(r - 3.0) < std::fabs(prev - 3.0));
        prev = r;
    }
    CHECK(std::fabs(prev - 3.0) < 0.005);
}

TEST_CASE("gap bound on the second derivative at the first critical point") {
    auto cp = curves::find_critical(1);
    auto gb = curves::gap_second_derivative_bound(1, cp.alpha_c);
    CHECK(gb.hypothesis);  // 3 lambda_3 > 7 lambda_1 there
    CHECK(gb.lambda_j2 / gb.lambda_j > 7.0 / 3.0);
    CHECK(gb.bound > 0);
    CHECK(cp.second_deriv >= gb.bound - 1e-3);
    // the bound expression vanishes exactly when the ratio is 7/3
    double r = 7.0 / 3.0;
    CHECK((2.0 / 3.0) * (3 * r - 7) / (r - 1) == 0.0);
}

TEST_CASE("closed-form bounds hold on a spread of alpha") {
    for (double a : {-1.0, 0.0, 0.35, 0.7, 0.95, 1.5, 3.0}) {
        CAPTURE(a);
        auto bc = curves::analytic_bounds_check(a);
        CHECK(bc.gaussian_ok);
        CHECK(bc.inverse_ok);
        CHECK(bc.inverse2_ok);
        CHECK(bc.floor_ok);
        if (a > 0) {
            REQUIRE(bc.inverse_bound.has_value());
            REQUIRE(bc.inverse_bound2.has_value());
        } else {
            CHECK_FALSE(bc.inverse_bound.has_value());
            CHECK_FALSE(bc.inverse_bound2.has_value());
        }
    }
}

TEST_CASE("bound values at the documented spot checks") {
    // at alpha = 0 the Gaussian bound is (3/4)^{4/3}, a tight cap on the
    // quartic ground energy
    auto b0 = curves::analytic_bounds_check(0.0);
    CHECK(b0.gaussian_bound == doctest::Approx(std::pow(0.75, 4.0 / 3.0))
                                   .epsilon(1e-14));
    CHECK(b0.lambda1 < b0.gaussian_bound);
    CHECK(b0.gaussian_bound - b0.lambda1 < 0.02);  // tight by design

    // energy cap 0.79 on the small-coupling window
    auto b7 = curves::analytic_bounds_check(0.7);
    CHECK(b7.lambda1 <= 0.79);

    // window cap for the ground level left of the critical-point barrier
    for (double a : {0.1, 0.35, 0.7, 0.95}) {
        auto bc = curves::analytic_bounds_check(a);
        CHECK(bc.lambda1 <= 0.97315 + curves::kBoundSlack);
    }

    // third-level floor at the right edge of that window
    double a_star = std::pow(24.0 / 25.0, 1.0 / 3.0);
    auto be = curves::analytic_bounds_check(a_star);
    CHECK(be.harmonic_floor ==
          doctest::Approx(2.32920155053).epsilon(1e-9));
    CHECK(be.lambda3 >= 2.3292);
}

TEST_CASE("tunneling splitting decays fast and is numerically dead by alpha 8") {
    double prev = 1.0;
    for (double a : {3.0, 4.0, 5.0, 8.0}) {
        double gap = std::fabs(curves::eigen_curve(2, a).lambda -
                               curves::eigen_curve(1, a).lambda);
        CAPTURE(a);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-6);  // alpha = 8: below every tolerance in this suite
}

TEST_CASE("odd levels approach the harmonic-well asymptote") {
    for (int k : {0, 1}) {
        double prev = 10;
        for (double a : {25.0, 50.0, 100.0}) {
            int j = 2 * k + 1;
            double lam = curves::eigen_curve(j, a).lambda;
            double ratio = lam / (std::sqrt(2.0) * (2 * k + 1) * std::sqrt(a));
            CAPTURE(k);
            CAPTURE(a);
            CHECK(std::fabs(ratio - 1.0) < std::fabs(prev - 1.0));
            prev = ratio;
        }
        CHECK(std::fabs(prev - 1.0) < 5e-3);
    }
}

TEST_CASE("ground derivative matches the bottom-regime rate") {
    double target = 1.0 / std::sqrt(2.0);
    double prev = 10;
    for (double a : {25.0, 50.0, 100.0}) {
        double lp = curves::eigen_curve(1, a).lambda_prime;
        double scaled = lp * std::sqrt(a);
        CHECK(std::fabs(scaled - target) < std::fabs(prev - target));
        prev = scaled;
    }
    CHECK(std::fabs(prev - target) < 0.05);
}

TEST_CASE("semiclassical comparison converges along the alpha sweep") {
    double prev_phi = 1e9, prev_bs = 1e9, prev_mom = 1e9;
    std::vector<double> hs, bs_errs;
    for (double a : {5.0, 10.0, 20.0, 40.0}) {
        int j = level_near_critical_energy(a);
        auto sc = curves::semiclassical_comparison(j, a);
        CAPTURE(a);
        CHECK(sc.E > 2.0);
        CHECK(sc.E < 2.7);
        CHECK(sc.phi_diff < prev_phi);
        CHECK(sc.bs_diff < prev_bs);
        CHECK(sc.moment_diff < prev_mom);
        // lambda'/alpha - Phi and the moment mismatch are the same
        // statistic in exact arithmetic; quadrature noise only
        CHECK(std::fabs(sc.phi_diff - sc.moment_diff) < 1e-8);
        prev_phi = sc.phi_diff;
        prev_bs = sc.bs_diff;
        prev_mom = sc.moment_diff;
        hs.push_back(sc.h);
        bs_errs.push_back(sc.bs_diff);
    }
    // empirical order of the quantization error in h
    double slope = (std::log(bs_errs.back()) - std::log(bs_errs.front())) /
                   (std::log(hs.back()) - std::log(hs.front()));
    CHECK(slope >= 1.0);
}

TEST_CASE("semiclassical comparison rejects energies outside its band") {
    // ground level at large alpha sits far below the barrier
    CHECK_THROWS_AS(curves::semiclassical_comparison(1, 10.0),
                    std::domain_error);
    // a high level at moderate alpha overshoots the upper edge
    CHECK_THROWS_AS(curves::semiclassical_comparison(40, 2.0),
                    std::domain_error);
}
