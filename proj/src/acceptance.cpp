/** Implementation of the acceptance criteria.

    Structure: one free function per criterion, each returning a
    CriterionResult with every number it judged.  The few measurements
    shared between criteria (the critical-point table) are computed once
    and passed in; the values are deterministic, so sharing changes
    nothing observable.  All tolerances live here, spelled out next to
    the comparisons they guard. */
#include "mont/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mont/curves.hpp"
#include "mont/eig.hpp"
#include "mont/fdop.hpp"
#include "mont/quad.hpp"
#include "mont/semiclassic.hpp"

namespace mont::acceptance {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::ostringstream make_stream() {
    std::ostringstream os;
    os << std::setprecision(6);
    return os;
}

// Level whose rescaled energy lands near the limiting critical energy.
int level_near_critical_energy(double alpha) {
    double h = std::pow(alpha, -1.5);
    int j = static_cast<int>(std::lround(semiclassic::action(2.35) / h + 0.5));
    return j < 1 ? 1 : j;
}

// Centered difference with one refinement step, for derivative
// cross-checks on a frozen box.
template <typename F>
double refined_fd(F&& f, double x, double h) {
    double d1 = (f(x + h) - f(x - h)) / (2 * h);
    double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
    return (4 * d2 - d1) / 3;
}

CriterionResult criterion_critical_energy() {
    CriterionResult r{1, "critical-energy", "", false};
    auto t0 = Clock::now();
    double ec = semiclassic::find_Ec();
    double elapsed = seconds_since(t0);
    auto os = make_stream();
    os << "Ec=" << ec << " (window 2.35+-0.01), under 1 s: "
       << (elapsed < 1.0 ? "yes" : "NO");
    r.detail = os.str();
    r.pass = std::fabs(ec - 2.35) <= 0.01 && elapsed < 1.0;
    return r;
}

CriterionResult criterion_table(const std::vector<curves::CriticalPoint>& table,
                                double elapsed) {
    CriterionResult r{2, "critical-point-table", "", false};
    const double alpha_ref[] = {0.35, 1.13, 1.14, 1.55, 1.78, 2.06};
    const double quot_ref[] = {4.78, 1.27, 2.69, 2.25, 2.41, 2.34};
    bool ok = elapsed < 300.0;
    auto os = make_stream();
    for (int j = 1; j <= 6; ++j) {
        const auto& cp = table[j - 1];
        bool here = std::fabs(cp.alpha_c - alpha_ref[j - 1]) <= 0.02 &&
                    std::fabs(cp.quotient - quot_ref[j - 1]) <= 0.05;
        ok = ok && here;
        os << "j=" << j << ": " << std::fixed << std::setprecision(3)
           << cp.alpha_c << "/" << cp.quotient << std::defaultfloat
           << std::setprecision(6) << (here ? "" : " MISMATCH") << (j < 6 ? "; " : "");
    }
    os << " (alpha_c +-0.02, quotient +-0.05; under 5 min: "
       << (elapsed < 300.0 ? "yes" : "NO") << ")";
    r.detail = os.str();
    r.pass = ok;
    return r;
}

CriterionResult criterion_quotient_minima() {
    CriterionResult r{3, "quotient-minima", "", false};
    auto t0 = Clock::now();
    auto s31 = curves::quotient_scan(1, 3, 0.05, 1.0, 0.05);
    auto s42 = curves::quotient_scan(2, 4, 0.05, 6.0, 0.05);
    double elapsed = seconds_since(t0);
    auto os = make_stream();
    os << "min(l3/l1)=" << s31.min_ratio << "@" << s31.argmin
       << " (4.075+-0.010); min(l4/l2)=" << s42.min_ratio << "@" << s42.argmin
       << " (2.82+-0.02, interior of scan window); under 5 min: "
       << (elapsed < 300.0 ? "yes" : "NO");
    r.detail = os.str();
    bool interior = s42.argmin > 0.05 && s42.argmin < 6.0;
    r.pass = std::fabs(s31.min_ratio - 4.075) <= 0.010 &&
             std::fabs(s42.min_ratio - 2.82) <= 0.02 && interior &&
             elapsed < 300.0;
    return r;
}

CriterionResult criterion_bounds() {
    CriterionResult r{4, "closed-form-bounds", "", false};
    const double slack = 1e-6;
    const double window_edge = std::pow(24.0 / 25.0, 1.0 / 3.0);
    const double window_cap = 0.97315;  // truncation of 0.8 (9/5)^{1/3}
    const double floor_const =
        std::sqrt(15.0) - 1.2 * window_edge - 0.36;  // ~2.3292
    int violations = 0;
    double worst = 0;
    auto note = [&](double excess) {
        if (excess > slack) {
            ++violations;
            worst = std::max(worst, excess);
        }
    };
    // Gaussian and inverse-coupling bounds across the sign change and the
    // double-well side
    for (int i = -40; i <= 80; ++i) {
        double a = 0.05 * i;
        auto bc = curves::analytic_bounds_check(a);
        note(bc.lambda1 - bc.gaussian_bound);
        if (a > 0) {
            note(bc.lambda1 - *bc.inverse_bound);
            note(bc.lambda1 - *bc.inverse_bound2);
        }
    }
    // window checks left of the critical-point barrier
    for (int i = 1; i <= 20; ++i) {
        double a = std::min(0.05 * i, window_edge);
        auto bc = curves::analytic_bounds_check(a);
        note(bc.lambda1 - window_cap);
        note(floor_const - bc.lambda3);
        if (a == window_edge)
            break;
    }
    auto os = make_stream();
    os << "alpha grids [-2,4] & (0," << window_cap << "-window], step 0.05: "
       << violations << " violations past 1e-6 slack";
    if (violations > 0)
        os << ", worst excess " << worst;
    r.detail = os.str();
    r.pass = violations == 0;
    return r;
}

CriterionResult criterion_critical_facts(
    const std::vector<curves::CriticalPoint>& table) {
    CriterionResult r{5, "critical-point-facts", "", false};
    const double window_edge = std::pow(24.0 / 25.0, 1.0 / 3.0);
    bool in_window = table[0].alpha_c > 0 && table[0].alpha_c < window_edge;
    bool odd_ok = true, convex_ok = true;
    for (const auto& cp : table) {
        if (cp.j % 2 == 1 && !(cp.alpha_c * cp.alpha_c < cp.lambda_at))
            odd_ok = false;
        if (!(cp.second_deriv > 0))
            convex_ok = false;
    }
    auto os = make_stream();
    os << "alpha_c1=" << table[0].alpha_c << " in (0," << window_edge
       << ")=" << (in_window ? "yes" : "NO")
       << "; alpha_c^2<lambda at odd j=" << (odd_ok ? "yes" : "NO")
       << "; lambda''>0 at all six=" << (convex_ok ? "yes" : "NO");
    r.detail = os.str();
    r.pass = in_window && odd_ok && convex_ok;
    return r;
}

CriterionResult criterion_identities(double alpha_c1) {
    CriterionResult r{6, "identity-suite", "", false};
    struct Point {
        int j;
        double alpha;
    };
    std::vector<Point> pts;
    for (int j : {1, 2, 3})
        for (double a : {0.5, 1.0, 2.0}) pts.push_back({j, a});
    pts.push_back({1, alpha_c1});

    double worst_fh = 0, worst_dil = 0, worst_vir = 0, worst_split = 0;
    for (const auto& p : pts) {
        auto box = fdop::choose_box(p.alpha, p.j);
        auto lam = [&](double x) {
            return curves::eigen_curve_on_box(p.j, x, box, false).lambda;
        };
        double fd = refined_fd(lam, p.alpha, 1e-3);
        auto s = curves::eigen_curve_on_box(p.j, p.alpha, box, false);
        worst_fh = std::max(
            worst_fh, std::fabs(s.lambda_prime - fd) / std::max(1.0, std::fabs(fd)));
        auto id = curves::identity_residuals(p.j, p.alpha);
        worst_dil = std::max(worst_dil, id.dilation / id.lambda);
        worst_vir = std::max(worst_vir, id.virial / id.lambda);
        worst_split = std::max(worst_split, id.energy_split / id.lambda);
    }
    auto idc = curves::identity_residuals(1, alpha_c1);
    double crit_rel = idc.critical / idc.lambda;

    auto os = make_stream();
    os << "worst rel: FH-vs-FD=" << worst_fh << " (1e-5), dilation="
       << worst_dil << " (1e-5), virial=" << worst_vir
       << " (1e-4), energy-split=" << worst_split
       << " (1e-5), balance@critical=" << crit_rel << " (1e-4)";
    r.detail = os.str();
    r.pass = worst_fh <= 1e-5 && worst_dil <= 1e-5 && worst_vir <= 1e-4 &&
             worst_split <= 1e-5 && crit_rel <= 1e-4;
    return r;
}

CriterionResult criterion_semiclassical() {
    CriterionResult r{7, "semiclassical-convergence", "", false};
    double prev_phi = 1e18, prev_bs = 1e18, prev_mom = 1e18;
    bool monotone = true, window = true;
    std::vector<double> hs, errs;
    auto os = make_stream();
    for (double a : {5.0, 10.0, 20.0, 40.0}) {
        int j = level_near_critical_energy(a);
        auto sc = curves::semiclassical_comparison(j, a);
        window = window && sc.E > 2.0 && sc.E < 2.7;
        monotone = monotone && sc.phi_diff < prev_phi && sc.bs_diff < prev_bs &&
                   sc.moment_diff < prev_mom;
        prev_phi = sc.phi_diff;
        prev_bs = sc.bs_diff;
        prev_mom = sc.moment_diff;
        hs.push_back(sc.h);
        errs.push_back(sc.bs_diff);
        os << "a=" << a << " j=" << j << " E=" << std::setprecision(4) << sc.E
           << std::setprecision(3) << " dphi=" << sc.phi_diff
           << " dbs=" << sc.bs_diff << " dmom=" << sc.moment_diff << "; "
           << std::setprecision(6);
    }
    double slope = (std::log(errs.back()) - std::log(errs.front())) /
                   (std::log(hs.back()) - std::log(hs.front()));
    os << "all decreasing=" << (monotone ? "yes" : "NO")
       << ", quantization error order=" << std::setprecision(3) << slope
       << " (>=1)";
    r.detail = os.str();
    r.pass = monotone && window && slope >= 1.0;
    return r;
}

CriterionResult criterion_second_derivative_limit() {
    CriterionResult r{8, "second-derivative-limit", "", false};
    double lim = semiclassic::second_derivative_limit();
    auto os = make_stream();
    double gap10 = 0, gap30 = 0;
    for (int j : {10, 20, 30}) {
        auto cp = curves::find_critical(j);
        double gap = std::fabs(cp.second_deriv - lim) / std::fabs(lim);
        if (j == 10)
            gap10 = gap;
        if (j == 30)
            gap30 = gap;
        os << "j=" << j << ": lambda''=" << cp.second_deriv << " relgap="
           << std::setprecision(2) << gap << std::setprecision(6) << "; ";
    }
    os << "limit=" << lim << "; need gap(30)<gap(10) and gap(30)<0.15";
    r.detail = os.str();
    r.pass = gap30 < gap10 && gap30 < 0.15;
    return r;
}

CriterionResult criterion_bottom_rate() {
    CriterionResult r{9, "bottom-regime-rate", "", false};
    double lp = curves::eigen_curve(1, 100.0).lambda_prime;
    double scaled = lp * 10.0;
    double target = 1.0 / std::sqrt(2.0);
    auto os = make_stream();
    os << "lambda_1'(100)*sqrt(100)=" << scaled << " vs 1/sqrt(2)=" << target
       << " (+-0.05)";
    r.detail = os.str();
    r.pass = std::fabs(scaled - target) <= 0.05;
    return r;
}

CriterionResult criterion_solver_oracles() {
    CriterionResult r{10, "solver-oracles", "", false};
    auto os = make_stream();

    // (a) free-Laplacian eigenvalues against the closed form
    const int n = 200;
    const double dx = 0.05;
    fdop::TridiagonalOperator lap;
    lap.grid = {0.0, dx, n};
    lap.bc = model::BcMode::FullLine;
    lap.diag.assign(n, 2.0 / (dx * dx));
    lap.offdiag.assign(n - 1, -1.0 / (dx * dx));
    double scale = eig::norm_scale(lap);
    double worst_lap = 0;
    for (int k : {0, 3, 50, 199}) {
        double exact =
            (2 - 2 * std::cos((k + 1) * M_PI / (n + 1))) / (dx * dx);
        worst_lap =
            std::max(worst_lap, std::fabs(eig::kth_eigenvalue(lap, k) - exact));
    }
    bool lap_ok = worst_lap <= 1e-12 * scale;
    os << "laplacian |err|=" << worst_lap << " (1e-12*scale=" << 1e-12 * scale
       << "); ";

    // (b) quadrature closed forms
    double e1 = std::fabs(
        quad::integrate_smooth([](double x) { return x * x; }, {0, 1}).value -
        1.0 / 3.0);
    double e2 = std::fabs(quad::integrate_singular(
                              [](double, double ua, double ub) {
                                  return 1.0 / std::sqrt(ua * ub);
                              },
                              {-1, 1})
                              .value -
                          M_PI);
    double e3 = std::fabs(quad::integrate_singular(
                              [](double, double ua, double) {
                                  return 1.0 / std::sqrt(ua);
                              },
                              {0, 1})
                              .value -
                          2.0);
    double worst_quad = std::max({e1, e2, e3});
    bool quad_ok = worst_quad <= 1e-10 * M_PI;
    os << "quadrature |err|=" << worst_quad << " (1e-10 rel); ";

    // (c) box stability: widen L by 2 at frozen dx = 0.01
    double lam_a = eig::kth_eigenvalue(fdop::build_full_line(1.0, 9.0, 1799), 0);
    double lam_b = eig::kth_eigenvalue(fdop::build_full_line(1.0, 11.0, 2199), 0);
    double dbox = std::fabs(lam_b - lam_a);
    bool box_ok = dbox < 1e-9;
    os << "box L->L+2 |dlambda|=" << dbox << " (1e-9); ";

    // (d) empirical order of the extrapolated eigenvalue under doubling.
    // The chain stays at dx >= 0.01: eigenvalues of the discrete operator
    // are only defined to ~eps * 2/dx^2, and on finer grids that roundoff
    // floor (1e-10 and up) buries the dx^4 term the order probe measures.
    auto lam_n = [&](int nn) {
        return eig::kth_eigenvalue(fdop::build_full_line(1.0, 9.0, nn), 0);
    };
    double l0 = lam_n(224), l1 = lam_n(449), l2 = lam_n(899), l3 = lam_n(1799);
    double r0 = (4 * l1 - l0) / 3, r1 = (4 * l2 - l1) / 3, r2 = (4 * l3 - l2) / 3;
    double order = std::log2(std::fabs(r0 - r1) / std::fabs(r1 - r2));
    bool order_ok = order >= 3.5 && order <= 4.5;
    os << "extrapolation order=" << std::setprecision(3) << order
       << " (3.5..4.5)";

    r.detail = os.str();
    r.pass = lap_ok && quad_ok && box_ok && order_ok;
    return r;
}

CriterionResult criterion_asymptotics() {
    CriterionResult r{11, "eigenvalue-asymptotics", "", false};
    double lam100 = curves::eigen_curve(1, 100.0).lambda;
    double ratio = lam100 / (std::sqrt(2.0) * 10.0);
    double gap8 = std::fabs(curves::eigen_curve(2, 8.0).lambda -
                            curves::eigen_curve(1, 8.0).lambda);
    auto os = make_stream();
    os << "lambda_1(100)/(sqrt(2)*sqrt(100))=" << ratio
       << " (0.95..1.05); |lambda_2-lambda_1|(8)=" << gap8 << " (<1e-6)";
    r.detail = os.str();
    r.pass = ratio >= 0.95 && ratio <= 1.05 && gap8 < 1e-6;
    return r;
}

// Wrap a criterion so a solver exception becomes a failed row instead of
// aborting the run.
template <typename Fn>
CriterionResult guarded(int id, const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return {id, name, std::string("exception: ") + e.what(), false};
    }
}

}  // namespace

std::vector<CriterionResult> run_all() {
    std::vector<CriterionResult> out;

    out.push_back(
        guarded(1, "critical-energy", [] { return criterion_critical_energy(); }));

    // the critical-point table feeds criteria 2, 5 and 6
    std::vector<curves::CriticalPoint> table;
    double table_elapsed = 0;
    try {
        auto t0 = Clock::now();
        for (int j = 1; j <= 6; ++j) table.push_back(curves::find_critical(j));
        table_elapsed = seconds_since(t0);
    } catch (const std::exception& e) {
        std::string msg = std::string("exception: ") + e.what();
        out.push_back({2, "critical-point-table", msg, false});
        out.push_back({5, "critical-point-facts", msg, false});
        out.push_back({6, "identity-suite", msg, false});
    }
    if (!table.empty()) {
        out.push_back(guarded(2, "critical-point-table", [&] {
            return criterion_table(table, table_elapsed);
        }));
    }

    out.push_back(
        guarded(3, "quotient-minima", [] { return criterion_quotient_minima(); }));
    out.push_back(
        guarded(4, "closed-form-bounds", [] { return criterion_bounds(); }));

    if (!table.empty()) {
        out.push_back(guarded(5, "critical-point-facts",
                              [&] { return criterion_critical_facts(table); }));
        out.push_back(guarded(6, "identity-suite", [&] {
            return criterion_identities(table[0].alpha_c);
        }));
    }

    out.push_back(guarded(7, "semiclassical-convergence",
                          [] { return criterion_semiclassical(); }));
    out.push_back(guarded(8, "second-derivative-limit",
                          [] { return criterion_second_derivative_limit(); }));
    out.push_back(
        guarded(9, "bottom-regime-rate", [] { return criterion_bottom_rate(); }));
    out.push_back(
        guarded(10, "solver-oracles", [] { return criterion_solver_oracles(); }));
    out.push_back(guarded(11, "eigenvalue-asymptotics",
                          [] { return criterion_asymptotics(); }));

    std::sort(out.begin(), out.end(),
              [](const CriterionResult& a, const CriterionResult& b) {
                  return a.id < b.id;
              });
    return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass)
            return false;
    return results.size() == 11;
}

}  // namespace mont::acceptance
