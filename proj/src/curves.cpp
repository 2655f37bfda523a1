/** Implementation of the level-curve diagnostics.

    The only subtle piece here is the bookkeeping between matrix
    coordinates and function samples.  The eigensolver returns vectors
    normalized to dx * sum(w_i^2) = 1 in matrix coordinates, and with the
    sqrt(2) Neumann fold this makes three quadrature rules exact at the
    trapezoid level for a full-line-normalized eigenfunction u:

      int_R g u^2 dt      = dx * sum_i g(t_i) w_i^2     (g even, any path)
      int_0^inf g u^2 dt  = (dx/2) * sum_i g(t_i) w_i^2 (half-line paths)
      int_R g u w dt      = dx * sum_i g(t_i) v_i w_i   (g even, both
                            vectors in matrix coordinates)

    Everything below is plain dot products in these rules plus one
    Richardson step across the refined grid. */
#include "mont/curves.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mont/eig.hpp"
#include "mont/model.hpp"
#include "mont/rootfind.hpp"
#include "mont/semiclassic.hpp"

namespace mont::curves {
namespace {

struct ParityIndex {
    model::BcMode bc;
    int k;  // 0-based index within the half-line family
};

// Level j on the full line is Neumann level (j-1)/2 for odd j and
// Dirichlet level j/2-1 for even j; exact for the even potential.
ParityIndex parity_index(int j) {
    if (j % 2 == 1)
        return {model::BcMode::HalfLineNeumann, (j - 1) / 2};
    return {model::BcMode::HalfLineDirichlet, j / 2 - 1};
}

void check_level(int j) {
    if (j < 1)
        throw std::invalid_argument("curves: level index must be >= 1, got " +
                                    std::to_string(j));
}

void check_alpha(double alpha) {
    if (!std::isfinite(alpha))
        throw std::invalid_argument("curves: alpha must be finite");
}

double g_weight(double t, double alpha) { return 0.5 * t * t - alpha; }

double richardson(double coarse, double fine) {
    return (4.0 * fine - coarse) / 3.0;
}

// Everything a single grid level can report about one eigenpair.
struct LevelFunctionals {
    double lambda = 0;
    double lambda_prime = 0;
    double pot2 = 0;         // || (t^2/2 - alpha) u ||^2 over R
    double t2 = 0;           // int t^2 u^2 over R
    double grad2 = 0;        // int u'^2 over R, centered differences
    double u0 = 0;           // u(0)
    double up0 = 0;          // u'(0)
    double virial_half = 0;  // int_0^inf (t - sqrt(2 alpha))(t^2/2 - alpha) u^2
};

LevelFunctionals eval_level(int j, double alpha, double L, int n_full,
                            bool parity) {
    LevelFunctionals f;
    if (!parity) {
        auto op = fdop::build_full_line(alpha, L, n_full);
        auto pair = eig::eigenpair(op, j - 1);
        const auto& w = pair.vec;
        const double dx = op.grid.dx;
        const int n = op.size();
        double sg = 0, sg2 = 0, st2 = 0, sd = 0;
        for (int i = 0; i < n; ++i) {
            double t = op.grid.node(i);
            double g = g_weight(t, alpha);
            double w2 = w[i] * w[i];
            sg += g * w2;
            sg2 += g * g * w2;
            st2 += t * t * w2;
            // u vanishes (to tail accuracy) beyond the box walls
            double lo = i > 0 ? w[i - 1] : 0.0;
            double hi = i + 1 < n ? w[i + 1] : 0.0;
            double d = (hi - lo) / (2 * dx);
            sd += d * d;
        }
        f.lambda = pair.lambda;
        f.lambda_prime = -2 * dx * sg;
        f.pot2 = dx * sg2;
        f.t2 = dx * st2;
        f.grad2 = dx * sd;
        return f;  // boundary and half-line fields stay zero on this path
    }

    auto [bc, k] = parity_index(j);
    auto sizes = fdop::half_line_sizes(n_full);
    int n_half =
        bc == model::BcMode::HalfLineNeumann ? sizes.neumann : sizes.dirichlet;
    auto op = fdop::build_half_line(alpha, L, n_half, bc);
    auto pair = eig::eigenpair(op, k);
    const auto& w = pair.vec;
    const double dx = op.grid.dx;
    const int n = op.size();
    const double shift = alpha > 0 ? std::sqrt(2 * alpha) : 0.0;

    double sg = 0, sg2 = 0, st2 = 0, sv = 0;
    for (int i = 0; i < n; ++i) {
        double t = op.grid.node(i);
        double g = g_weight(t, alpha);
        double w2 = w[i] * w[i];
        sg += g * w2;
        sg2 += g * g * w2;
        st2 += t * t * w2;
        sv += (t - shift) * g * w2;
    }
    f.lambda = pair.lambda;
    f.lambda_prime = -2 * dx * sg;
    f.pot2 = dx * sg2;
    f.t2 = dx * st2;
    f.virial_half = alpha > 0 ? 0.5 * dx * sv : 0.0;

    // Function samples for the derivative quadrature: undo the sqrt(2)
    // normalization of the fold (all Dirichlet components, and all
    // Neumann components except the axis node itself).
    const double root_half = std::sqrt(0.5);
    if (bc == model::BcMode::HalfLineNeumann) {
        std::vector<double> p(n);
        p[0] = w[0];
        for (int i = 1; i < n; ++i) p[i] = root_half * w[i];
        double sd = 0;
        for (int i = 1; i < n; ++i) {
            double hi = i + 1 < n ? p[i + 1] : 0.0;
            double d = (hi - p[i - 1]) / (2 * dx);
            sd += d * d;
        }
        // u' vanishes at t = 0 by symmetry, so the half-weight trapezoid
        // node contributes nothing.
        f.grad2 = 2 * dx * sd;
        f.u0 = w[0];
        f.up0 = 0.0;
    } else {
        std::vector<double> q(n);
        for (int i = 0; i < n; ++i) q[i] = root_half * w[i];
        // nodes sit at dx, 2 dx, ...; u(0) = 0 and u'(0) comes from the
        // one-sided second-order difference through the wall value
        double d0 = (4 * q[0] - q[1]) / (2 * dx);
        double sd = 0.5 * d0 * d0;
        for (int i = 0; i < n; ++i) {
            double lo = i > 0 ? q[i - 1] : 0.0;  // u(0) = 0 backs the first node
            double hi = i + 1 < n ? q[i + 1] : 0.0;
            double d = (hi - lo) / (2 * dx);
            sd += d * d;
        }
        f.grad2 = 2 * dx * sd;
        f.u0 = 0.0;
        f.up0 = d0;
    }
    return f;
}

// One Richardson step across the refined grid, field by field.  Each
// functional has a smooth dx^2 error expansion, so the step upgrades all
// of them to fourth order at once.
LevelFunctionals eval_richardson(int j, double alpha, const fdop::BoxSpec& box,
                                 bool parity) {
    int n_fine = fdop::refined_size(model::BcMode::FullLine, box.n);
    LevelFunctionals c = eval_level(j, alpha, box.L, box.n, parity);
    LevelFunctionals f = eval_level(j, alpha, box.L, n_fine, parity);
    LevelFunctionals r;
    r.lambda = richardson(c.lambda, f.lambda);
    r.lambda_prime = richardson(c.lambda_prime, f.lambda_prime);
    r.pot2 = richardson(c.pot2, f.pot2);
    r.t2 = richardson(c.t2, f.t2);
    r.grad2 = richardson(c.grad2, f.grad2);
    r.u0 = richardson(c.u0, f.u0);
    r.up0 = richardson(c.up0, f.up0);
    r.virial_half = richardson(c.virial_half, f.virial_half);
    return r;
}

// Eigenvalue-only variant (no inverse iteration), same path and
// extrapolation rules; used where only lambda ratios or gaps matter.
double level_lambda_on_box(int j, double alpha, const fdop::BoxSpec& box,
                           bool parity) {
    auto solve = [&](int n_full) {
        if (!parity) {
            auto op = fdop::build_full_line(alpha, box.L, n_full);
            return eig::kth_eigenvalue(op, j - 1);
        }
        auto [bc, k] = parity_index(j);
        auto sizes = fdop::half_line_sizes(n_full);
        int n_half = bc == model::BcMode::HalfLineNeumann ? sizes.neumann
                                                          : sizes.dirichlet;
        auto op = fdop::build_half_line(alpha, box.L, n_half, bc);
        return eig::kth_eigenvalue(op, k);
    };
    double coarse = solve(box.n);
    double fine = solve(fdop::refined_size(model::BcMode::FullLine, box.n));
    return richardson(coarse, fine);
}

bool use_parity(double alpha) { return alpha >= kParityPathThreshold; }

// Index-parallel loop honoring MONT_THREADS (default 1).  Each body(i)
// writes only slot i of a pre-sized output, so the merged result is
// independent of scheduling.
int thread_cap() {
    const char* env = std::getenv("MONT_THREADS");
    if (env == nullptr)
        return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || v < 1)
        return 1;
    return static_cast<int>(std::min<long>(v, 256));
}

template <typename Fn>
void for_each_index(std::size_t count, Fn&& body) {
    std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(thread_cap()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

}  // namespace

CurveSample eigen_curve_on_box(int j, double alpha, const fdop::BoxSpec& box,
                               bool parity_path) {
    check_level(j);
    check_alpha(alpha);
    LevelFunctionals r = eval_richardson(j, alpha, box, parity_path);
    CurveSample s;
    s.alpha = alpha;
    s.j = j;
    s.lambda = r.lambda;
    s.lambda_prime = r.lambda_prime;
    if (alpha > 0)
        s.E = r.lambda / (alpha * alpha);
    s.meta.box_half_width = box.L;
    s.meta.dx_coarse = 2 * box.L / (box.n + 1);
    s.meta.points_coarse = box.n;
    s.meta.points_refined = fdop::refined_size(model::BcMode::FullLine, box.n);
    s.meta.parity_path = parity_path;
    if (!(s.lambda > 0))
        throw std::runtime_error(
            "curves: nonpositive eigenvalue from a positive operator; "
            "box L=" + std::to_string(box.L) + ", n=" + std::to_string(box.n));
    return s;
}

CurveSample eigen_curve(int j, double alpha) {
    check_level(j);
    check_alpha(alpha);
    return eigen_curve_on_box(j, alpha, fdop::choose_box(alpha, j),
                              use_parity(alpha));
}

std::vector<CurveSample> eigen_curve_sweep(int j,
                                           const std::vector<double>& alphas) {
    check_level(j);
    for (double a : alphas) check_alpha(a);
    std::vector<CurveSample> out(alphas.size());
    for_each_index(alphas.size(),
                   [&](std::size_t i) { out[i] = eigen_curve(j, alphas[i]); });
    return out;
}

double lambda_second(int j, double alpha) {
    check_level(j);
    check_alpha(alpha);
    // Half-line family at every alpha: the shifted solve needs lambda_j
    // isolated in the matrix spectrum, and within one parity family the
    // neighbors stay order-one away even deep in the double-well regime.
    auto [bc, k] = parity_index(j);
    fdop::BoxSpec box = fdop::choose_box(alpha, j);
    auto second_on = [&](int n_full) {
        auto sizes = fdop::half_line_sizes(n_full);
        int n_half = bc == model::BcMode::HalfLineNeumann ? sizes.neumann
                                                          : sizes.dirichlet;
        auto op = fdop::build_half_line(alpha, box.L, n_half, bc);
        auto pair = eig::eigenpair(op, k);
        const double dx = op.grid.dx;
        const int n = op.size();
        double sg = 0;
        for (int i = 0; i < n; ++i)
            sg += g_weight(op.grid.node(i), alpha) * pair.vec[i] * pair.vec[i];
        double lambda_prime = -2 * dx * sg;
        // right side [2 (t^2/2 - alpha) + lambda'] u is orthogonal to u by
        // the same quadrature that defined lambda'
        std::vector<double> rhs(n);
        for (int i = 0; i < n; ++i)
            rhs[i] =
                (2 * g_weight(op.grid.node(i), alpha) + lambda_prime) * pair.vec[i];
        std::vector<double> du =
            eig::solve_shifted_orthogonal(op, pair.lambda, pair.vec, rhs);
        double cross = 0;
        for (int i = 0; i < n; ++i)
            cross += g_weight(op.grid.node(i), alpha) * pair.vec[i] * du[i];
        return 2 - 4 * dx * cross;
    };
    double coarse = second_on(box.n);
    double fine = second_on(fdop::refined_size(model::BcMode::FullLine, box.n));
    return richardson(coarse, fine);
}

namespace {

CriticalPoint refine_critical(int j, double lo, double hi, double flo,
                              double fhi) {
    auto deriv = [&](double a) { return eigen_curve(j, a).lambda_prime; };
    double root = rootfind::solve_bracketed(deriv, lo, hi, flo, fhi, kCriticalTol);
    CurveSample at = eigen_curve(j, root);
    CriticalPoint cp;
    cp.j = j;
    cp.alpha_c = root;
    cp.lambda_at = at.lambda;
    cp.second_deriv = lambda_second(j, root);
    cp.quotient = at.lambda / (root * root);
    return cp;
}

}  // namespace

CriticalPoint find_critical(int j, std::pair<double, double> bracket) {
    check_level(j);
    auto [lo, hi] = bracket;
    check_alpha(lo);
    check_alpha(hi);
    if (!(lo < hi))
        throw std::invalid_argument(
            "find_critical: bracket must satisfy lo < hi");
    double flo = eigen_curve(j, lo).lambda_prime;
    double fhi = eigen_curve(j, hi).lambda_prime;
    return refine_critical(j, lo, hi, flo, fhi);
}

CriticalPoint find_critical(int j) {
    check_level(j);
    const double alpha_hi = 3.0 + 0.5 * j;
    double prev_alpha = kScanStep;
    double prev = eigen_curve(j, prev_alpha).lambda_prime;
    std::ostringstream seen;
    seen << std::scientific << std::setprecision(3);
    seen << "alpha=" << std::defaultfloat << prev_alpha << std::scientific
         << " lambda'=" << prev;
    for (int m = 2; m * kScanStep <= alpha_hi + 0.5 * kScanStep; ++m) {
        double a = m * kScanStep;
        double cur = eigen_curve(j, a).lambda_prime;
        seen << ", alpha=" << std::defaultfloat << a << std::scientific
             << " lambda'=" << cur;
        if (prev == 0)
            return refine_critical(j, prev_alpha - kScanStep, a, 1, -1);
        if ((prev < 0) != (cur < 0) || cur == 0)
            return refine_critical(j, prev_alpha, a, prev, cur);
        prev_alpha = a;
        prev = cur;
    }
    throw std::runtime_error(
        "find_critical: lambda' of level " + std::to_string(j) +
        " has no sign change on the scan grid (0, " + std::to_string(alpha_hi) +
        "]; a critical point may still exist outside it. Scanned values: " +
        seen.str());
}

IdentityResiduals identity_residuals(int j, double alpha) {
    check_level(j);
    check_alpha(alpha);
    if (!(alpha > 0))
        throw std::invalid_argument(
            "identity_residuals: requires alpha > 0 (the half-line identity "
            "involves sqrt(alpha))");
    // Half-line representation at every alpha: it provides the t = 0
    // boundary data exactly where the identities need it.
    fdop::BoxSpec box = fdop::choose_box(alpha, j);
    LevelFunctionals r = eval_richardson(j, alpha, box, true);

    IdentityResiduals out;
    out.lambda = r.lambda;
    out.dilation = std::fabs(alpha * r.lambda_prime + r.lambda - 3 * r.pot2);
    out.critical = std::fabs(3 * r.pot2 - r.lambda);
    out.energy_split = std::fabs(r.lambda - r.grad2 - r.pot2);
    double lhs = 2 * r.virial_half - std::sqrt(alpha / 2) * r.lambda_prime;
    double rhs =
        (r.lambda - alpha * alpha) * r.u0 * r.u0 + r.up0 * r.up0;
    out.virial = std::fabs(lhs - rhs);
    return out;
}

QuotientScan quotient_scan(int j_low, int j_high, double alpha_lo,
                           double alpha_hi, double step) {
    check_level(j_low);
    check_alpha(alpha_lo);
    check_alpha(alpha_hi);
    if (j_low >= j_high)
        throw std::invalid_argument("quotient_scan: requires j_low < j_high");
    if ((j_high - j_low) % 2 != 0)
        throw std::invalid_argument(
            "quotient_scan: levels must have equal parity so both belong to "
            "one half-line family");
    if (!(step > 0) || !std::isfinite(step))
        throw std::invalid_argument("quotient_scan: step must be positive");
    if (!(alpha_lo <= alpha_hi))
        throw std::invalid_argument("quotient_scan: requires alpha_lo <= alpha_hi");

    int count = static_cast<int>(std::floor((alpha_hi - alpha_lo) / step + 0.5)) + 1;
    QuotientScan scan;
    scan.j_low = j_low;
    scan.j_high = j_high;
    scan.alpha.resize(count);
    scan.ratio.resize(count);
    for (int i = 0; i < count; ++i) scan.alpha[i] = alpha_lo + i * step;

    for_each_index(static_cast<std::size_t>(count), [&](std::size_t i) {
        double a = scan.alpha[i];
        fdop::BoxSpec box = fdop::choose_box(a, j_high);
        bool parity = use_parity(a);
        double num = level_lambda_on_box(j_high, a, box, parity);
        double den = level_lambda_on_box(j_low, a, box, parity);
        scan.ratio[i] = num / den;
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < scan.ratio.size(); ++i)
        if (scan.ratio[i] < scan.ratio[best])
            best = i;
    scan.min_ratio = scan.ratio[best];
    scan.argmin = scan.alpha[best];
    return scan;
}

GapBound gap_second_derivative_bound(int j, double alpha_c) {
    if (j != 1 && j != 2)
        throw std::invalid_argument(
            "gap_second_derivative_bound: defined for levels 1 and 2 only");
    check_alpha(alpha_c);
    fdop::BoxSpec box = fdop::choose_box(alpha_c, j + 2);
    bool parity = use_parity(alpha_c);
    GapBound gb;
    gb.lambda_j = level_lambda_on_box(j, alpha_c, box, parity);
    gb.lambda_j2 = level_lambda_on_box(j + 2, alpha_c, box, parity);
    gb.bound = (2.0 / 3.0) * (3 * gb.lambda_j2 - 7 * gb.lambda_j) /
               (gb.lambda_j2 - gb.lambda_j);
    gb.hypothesis = 3 * gb.lambda_j2 > 7 * gb.lambda_j;
    return gb;
}

BoundsCheck analytic_bounds_check(double alpha, double gamma) {
    check_alpha(alpha);
    if (!(gamma > 0))
        throw std::invalid_argument(
            "analytic_bounds_check: gamma must be positive");
    fdop::BoxSpec box = fdop::choose_box(alpha, 3);
    bool parity = use_parity(alpha);
    BoundsCheck bc;
    bc.alpha = alpha;
    bc.gamma = gamma;
    bc.lambda1 = level_lambda_on_box(1, alpha, box, parity);
    bc.lambda3 = level_lambda_on_box(3, alpha, box, parity);

    bc.gaussian_bound = alpha * alpha - std::pow(6.0, -1.0 / 3.0) * alpha +
                        std::pow(0.75, 4.0 / 3.0);
    bc.gaussian_ok = bc.lambda1 <= bc.gaussian_bound + kBoundSlack;

    if (alpha > 0) {
        bc.inverse_bound = 1 / (4 * alpha) + 0.75 * alpha * alpha;
        bc.inverse_bound2 = 3 / (10 * alpha) + (11.0 / 16.0) * alpha * alpha;
        bc.inverse_ok = bc.lambda1 <= *bc.inverse_bound + kBoundSlack;
        bc.inverse2_ok = bc.lambda1 <= *bc.inverse_bound2 + kBoundSlack;
    } else {
        bc.inverse_ok = true;   // bounds apply only for alpha > 0
        bc.inverse2_ok = true;
    }

    bc.harmonic_floor = 5 * std::sqrt(gamma) - 2 * gamma * alpha - gamma * gamma;
    bc.floor_ok = bc.lambda3 >= bc.harmonic_floor - kBoundSlack;
    return bc;
}

SemiclassicalComparison semiclassical_comparison(int j, double alpha) {
    check_level(j);
    check_alpha(alpha);
    if (!(alpha > 0))
        throw std::invalid_argument(
            "semiclassical_comparison: requires alpha > 0");
    fdop::BoxSpec box = fdop::choose_box(alpha, j);
    // The quantities compared here converge like h^2 = alpha^-3, which at
    // large alpha sinks below the default box's extrapolated grid error.
    // One extra halving keeps the discretization floor out of the
    // comparison at every alpha the E-window admits.
    box.n = fdop::refined_size(model::BcMode::FullLine, box.n);
    LevelFunctionals r = eval_richardson(j, alpha, box, use_parity(alpha));

    SemiclassicalComparison cmp;
    cmp.alpha = alpha;
    cmp.j = j;
    cmp.h = model::rescale_alpha_to_h(alpha);
    cmp.E = r.lambda / (alpha * alpha);
    if (cmp.E <= 1 + semiclassic::kBarrierGuard || cmp.E >= 5) {
        std::ostringstream msg;
        msg << "semiclassical_comparison: E = lambda/alpha^2 = " << cmp.E
            << " outside (1 + " << semiclassic::kBarrierGuard
            << ", 5); pick j and alpha so the rescaled energy sits in the "
               "band where the functionals are regular";
        throw std::domain_error(msg.str());
    }
    cmp.lambda_prime_over_alpha = r.lambda_prime / alpha;
    cmp.phi = semiclassic::phi(cmp.E);
    cmp.phi_diff = std::fabs(cmp.lambda_prime_over_alpha - cmp.phi);
    // 1-based full-line level j carries Bohr-Sommerfeld index j - 1
    cmp.bs_energy = semiclassic::bohr_sommerfeld(j - 1, cmp.h);
    cmp.bs_diff = std::fabs(cmp.E - cmp.bs_energy);
    // x = t / sqrt(alpha) maps int t^2 u^2 to alpha * int x^2 v^2
    cmp.grid_moment2 = r.t2 / alpha;
    cmp.measure_moment2 = semiclassic::measure_moment(cmp.E, 2);
    cmp.moment_diff = std::fabs(cmp.grid_moment2 - cmp.measure_moment2);
    return cmp;
}

}  // namespace mont::curves
