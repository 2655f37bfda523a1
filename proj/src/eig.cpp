#include "mont/eig.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace mont::eig {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::atomic<std::uint64_t> g_seed{12345};

void check_index(const fdop::TridiagonalOperator& op, int k) {
    if (k < 0 || k >= op.size())
        throw std::invalid_argument("eig: eigenvalue index " + std::to_string(k) +
                                    " out of range for matrix of size " +
                                    std::to_string(op.size()));
}

// Smallest pivot magnitude the Sturm recurrence is allowed to divide by.
// Scaled by the largest off-diagonal square so the recurrence cannot
// overflow even when a shift lands exactly on an eigenvalue.
double sturm_pivmin(const std::vector<double>& off) {
    double maxb2 = 1.0;
    for (double b : off) maxb2 = std::max(maxb2, b * b);
    return std::numeric_limits<double>::min() * maxb2;
}

int sturm_count(const std::vector<double>& diag, const std::vector<double>& off,
                double lam, double pivmin) {
    const int n = static_cast<int>(diag.size());
    int count = 0;
    double d = diag[0] - lam;
    if (std::fabs(d) <= pivmin) d = -pivmin;
    if (d <= 0) ++count;
    for (int i = 1; i < n; ++i) {
        d = diag[i] - lam - off[i - 1] * off[i - 1] / d;
        if (std::fabs(d) <= pivmin) d = -pivmin;
        if (d <= 0) ++count;
    }
    return count;
}

// Pivoted LU of the shifted matrix (op - shift I), following the classic
// dense-free tridiagonal scheme: partial pivoting between adjacent rows
// introduces one extra superdiagonal (du2).  Pivots smaller than
// pivot_floor are replaced by +-pivot_floor; with the shift at an
// eigenvalue this turns the factorization into the standard inverse
// iteration operator instead of dividing by zero.
struct TriLU {
    std::vector<double> dl, d, du, du2;
    std::vector<unsigned char> swapped;
    int n = 0;

    void factor(const std::vector<double>& diag, const std::vector<double>& off,
                double shift, double pivot_floor) {
        n = static_cast<int>(diag.size());
        d.resize(n);
        for (int i = 0; i < n; ++i) d[i] = diag[i] - shift;
        dl.assign(off.begin(), off.end());
        du.assign(off.begin(), off.end());
        du2.assign(n > 2 ? n - 2 : 0, 0.0);
        swapped.assign(n > 1 ? n - 1 : 0, 0);

        for (int i = 0; i + 1 < n; ++i) {
            if (std::max(std::fabs(d[i]), std::fabs(dl[i])) < pivot_floor)
                d[i] = std::copysign(pivot_floor, d[i] == 0 ? 1.0 : d[i]);
            if (std::fabs(d[i]) >= std::fabs(dl[i])) {
                // No interchange; eliminate the subdiagonal entry.
                const double fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                // Interchange rows i and i+1.
                const double fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                const double temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = 1;
            }
        }
        if (std::fabs(d[n - 1]) < pivot_floor)
            d[n - 1] = std::copysign(pivot_floor, d[n - 1] == 0 ? 1.0 : d[n - 1]);
    }

    void solve(std::vector<double>& b) const {
        for (int i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            }
        }
        b[n - 1] /= d[n - 1];
        if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for (int i = n - 3; i >= 0; --i)
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
};

// y = (op - shift) x.
void apply_shifted(const fdop::TridiagonalOperator& op, double shift,
                   const std::vector<double>& x, std::vector<double>& y) {
    const int n = op.size();
    const auto& a = op.diag;
    const auto& b = op.offdiag;
    y.resize(n);
    for (int i = 0; i < n; ++i) {
        double s = (a[i] - shift) * x[i];
        if (i > 0) s += b[i - 1] * x[i - 1];
        if (i + 1 < n) s += b[i] * x[i + 1];
        y[i] = s;
    }
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

// Sign convention: first component of significant size is positive.  The
// largest component would be the obvious pick, but antisymmetric modes have
// two lobes of exactly equal magnitude and rounding would choose between
// them at random; a 10%-of-max threshold sits far from any node of a smooth
// eigenfunction, so the chosen component is stable under perturbations.
void fix_sign(std::vector<double>& v) {
    double best = 0;
    for (double x : v) best = std::max(best, std::fabs(x));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::fabs(v[i]) >= 0.1 * best) {
            if (v[i] < 0)
                for (double& x : v) x = -x;
            return;
        }
    }
}

}  // namespace

void set_inverse_iteration_seed(std::uint64_t seed) { g_seed.store(seed); }

std::uint64_t inverse_iteration_seed() { return g_seed.load(); }

double norm_scale(const fdop::TridiagonalOperator& op) {
    const int n = op.size();
    double scale = 0;
    for (int i = 0; i < n; ++i) {
        double row = std::fabs(op.diag[i]);
        if (i > 0) row += std::fabs(op.offdiag[i - 1]);
        if (i + 1 < n) row += std::fabs(op.offdiag[i]);
        scale = std::max(scale, row);
    }
    return scale;
}

int count_below(const fdop::TridiagonalOperator& op, double lam) {
    return sturm_count(op.diag, op.offdiag, lam, sturm_pivmin(op.offdiag));
}

double kth_eigenvalue(const fdop::TridiagonalOperator& op, int k) {
    check_index(op, k);
    const double pivmin = sturm_pivmin(op.offdiag);
    const int n = op.size();

    // Gershgorin bracket, padded so the endpoints are strictly outside.
    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (int i = 0; i < n; ++i) {
        double r = 0;
        if (i > 0) r += std::fabs(op.offdiag[i - 1]);
        if (i + 1 < n) r += std::fabs(op.offdiag[i]);
        lo = std::min(lo, op.diag[i] - r);
        hi = std::max(hi, op.diag[i] + r);
    }
    const double pad = kEps * std::max(std::fabs(lo), std::fabs(hi)) + 2 * pivmin;
    lo -= pad;
    hi += pad;

    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double width = hi - lo;
        if (width <= 2 * kEps * std::max(std::fabs(lo), std::fabs(hi)) + 2 * pivmin ||
            mid == lo || mid == hi)
            break;
        if (sturm_count(op.diag, op.offdiag, mid, pivmin) >= k + 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> lowest_eigenvalues(const fdop::TridiagonalOperator& op,
                                       int count) {
    if (count < 1 || count > op.size())
        throw std::invalid_argument("eig: eigenvalue count " + std::to_string(count) +
                                    " out of range for matrix of size " +
                                    std::to_string(op.size()));
    std::vector<double> out(count);
    for (int k = 0; k < count; ++k) out[k] = kth_eigenvalue(op, k);
    return out;
}

EigenPair eigenpair(const fdop::TridiagonalOperator& op, int k) {
    check_index(op, k);
    const int n = op.size();
    const double scale = norm_scale(op);
    const double lam = kth_eigenvalue(op, k);

    // Inverse iteration converges onto the invariant subspace of every
    // eigenvalue within roughly eps * scale of the shift.  If that subspace
    // is more than one-dimensional the computed vector is an arbitrary
    // mixture, so refuse instead of returning garbage.
    const double gap_tol = 1e3 * kEps * scale;
    const int below = count_below(op, lam - gap_tol);
    const int above = count_below(op, lam + gap_tol);
    if (above - below > 1)
        throw std::runtime_error(
            "eig: eigenvalue " + std::to_string(k) + " at " + std::to_string(lam) +
            " is within " + std::to_string(gap_tol) +
            " of a neighbor; the eigenvector is not resolvable at this "
            "precision. Solve on the parity-reduced half-line operators, where "
            "the near-degenerate pair separates into even and odd classes.");

    TriLU lu;
    lu.factor(op.diag, op.offdiag, lam, kEps * scale);

    std::mt19937_64 gen(g_seed.load());
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = unif(gen);
    double nrm = std::sqrt(dot(v, v));
    for (double& x : v) x /= nrm;

    const double res_tol = 1e-10 * scale;
    double rho = lam;
    std::vector<double> resid(n);
    bool converged = false;
    for (int it = 0; it < 8; ++it) {
        lu.solve(v);
        nrm = std::sqrt(dot(v, v));
        if (!std::isfinite(nrm) || nrm == 0)
            throw std::runtime_error("eig: inverse iteration produced a "
                                     "non-finite vector at index " +
                                     std::to_string(k));
        for (double& x : v) x /= nrm;

        apply_shifted(op, 0.0, v, resid);
        rho = dot(v, resid);  // Rayleigh quotient, v has unit 2-norm here
        double rn = 0;
        for (int i = 0; i < n; ++i) {
            const double r = resid[i] - rho * v[i];
            rn += r * r;
        }
        if (std::sqrt(rn) <= res_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw std::runtime_error(
            "eig: inverse iteration failed to reach residual " +
            std::to_string(res_tol) + " for eigenvalue index " + std::to_string(k));

    fix_sign(v);
    const double w = 1.0 / std::sqrt(op.grid.dx);
    for (double& x : v) x *= w;  // dx * sum v^2 = 1

    return EigenPair{rho, std::move(v)};
}

std::vector<double> solve_shifted_orthogonal(const fdop::TridiagonalOperator& op,
                                             double lambda,
                                             const std::vector<double>& v,
                                             std::vector<double> rhs) {
    const int n = op.size();
    if (static_cast<int>(v.size()) != n || static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument(
            "solve_shifted_orthogonal: vector length does not match matrix size");

    const double dx = op.grid.dx;
    const double scale = norm_scale(op);
    const auto ip = [dx](const std::vector<double>& a, const std::vector<double>& b) {
        return dx * dot(a, b);
    };

    const double v2 = ip(v, v);
    const double rhs_norm = std::sqrt(ip(rhs, rhs));
    if (rhs_norm == 0) return std::vector<double>(n, 0.0);

    const double overlap = ip(rhs, v) / (rhs_norm * std::sqrt(v2));
    if (std::fabs(overlap) > 1e-8)
        throw std::invalid_argument(
            "solve_shifted_orthogonal: right-hand side has relative component " +
            std::to_string(overlap) +
            " along the eigenvector; the shifted system is only solvable on "
            "its orthogonal complement");

    const auto project_out = [&](std::vector<double>& x) {
        const double c = ip(x, v) / v2;
        for (int i = 0; i < n; ++i) x[i] -= c * v[i];
    };
    project_out(rhs);

    TriLU lu;
    lu.factor(op.diag, op.offdiag, lambda, kEps * scale);

    // One floored pivot stands in for the deflated direction; the solve
    // therefore returns the correct complement solution plus a small
    // multiple of v, which the projection removes.  Iterative refinement
    // mops up the rounding left behind.
    std::vector<double> w = rhs;
    lu.solve(w);
    project_out(w);

    std::vector<double> r(n), c(n);
    double rel = std::numeric_limits<double>::max();
    for (int pass = 0; pass < 5; ++pass) {
        apply_shifted(op, lambda, w, r);
        for (int i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
        project_out(r);
        rel = std::sqrt(ip(r, r)) / rhs_norm;
        if (rel <= 1e-12) break;
        c = r;
        lu.solve(c);
        project_out(c);
        for (int i = 0; i < n; ++i) w[i] += c[i];
        project_out(w);
    }

    const double w_norm = std::sqrt(ip(w, w));
    const double ortho =
        std::fabs(ip(w, v)) / std::max(w_norm * std::sqrt(v2),
                                       std::numeric_limits<double>::min());
    if (rel > 1e-9 || ortho > 1e-9)
        throw std::runtime_error(
            "solve_shifted_orthogonal: refinement stalled with relative "
            "residual " + std::to_string(rel) + " and overlap " +
            std::to_string(ortho));
    return w;
}

}  // namespace mont::eig
