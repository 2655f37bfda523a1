#include "mont/fdop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mont::fdop {

namespace {

void check_box(double L, int n) {
    if (!(L > 0) || !std::isfinite(L))
        throw std::invalid_argument("fdop: box half-width must be positive, got " +
                                    std::to_string(L));
    if (n < 3)
        throw std::invalid_argument("fdop: need at least 3 grid nodes, got " +
                                    std::to_string(n));
}

void fill_potential(TridiagonalOperator& op, double alpha) {
    const double inv_dx2 = 1.0 / (op.grid.dx * op.grid.dx);
    const int n = op.grid.n;
    op.diag.resize(n);
    op.offdiag.assign(n - 1, -inv_dx2);
    for (int i = 0; i < n; ++i)
        op.diag[i] =
            2.0 * inv_dx2 + model::montgomery_potential_value(op.grid.node(i), alpha);
}

}  // namespace

TridiagonalOperator build_full_line(double alpha, double L, int n) {
    check_box(L, n);
    TridiagonalOperator op;
    op.bc = model::BcMode::FullLine;
    op.grid.n = n;
    op.grid.dx = 2 * L / (n + 1);
    op.grid.x_min = -L;
    fill_potential(op, alpha);
    return op;
}

TridiagonalOperator build_half_line(double alpha, double L, int n,
                                    model::BcMode bc) {
    check_box(L, n);
    TridiagonalOperator op;
    op.bc = bc;
    op.grid.n = n;
    switch (bc) {
        case model::BcMode::HalfLineDirichlet:
            op.grid.dx = L / (n + 1);
            op.grid.x_min = 0.0;
            break;
        case model::BcMode::HalfLineNeumann:
            // Node 0 sits at x = 0; the wall stays at x = n dx = L.
            op.grid.dx = L / n;
            op.grid.x_min = -op.grid.dx;
            break;
        default:
            throw std::invalid_argument(
                "fdop: build_half_line requires a half-line boundary mode");
    }
    fill_potential(op, alpha);
    if (bc == model::BcMode::HalfLineNeumann)
        op.offdiag[0] *= std::sqrt(2.0);  // symmetrized even fold, see header
    return op;
}

BoxSpec choose_box(double alpha, int j_max) {
    if (j_max < 1)
        throw std::invalid_argument("choose_box: eigenvalue index must be >= 1, got " +
                                    std::to_string(j_max));
    if (!std::isfinite(alpha))
        throw std::invalid_argument("choose_box: alpha must be finite");

    // Crude overestimate of lambda_{j_max}.  The j^{4/3} growth matches the
    // large-index Weyl law for a quartic well; the 2 alpha^2 term covers the
    // barrier top, below which levels accumulate for large alpha.
    const double lam_est =
        2.8 * std::pow(static_cast<double>(j_max), 4.0 / 3.0) + 2.0 +
        2.0 * alpha * alpha;

    // Outer classical turning point of (t^2/2 - alpha)^2 at that energy,
    // then a margin: 50% more room plus four absolute units for the tail.
    const double t_turn = std::sqrt(2.0 * (alpha + std::sqrt(lam_est)));
    BoxSpec box;
    box.L = 1.5 * t_turn + 4.0;

    // At least five nodes per local wavelength 2 pi / sqrt(lam_est), and
    // never coarser than 0.02 so low-lying states stay well resolved.
    const double dx_target = std::min(0.02, 2 * M_PI / (5.0 * std::sqrt(lam_est)));
    int n = static_cast<int>(std::ceil(2 * box.L / dx_target)) - 1;
    n = std::max(n, 129);
    if (n % 2 == 0) ++n;  // odd n keeps x = 0 on the grid
    box.n = n;
    return box;
}

HalfSizes half_line_sizes(int n_full) {
    if (n_full < 3 || n_full % 2 == 0)
        throw std::invalid_argument(
            "half_line_sizes: full-line size must be odd and >= 3, got " +
            std::to_string(n_full));
    // Full line has n_full nodes at spacing dx = 2L/(n_full+1).  The nodes
    // with x >= 0 are x = 0, dx, ..., L - dx: that is (n_full+1)/2 Neumann
    // nodes, or (n_full-1)/2 once x = 0 is dropped for the Dirichlet grid.
    HalfSizes hs;
    hs.neumann = (n_full + 1) / 2;
    hs.dirichlet = (n_full - 1) / 2;
    return hs;
}

int refined_size(model::BcMode bc, int n) {
    switch (bc) {
        case model::BcMode::FullLine:
        case model::BcMode::HalfLineDirichlet:
            return 2 * n + 1;  // dx = span/(n+1) halves
        case model::BcMode::HalfLineNeumann:
            return 2 * n;  // dx = L/n halves
    }
    throw std::invalid_argument("refined_size: unknown boundary mode");
}

}  // namespace mont::fdop
