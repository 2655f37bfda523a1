#pragma once

#include <vector>

#include "mont/model.hpp"

/** Second-order finite-difference discretizations of the operator
    -d^2/dt^2 + (t^2/2 - alpha)^2 on a truncated box, as symmetric
    tridiagonal matrices.

    Three grids are supported:

      FullLine          box [-L, L], homogeneous Dirichlet walls at +-L,
                        interior nodes -L + (i+1) dx, dx = 2L/(n+1).
      HalfLineDirichlet box [0, L], u(0) = u(L) = 0, nodes (i+1) dx,
                        dx = L/(n+1).  Captures odd-parity eigenpairs.
      HalfLineNeumann   box [0, L], u'(0) = 0 and u(L) = 0, nodes i dx for
                        i = 0..n-1, dx = L/n.  Captures even-parity pairs.
                        The mirror condition u(-dx) = u(dx) makes the raw
                        row at node 0 asymmetric; rescaling that component
                        by sqrt(2) restores symmetry and puts -sqrt(2)/dx^2
                        in the first off-diagonal slot.  Eigenvalues are
                        untouched; eigenvector components must be mapped
                        back before they are read as function samples (the
                        eigensolver handles this, see eig.hpp).

    The half-line grids are designed to interleave exactly with the full
    line: for odd n the full-line grid contains x = 0, and the Neumann /
    Dirichlet grids with sizes from half_line_sizes(n) reuse the same dx
    and the same node locations.  Parity-reduced and full-line runs are
    therefore comparable without interpolation. */
namespace mont::fdop {

/// Uniform grid of n interior nodes; node i sits at x_min + (i+1) dx.
struct Grid {
    double x_min = 0.0;
    double dx = 0.0;
    int n = 0;

    double node(int i) const { return x_min + (i + 1) * dx; }
};

/// Symmetric tridiagonal matrix plus the grid and boundary mode it came
/// from.  offdiag[i] couples nodes i and i+1, so offdiag.size() == n - 1.
struct TridiagonalOperator {
    std::vector<double> diag;
    std::vector<double> offdiag;
    Grid grid;
    model::BcMode bc = model::BcMode::FullLine;

    int size() const { return static_cast<int>(diag.size()); }
};

/// Box half-width and full-line matrix size chosen for coupling alpha and
/// eigenvalue indices up to j_max (1-based).  n is always odd so that the
/// grid contains x = 0 and splits evenly into the two parity grids.
struct BoxSpec {
    double L = 0.0;
    int n = 0;
};

/// Discretize on [-L, L] with Dirichlet walls.  Requires L > 0, n >= 3.
TridiagonalOperator build_full_line(double alpha, double L, int n);

/// Discretize on [0, L] with the given half-line boundary mode at 0 and a
/// Dirichlet wall at L.  Requires L > 0, n >= 3; bc must be one of the two
/// half-line modes.
TridiagonalOperator build_half_line(double alpha, double L, int n,
                                    model::BcMode bc);

/// Pick a box that contains the classically allowed region of eigenvalue
/// j_max with room for tunneling tails, and a grid fine enough to resolve
/// the shortest oscillation.  Requires j_max >= 1.
BoxSpec choose_box(double alpha, int j_max);

/// Sizes of the Neumann and Dirichlet half-line grids that share dx and
/// node locations with a full-line grid of odd size n_full.
struct HalfSizes {
    int neumann = 0;
    int dirichlet = 0;
};
HalfSizes half_line_sizes(int n_full);

/// Matrix size whose grid spacing is exactly half that of size n under the
/// same boundary mode.  Used for mesh-refinement extrapolation.
int refined_size(model::BcMode bc, int n);

}  // namespace mont::fdop
