#pragma once

#include <cstdint>
#include <vector>

#include "mont/fdop.hpp"

/** Symmetric tridiagonal eigensolver tuned for the discretized quartic
    operators.  Eigenvalues come from Sturm-count bisection, which is
    backward stable and lets us pick an index without computing the rest
    of the spectrum.  Eigenvectors come from inverse iteration against a
    pivoted tridiagonal LU with floored pivots.

    Conventions baked into this module:

      * Eigenvalue indices are 0-based within the matrix at hand.
      * Returned eigenvectors v satisfy dx * sum v_i^2 = 1, i.e. they are
        samples of a function with unit L2 norm on the grid's own domain.
        For the symmetrized Neumann fold the components are still matrix
        coordinates; node 0 reads directly as the function value at x = 0
        while every other sample is component / sqrt(2) once the vector is
        interpreted on the full line (see fdop.hpp).
      * The sign is fixed by making the first component of significant
        magnitude (at least 10% of the max) positive, so repeated runs and
        refined grids agree even for modes whose extremal lobes tie.

    Inverse iteration starts from a pseudorandom vector.  The generator
    seed is process-global and settable for reproducibility; runs with the
    same seed are bit-identical. */
namespace mont::eig {

/// Replace the seed used for inverse-iteration start vectors.
void set_inverse_iteration_seed(std::uint64_t seed);

/// Currently active seed (default 12345).
std::uint64_t inverse_iteration_seed();

/// Infinity norm of the matrix: max_i |a_i| + |b_{i-1}| + |b_i|.  All
/// tolerances in this module are relative to this scale.
double norm_scale(const fdop::TridiagonalOperator& op);

/// Number of eigenvalues strictly below lam (ties resolve arbitrarily
/// within a few ulps).  Sturm sequence with floored pivots, so it is safe
/// at any lam including exact eigenvalues.
int count_below(const fdop::TridiagonalOperator& op, double lam);

/// k-th eigenvalue (0-based, ascending) by bisection on the Sturm count.
/// Converges to a width of a few ulps of the matrix scale.
double kth_eigenvalue(const fdop::TridiagonalOperator& op, int k);

/// First `count` eigenvalues in ascending order.
std::vector<double> lowest_eigenvalues(const fdop::TridiagonalOperator& op,
                                       int count);

/// Eigenvalue plus normalized eigenvector.
struct EigenPair {
    double lambda = 0.0;
    std::vector<double> vec;
};

/// Eigenpair for index k.  The eigenvalue is polished with a Rayleigh
/// quotient after inverse iteration, so it is usually more accurate than
/// plain bisection.  Throws std::runtime_error when the eigenvalue sits in
/// a cluster too tight for the vector to be well determined (the near
/// degenerate pairs of a deep double well); the remedy is to solve on the
/// parity-reduced half-line operators, where the pair separates into
/// distinct symmetry classes.
EigenPair eigenpair(const fdop::TridiagonalOperator& op, int k);

/// Solve (op - lambda) w = rhs restricted to the complement of the
/// eigenvector v, where lambda is the eigenvalue belonging to v.  The
/// right-hand side must already be orthogonal to v in the dx-weighted
/// inner product (checked, relative tolerance 1e-8); the returned w is
/// orthogonal to v as well.  This is the building block for perturbation
/// series: first derivatives of eigenvectors and second derivatives of
/// eigenvalues along any parameter.  Throws std::invalid_argument on a
/// non-orthogonal right-hand side and std::runtime_error if iterative
/// refinement cannot push the residual below 1e-9 relative.
std::vector<double> solve_shifted_orthogonal(const fdop::TridiagonalOperator& op,
                                             double lambda,
                                             const std::vector<double>& v,
                                             std::vector<double> rhs);

}  // namespace mont::eig
