#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace mont::rootfind {

/// Bracketed scalar root-finding: regula falsi with the Illinois weight
/// adjustment, which keeps the iterate inside the bracket and restores
/// superlinear convergence when plain false position would stall on one
/// side.  Terminates once the bracket width drops below xtol (absolute).
/// f must change sign on [lo, hi]; throws std::invalid_argument otherwise.
template <typename F>
double solve_bracketed(F&& f, double lo, double hi, double flo, double fhi,
                       double xtol, int max_iter = 200) {
    if (!(lo < hi))
        throw std::invalid_argument("solve_bracketed: requires lo < hi");
    if (flo == 0)
        return lo;
    if (fhi == 0)
        return hi;
    if ((flo < 0) == (fhi < 0))
        throw std::invalid_argument(
            "solve_bracketed: no sign change on [" + std::to_string(lo) + ", " +
            std::to_string(hi) + "]; widen the bracket");
    int side = 0;  // which endpoint the previous step replaced
    for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
        double x = hi - fhi * (hi - lo) / (fhi - flo);
        // guard against roundoff pinning x to an endpoint
        double margin = 1e-3 * (hi - lo);
        if (!(x > lo + margin))
            x = lo + margin;
        else if (!(x < hi - margin))
            x = hi - margin;
        double fx = f(x);
        if (fx == 0)
            return x;
        if ((fx < 0) == (fhi < 0)) {
            hi = x;
            fhi = fx;
            if (side == +1)
                flo *= 0.5;
            side = +1;
        } else {
            lo = x;
            flo = fx;
            if (side == -1)
                fhi *= 0.5;
            side = -1;
        }
    }
    return 0.5 * (lo + hi);
}

template <typename F>
double solve_bracketed(F&& f, double lo, double hi, double xtol,
                       int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    return solve_bracketed(f, lo, hi, flo, fhi, xtol, max_iter);
}

}  // namespace mont::rootfind
