#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "error.hpp"

namespace kgring {

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Brent's method on a sign-changing bracket [a, b]. Iterates until the
/// bracket is down to a few ulps or f hits zero exactly, so callers can
/// apply their own residual test afterwards.
template <class F>
RootResult brent_root(F&& f, double a, double b, double fa, double fb, int max_iter = 200) {
    detail::require(fa * fb <= 0.0, "brent_root: root not bracketed");
    constexpr double eps = std::numeric_limits<double>::epsilon();
    RootResult res;
    if (fa == 0.0) return {a, fa, 0, true};
    if (fb == 0.0) return {b, fb, 0, true};

    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 1; it <= max_iter; ++it) {
        res.iterations = it;
        if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b, b = c, c = a;
            fa = fb, fb = fc, fc = fa;
        }
        const double tol = 2.0 * eps * std::abs(b) + 0.5 * std::numeric_limits<double>::min();
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol || fb == 0.0) {
            res.x = b;
            res.fx = fb;
            res.converged = true;
            return res;
        }
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic interpolation, or secant when only two points differ
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (xm > 0.0 ? tol : -tol);
        fb = f(b);
    }
    res.x = b;
    res.fx = fb;
    return res;
}

/// Bisection on a boolean predicate that flips once inside [lo, hi]. Returns
/// the midpoint of the final bracket.
template <class Pred>
double bisect_predicate(Pred&& above, double lo, double hi, double xtol, int max_iter = 200) {
    const bool at_lo = above(lo);
    for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (above(mid) == at_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace kgring
