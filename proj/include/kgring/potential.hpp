#pragma once

// Manning-Rosen plus ring-shaped potential and the exponential
// approximation of the centrifugal barrier. Natural units, hbar = c = 1.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "error.hpp"

namespace kgring {

inline constexpr double default_C0 = 1.0 / 12.0;

struct PotentialParams {
    double M = 1.0;          ///< rest mass (inverse length)
    double b = 1.0;          ///< screening length
    double alpha = 1.0;      ///< shape parameter
    double A = 0.0;          ///< strength
    double beta = 0.0;       ///< ring strength multiplying cos(theta)
    double beta_prime = 0.0; ///< ring strength of the pure 1/sin^2 term
    double C0 = default_C0;  ///< centrifugal-approximation constant

    void validate() const {
        const bool finite = std::isfinite(M) && std::isfinite(b) && std::isfinite(alpha) && std::isfinite(A) &&
                            std::isfinite(beta) && std::isfinite(beta_prime) && std::isfinite(C0);
        detail::require(finite, "PotentialParams: all fields must be finite");
        detail::require(M > 0.0, "PotentialParams: M must be positive");
        detail::require(b > 0.0, "PotentialParams: b must be positive");
    }

    bool operator==(const PotentialParams&) const = default;
};

/// Smallest r/b accepted by the radial evaluators; below it the exponential
/// forms are a 0/0 limit.
inline constexpr double min_reduced_radius = 1e-12;

namespace detail {

inline void check_radius(double b, double r) {
    require(r > 0.0 && std::isfinite(r), "radius must be positive and finite");
    require(r / b >= min_reduced_radius, "radius below the near-singular guard r/b < 1e-12");
}

// 1 - e^{-x} without cancellation at small x
inline double one_minus_exp_neg(double x) { return -std::expm1(-x); }

} // namespace detail

/// Radial shape of the Manning-Rosen part without the eta or 1/(2M) factors:
/// U(r) = alpha(alpha-1) e^{-2r/b}/(1-e^{-r/b})^2 - A e^{-r/b}/(1-e^{-r/b}).
/// Multiplied by 1/b^2 this is what enters the radial equation.
inline double manning_rosen_shape(const PotentialParams& p, double r) {
    detail::check_radius(p.b, r);
    const double s = std::exp(-r / p.b);
    const double d = detail::one_minus_exp_neg(r / p.b);
    const double g = s / d;
    return p.alpha * (p.alpha - 1.0) * g * g - p.A * g;
}

/// V(r, theta) with the 1/k = 1/(2M) prefactor applied to every term.
inline double eval_potential(const PotentialParams& p, double r, double theta) {
    p.validate();
    detail::require(theta > 0.0 && theta < std::numbers::pi, "eval_potential: theta must lie in (0, pi)");
    const double radial = manning_rosen_shape(p, r) / (p.b * p.b);
    const double sin_t = std::sin(theta);
    const double ring = (p.beta_prime + p.beta * std::cos(theta)) / (r * r * sin_t * sin_t);
    return (radial + ring) / (2.0 * p.M);
}

/// Approximation of 1/r^2: (1/b^2)[C0 + e^{-r/b}/(1-e^{-r/b})^2].
inline double centrifugal_approx(double b, double C0, double r) {
    detail::require(b > 0.0, "centrifugal_approx: b must be positive");
    detail::check_radius(b, r);
    const double s = std::exp(-r / b);
    const double d = detail::one_minus_exp_neg(r / b);
    return (C0 + s / (d * d)) / (b * b);
}

struct ApproxErrorRow {
    double r;
    double exact;       ///< 1/r^2
    double approx;
    double rel_error;   ///< |approx - exact| / exact
};

inline std::vector<ApproxErrorRow> approx_error_scan(double b, double C0, std::span<const double> r_grid) {
    detail::require(!r_grid.empty(), "approx_error_scan: empty grid");
    std::vector<ApproxErrorRow> rows;
    rows.reserve(r_grid.size());
    for (double r : r_grid) {
        const double exact = 1.0 / (r * r);
        const double approx = centrifugal_approx(b, C0, r);
        rows.push_back({r, exact, approx, std::abs(approx - exact) / exact});
    }
    return rows;
}

} // namespace kgring
