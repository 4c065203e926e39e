#pragma once

#include <cmath>
#include <limits>

namespace survopt::detail {

/// tanh-sinh quadrature over a finite interval. Converges fast for smooth
/// integrands and tolerates integrable endpoint singularities.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12, int max_level = 14) {
    if (!(b > a)) return 0.0;
    const double center = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);
    constexpr double u_max = 4.0;  // abscissas beyond this are indistinguishable from the endpoints
    constexpr double half_pi = 1.5707963267948966;

    auto eval = [&](double u, double weight_scale) {
        const double s = half_pi * std::sinh(u);
        const double x = center + halfwidth * std::tanh(s);
        const double c = std::cosh(s);
        const double w = weight_scale * half_pi * std::cosh(u) / (c * c);
        if (!(w > 0.0) || !std::isfinite(w)) return 0.0;
        if (x <= a || x >= b) return 0.0;  // tanh saturated
        const double fx = f(x);
        return std::isfinite(fx) ? fx * w : 0.0;
    };

    double h = 1.0;
    double sum = eval(0.0, 1.0);
    for (double u = h; u <= u_max; u += h) sum += eval(u, 1.0) + eval(-u, 1.0);
    double estimate = sum * h * halfwidth;

    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (double u = h; u <= u_max; u += 2.0 * h) add += eval(u, 1.0) + eval(-u, 1.0);
        sum += add;
        const double refined = sum * h * halfwidth;
        const double err = std::abs(refined - estimate);
        estimate = refined;
        if (level >= 3 && err <= rel_tol * std::max(std::abs(refined), 1e-300)) break;
    }
    return estimate;
}

/// Integral over [a, inf), mapped onto (0, 1) via t = a + w/(1-w).
template <class F>
double integrate_to_inf(F&& f, double a, double rel_tol = 1e-12) {
    auto g = [&](double w) {
        const double om = 1.0 - w;
        const double t = a + w / om;
        if (!std::isfinite(t)) return 0.0;
        return f(t) / (om * om);
    };
    return integrate(g, 0.0, 1.0, rel_tol);
}

}  // namespace survopt::detail
