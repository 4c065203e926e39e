#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace survopt::detail {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    int evaluations = 0;
};

/// Minimize f over R^d (d = 1 or 2 here). Standard reflect / expand /
/// contract / shrink loop; stops when both the simplex spread and the
/// value spread collapse.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> start, double initial_scale = 0.3,
                                    double x_tol = 1e-11, double f_tol = 1e-13,
                                    int max_iterations = 4000) {
    const std::size_t d = start.size();
    struct Vertex {
        std::vector<double> x;
        double value;
    };

    NelderMeadResult result;
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    std::vector<Vertex> simplex;
    simplex.push_back({start, eval(start)});
    for (std::size_t i = 0; i < d; ++i) {
        auto x = start;
        x[i] += initial_scale;
        simplex.push_back({x, eval(x)});
    }

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.value < b.value; };
    for (int iter = 0; iter < max_iterations; ++iter) {
        std::sort(simplex.begin(), simplex.end(), by_value);
        const Vertex& best = simplex.front();
        Vertex& worst = simplex.back();

        double spread = 0.0;
        for (const auto& v : simplex) {
            for (std::size_t i = 0; i < d; ++i) {
                spread = std::max(spread, std::abs(v.x[i] - best.x[i]));
            }
        }
        const double f_scale = 1.0 + std::abs(best.value);
        if (spread < x_tol && std::abs(worst.value - best.value) < f_tol * f_scale) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t v = 0; v + 1 < simplex.size(); ++v) {
            for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[v].x[i];
        }
        for (auto& c : centroid) c /= static_cast<double>(d);

        auto blend = [&](double t) {
            std::vector<double> x(d);
            for (std::size_t i = 0; i < d; ++i) x[i] = centroid[i] + t * (centroid[i] - worst.x[i]);
            return x;
        };

        auto reflected = blend(1.0);
        const double fr = eval(reflected);
        if (fr < best.value) {
            auto expanded = blend(2.0);
            const double fe = eval(expanded);
            if (fe < fr) {
                worst = {std::move(expanded), fe};
            } else {
                worst = {std::move(reflected), fr};
            }
            continue;
        }
        if (fr < simplex[simplex.size() - 2].value) {
            worst = {std::move(reflected), fr};
            continue;
        }
        const bool outside = fr < worst.value;
        auto contracted = blend(outside ? 0.5 : -0.5);
        const double fc = eval(contracted);
        if (fc < std::min(fr, worst.value)) {
            worst = {std::move(contracted), fc};
            continue;
        }
        for (std::size_t v = 1; v < simplex.size(); ++v) {  // shrink toward the best
            for (std::size_t i = 0; i < d; ++i) {
                simplex[v].x[i] = best.x[i] + 0.5 * (simplex[v].x[i] - best.x[i]);
            }
            simplex[v].value = eval(simplex[v].x);
        }
    }

    std::sort(simplex.begin(), simplex.end(), by_value);
    result.x = simplex.front().x;
    result.value = simplex.front().value;
    return result;
}

}  // namespace survopt::detail
