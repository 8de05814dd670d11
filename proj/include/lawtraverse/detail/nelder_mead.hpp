#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace lawtraverse {

// Reflection 1, expansion 2, contraction 0.5, shrink 0.5. Stops when the
// spread of objective values across the simplex drops below `tolerance`
// times (1 + |best|), or after `max_iterations`. Non-finite values are
// treated as +inf so infeasible regions repel the simplex.
template <class F>
SimplexResult nelder_mead(F&& f, std::vector<double> x0, double initial_step, std::size_t max_iterations,
                          double tolerance) {
    const std::size_t n = x0.size();
    auto eval = [&](const std::vector<double>& x) {
        const double v = f(x);
        return std::isfinite(v) ? v : INFINITY;
    };

    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += initial_step;
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

    std::vector<std::size_t> order(n + 1);
    SimplexResult out;
    std::size_t it = 0;
    for (; it < max_iterations; ++it) {
        std::iota(order.begin(), order.end(), 0);
        // stable: equal values keep index order, so runs are reproducible
        std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) { return vals[l] < vals[r]; });
        const double best = vals[order.front()];
        const double worst = vals[order.back()];
        if (std::isfinite(worst) && worst - best <= tolerance * (1.0 + std::abs(best))) {
            out.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[order[k]][i] / static_cast<double>(n);

        const std::size_t w = order.back();
        auto along = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + t * (pts[w][i] - centroid[i]);
            return x;
        };

        auto xr = along(-1.0);
        const double fr = eval(xr);
        const double second_worst = vals[order[n - 1]];
        if (fr < best) {
            auto xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[w] = std::move(xe);
                vals[w] = fe;
            } else {
                pts[w] = std::move(xr);
                vals[w] = fr;
            }
            continue;
        }
        if (fr < second_worst) {
            pts[w] = std::move(xr);
            vals[w] = fr;
            continue;
        }
        const bool outside = fr < vals[w];
        auto xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < (outside ? fr : vals[w])) {
            pts[w] = std::move(xc);
            vals[w] = fc;
            continue;
        }
        const std::size_t b = order.front();
        for (std::size_t k = 0; k <= n; ++k) {
            if (k == b) continue;
            for (std::size_t i = 0; i < n; ++i) pts[k][i] = pts[b][i] + 0.5 * (pts[k][i] - pts[b][i]);
            vals[k] = eval(pts[k]);
        }
    }
    const auto best_it = std::min_element(vals.begin(), vals.end());
    out.x = pts[static_cast<std::size_t>(best_it - vals.begin())];
    out.value = *best_it;
    out.iterations = it;
    return out;
}

}  // namespace lawtraverse
