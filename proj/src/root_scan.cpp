#include "ite/root_scan.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <limits>

#include "ite/errors.hpp"

namespace ite {

double refine_bracket(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                      double f_hi, int max_iter) {
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto tol = [](double a, double b) {
        return std::abs(b - a) <= 4.0 * eps * std::max(std::abs(a), std::abs(b));
    };
    std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, iters);
    if (iters >= static_cast<std::uintmax_t>(max_iter) && !tol(a, b)) {
        throw ConvergenceError("root refinement did not converge", lo, hi);
    }
    return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

std::vector<RootCandidate> find_real_roots(std::span<const double> grid,
                                           std::span<const double> values,
                                           const std::function<double(double)>& f,
                                           const std::function<double(double)>& df,
                                           const RootOptions& options,
                                           const std::function<double(double)>& rounding_scale) {
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
    std::vector<RootCandidate> out;
    if (n < 2) return out;

    auto local_scale = [&](std::ptrdiff_t i) {
        const std::ptrdiff_t a = std::max<std::ptrdiff_t>(0, i - options.scale_window);
        const std::ptrdiff_t b = std::min<std::ptrdiff_t>(n - 1, i + options.scale_window);
        double s = 0.0;
        for (std::ptrdiff_t j = a; j <= b; ++j) s = std::max(s, std::abs(values[j]));
        return s;
    };

    for (std::ptrdiff_t i = 0; i + 1 < n; ++i) {
        const double a = values[i];
        const double b = values[i + 1];
        // Exact zero on a grid node: count it once, from the left interval.
        if (a == 0.0) {
            if (i == 0 || values[i - 1] == 0.0) continue;
            out.push_back({grid[i], Multiplicity::SimpleSignChange, 0.0, local_scale(i), grid[i - 1],
                           grid[i + 1]});
            continue;
        }
        if (b == 0.0 || (a < 0.0) == (b < 0.0)) continue;
        const double x = refine_bracket(f, grid[i], grid[i + 1], a, b, options.max_iter);
        double scale = local_scale(i);
        if (rounding_scale) scale = std::max(scale, rounding_scale(x));
        const double res = std::abs(f(x));
        if (res > options.root_tol * scale && res > 0.0) {
            throw ConvergenceError("refined root residual above tolerance", grid[i], grid[i + 1]);
        }
        out.push_back({x, Multiplicity::SimpleSignChange, res, scale, grid[i], grid[i + 1]});
    }

    for (std::ptrdiff_t i = 1; i + 1 < n; ++i) {
        const double a = values[i - 1];
        const double m = values[i];
        const double b = values[i + 1];
        if (a == 0.0 || m == 0.0 || b == 0.0) continue;
        const bool same_sign = ((a < 0.0) == (m < 0.0)) && ((m < 0.0) == (b < 0.0));
        if (!same_sign) continue;
        if (!(std::abs(m) <= std::abs(a) && std::abs(m) < std::abs(b))) continue;

        const double lo = grid[i - 1];
        const double hi = grid[i + 1];
        const double d_lo = df(lo);
        const double d_hi = df(hi);
        if (d_lo == 0.0 || d_hi == 0.0 || (d_lo < 0.0) == (d_hi < 0.0)) continue;
        const double x = refine_bracket(df, lo, hi, d_lo, d_hi, options.max_iter);
        double scale = local_scale(i);
        if (rounding_scale) scale = std::max(scale, rounding_scale(x));
        const double res = std::abs(f(x));
        if (res <= options.touch_tol * scale) {
            out.push_back({x, Multiplicity::TouchingZero, res, scale, lo, hi});
        }
    }

    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.x < r.x; });
    return out;
}

std::string to_string(Multiplicity m) {
    return m == Multiplicity::TouchingZero ? "touching_zero" : "simple_sign_change";
}

}  // namespace ite
