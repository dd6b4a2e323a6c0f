#pragma once

// Real root detection on a sampled scalar function: sign changes refined by
// TOMS 748 bracketing, and sign-touching zeros located as stationary points.

#include <functional>
#include <string>
#include <span>
#include <vector>

namespace ite {

enum class Multiplicity { SimpleSignChange, TouchingZero };

struct RootOptions {
    double root_tol = 1e-12;   // |f(root)| <= root_tol * local scale
    double touch_tol = 1e-6;   // touching zero accepted if |f| <= touch_tol * local scale
    int scale_window = 50;     // grid points either side used for the local scale
    int max_iter = 200;
};

struct RootCandidate {
    double x = 0.0;
    Multiplicity hint = Multiplicity::SimpleSignChange;
    double residual = 0.0;  // |f(x)|
    double scale = 0.0;     // local max |f| on the grid
    double lo = 0.0;
    double hi = 0.0;
};

/// `values[i] = f(grid[i])` on an ascending grid. `df` is f'. The residual
/// scale is the largest |f| within scale_window grid points, raised to
/// `rounding_scale(x)` when given (the magnitude of the terms that cancel in f).
/// Throws ConvergenceError if a bracket fails to refine.
std::vector<RootCandidate> find_real_roots(std::span<const double> grid,
                                           std::span<const double> values,
                                           const std::function<double(double)>& f,
                                           const std::function<double(double)>& df,
                                           const RootOptions& options = {},
                                           const std::function<double(double)>& rounding_scale = {});

/// Refines a sign-changing bracket of f to machine precision.
double refine_bracket(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                      double f_hi, int max_iter = 200);

std::string to_string(Multiplicity m);

}  // namespace ite
