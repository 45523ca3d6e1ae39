#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "stainlab/tensor.hpp"

namespace stainlab {

// Central-difference check of an analytic gradient against a scalar field f.
// Step per coordinate is h_base * max(1, |x_i|). Returns
// max_i |g_fd - g_an| / max(1, |g_fd|). Callers must keep x away from
// non-smooth points of f (dead zones, clamp edges, abs kinks).
inline double finite_diff_check(const std::function<double(const Tensor&)>& f,
                                const Tensor& x, const Tensor& analytic_grad,
                                double h_base = 1e-5) {
    require_same_shape(x, analytic_grad, "finite_diff_check");
    Tensor probe = x;
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        const double h = h_base * std::max(1.0, std::abs(xi));
        probe[i] = xi + h;
        const double fp = f(probe);
        probe[i] = xi - h;
        const double fm = f(probe);
        probe[i] = xi;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw EvaluationError("finite_diff_check: non-finite function value");
        const double g_fd = (fp - fm) / (2.0 * h);
        const double err = std::abs(g_fd - analytic_grad[i]) / std::max(1.0, std::abs(g_fd));
        worst = std::max(worst, err);
    }
    return worst;
}

// Scalar-parameter variant (used for the normalization mixing weight).
inline double finite_diff_check_scalar(const std::function<double(double)>& f,
                                       double x, double analytic_grad,
                                       double h_base = 1e-5) {
    const double h = h_base * std::max(1.0, std::abs(x));
    const double fp = f(x + h);
    const double fm = f(x - h);
    if (!std::isfinite(fp) || !std::isfinite(fm))
        throw EvaluationError("finite_diff_check: non-finite function value");
    const double g_fd = (fp - fm) / (2.0 * h);
    return std::abs(g_fd - analytic_grad) / std::max(1.0, std::abs(g_fd));
}

}  // namespace stainlab
