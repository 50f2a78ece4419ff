#pragma once

#include <functional>
#include <vector>

namespace tropo::quadrature {

struct Estimate {
    double value = 0.0;
    double abs_error = 0.0;
    double scale = 0.0; // integral of |f| delta_tau, the reference for the tolerance
};

/// Counting-window weight delta_tau(w) = (1/pi) sin^2(w tau/2) / (tau w^2/2); integrates to 1.
double window(double omega, double tau);

/// Integral of f(w) delta_tau(w) over the real line for an even, bounded f.
/// `rates` are the frequencies where f changes shape; they set breakpoints and the cutoff.
/// Throws QuadratureNotConverged when the error estimate exceeds rel_tol * scale.
Estimate window_integral(const std::function<double(double)>& f, double tau, const std::vector<double>& rates,
                         double rel_tol = 1e-8);

} // namespace tropo::quadrature
