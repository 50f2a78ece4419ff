#include "tropo/quadrature.hpp"

#include "tropo/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tropo::quadrature {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 21>;

struct Piece {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

double sinc2(double u)
{
    if (std::abs(u) < 1e-4) return 1.0 - u * u / 3.0;
    const double s = std::sin(u) / u;
    return s * s;
}

template <class F>
Piece kronrod(const F& f, double a, double b)
{
    double err = 0.0, l1 = 0.0;
    const double v = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
    return {v, err * 0.5 * (b - a), l1};
}

// Adaptive bisection on 21-point Kronrod rules. Boost's own adaptive driver leaves the
// local error unscaled by the interval half-width, which overstates it on short intervals.
// Refinement also stops once halving no longer shrinks the error: roundoff has taken over.
template <class F>
Piece refine(const F& f, double a, double b, const Piece& whole, int depth)
{
    if (depth == 0 || whole.error <= 1e-12 * whole.l1) return whole;
    const double mid = 0.5 * (a + b);
    const Piece l = kronrod(f, a, mid), r = kronrod(f, mid, b);
    if (l.error + r.error > 0.5 * whole.error) return {l.value + r.value, l.error + r.error, l.l1 + r.l1};
    const Piece lr = refine(f, a, mid, l, depth - 1), rr = refine(f, mid, b, r, depth - 1);
    return {lr.value + rr.value, lr.error + rr.error, lr.l1 + rr.l1};
}

template <class F>
Piece adaptive(const F& f, double a, double b, int depth)
{
    return refine(f, a, b, kronrod(f, a, b), depth);
}

} // namespace

double window(double omega, double tau)
{
    const double u = 0.5 * omega * tau;
    return tau / (2.0 * std::numbers::pi) * sinc2(u);
}

Estimate window_integral(const std::function<double(double)>& f, double tau, const std::vector<double>& rates,
                         double rel_tol)
{
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidParameter("tau must be positive and finite");
    if (rates.empty()) throw InvalidParameter("window_integral needs at least one rate");
    const double pi = std::numbers::pi;

    // In u = w tau / 2 the weight is (1/pi) sinc^2(u) du on the real line, (2/pi) on u >= 0.
    std::vector<double> u_rates;
    for (double r : rates) {
        if (!(r > 0.0)) throw InvalidParameter("window_integral rates must be positive");
        u_rates.push_back(0.5 * r * tau);
    }
    // Panels of one sin^2 period up to U; beyond U the weight is replaced by its mean 1/2
    // plus the leading oscillatory correction, so U need not grow with tau.
    const long panels = 64;
    const double U = panels * pi;

    auto g = [&](double u) { return f(2.0 * u / tau) * sinc2(u); };
    auto h = [&](double u) { return f(2.0 * u / tau) / (u * u); };

    std::vector<double> cuts;
    // Geometric breakpoints resolve each Lorentzian shoulder and its power-law decay.
    for (double ur : u_rates)
        for (double u = 0.01 * ur; u <= std::max(100.0 * ur, pi); u *= 4.0) cuts.push_back(u);
    std::sort(cuts.begin(), cuts.end());

    Estimate e;
    auto add = [&](const auto& fn, double a, double b, double weight) {
        const Piece piece = adaptive(fn, a, b, 12);
        e.value += weight * piece.value;
        e.abs_error += weight * piece.error;
        e.scale += weight * piece.l1;
    };
    auto cut_it = cuts.begin();
    for (long k = 0; k < panels; ++k) {
        double a = k * pi;
        const double b = (k + 1) * pi;
        for (; cut_it != cuts.end() && *cut_it < b; ++cut_it) {
            if (*cut_it > a) {
                add(g, a, *cut_it, 1.0);
                a = *cut_it;
            }
        }
        add(g, a, b, 1.0);
    }

    // Mean part on [U, inf): finite pieces between breakpoints, then w = w0 tan(theta) to infinity.
    double a = U;
    for (; cut_it != cuts.end(); ++cut_it) {
        if (*cut_it > a) {
            add(h, a, *cut_it, 0.5);
            a = *cut_it;
        }
    }
    const double c = a;
    auto mapped = [&](double theta) {
        if (theta >= 0.5 * pi) return 0.0;
        const double t = std::tan(theta), sec2 = 1.0 + t * t;
        return h(c * t) * c * sec2;
    };
    add(mapped, 0.25 * pi, 0.5 * pi, 0.5);

    // Oscillatory part: -1/2 int_U^inf h cos 2u du = h'(U)/8 at U = K pi, by parts.
    const double du = 1e-3 * U;
    const double dh = (h(U + du) - h(U - du)) / (2.0 * du);
    const double correction = dh / 8.0;
    e.value += correction;
    e.abs_error += std::abs(correction) / (U * U);

    e.value *= 2.0 / pi;
    e.abs_error *= 2.0 / pi;
    e.scale *= 2.0 / pi;
    if (!std::isfinite(e.value) || e.abs_error > rel_tol * std::max(e.scale, 1e-300))
        throw QuadratureNotConverged("windowed integral error " + std::to_string(e.abs_error) + " exceeds tolerance");
    return e;
}

} // namespace tropo::quadrature
