#include "tropo/photon_stats.hpp"

#include "tropo/errors.hpp"
#include "tropo/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace tropo::photon_stats {

namespace {

void require_symmetric(const model::TropoParams& p, const char* what)
{
    if (p.injection != model::InjectionMode::Symmetric)
        throw InvalidParameter(std::string(what) + " is defined for symmetric injection only");
}

void require_tau(double tau)
{
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidParameter("tau must be positive and finite");
}

// Relaxation rate of the amplitude sum in units of kappa.
double sum_rate(const model::TropoParams& p) { return p.mu / 2 + p.mu_p - 1; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Probability of [a, b) under N(mean, var); var = 0 is a point mass.
double interval_mass(double a, double b, double mean, double var)
{
    if (var == 0.0) return (mean >= a && mean < b) ? 1.0 : 0.0;
    const double sd = std::sqrt(var);
    const double za = (a - mean) / sd, zb = (b - mean) / sd;
    // Use the tail with less cancellation.
    if (za > 0.0) return normal_cdf(-za) - normal_cdf(-zb);
    return normal_cdf(zb) - normal_cdf(za);
}

} // namespace

IntracavityJoint intracavity_joint(const model::TropoParams& p, const model::SteadyState& s)
{
    require_symmetric(p, "intracavity_joint");
    IntracavityJoint j;
    j.lambda = 2.0 + 1.0 / (p.mu / 4 + p.mu_p - 1);
    j.f_in = (1.0 + j.lambda) / 4.0;
    j.gaussian = {2.0 * s.n_signal, j.lambda * s.n_signal, s.n_signal};
    return j;
}

double fano_out(const model::TropoParams& p, const model::SteadyState& s, double tau)
{
    return joint_out(p, s, tau).f_out;
}

CountingStats joint_out(const model::TropoParams& p, const model::SteadyState& s, double tau)
{
    require_symmetric(p, "joint_out");
    require_tau(tau);
    const double k = p.kappa, sr = sum_rate(p);
    const std::vector<double> rates{k, sr * k};

    auto k_plus = [=](double w) { return k * k / (sr * sr * k * k + w * w); };
    auto k_minus = [=](double w) { return -k * k / (k * k + w * w); };
    // 1 + k_minus written without cancellation.
    auto one_plus_minus = [=](double w) { return w * w / (k * k + w * w); };

    const auto single = quadrature::window_integral([&](double w) { return 0.5 * (k_plus(w) + k_minus(w)); }, tau, rates);
    const auto plus = quadrature::window_integral(k_plus, tau, rates);
    const auto minus = quadrature::window_integral(one_plus_minus, tau, rates);

    CountingStats c;
    c.tau = tau;
    c.n_out = k * tau * s.n_signal;
    c.f_out = 1.0 + single.value;
    c.d_plus = 2.0 * c.n_out * (1.0 + plus.value);
    c.d_minus = 2.0 * c.n_out * std::max(0.0, minus.value);
    c.quad_error = std::max({single.abs_error, plus.abs_error, minus.abs_error});
    const auto in = intracavity_joint(p, s);
    c.lambda = in.lambda;
    c.f_in = in.f_in;
    return c;
}

JointGaussian output_gaussian(const CountingStats& c) { return {2.0 * c.n_out, c.d_plus, c.d_minus}; }

JointDistribution joint_grid(const JointGaussian& g, double n_sigma, std::size_t max_cells)
{
    if (!(g.var_plus > 0.0) || g.var_minus < 0.0 || !(n_sigma > 0.0))
        throw InvalidParameter("joint_grid needs var_plus > 0, var_minus >= 0 and a positive window");
    const double sp = std::sqrt(g.var_plus), sm = std::sqrt(g.var_minus);
    const long np_lo = std::max(0L, static_cast<long>(std::floor(g.mean_plus - n_sigma * sp)));
    const long np_hi = static_cast<long>(std::ceil(g.mean_plus + n_sigma * sp));
    const long nm_hi = static_cast<long>(std::ceil(n_sigma * sm));
    const double count = (static_cast<double>(np_hi - np_lo) / 2.0 + 1.0) * (2.0 * nm_hi + 1.0);
    if (count > static_cast<double>(max_cells))
        throw InvalidParameter("joint grid would need " + std::to_string(static_cast<long long>(count)) + " cells");

    JointDistribution d;
    d.gaussian = g;
    // A lattice point owns n_+ in [n_+ - 1, n_+ + 1) and n_- in [n_- - 1/2, n_- + 1/2):
    // area 2, matching the Jacobian of (n_i, n_s) -> (n_+, n_-).
    for (long nm = -nm_hi; nm <= nm_hi; ++nm) {
        const double pm = interval_mass(nm - 0.5, nm + 0.5, 0.0, g.var_minus);
        if (pm == 0.0) continue;
        long first = np_lo;
        if (((first - nm) % 2 + 2) % 2 != 0) ++first;
        for (long npl = first; npl <= np_hi; npl += 2) {
            const long ni = (npl + nm) / 2, ns = (npl - nm) / 2;
            if (ni < 0 || ns < 0) continue;
            const double prob = pm * interval_mass(npl - 1.0, npl + 1.0, g.mean_plus, g.var_plus);
            d.cells.push_back({ni, ns, prob});
            d.window_mass += prob;
        }
    }
    return d;
}

double fano_out_long_limit(const model::TropoParams& p)
{
    const double sr = sum_rate(p);
    return 0.5 + 0.5 / (sr * sr);
}

} // namespace tropo::photon_stats
