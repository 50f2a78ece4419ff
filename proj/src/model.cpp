#include "tropo/model.hpp"

#include "tropo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tropo::model {

double TropoParams::kappa_s() const
{
    return injection == InjectionMode::Asymmetric ? kappa * (1.0 - mu) : kappa;
}

const char* to_string(RegimeWarning w)
{
    switch (w) {
    case RegimeWarning::MuLarge: return "RegimeMuLarge";
    case RegimeWarning::PumpDampingNotDominant: return "RegimePumpDampingNotDominant";
    }
    return "Unknown";
}

const char* to_string(InjectionMode m)
{
    return m == InjectionMode::Symmetric ? "symmetric" : "asymmetric";
}

namespace {

void require(bool ok, const char* what)
{
    if (!ok) throw InvalidParameter(what);
}

double rel(double lhs, double rhs)
{
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

} // namespace

std::vector<RegimeWarning> validate(const TropoParams& p)
{
    const auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
    require(finite_pos(p.kappa), "kappa must be finite and > 0");
    require(finite_pos(p.kappa_p), "kappa_p must be finite and > 0");
    require(finite_pos(p.g), "g must be finite and > 0");
    require(std::isfinite(p.mu_p) && p.mu_p > 1.0, "mu_p must be finite and > 1 (above threshold)");
    require(std::isfinite(p.mu) && p.mu > 0.0 && p.mu < 1.0, "mu must lie in (0, 1)");
    require(finite_pos(p.transmission.signal) && p.transmission.signal <= 1.0,
            "transmission T must lie in (0, 1]");
    require(finite_pos(p.transmission.pump) && p.transmission.pump <= 1.0,
            "transmission T_p must lie in (0, 1]");

    std::vector<RegimeWarning> out;
    if (p.mu > 0.35) out.push_back(RegimeWarning::MuLarge);
    if (p.kappa * std::max(1.0, p.mu_p - 1.0) > p.kappa_p / 10.0)
        out.push_back(RegimeWarning::PumpDampingNotDominant);
    return out;
}

std::vector<double> steady_state_residuals(const TropoParams& p, const SteadyState& s)
{
    // Both injection modes share the effective signal loss rate kappa*(1-mu):
    // symmetric through the injection term, asymmetric through kappa_s.
    const double k = p.kappa * (1.0 - p.mu);
    return {
        rel(2.0 * p.g * std::sqrt(s.n_pump), k),
        rel(2.0 * p.g * s.n_signal / std::sqrt(s.n_pump), p.kappa_p * (p.mu_p - 1.0)),
        rel(k * s.n_signal, p.kappa_p * (p.mu_p - 1.0) * s.n_pump),
    };
}

SteadyState steady_state(const TropoParams& p)
{
    validate(p);
    SteadyState s;
    const double k = p.kappa * (1.0 - p.mu);
    // Threshold pump occupation, kappa^2 (1-mu) / (4 g^2) in both modes.
    s.n_threshold = p.kappa * k / (4.0 * p.g * p.g);
    s.n_pump = std::pow(k / (2.0 * p.g), 2);
    s.n_signal = p.kappa_p * (p.mu_p - 1.0) * s.n_pump / k;
    s.n_injected = p.mu * p.mu * s.n_signal;
    s.n_pump_in = p.mu_p * p.mu_p * s.n_threshold;

    const auto r = steady_state_residuals(p, s);
    s.max_residual = *std::max_element(r.begin(), r.end());
    if (!(s.max_residual < 1e-12))
        throw std::logic_error("steady state failed its own residual check");
    return s;
}

} // namespace tropo::model
