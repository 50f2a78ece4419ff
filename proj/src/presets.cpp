#include "tropo/presets.hpp"

#include "tropo/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tropo::presets {

std::vector<double> linear_grid(double lo, double hi, int n)
{
    if (n < 2) throw InvalidParameter("linear grid needs at least two points");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    return out;
}

std::vector<double> symmetric_log_grid(double lo, double hi, int per_side)
{
    if (!(lo > 0.0) || !(hi > lo) || per_side < 2) throw InvalidParameter("bad log grid");
    std::vector<double> side(per_side);
    for (int i = 0; i < per_side; ++i) side[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (per_side - 1));
    std::vector<double> out;
    for (auto it = side.rbegin(); it != side.rend(); ++it) out.push_back(-*it);
    out.push_back(0.0);
    out.insert(out.end(), side.begin(), side.end());
    return out;
}

FigurePreset figure(std::string_view id)
{
    FigurePreset f;
    f.id = std::string(id);
    f.base.kappa = 1.0;
    f.base.kappa_p = 100.0;
    f.base.g = 0.01;
    f.base.injection = model::InjectionMode::Symmetric;
    if (id == "1a" || id == "2") {
        f.description = id == "1a" ? "symmetric injection, mu = 0.1, three excesses above threshold"
                                   : "partial purity of signal and idler, parameters of 1a";
        f.mu_p_values = {1.1, 2.0, 4.2};
        f.mu_values = {0.1};
        f.omega_over_kappa = linear_grid(-10.0, 10.0, 401);
    } else if (id == "1b") {
        f.description = "symmetric injection, mu = 0.35";
        f.mu_p_values = {1.1, 2.0, 4.2};
        f.mu_values = {0.35};
        f.omega_over_kappa = linear_grid(-10.0, 10.0, 401);
    } else if (id == "3a") {
        f.description = "asymmetric injection, mu = 0.1, three excesses above threshold";
        f.base.injection = model::InjectionMode::Asymmetric;
        f.mu_p_values = {1.1, 2.0, 6.0};
        f.mu_values = {0.1};
        f.omega_over_kappa = symmetric_log_grid(1e-3, 1e3, 121);
    } else if (id == "3b") {
        f.description = "asymmetric injection, mu_p = 6, decreasing injection";
        f.base.injection = model::InjectionMode::Asymmetric;
        f.mu_p_values = {6.0};
        f.mu_values = {0.35, 0.1, 0.01};
        f.omega_over_kappa = symmetric_log_grid(1e-3, 1e3, 121);
    } else {
        throw InvalidParameter("unknown figure '" + std::string(id) + "'; expected 1a, 1b, 2, 3a or 3b");
    }
    return f;
}

std::vector<std::string> figure_ids() { return {"1a", "1b", "2", "3a", "3b"}; }

} // namespace tropo::presets
