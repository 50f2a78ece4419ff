#pragma once

#include "tropo/model.hpp"
#include "tropo/verify.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace tropo_test {

inline tropo::model::TropoParams base_params(tropo::model::InjectionMode mode =
                                                 tropo::model::InjectionMode::Symmetric)
{
    tropo::model::TropoParams p;
    p.kappa = 1.0;
    p.kappa_p = 100.0;
    p.mu_p = 2.0;
    p.mu = 0.1;
    p.g = 0.01;
    p.injection = mode;
    return p;
}

inline tropo::model::TropoParams random_params(std::mt19937_64& rng, tropo::model::InjectionMode mode,
                                               double mu_lo = 1e-3, double mu_hi = 0.9)
{
    return tropo::verify::random_params(rng, mode, mu_lo, mu_hi);
}

inline std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return out;
}

inline double rel_err(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

} // namespace tropo_test
