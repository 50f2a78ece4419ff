#pragma once

#include <string>
#include <vector>

namespace tropo::model {

enum class InjectionMode { Symmetric, Asymmetric };

struct Transmission {
    double signal = 1.0; // T, shared by signal and idler
    double pump = 1.0;   // T_p
};

/// Rates are in 1/time, everything else is dimensionless.
/// In asymmetric mode `kappa` is the idler rate and the signal rate is kappa*(1-mu).
struct TropoParams {
    double kappa = 1.0;
    double kappa_p = 100.0;
    double mu_p = 2.0;
    double mu = 0.1;
    double g = 0.01;
    InjectionMode injection = InjectionMode::Symmetric;
    Transmission transmission{};

    double kappa_i() const { return kappa; }
    double kappa_s() const;
};

enum class RegimeWarning { MuLarge, PumpDampingNotDominant };

const char* to_string(RegimeWarning w);
const char* to_string(InjectionMode m);

/// Throws InvalidParameter on hard violations; regime issues come back as warnings.
std::vector<RegimeWarning> validate(const TropoParams& p);

struct SteadyState {
    double n_signal = 0.0;
    double n_pump = 0.0;
    double n_threshold = 0.0;
    double n_injected = 0.0;
    double n_pump_in = 0.0;
    double max_residual = 0.0; // largest relative residual of the defining equalities
};

SteadyState steady_state(const TropoParams& p);

/// Relative residuals of the three classical balance equations.
std::vector<double> steady_state_residuals(const TropoParams& p, const SteadyState& s);

} // namespace tropo::model
