#pragma once

#include "tropo/model.hpp"

#include <cstddef>
#include <vector>

namespace tropo::photon_stats {

/// Parameters of the two-factor Gaussian counting law in n_+ = n_i + n_s and n_- = n_i - n_s.
struct JointGaussian {
    double mean_plus = 0.0;
    double var_plus = 0.0;
    double var_minus = 0.0;
};

struct CountingStats {
    double tau = 0.0;
    double n_out = 0.0;   // kappa tau N
    double d_plus = 0.0;
    double d_minus = 0.0; // clamped at 0
    double f_out = 1.0;
    double f_in = 1.0;
    double lambda = 2.0;
    double quad_error = 0.0; // largest absolute error estimate of the window integrals
};

struct IntracavityJoint {
    JointGaussian gaussian; // mean 2N, variances lambda N and N
    double lambda = 2.0;
    double f_in = 0.75;
};

struct JointCell {
    long n_i = 0;
    long n_s = 0;
    double p = 0.0;
};

/// Cell-integrated probabilities on the integer lattice within a window around the mean.
/// Over the full lattice the cells sum to one exactly; window_mass is what the window keeps.
struct JointDistribution {
    JointGaussian gaussian;
    std::vector<JointCell> cells;
    double window_mass = 0.0;
};

/// lambda = 2 + 1/(mu/4 + mu_p - 1), F_in = (1 + lambda)/4.
IntracavityJoint intracavity_joint(const model::TropoParams& p, const model::SteadyState& s);

/// Single-mode output Fano factor over a counting window tau.
double fano_out(const model::TropoParams& p, const model::SteadyState& s, double tau);

/// d_+, d_- and F_out over a counting window tau; the joint law is {2 N_out, d_+, d_-}.
CountingStats joint_out(const model::TropoParams& p, const model::SteadyState& s, double tau);

JointGaussian output_gaussian(const CountingStats& c);

/// Probabilities over mean +- n_sigma standard deviations; throws InvalidParameter past max_cells.
JointDistribution joint_grid(const JointGaussian& g, double n_sigma = 6.0, std::size_t max_cells = 4'000'000);

/// Long-window limits: F_out -> 1/2 + 1/(2 s^2), d_+/(2 N_out) -> 1 + 1/s^2, with s = mu/2 + mu_p - 1.
double fano_out_long_limit(const model::TropoParams& p);

} // namespace tropo::photon_stats
