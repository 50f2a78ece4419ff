#pragma once

#include "tropo/model.hpp"
#include "tropo/spectra.hpp"

#include <Eigen/Dense>

#include <vector>

namespace tropo::glauber {

/// Stationary moments of the (eps_p, eps_+) Gaussian and the distributional eps_- factor.
struct AmplitudeBlock {
    double d_plus = 0.0;
    double d_p = 0.0;
    double a = 0.0;
    double var_eps_plus = 0.0;
    double var_eps_p = 0.0;
    double cov_eps = 0.0;
    double var_eps_minus = 0.0; // negative
};

/// Exact solution of the stationary variance equations (symmetric injection).
AmplitudeBlock amplitude_block(const model::TropoParams& p, const model::SteadyState& s);

/// Fast-pump, weak-injection displays: D_+ = N/s, D_p = N_p (mu_p-1) mu kappa/(s kappa_p),
/// a = -kappa/kappa_p, with s = mu/2 + mu_p - 1 and <eps_-^2> = -N.
AmplitudeBlock amplitude_limit(const model::TropoParams& p, const model::SteadyState& s);

struct FanoIntracavity {
    double f_is = 1.0;
    double f_p = 1.0;
};

FanoIntracavity fano_intracavity(const model::TropoParams& p);

/// Even-order moment table M_mn = <x^m y^n> for m + n <= max_order.
/// One-dimensional blocks store M_m0 only.
class MomentTable {
public:
    MomentTable() = default;
    MomentTable(int dim, int max_order);

    int dim() const { return dim_; }
    int max_order() const { return max_order_; }
    double operator()(int m, int n = 0) const;
    double& at(int m, int n = 0);

private:
    int dim_ = 0;
    int max_order_ = 0;
    std::vector<double> data_;
};

struct MomentSolution {
    MomentTable table;
    double max_residual = 0.0; // worst relative residual of the moment equations
};

/// Stationary moments of a linear block from its Fokker-Planck moment hierarchy,
/// solved order by order. Works for indefinite diffusion (formal moments).
MomentSolution stationary_moments(const spectra::LinearNoiseSystem& block, int max_order);

struct PhaseBlock {
    double var_phi_p = 0.0;
    double var_phi_plus = 0.0;
    double cov_phi = 0.0;
    double var_phi_minus = 0.0;
    MomentTable moment_table;     // (phi_p, phi_+) block
    double max_recurrence_residual = 0.0;
};

PhaseBlock phase_moments(const model::TropoParams& p, const model::SteadyState& s, int max_order = 8);

/// Fast-pump displays for the second-order phase moments.
PhaseBlock phase_limit(const model::TropoParams& p, const model::SteadyState& s);

/// Second moments of the output P-function; amplitude fluctuations scale with the
/// photon number (T^2 for variances), phases are invariant.
struct OutputMoments {
    double n_signal_out = 0.0;
    double n_pump_out = 0.0;
    double var_eps_plus = 0.0;
    double var_eps_p = 0.0;
    double cov_eps = 0.0;
    double var_eps_minus = 0.0;
    double var_phi_p = 0.0;
    double var_phi_plus = 0.0;
    double cov_phi = 0.0;
    double var_phi_minus = 0.0;
};

OutputMoments output_pfunction_rescale(const model::TropoParams& p, const model::SteadyState& s);

struct StationaryPurity {
    double pi1 = 1.0, pi2 = 1.0, pi3 = 1.0, pi4 = 1.0;
    double pi_st = 1.0;
    double nu = 0.0;
    double pi_intracavity = 1.0;         // phase-difference factor with T = 1, equals sqrt(mu)
    double pi_intracavity_product = 1.0; // all four factors with T = T_p = 1
    std::vector<model::RegimeWarning> warnings;
};

StationaryPurity stationary_purity(const model::TropoParams& p, const model::SteadyState& s);

/// Overlap integral of two independent copies of a zero-mean (possibly formal)
/// Gaussian with covariance sigma against exp(-d^T C^-1 d / 2): det(I + 2 sigma C^-1)^-1/2.
/// Throws DivergentPurityIntegral when a negative-variance direction is not dominated
/// by the kernel (formal moment series diverges).
double gaussian_overlap(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& kernel_variances);

} // namespace tropo::glauber
