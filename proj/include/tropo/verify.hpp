#pragma once

// Independent reference computations. Nothing here calls the closed forms it is
// meant to check: each oracle reaches the same quantity by a different route.

#include "tropo/glauber.hpp"
#include "tropo/model.hpp"

#include <Eigen/Dense>

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace tropo::verify {

/// Nodes and weights for integral of f(t) exp(-t^2) (Golub-Welsch).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_hermite(int n);

/// E[exp(-d^T C^-1 d / 2)] with d = x - x' for x, x' i.i.d. N(0, sigma), by a tensor
/// Gauss-Hermite rule over both copies (2*dim dimensional). sigma must be positive definite.
double purity_overlap_quadrature(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& kernel_variances,
                                 int nodes_per_dim = 24);

/// Same overlap for a formal distribution known only through its moments:
/// sum_k (-1/2)^k / k! E[(d^T C^-1 d)^k], with E over two independent copies.
/// Requires moments up to order 2*terms.
double purity_overlap_moment_series(const glauber::MomentTable& moments, const Eigen::VectorXd& kernel_variances,
                                    int terms);

/// (<eps_p^2>, <eps_p eps_+>, <eps_+^2>) from a generic 3x3 solve of the Lyapunov equation.
Eigen::Vector3d amplitude_lyapunov(const model::TropoParams& p, const model::SteadyState& s);

/// Single-pole window integral: int kappa^2/(gamma^2 + w^2) delta_tau(w) dw in closed form.
double lorentzian_window(double kappa, double gamma, double tau);

/// Trapezoid rule in u = w tau / 2 on a uniform grid, integrating f(w) delta_tau(w) over the real line.
/// f must be even; the tail beyond the grid is added assuming f ~ c/w^2.
double window_trapezoid(const std::function<double(double)>& f, double tau, double u_max, long n_steps);

/// Log-uniform random valid parameters.
model::TropoParams random_params(std::mt19937_64& rng, model::InjectionMode mode, double mu_lo = 1e-3,
                                 double mu_hi = 0.9);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs acceptance criteria 1 to 10. Each entry is one criterion.
std::vector<CriterionResult> run_acceptance();

} // namespace tropo::verify
