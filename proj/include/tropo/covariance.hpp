#pragma once

#include "tropo/model.hpp"
#include "tropo/spectra.hpp"

#include <Eigen/Dense>

#include <optional>

namespace tropo::covariance {

/// Output quadrature noise, shot noise = 1. Pump entries are 4<dX_p^2>,
/// sum/difference entries 2<dX_+-^2>, cross entries 2<dX_p dX_+>.
struct QuadratureVariances {
    double omega = 0.0;
    double x_pp = 1.0, x_plus_plus = 1.0, x_minus_minus = 1.0, x_p_plus = 0.0;
    double y_pp = 1.0, y_plus_plus = 1.0, y_minus_minus = 1.0, y_p_plus = 0.0;
};

QuadratureVariances output_variances(const model::TropoParams& p, const model::SteadyState& s,
                                     const spectra::SpectralSet& sset);

/// Ordered (X_p, X_i, X_s, Y_p, Y_i, Y_s); vacuum is the identity.
struct CovarianceMatrix6 {
    double omega = 0.0;
    Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Identity();
    // The (p, +, -) variances the matrix was built from. Reading them back out
    // of m loses the small difference-mode variance to cancellation when the
    // sum mode is very noisy, so the factorized purity uses these when present.
    std::optional<QuadratureVariances> plus_minus;
};

CovarianceMatrix6 covariance6(const QuadratureVariances& v);

/// Inverse of covariance6: read the (p, +, -) basis back from the matrix.
QuadratureVariances to_plus_minus(const CovarianceMatrix6& c);

struct PurityReport {
    double omega = 0.0;
    double purity_total = 1.0;
    double purity_partial_is = 1.0;
    double factor_n_minus = 1.0;
    double factor_dx = 1.0;
    double factor_dy = 1.0;
    double det_difference_mode = 1.0; // det of the (X_-, Y_-) block
    double purity_direct = 1.0;       // 1/sqrt(det) of the 6x6 matrix as stored
    double condition_number = 1.0;    // 2-norm condition number of the 6x6 matrix
};

PurityReport spectral_purity(const CovarianceMatrix6& c);

/// Closed-form spectra through to the purity report at one frequency.
PurityReport purity_at(const model::TropoParams& p, const model::SteadyState& s, double omega);

struct SqueezingReport {
    double omega = 0.0;
    double x_is_variance = 1.0;  // 4<dX_i^2> = 4<dX_s^2>
    double y_p_variance = 1.0;   // 4<dY_p^2>
    double duan_x_minus = 1.0;   // 2<dX_-^2>
    double duan_y_plus = 1.0;    // 2<dY_+^2>
    bool entangled = false;      // both Duan entries below one
};

/// Fast-pump forms for the symmetric case; throws InvalidParameter otherwise.
SqueezingReport squeezing_entanglement(const model::TropoParams& p, const model::SteadyState& s, double omega);

/// Zero-frequency excess noise N_+ = N_p expected just above threshold when mu_p - 1 >> mu.
double near_threshold_excess(double mu_p);

} // namespace tropo::covariance
