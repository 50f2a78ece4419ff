#include "tropo/covariance.hpp"

#include "tropo/errors.hpp"

#include <cmath>
#include <string>

namespace tropo::covariance {

using model::InjectionMode;

namespace {
double sq(double x) { return x * x; }
} // namespace

QuadratureVariances output_variances(const model::TropoParams& p, const model::SteadyState& s,
                                     const spectra::SpectralSet& sset)
{
    const double kp = p.kappa_p, N = s.n_signal, Np = s.n_pump;
    QuadratureVariances v;
    v.omega = sset.omega;
    v.x_pp = 1 + kp / Np * sset.eps_p_sq;
    v.y_pp = 1 + 4 * kp * Np * sset.phi_p_sq;

    if (p.injection == InjectionMode::Symmetric) {
        const double k = p.kappa;
        v.x_plus_plus = 1 + k / (2 * N) * sset.eps_plus_sq;
        v.x_minus_minus = 1 + k / (2 * N) * sset.eps_minus_sq;
        v.y_plus_plus = 1 + 2 * k * N * sset.phi_plus_sq;
        v.y_minus_minus = 1 + 2 * k * N * sset.phi_minus_sq;
        v.x_p_plus = std::sqrt(kp / (2 * Np)) * std::sqrt(k / (2 * N)) * sset.eps_p_plus;
        v.y_p_plus = std::sqrt(2 * kp * Np) * std::sqrt(2 * k * N) * sset.phi_p_plus;
        return v;
    }

    // Unequal mirror rates mix the intracavity sum and difference fluctuations
    // into each output combination with weights (1 +- sqrt(1-mu))^2.
    const double ki = p.kappa_i();
    const double rt = std::sqrt(1 - p.mu);
    const double wp = sq(1 + rt), wm = sq(1 - rt);
    v.x_plus_plus = 1 + ki / (8 * N) * (sset.eps_plus_sq * wp + sset.eps_minus_sq * wm);
    v.x_minus_minus = 1 + ki / (8 * N) * (sset.eps_minus_sq * wp + sset.eps_plus_sq * wm);
    v.y_plus_plus = 1 + ki * N / 2 * (sset.phi_plus_sq * wp + sset.phi_minus_sq * wm);
    v.y_minus_minus = 1 + ki * N / 2 * (sset.phi_minus_sq * wp + sset.phi_plus_sq * wm);
    v.x_p_plus = std::sqrt(kp / Np) * std::sqrt(ki) * (1 + rt) / (4 * std::sqrt(N)) * sset.eps_p_plus;
    v.y_p_plus = std::sqrt(kp * Np) * std::sqrt(ki * N) * (1 + rt) * sset.phi_p_plus;
    return v;
}

CovarianceMatrix6 covariance6(const QuadratureVariances& v)
{
    // X_+- = (X_i +- X_s)/sqrt2 and signal/idler symmetry give
    // M_ii = M_ss = (M_++ + M_--)/2, M_is = (M_++ - M_--)/2, M_pi = M_ps = M_p+/sqrt2,
    // where M_p+ = sqrt2 * x_p_plus.
    CovarianceMatrix6 c;
    c.omega = v.omega;
    c.plus_minus = v;
    auto fill = [&](int o, double pp, double plus, double minus, double cross) {
        c.m(o, o) = pp;
        c.m(o + 1, o + 1) = c.m(o + 2, o + 2) = (plus + minus) / 2;
        c.m(o + 1, o + 2) = c.m(o + 2, o + 1) = (plus - minus) / 2;
        c.m(o, o + 1) = c.m(o + 1, o) = cross;
        c.m(o, o + 2) = c.m(o + 2, o) = cross;
    };
    c.m.setZero();
    fill(0, v.x_pp, v.x_plus_plus, v.x_minus_minus, v.x_p_plus);
    fill(3, v.y_pp, v.y_plus_plus, v.y_minus_minus, v.y_p_plus);
    for (int i = 0; i < 6; ++i) {
        if (!(c.m(i, i) > 0.0))
            throw NonPositiveDefinite("covariance diagonal entry " + std::to_string(i) + " is not positive");
    }
    return c;
}

QuadratureVariances to_plus_minus(const CovarianceMatrix6& c)
{
    QuadratureVariances v;
    v.omega = c.omega;
    v.x_pp = c.m(0, 0);
    v.x_plus_plus = c.m(1, 1) + c.m(1, 2);
    v.x_minus_minus = c.m(1, 1) - c.m(1, 2);
    v.x_p_plus = (c.m(0, 1) + c.m(0, 2)) / 2;
    v.y_pp = c.m(3, 3);
    v.y_plus_plus = c.m(4, 4) + c.m(4, 5);
    v.y_minus_minus = c.m(4, 4) - c.m(4, 5);
    v.y_p_plus = (c.m(3, 4) + c.m(3, 5)) / 2;
    return v;
}

PurityReport spectral_purity(const CovarianceMatrix6& c)
{
    const Eigen::LLT<Eigen::Matrix<double, 6, 6>> llt(c.m);
    if (llt.info() != Eigen::Success)
        throw NonPositiveDefinite("covariance matrix is not positive definite at omega = " + std::to_string(c.omega));

    const auto v = c.plus_minus ? *c.plus_minus : to_plus_minus(c);
    PurityReport r;
    r.omega = c.omega;
    r.factor_n_minus = v.x_minus_minus * v.y_minus_minus;
    // The (p, +) entry of the rotated matrix is sqrt2 * x_p_plus.
    r.factor_dx = v.x_pp * v.x_plus_plus - 2 * sq(v.x_p_plus);
    r.factor_dy = v.y_pp * v.y_plus_plus - 2 * sq(v.y_p_plus);
    r.det_difference_mode = r.factor_n_minus;

    // Near threshold the matrix is badly conditioned (1e12 is reachable), and a
    // direct determinant then loses cond*eps of relative accuracy. The block
    // factorization is exact for this matrix structure and keeps full precision.
    r.purity_total = 1 / std::sqrt(r.factor_n_minus * r.factor_dx * r.factor_dy);
    const double logdet = 2 * llt.matrixLLT().diagonal().array().log().sum();
    r.purity_direct = std::exp(-logdet / 2);
    const Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(c.m);
    r.condition_number = svd.singularValues()(0) / svd.singularValues()(5);

    Eigen::Matrix4d sub;
    const int idx[4] = {1, 2, 4, 5};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) sub(i, j) = c.m(idx[i], idx[j]);
    r.purity_partial_is = 1 / std::sqrt(sub.determinant());
    return r;
}

SqueezingReport squeezing_entanglement(const model::TropoParams& p, const model::SteadyState&, double omega)
{
    model::validate(p);
    if (p.injection != InjectionMode::Symmetric)
        throw InvalidParameter("squeezing report is defined for symmetric injection only");
    const double k2 = p.kappa * p.kappa, w2 = omega * omega, mu = p.mu, mp = p.mu_p;
    SqueezingReport r;
    r.omega = omega;
    r.x_is_variance = 1 + 0.5 * k2 / (k2 * sq(mp - 1 + mu / 4) + w2) - 0.5 * k2 / (k2 + w2);
    r.y_p_variance = 1 - 2 * k2 * (mp - 1) / (k2 * mp * mp + w2);
    r.duan_x_minus = 1 - k2 * (1 - mu) / (k2 * sq(1 - mu / 2) + w2);
    r.duan_y_plus = 1 - k2 * (1 - mu) / (k2 * sq(mu / 2 + (1 - mu) * mp) + w2);
    r.entangled = r.duan_x_minus < 1 && r.duan_y_plus < 1;
    return r;
}

double near_threshold_excess(double mu_p)
{
    return (sq(mu_p - 1) + 1) / sq(mu_p) * (mu_p + 1) / (mu_p - 1);
}

PurityReport purity_at(const model::TropoParams& p, const model::SteadyState& s, double omega)
{
    return spectral_purity(covariance6(output_variances(p, s, spectra::closed_form(p, s, omega))));
}

} // namespace tropo::covariance
