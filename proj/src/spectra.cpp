#include "tropo/spectra.hpp"

#include "tropo/errors.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace tropo::spectra {

using model::InjectionMode;

std::array<double, SpectralSet::field_count> SpectralSet::values() const
{
    return {eps_plus_sq, eps_p_sq, eps_p_plus, eps_minus_sq,
            phi_p_sq, phi_plus_sq, phi_p_plus, phi_minus_sq};
}

const char* field_name(std::size_t index)
{
    static constexpr const char* names[] = {
        "eps_plus_sq", "eps_p_sq", "eps_p_plus", "eps_minus_sq",
        "phi_p_sq", "phi_plus_sq", "phi_p_plus", "phi_minus_sq"};
    return index < SpectralSet::field_count ? names[index] : "?";
}

namespace {

double sq(double x) { return x * x; }

SpectralSet symmetric_closed_form(const model::TropoParams& p, const model::SteadyState& s, double w)
{
    const double k = p.kappa, kp = p.kappa_p, mu = p.mu, mp = p.mu_p;
    const double N = s.n_signal, Np = s.n_pump;
    const double w2 = w * w;
    const double lam_e = sq(2 * w2 - kp * k * (mu / 2 + (mp - 1) * (1 - mu))) + w2 * sq(kp + k * mu);
    const double lam_f = sq(2 * w2 - k * kp * (mu / 2 + mp * (1 - mu))) + w2 * sq(kp + 2 * k * (1 - mu / 2));

    SpectralSet r;
    r.omega = w;
    r.eps_plus_sq = 2 * N * k * (kp * kp + 4 * w2) * (1 - mu) / lam_e;
    r.eps_p_sq = 2 * Np * k * k * kp * sq(1 - mu) * (mp - 1) / lam_e;
    // The cross density carries (1-mu)^2; a single power does not match the resolvent.
    r.eps_p_plus = -2 * N * k * k * kp * sq(1 - mu) / lam_e;
    r.eps_minus_sq = -2 * N * k * (1 - mu) / (sq(k * (1 - mu / 2)) + w2);
    r.phi_p_sq = -k * k * kp * (mp - 1) * sq(1 - mu) / (2 * Np * lam_f);
    r.phi_plus_sq = -k * (kp * kp + 4 * w2) * (1 - mu) / (2 * N * lam_f);
    r.phi_p_plus = k * kp * kp * (mp - 1) * (1 - mu) / (2 * N * lam_f);
    r.phi_minus_sq = k * (1 - mu) / (2 * N * (sq(k * mu / 2) + w2));
    return r;
}

SpectralSet asymmetric_closed_form(const model::TropoParams& p, const model::SteadyState& s, double w)
{
    const double ki = p.kappa_i(), ks = p.kappa_s(), kp = p.kappa_p, mu = p.mu, mp = p.mu_p;
    const double rt = std::sqrt(1 - mu);
    const double N = s.n_signal, Np = s.n_pump;
    const double w2 = w * w;
    const double lam_e = sq(2 * w2 - kp * ki * (mu / 4 + (mp - 1) * rt)) + w2 * sq(kp + ki * mu / 2);
    const double lam_f = sq(2 * w2 - ki * kp * (1 - 3 * mu / 4 + (mp - 1) * rt))
                         + w2 * sq(kp + 2 * ki * (1 - 3 * mu / 4));

    SpectralSet r;
    r.omega = w;
    r.eps_plus_sq = 2 * N * ks * (kp * kp + 4 * w2) / lam_e;
    // Pump amplitude and pump phase carry kappa_s^2 and kappa_i*kappa_s respectively.
    r.eps_p_sq = 2 * Np * (mp - 1) * ks * ks * kp / lam_e;
    r.eps_p_plus = -2 * N * ks * ks * kp / lam_e;
    r.eps_minus_sq = -2 * N * ks / (sq(ki * (1 - 3 * mu / 4)) + w2);
    r.phi_p_sq = -(mp - 1) * ki * ks * kp / (2 * Np * lam_f);
    r.phi_plus_sq = -ks * (kp * kp + 4 * w2) / (2 * N * lam_f);
    r.phi_p_plus = ki * kp * kp * (mp - 1) * rt / (2 * N * lam_f);
    r.phi_minus_sq = ks / (2 * N * (sq(ki * mu / 4) + w2));
    return r;
}

double& field_ref(SpectralSet& s, std::size_t i)
{
    switch (i) {
    case 0: return s.eps_plus_sq;
    case 1: return s.eps_p_sq;
    case 2: return s.eps_p_plus;
    case 3: return s.eps_minus_sq;
    case 4: return s.phi_p_sq;
    case 5: return s.phi_plus_sq;
    case 6: return s.phi_p_plus;
    case 7: return s.phi_minus_sq;
    }
    throw InvalidParameter("spectral field index out of range: " + std::to_string(i));
}

} // namespace

SpectralSet closed_form(const model::TropoParams& p, const model::SteadyState& s, double omega)
{
    model::validate(p);
    return p.injection == InjectionMode::Symmetric ? symmetric_closed_form(p, s, omega)
                                                   : asymmetric_closed_form(p, s, omega);
}

std::array<LinearNoiseSystem, 4> build_blocks(const model::TropoParams& p, const model::SteadyState& s)
{
    model::validate(p);
    const double kp = p.kappa_p, mu = p.mu, mp = p.mu_p;
    const double N = s.n_signal;

    // Coefficients of the linearized equations. The symmetric and asymmetric
    // cases differ only in how the injection enters the sum and difference modes.
    double ks, pump_to_sum, sum_to_pump_phase, sum_damp_e, diff_damp_e, sum_damp_f, diff_damp_f;
    if (p.injection == InjectionMode::Symmetric) {
        const double k = p.kappa;
        ks = k * (1 - mu);
        pump_to_sum = kp * (mp - 1);
        sum_to_pump_phase = kp * (mp - 1) / 2;
        sum_damp_e = k * mu / 2;
        diff_damp_e = k * (1 - mu / 2);
        sum_damp_f = k * (1 - mu / 2);
        diff_damp_f = k * mu / 2;
    } else {
        const double ki = p.kappa_i(), rt = std::sqrt(1 - mu);
        ks = p.kappa_s();
        pump_to_sum = kp * (mp - 1) / rt;
        sum_to_pump_phase = kp * (mp - 1) / (2 * rt);
        sum_damp_e = ki * mu / 4;
        diff_damp_e = ki * (1 - 3 * mu / 4);
        sum_damp_f = ki * (1 - 3 * mu / 4);
        diff_damp_f = ki * mu / 4;
    }

    std::array<LinearNoiseSystem, 4> b;
    b[0].id = BlockId::AmplitudePumpSum;
    b[0].drift.resize(2, 2);
    b[0].drift << -kp / 2, -ks / 2,
                  pump_to_sum, -sum_damp_e;
    b[0].diffusion = Eigen::MatrixXd::Zero(2, 2);
    b[0].diffusion(1, 1) = 2 * ks * N;

    b[1].id = BlockId::AmplitudeDiff;
    b[1].drift = Eigen::MatrixXd::Constant(1, 1, -diff_damp_e);
    b[1].diffusion = Eigen::MatrixXd::Constant(1, 1, -2 * ks * N);

    b[2].id = BlockId::PhasePumpSum;
    b[2].drift.resize(2, 2);
    b[2].drift << -kp / 2, -sum_to_pump_phase,
                  ks, -sum_damp_f;
    b[2].diffusion = Eigen::MatrixXd::Zero(2, 2);
    b[2].diffusion(1, 1) = -ks / (2 * N);

    b[3].id = BlockId::PhaseDiff;
    b[3].drift = Eigen::MatrixXd::Constant(1, 1, -diff_damp_f);
    b[3].diffusion = Eigen::MatrixXd::Constant(1, 1, ks / (2 * N));

    for (const auto& blk : b) check_stable(blk);
    return b;
}

void check_stable(const LinearNoiseSystem& block)
{
    const Eigen::VectorXcd ev = block.drift.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (!(ev[i].real() < 0.0))
            throw UnstableSystem("drift eigenvalue with non-negative real part: " +
                                 std::to_string(ev[i].real()));
    }
}

Eigen::MatrixXd oracle_spectrum(const LinearNoiseSystem& block, double omega)
{
    check_stable(block);
    const Eigen::Index n = block.drift.rows();
    const std::complex<double> iw(0.0, omega);
    const Eigen::MatrixXcd m = iw * Eigen::MatrixXcd::Identity(n, n) - block.drift.cast<std::complex<double>>();

    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || sv(0) / smin > 1e12)
        throw SingularAtFrequency("resolvent is numerically singular at omega = " + std::to_string(omega));

    const Eigen::MatrixXcd g = m.inverse();
    const Eigen::MatrixXcd smat = g * block.diffusion.cast<std::complex<double>>() * g.adjoint();

    // Off-diagonal entries have an odd imaginary part that cancels in the
    // symmetrized correlator; the diagonal must be real.
    const double scale = smat.norm();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(smat(i, i).imag()) > 1e-12 * scale)
            throw SingularAtFrequency("oracle diagonal has a non-negligible imaginary part");
    }
    return smat.real();
}

SpectralSet oracle_set(const model::TropoParams& p, const model::SteadyState& s, double omega)
{
    const auto blocks = build_blocks(p, s);
    const Eigen::MatrixXd e = oracle_spectrum(blocks[0], omega);
    const Eigen::MatrixXd em = oracle_spectrum(blocks[1], omega);
    const Eigen::MatrixXd f = oracle_spectrum(blocks[2], omega);
    const Eigen::MatrixXd fm = oracle_spectrum(blocks[3], omega);

    SpectralSet r;
    r.omega = omega;
    r.eps_p_sq = e(0, 0);
    r.eps_plus_sq = e(1, 1);
    r.eps_p_plus = e(0, 1);
    r.eps_minus_sq = em(0, 0);
    r.phi_p_sq = f(0, 0);
    r.phi_plus_sq = f(1, 1);
    r.phi_p_plus = f(0, 1);
    r.phi_minus_sq = fm(0, 0);
    return r;
}

namespace testing {

SpectralSet closed_form_perturbed(const model::TropoParams& p, const model::SteadyState& s,
                                  double omega, std::size_t field, double rel)
{
    SpectralSet r = closed_form(p, s, omega);
    field_ref(r, field) *= 1.0 + rel;
    return r;
}

} // namespace testing

} // namespace tropo::spectra
