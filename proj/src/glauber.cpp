#include "tropo/glauber.hpp"

#include "tropo/errors.hpp"

#include <array>
#include <cmath>
#include <string>

namespace tropo::glauber {

using model::InjectionMode;

namespace {

void require_symmetric(const model::TropoParams& p, const char* what)
{
    model::validate(p);
    if (p.injection != InjectionMode::Symmetric)
        throw InvalidParameter(std::string(what) + " is derived for symmetric injection only");
}

double sq(double x) { return x * x; }

} // namespace

AmplitudeBlock amplitude_block(const model::TropoParams& p, const model::SteadyState& s)
{
    require_symmetric(p, "amplitude_block");
    const double k = p.kappa, kp = p.kappa_p, mu = p.mu, N = s.n_signal;
    const double se = mu / 2 + (p.mu_p - 1) * (1 - mu);
    const double damp = kp + k * mu;

    AmplitudeBlock b;
    b.var_eps_plus = N * (1 - mu) * (kp + 2 * k * se) / (se * damp);
    b.cov_eps = -N * k * sq(1 - mu) / (damp * se);
    b.var_eps_p = N * k * k * std::pow(1 - mu, 3) / (kp * damp * se);
    b.d_plus = b.var_eps_plus;
    b.a = b.cov_eps / b.var_eps_plus;
    b.d_p = b.var_eps_p - b.cov_eps * b.a;
    b.var_eps_minus = -N * (1 - mu) / (1 - mu / 2);
    return b;
}

AmplitudeBlock amplitude_limit(const model::TropoParams& p, const model::SteadyState& s)
{
    require_symmetric(p, "amplitude_limit");
    const double k = p.kappa, kp = p.kappa_p, mu = p.mu, mp = p.mu_p;
    const double N = s.n_signal, Np = s.n_pump;
    const double sl = mu / 2 + mp - 1;
    AmplitudeBlock b;
    b.var_eps_plus = N / sl;
    b.var_eps_p = Np * (mp - 1) / sl * k / kp;
    b.cov_eps = -Np * (mp - 1) / sl;
    b.d_plus = N / sl;
    b.d_p = Np * (mp - 1) / sl * mu * k / kp;
    b.a = -k / kp;
    b.var_eps_minus = -N;
    return b;
}

FanoIntracavity fano_intracavity(const model::TropoParams& p)
{
    require_symmetric(p, "fano_intracavity");
    FanoIntracavity f;
    f.f_is = 0.25 * (2 - p.mu_p) / (p.mu / 2 + p.mu_p - 1) + 1;
    f.f_p = 1.0;
    return f;
}

MomentTable::MomentTable(int dim, int max_order)
    : dim_(dim), max_order_(max_order),
      data_(static_cast<std::size_t>((max_order + 1) * (dim == 1 ? 1 : max_order + 1)), 0.0)
{
    if (dim != 1 && dim != 2) throw InvalidParameter("moment tables are 1D or 2D");
    if (max_order < 0) throw InvalidParameter("negative moment order");
}

double MomentTable::operator()(int m, int n) const
{
    if (m < 0 || n < 0 || m + n > max_order_ || (dim_ == 1 && n != 0))
        throw InvalidParameter("moment index outside the table");
    return data_[static_cast<std::size_t>(m * (dim_ == 1 ? 1 : max_order_ + 1) + n)];
}

double& MomentTable::at(int m, int n)
{
    if (m < 0 || n < 0 || m + n > max_order_ || (dim_ == 1 && n != 0))
        throw InvalidParameter("moment index outside the table");
    return data_[static_cast<std::size_t>(m * (dim_ == 1 ? 1 : max_order_ + 1) + n)];
}

namespace {

// d<x^m y^n>/dt = 0 for dx = A x dt + noise, <noise noise^T> = Q dt.
// Terms are returned separately so the caller can form relative residuals.
struct MomentEquation {
    double diag = 0.0;   // coefficient of M(m, n)
    double down = 0.0;   // coefficient of M(m-1, n+1)
    double up = 0.0;     // coefficient of M(m+1, n-1)
    double source = 0.0; // diffusion terms, already multiplied by lower-order moments
};

MomentEquation moment_equation(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q,
                               const MomentTable& t, int m, int n)
{
    MomentEquation e;
    e.diag = m * A(0, 0) + n * A(1, 1);
    e.down = m * A(0, 1);
    e.up = n * A(1, 0);
    if (m >= 2) e.source += 0.5 * Q(0, 0) * m * (m - 1) * t(m - 2, n);
    if (m >= 1 && n >= 1) e.source += Q(0, 1) * m * n * t(m - 1, n - 1);
    if (n >= 2) e.source += 0.5 * Q(1, 1) * n * (n - 1) * t(m, n - 2);
    return e;
}

} // namespace

MomentSolution stationary_moments(const spectra::LinearNoiseSystem& block, int max_order)
{
    spectra::check_stable(block);
    if (max_order < 2 || max_order % 2 != 0) throw InvalidParameter("max_order must be even and >= 2");
    const int dim = static_cast<int>(block.drift.rows());
    const Eigen::MatrixXd& A = block.drift;
    const Eigen::MatrixXd& Q = block.diffusion;

    MomentSolution out;
    out.table = MomentTable(dim, max_order);
    MomentTable& t = out.table;
    t.at(0, 0) = 1.0;

    if (dim == 1) {
        for (int k = 2; k <= max_order; k += 2) {
            const double a = k * A(0, 0);
            if (a == 0.0) throw RecurrenceSingular("zero drift in a one-dimensional block");
            t.at(k) = -0.5 * Q(0, 0) * k * (k - 1) * t(k - 2) / a;
        }
        return out;
    }

    for (int order = 2; order <= max_order; order += 2) {
        // Unknowns M(m, order - m), m = 0..order. Rows are equilibrated because pump
        // and signal rates can differ by many decades.
        const int n_unk = order + 1;
        Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(n_unk, n_unk);
        Eigen::VectorXd rhs(n_unk);
        for (int m = 0; m <= order; ++m) {
            const auto e = moment_equation(A, Q, t, m, order - m);
            lhs(m, m) = e.diag;
            if (m >= 1) lhs(m, m - 1) = e.down;
            if (m + 1 <= order) lhs(m, m + 1) = e.up;
            rhs(m) = -e.source;
            const double scale = lhs.row(m).cwiseAbs().maxCoeff();
            if (scale == 0.0) throw RecurrenceSingular("empty moment equation at order " + std::to_string(order));
            lhs.row(m) /= scale;
            rhs(m) /= scale;
        }
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
        if (!lu.isInvertible() || lu.rcond() < 1e-14)
            throw RecurrenceSingular("moment system is singular at order " + std::to_string(order));
        const Eigen::VectorXd x = lu.solve(rhs);
        for (int m = 0; m <= order; ++m) t.at(m, order - m) = x(m);
    }

    // Residual of every stored equation relative to the size of its terms.
    for (int order = 2; order <= max_order; order += 2) {
        for (int m = 0; m <= order; ++m) {
            const int n = order - m;
            const auto e = moment_equation(A, Q, t, m, n);
            const double t1 = e.diag * t(m, n);
            const double t2 = m >= 1 ? e.down * t(m - 1, n + 1) : 0.0;
            const double t3 = n >= 1 ? e.up * t(m + 1, n - 1) : 0.0;
            const double size = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(e.source);
            if (size > 0.0) out.max_residual = std::max(out.max_residual, std::abs(t1 + t2 + t3 + e.source) / size);
        }
    }
    return out;
}

PhaseBlock phase_moments(const model::TropoParams& p, const model::SteadyState& s, int max_order)
{
    require_symmetric(p, "phase_moments");
    const auto blocks = spectra::build_blocks(p, s);
    auto sol = stationary_moments(blocks[2], max_order);
    PhaseBlock b;
    b.var_phi_p = sol.table(2, 0);
    b.var_phi_plus = sol.table(0, 2);
    b.cov_phi = sol.table(1, 1);
    b.var_phi_minus = stationary_moments(blocks[3], 2).table(2);
    b.moment_table = std::move(sol.table);
    b.max_recurrence_residual = sol.max_residual;
    return b;
}

PhaseBlock phase_limit(const model::TropoParams& p, const model::SteadyState& s)
{
    require_symmetric(p, "phase_limit");
    const double k = p.kappa, kp = p.kappa_p, mp = p.mu_p;
    const double N = s.n_signal, Np = s.n_pump;
    PhaseBlock b;
    b.var_phi_p = -(mp - 1) / mp * k / kp / (4 * Np);
    b.var_phi_plus = -1 / (4 * N * mp);
    b.cov_phi = k / kp / (mp * 4 * Np);
    b.var_phi_minus = (1 - p.mu) / (2 * p.mu * N);
    return b;
}

OutputMoments output_pfunction_rescale(const model::TropoParams& p, const model::SteadyState& s)
{
    require_symmetric(p, "output_pfunction_rescale");
    const double T = p.transmission.signal, Tp = p.transmission.pump;
    const auto amp = amplitude_block(p, s);
    const auto ph = phase_moments(p, s, 2);

    // alpha_out = sqrt(T) alpha, so photon numbers and their fluctuations scale by T
    // and second moments of amplitude fluctuations by T^2. Phases are untouched.
    OutputMoments o;
    o.n_signal_out = T * s.n_signal;
    o.n_pump_out = Tp * s.n_pump;
    o.var_eps_plus = T * T * amp.var_eps_plus;
    o.var_eps_p = Tp * Tp * amp.var_eps_p;
    o.cov_eps = T * Tp * amp.cov_eps;
    o.var_eps_minus = T * T * amp.var_eps_minus;
    o.var_phi_p = ph.var_phi_p;
    o.var_phi_plus = ph.var_phi_plus;
    o.cov_phi = ph.cov_phi;
    o.var_phi_minus = ph.var_phi_minus;
    return o;
}

double gaussian_overlap(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& kernel_variances)
{
    const Eigen::Index n = sigma.rows();
    if (sigma.cols() != n || kernel_variances.size() != n) throw InvalidParameter("overlap dimension mismatch");
    const Eigen::VectorXd inv_sqrt = kernel_variances.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd b = 2.0 * inv_sqrt.asDiagonal() * sigma * inv_sqrt.asDiagonal();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    double det = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lam = es.eigenvalues()(i);
        // A negative formal variance is usable only while the kernel dominates it.
        if (lam <= -1.0)
            throw DivergentPurityIntegral("negative-variance direction not dominated by the purity kernel");
        det *= 1.0 + lam;
    }
    return 1.0 / std::sqrt(det);
}

StationaryPurity stationary_purity(const model::TropoParams& p, const model::SteadyState& s)
{
    require_symmetric(p, "stationary_purity");
    StationaryPurity r;
    r.warnings = model::validate(p);

    const double T = p.transmission.signal, Tp = p.transmission.pump;
    const double N = s.n_signal, Np = s.n_pump;
    const auto o = output_pfunction_rescale(p, s);

    auto factors = [&](double t, double tp, const OutputMoments& m) {
        Eigen::Matrix2d amp;
        amp << m.var_eps_p, m.cov_eps, m.cov_eps, m.var_eps_plus;
        Eigen::Matrix2d ph;
        ph << m.var_phi_p, m.cov_phi, m.cov_phi, m.var_phi_plus;
        const double f1 = gaussian_overlap(amp, Eigen::Vector2d(2 * Np * tp, 4 * N * t));
        const double f2 = gaussian_overlap(Eigen::MatrixXd::Constant(1, 1, m.var_eps_minus),
                                           Eigen::VectorXd::Constant(1, 4 * N * t));
        const double f3 = gaussian_overlap(ph, Eigen::Vector2d(1 / (2 * Np * tp), 1 / (N * t)));
        const double f4 = gaussian_overlap(Eigen::MatrixXd::Constant(1, 1, m.var_phi_minus),
                                           Eigen::VectorXd::Constant(1, 1 / (N * t)));
        return std::array<double, 4>{f1, f2, f3, f4};
    };

    const auto f = factors(T, Tp, o);
    r.pi1 = f[0];
    r.pi2 = f[1];
    r.pi3 = f[2];
    r.pi4 = f[3];
    r.pi_st = r.pi1 * r.pi2 * r.pi3 * r.pi4;
    r.nu = p.mu * (p.mu_p - 0.5) / (p.mu / 2 + p.mu_p - 1);

    auto q = p;
    q.transmission = {1.0, 1.0};
    const auto fin = factors(1.0, 1.0, output_pfunction_rescale(q, s));
    r.pi_intracavity = fin[3];
    r.pi_intracavity_product = fin[0] * fin[1] * fin[2] * fin[3];
    return r;
}

} // namespace tropo::glauber
