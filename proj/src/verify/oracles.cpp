#include "tropo/verify.hpp"

#include "tropo/errors.hpp"
#include "tropo/spectra.hpp"

#include <cmath>
#include <numbers>

namespace tropo::verify {

GaussRule gauss_hermite(int n)
{
    if (n < 1) throw InvalidParameter("Gauss-Hermite rule needs at least one node");
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) j(i, i - 1) = j(i - 1, i) = std::sqrt(i / 2.0);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    GaussRule r;
    for (int i = 0; i < n; ++i) {
        r.nodes.push_back(es.eigenvalues()(i));
        r.weights.push_back(std::sqrt(std::numbers::pi) * std::pow(es.eigenvectors()(0, i), 2));
    }
    return r;
}

double purity_overlap_quadrature(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& kernel_variances,
                                 int nodes_per_dim)
{
    const int d = static_cast<int>(sigma.rows());
    if (d != 1 && d != 2) throw InvalidParameter("quadrature oracle supports 1 or 2 dimensions");
    const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw NonPositiveDefinite("quadrature oracle needs a proper Gaussian");
    const Eigen::MatrixXd L = llt.matrixL();
    const Eigen::VectorXd cinv = kernel_variances.cwiseInverse();
    const GaussRule g = gauss_hermite(nodes_per_dim);
    const int n = nodes_per_dim;
    const double norm = std::pow(std::numbers::pi, -d); // 2d dims, 1/sqrt(pi) each

    // Iterate over all (z, z') node tuples; x = L sqrt2 t.
    const int total_dims = 2 * d;
    std::vector<int> idx(static_cast<std::size_t>(total_dims), 0);
    double sum = 0.0;
    Eigen::VectorXd t1(d), t2(d);
    while (true) {
        double w = 1.0;
        for (int k = 0; k < d; ++k) {
            t1(k) = std::sqrt(2.0) * g.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
            t2(k) = std::sqrt(2.0) * g.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(k + d)])];
            w *= g.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])] *
                 g.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(k + d)])];
        }
        const Eigen::VectorXd diff = L * (t1 - t2);
        sum += w * std::exp(-0.5 * diff.cwiseProduct(diff).dot(cinv));

        int k = 0;
        while (k < total_dims && ++idx[static_cast<std::size_t>(k)] == n) idx[static_cast<std::size_t>(k++)] = 0;
        if (k == total_dims) break;
    }
    return norm * sum;
}

namespace {

double binom(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// E[d1^a d2^b] for d = x - x' with x, x' independent copies.
double difference_moment(const glauber::MomentTable& t, int a, int b)
{
    double s = 0.0;
    for (int i = 0; i <= a; ++i) {
        for (int l = 0; l <= b; ++l) {
            const int oa = a - i, ob = b - l;
            // Odd moments vanish, and even ones of -x' equal those of x'.
            if ((i + l) % 2 || (oa + ob) % 2) continue;
            const double mi = t.dim() == 1 ? t(i) : t(i, l);
            const double mo = t.dim() == 1 ? t(oa) : t(oa, ob);
            s += binom(a, i) * binom(b, l) * mi * mo;
        }
    }
    return s;
}

} // namespace

double purity_overlap_moment_series(const glauber::MomentTable& moments, const Eigen::VectorXd& kernel_variances,
                                    int terms)
{
    const int d = moments.dim();
    if (kernel_variances.size() != d) throw InvalidParameter("kernel dimension mismatch");
    if (2 * terms > moments.max_order()) throw InvalidParameter("moment table too short for the series");
    double sum = 0.0, fact = 1.0;
    for (int k = 0; k <= terms; ++k) {
        if (k > 0) fact *= k;
        double ek = 0.0;
        if (d == 1) {
            ek = std::pow(1 / kernel_variances(0), k) * difference_moment(moments, 2 * k, 0);
        } else {
            const double a = 1 / kernel_variances(0), b = 1 / kernel_variances(1);
            for (int j = 0; j <= k; ++j)
                ek += binom(k, j) * std::pow(a, j) * std::pow(b, k - j) * difference_moment(moments, 2 * j, 2 * (k - j));
        }
        sum += std::pow(-0.5, k) / fact * ek;
    }
    return sum;
}

Eigen::Vector3d amplitude_lyapunov(const model::TropoParams& p, const model::SteadyState& s)
{
    const auto blk = spectra::build_blocks(p, s)[0];
    const Eigen::MatrixXd& A = blk.drift;
    const Eigen::MatrixXd& Q = blk.diffusion;
    // A S + S A^T + Q = 0 with S = [[x0, x1], [x1, x2]].
    Eigen::Matrix3d m;
    m << 2 * A(0, 0), 2 * A(0, 1), 0,
         A(1, 0), A(0, 0) + A(1, 1), A(0, 1),
         0, 2 * A(1, 0), 2 * A(1, 1);
    const Eigen::Vector3d rhs(-Q(0, 0), -Q(0, 1), -Q(1, 1));
    return m.fullPivLu().solve(rhs);
}

double lorentzian_window(double kappa, double gamma, double tau)
{
    const double x = gamma * tau;
    // 1 - (1 - e^-x)/x cancels for small x; use its series there.
    const double one_minus_frac =
        x < 1e-3 ? x / 2 - x * x / 6 + x * x * x / 24 - x * x * x * x / 120 : 1 + std::expm1(-x) / x;
    return kappa * kappa / (gamma * gamma) * one_minus_frac;
}

double window_trapezoid(const std::function<double(double)>& f, double tau, double u_max, long n_steps)
{
    const double h = u_max / static_cast<double>(n_steps);
    auto integrand = [&](double u) {
        if (u == 0.0) return f(0.0) / std::numbers::pi;
        const double su = std::sin(u) / u;
        return f(2 * u / tau) * su * su / std::numbers::pi;
    };
    double s = 0.5 * (integrand(0.0) + integrand(u_max));
    for (long i = 1; i < n_steps; ++i) s += integrand(static_cast<double>(i) * h);
    // Tail with sin^2 averaged to 1/2 and f ~ c/w^2.
    const double tail = f(2 * u_max / tau) / (3 * std::numbers::pi * u_max);
    return 2 * (s * h + tail);
}

model::TropoParams random_params(std::mt19937_64& rng, model::InjectionMode mode, double mu_lo, double mu_hi)
{
    auto logu = [&](double lo, double hi) {
        std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
        return std::exp(u(rng));
    };
    model::TropoParams p;
    p.kappa = logu(0.1, 10.0);
    p.kappa_p = p.kappa * logu(0.5, 1e3);
    p.mu_p = 1.0 + logu(1e-3, 9.0);
    p.mu = logu(mu_lo, mu_hi);
    p.g = logu(1e-3, 1e-1);
    p.injection = mode;
    return p;
}

} // namespace tropo::verify
