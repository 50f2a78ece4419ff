#include "tropo/covariance.hpp"
#include "tropo/errors.hpp"
#include "tropo/glauber.hpp"
#include "tropo/photon_stats.hpp"
#include "tropo/presets.hpp"
#include "tropo/spectra.hpp"
#include "tropo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace tropo::verify {

namespace {

using model::InjectionMode;

double rel_err(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return out;
}

model::TropoParams reference(InjectionMode mode = InjectionMode::Symmetric)
{
    model::TropoParams p;
    p.kappa = 1.0;
    p.kappa_p = 100.0;
    p.mu_p = 2.0;
    p.mu = 0.1;
    p.g = 0.01;
    p.injection = mode;
    return p;
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// Collects named checks; a criterion passes when all of them do.
struct Checks {
    bool pass = true;
    std::string detail;
    void add(bool ok, const std::string& what)
    {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

CriterionResult oracle_equivalence()
{
    std::mt19937_64 rng(1001);
    std::vector<double> omegas{0.0};
    for (double w : log_grid(1e-2, 1e3, 24)) omegas.push_back(w);
    double worst = 0.0;
    for (auto mode : {InjectionMode::Symmetric, InjectionMode::Asymmetric})
        for (int t = 0; t < 200; ++t) {
            const auto p = random_params(rng, mode);
            const auto s = model::steady_state(p);
            for (double wk : omegas) {
                const auto a = spectra::closed_form(p, s, wk * p.kappa).values();
                const auto b = spectra::oracle_set(p, s, wk * p.kappa).values();
                for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, rel_err(a[i], b[i]));
            }
        }
    Checks c;
    c.add(worst <= 1e-10, "max relative mismatch " + fmt(worst) + " over 200 x 25 x 2");
    return {1, "oracle equivalence", c.pass, c.detail};
}

CriterionResult minimum_uncertainty()
{
    // mu >= 0.05: below that the difference-mode variances fall under 1e-3 and a
    // 1e-12 product test is finer than their double-precision representation.
    std::mt19937_64 rng(1002);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const auto p = random_params(rng, InjectionMode::Symmetric, 0.05, 0.9);
        const auto s = model::steady_state(p);
        for (double wk : log_grid(1e-3, 1e3, 25))
            worst = std::max(worst, std::abs(covariance::purity_at(p, s, wk * p.kappa).factor_n_minus - 1.0));
    }
    Checks c;
    c.add(worst <= 1e-12, "max |N_- - 1| = " + fmt(worst));
    return {2, "minimum-uncertainty twin beams", c.pass, c.detail};
}

CriterionResult purity_limits()
{
    std::mt19937_64 rng(1003);
    double lowest = 1.0;
    for (auto mode : {InjectionMode::Symmetric, InjectionMode::Asymmetric})
        for (int t = 0; t < 200; ++t) {
            const auto p = random_params(rng, mode);
            lowest = std::min(lowest, covariance::purity_at(p, model::steady_state(p), 1e3 * p.kappa).purity_total);
        }
    auto p = reference(InjectionMode::Asymmetric);
    p.mu = 0.01;
    p.mu_p = 6.0;
    const double pi0 = covariance::purity_at(p, model::steady_state(p), 0.0).purity_total;
    Checks c;
    c.add(lowest >= 0.999, "min purity at 1e3 kappa " + fmt(lowest));
    c.add(std::abs(pi0 - 0.5) <= 0.02, "asymmetric Pi(0) " + fmt(pi0));
    return {3, "purity limits", c.pass, c.detail};
}

CriterionResult squeezing_golden()
{
    auto p = reference();
    const double yp = covariance::squeezing_entanglement(p, model::steady_state(p), 0.0).y_p_variance;
    p.mu_p = 200.0;
    p.mu = 0.01;
    const double xis = covariance::squeezing_entanglement(p, model::steady_state(p), 0.0).x_is_variance;
    Checks c;
    c.add(std::abs(yp - 0.5) <= 1e-12, "4<dY_p^2>(mu_p=2) " + fmt(yp));
    c.add(std::abs(xis - 0.5) <= 0.005, "4<dX_is^2>(mu_p=200) " + fmt(xis));
    return {4, "squeezing golden values", c.pass, c.detail};
}

CriterionResult near_threshold()
{
    Checks c;
    for (double mp : {1.5, 2.0, 4.0}) {
        auto p = reference();
        p.mu_p = mp;
        p.mu = 1e-4;
        const auto s = model::steady_state(p);
        const auto v = covariance::output_variances(p, s, spectra::closed_form(p, s, 0.0));
        const double expect = covariance::near_threshold_excess(mp);
        const double e_plus = rel_err(v.x_plus_plus * v.y_plus_plus, expect);
        const double e_pump = rel_err(v.x_pp * v.y_pp, expect);
        c.add(std::max(e_plus, e_pump) <= 1e-6,
              "mu_p=" + fmt(mp) + " rel err N_+ " + fmt(e_plus) + ", N_p " + fmt(e_pump));
    }
    return {5, "near-threshold excess noise", c.pass, c.detail};
}

CriterionResult partial_purity()
{
    const auto f = presets::figure("1a");
    int violations = 0, points = 0;
    double worst_gap = 0.0, worst_det = 0.0;
    for (double mp : f.mu_p_values) {
        auto p = f.base;
        p.mu_p = mp;
        p.mu = f.mu_values.front();
        const auto s = model::steady_state(p);
        for (double wk : f.omega_over_kappa) {
            const auto r = covariance::purity_at(p, s, wk * p.kappa);
            ++points;
            if (r.purity_partial_is < r.purity_total) {
                ++violations;
                worst_gap = std::max(worst_gap, r.purity_total - r.purity_partial_is);
            }
            worst_det = std::max(worst_det, std::abs(r.det_difference_mode - 1.0));
        }
    }
    Checks c;
    c.add(violations == 0, "partial < total at " + std::to_string(violations) + "/" + std::to_string(points) +
                               " points, largest gap " + fmt(worst_gap));
    c.add(worst_det <= 1e-12, "max |det_- - 1| " + fmt(worst_det));
    return {6, "partial purity dominance", c.pass, c.detail};
}

CriterionResult glauber_moments()
{
    Checks c;
    double worst_phase = 0.0, worst_eps = 0.0;
    for (double mp : {1.5, 2.0, 4.0}) {
        auto p = reference();
        p.kappa_p = 1e13;
        p.mu = 1e-13;
        p.mu_p = mp;
        const auto s = model::steady_state(p);
        const auto b = glauber::phase_moments(p, s);
        const auto l = glauber::phase_limit(p, s);
        worst_phase = std::max({worst_phase, rel_err(b.var_phi_p, l.var_phi_p), rel_err(b.var_phi_plus, l.var_phi_plus),
                                rel_err(b.cov_phi, l.cov_phi), rel_err(b.var_phi_minus, l.var_phi_minus)});
        const auto t = glauber::stationary_moments(spectra::build_blocks(p, s)[1], 8).table;
        double dfact = 1.0;
        for (int k = 1; k <= 4; ++k) {
            dfact *= 2 * k - 1;
            worst_eps = std::max(worst_eps, rel_err(t(2 * k), dfact * std::pow(-s.n_signal, k)));
        }
    }
    c.add(worst_phase <= 1e-10, "phase second moments rel err " + fmt(worst_phase));
    c.add(worst_eps <= 1e-10, "<eps_-^2k> rel err " + fmt(worst_eps));
    auto p = reference();
    const auto f2 = glauber::fano_intracavity(p);
    c.add(f2.f_p == 1.0 && f2.f_is == 1.0, "F_p " + fmt(f2.f_p) + ", F_is(mu_p=2) " + fmt(f2.f_is));
    return {7, "Glauber moments", c.pass, c.detail};
}

CriterionResult stationary_purity()
{
    Checks c;
    auto p = reference();
    const auto s = model::steady_state(p);
    const double T = 1e-4 * p.mu;
    p.transmission = {T, T};
    const auto r = glauber::stationary_purity(p, s);
    c.add(std::abs(r.pi_st - 1.0) <= 1e-6, "Pi_st(T=1e-4 mu) - 1 = " + fmt(r.pi_st - 1.0) + " (Pi_4 - 1 = " +
                                                fmt(r.pi4 - 1.0) + ")");

    double worst = 0.0;
    for (double t : {T, 1e-2, 0.1}) {
        p.transmission = {t, t};
        const auto q = glauber::stationary_purity(p, s);
        const auto o = glauber::output_pfunction_rescale(p, s);
        Eigen::Matrix2d amp;
        amp << o.var_eps_p, o.cov_eps, o.cov_eps, o.var_eps_plus;
        const double q1 = purity_overlap_quadrature(amp, Eigen::Vector2d(2 * s.n_pump * t, 4 * s.n_signal * t));
        const double q4 = purity_overlap_quadrature(Eigen::MatrixXd::Constant(1, 1, o.var_phi_minus),
                                                    Eigen::VectorXd::Constant(1, 1 / (s.n_signal * t)));
        worst = std::max({worst, rel_err(q.pi1, q1), rel_err(q.pi4, q4)});
    }
    c.add(worst <= 1e-6, "Pi_1, Pi_4 vs Gauss-Hermite rel err " + fmt(worst));
    p.transmission = {1.0, 1.0};
    const double intra = glauber::stationary_purity(p, s).pi_intracavity;
    c.add(rel_err(intra, std::sqrt(p.mu)) <= 1e-12, "intracavity " + fmt(intra) + " vs sqrt(mu)");
    return {8, "stationary purity", c.pass, c.detail};
}

CriterionResult counting()
{
    Checks c;
    auto p = reference(); // mu_p = 2, mu = 0.1
    auto s = model::steady_state(p);
    const double f_short = photon_stats::fano_out(p, s, 1e-4 / p.kappa);
    c.add(std::abs(f_short - 1.0) <= 1e-6, "F_out(kappa tau=1e-4) - 1 = " + fmt(f_short - 1.0));
    const double f_long = photon_stats::fano_out(p, s, 1e4 / p.kappa);
    const double target = 0.5 * p.mu_p / (p.mu / 2 + p.mu_p - 1);
    c.add(std::abs(f_long - target) <= 1e-4, "F_out(kappa tau=1e4) " + fmt(f_long) + " vs " + fmt(target));
    const auto j = photon_stats::joint_out(p, s, 1e4 / p.kappa);
    const double collapse = j.d_minus / (2 * j.n_out);
    p.mu_p = 1.01;
    s = model::steady_state(p);
    const double f_near = photon_stats::fano_out(p, s, 1e4 / p.kappa);
    c.add(std::abs(f_near - 1 / p.mu) <= 0.05 / p.mu, "near-threshold F_out " + fmt(f_near) + " vs 1/mu");
    c.add(collapse < 1e-3, "d_-/(2 N_out) " + fmt(collapse));
    return {9, "counting statistics", c.pass, c.detail};
}

// Smallest omega > 0 where the impurity 1 - Pi falls to half its zero-frequency value.
double impurity_half_width(const model::TropoParams& p)
{
    const auto s = model::steady_state(p);
    auto impurity = [&](double w) { return 1.0 - covariance::purity_at(p, s, w).purity_total; };
    const double half = 0.5 * impurity(0.0);
    double lo = 0.0;
    for (double w : log_grid(1e-4 * p.kappa, 1e4 * p.kappa, 801)) {
        if (impurity(w) <= half) {
            double a = lo, b = w;
            for (int i = 0; i < 200 && b - a > 1e-12 * b; ++i) {
                const double m = 0.5 * (a + b);
                (impurity(m) > half ? a : b) = m;
            }
            return 0.5 * (a + b);
        }
        lo = w;
    }
    throw QuadratureNotConverged("impurity does not fall to half its zero-frequency value below 1e4 kappa");
}

CriterionResult figure_behavior()
{
    Checks c;
    const auto f1 = presets::figure("1a");
    auto curve = [](const presets::FigurePreset& f, double mp, double mu) {
        auto p = f.base;
        p.mu_p = mp;
        p.mu = mu;
        const auto s = model::steady_state(p);
        std::vector<double> pis;
        for (double wk : f.omega_over_kappa) pis.push_back(covariance::purity_at(p, s, wk * p.kappa).purity_total);
        return pis;
    };
    const auto near = curve(f1, 1.1, 0.1), far = curve(f1, 4.2, 0.1);
    const auto zero = static_cast<std::size_t>(
        std::find(f1.omega_over_kappa.begin(), f1.omega_over_kappa.end(), 0.0) - f1.omega_over_kappa.begin());
    const auto argmin = static_cast<std::size_t>(std::min_element(near.begin(), near.end()) - near.begin());
    const double min_near = near[argmin], min_far = *std::min_element(far.begin(), far.end());
    c.add(argmin == zero && min_near < min_far,
          "1a: mu_p=1.1 minimum " + fmt(min_near) + " at omega/kappa " + fmt(f1.omega_over_kappa[argmin]) +
              ", mu_p=4.2 minimum " + fmt(min_far));

    const auto f1b = presets::figure("1b");
    bool larger = true;
    std::string zeros;
    for (double mp : f1b.mu_p_values) {
        auto p = f1b.base;
        p.mu_p = mp;
        p.mu = 0.35;
        const double hi = covariance::purity_at(p, model::steady_state(p), 0.0).purity_total;
        p.mu = 0.1;
        const double lo = covariance::purity_at(p, model::steady_state(p), 0.0).purity_total;
        larger = larger && hi - lo > 1e-12;
        zeros += " " + fmt(hi) + "/" + fmt(lo);
    }
    c.add(larger, "1b: Pi(0) at mu=0.35 vs 0.1:" + zeros);

    bool narrowing = true;
    std::string widths;
    const auto f3 = presets::figure("3b");
    for (double mp : {3.0, 6.0}) {
        double prev = INFINITY;
        widths += " mu_p=" + fmt(mp) + ":";
        for (double mu : f3.mu_values) { // decreasing injection
            auto p = f3.base;
            p.mu_p = mp;
            p.mu = mu;
            const double w = impurity_half_width(p);
            narrowing = narrowing && w < prev;
            prev = w;
            widths += " " + fmt(w);
        }
    }
    c.add(narrowing, "3b: impurity half-widths for mu = 0.35, 0.1, 0.01:" + widths);
    return {10, "figure behavior", c.pass, c.detail};
}

} // namespace

std::vector<CriterionResult> run_acceptance()
{
    const std::vector<std::pair<std::string, std::function<CriterionResult()>>> all{
        {"oracle equivalence", oracle_equivalence},   {"minimum-uncertainty twin beams", minimum_uncertainty},
        {"purity limits", purity_limits},             {"squeezing golden values", squeezing_golden},
        {"near-threshold excess noise", near_threshold}, {"partial purity dominance", partial_purity},
        {"Glauber moments", glauber_moments},         {"stationary purity", stationary_purity},
        {"counting statistics", counting},            {"figure behavior", figure_behavior},
    };
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        try {
            out.push_back(all[i].second());
        } catch (const std::exception& e) {
            out.push_back({static_cast<int>(i + 1), all[i].first, false, std::string("threw: ") + e.what()});
        }
    }
    return out;
}

} // namespace tropo::verify
