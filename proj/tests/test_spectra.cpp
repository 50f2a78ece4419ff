#include "support.hpp"
#include "tropo/errors.hpp"
#include "tropo/spectra.hpp"

#include <catch_amalgamated.hpp>

#include <array>

using namespace tropo;
using namespace tropo::spectra;
using model::InjectionMode;
using tropo_test::base_params;
using tropo_test::rel_err;

namespace {

double max_rel_mismatch(const SpectralSet& a, const SpectralSet& b)
{
    double worst = 0.0;
    const auto va = a.values(), vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i) worst = std::max(worst, rel_err(va[i], vb[i]));
    return worst;
}

} // namespace

// Reference values from an independent numpy resolvent evaluation at
// kappa=1, kappa_p=100, mu_p=2, mu=0.1, g=0.01, omega=0.7.
TEST_CASE("closed form: frozen reference point")
{
    const std::array<double, 8> sym = {294612.4994948022, 23.858936107601888, -2650.9929008446543,
                                       -290843.80610412935, -5.134612954017976e-07, -5.135619338156964e-07,
                                       5.134612954017976e-07, 4.060913705583756e-06};
    const std::array<double, 8> asym = {285355.36094983, 23.109254822990923, -2567.694980332325,
                                        -300975.38318625174, -5.580165969038913e-07, -5.023133713411959e-07,
                                        5.293810255177077e-07, 4.076433121019109e-06};
    for (auto mode : {InjectionMode::Symmetric, InjectionMode::Asymmetric}) {
        const auto p = base_params(mode);
        const auto v = closed_form(p, model::steady_state(p), 0.7).values();
        const auto& ref = mode == InjectionMode::Symmetric ? sym : asym;
        for (std::size_t i = 0; i < 8; ++i) {
            INFO(field_name(i));
            CHECK(rel_err(v[i], ref[i]) < 1e-12);
        }
    }
}

TEST_CASE("closed form equals resolvent oracle on random parameters")
{
    std::mt19937_64 rng(20240601);
    const auto omegas = tropo_test::log_grid(1e-2, 1e3, 25);
    for (auto mode : {InjectionMode::Symmetric, InjectionMode::Asymmetric}) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto p = tropo_test::random_params(rng, mode);
            const auto s = model::steady_state(p);
            for (double wk : omegas) {
                const double w = wk * p.kappa;
                const double m = max_rel_mismatch(closed_form(p, s, w), oracle_set(p, s, w));
                if (m > 1e-10) FAIL("mismatch " << m << " at omega " << w);
            }
            CHECK(max_rel_mismatch(closed_form(p, s, 0.0), oracle_set(p, s, 0.0)) < 1e-10);
        }
    }
}

TEST_CASE("closed form: evenness, sign pattern and high-frequency falloff")
{
    std::mt19937_64 rng(7);
    for (auto mode : {InjectionMode::Symmetric, InjectionMode::Asymmetric}) {
        for (int trial = 0; trial < 50; ++trial) {
            const auto p = tropo_test::random_params(rng, mode);
            const auto s = model::steady_state(p);
            for (double w : {0.0, 0.03, 1.0, 17.0, 900.0}) {
                const auto a = closed_form(p, s, w), b = closed_form(p, s, -w);
                CHECK(a.values() == b.values());
                CHECK(a.eps_plus_sq > 0);
                CHECK(a.eps_p_sq > 0);
                CHECK(a.eps_minus_sq < 0);
                CHECK(a.phi_minus_sq > 0);
                CHECK(a.phi_plus_sq < 0);
                CHECK(a.phi_p_sq < 0);
                CHECK(a.eps_p_plus < 0);
                CHECK(a.phi_p_plus > 0);
            }
            // w^2 * density stays bounded once w is far beyond every rate.
            const double w0 = 1e3 * std::max(p.kappa, p.kappa_p);
            const auto far = closed_form(p, s, w0).values();
            const auto farther = closed_form(p, s, 10 * w0).values();
            for (std::size_t i = 0; i < 8; ++i) {
                INFO(field_name(i));
                CHECK(std::abs(farther[i]) * 100 * w0 * w0 <= std::abs(far[i]) * w0 * w0 * 1.01);
            }
        }
    }
}

TEST_CASE("closed form: difference-mode examples")
{
    auto p = base_params();
    const auto s = model::steady_state(p);
    for (double w : {0.0, 0.3, 5.0}) {
        const auto c = closed_form(p, s, w);
        const double expect = -2 * s.n_signal * p.kappa * (1 - p.mu) /
                              (std::pow(p.kappa * (1 - p.mu / 2), 2) + w * w);
        CHECK(rel_err(c.eps_minus_sq, expect) < 1e-15);
    }
    const auto c0 = closed_form(p, s, 0.0);
    CHECK(rel_err(c0.phi_minus_sq, p.kappa * (1 - p.mu) / (2 * s.n_signal * std::pow(p.kappa * p.mu / 2, 2))) < 1e-14);

    p.mu = 1e-9;
    const auto s2 = model::steady_state(p);
    CHECK(rel_err(closed_form(p, s2, 0.0).eps_minus_sq, -2 * s2.n_signal / p.kappa) < 1e-8);
}

TEST_CASE("blocks: entries and stability")
{
    const auto p = base_params();
    const auto s = model::steady_state(p);
    const auto b = build_blocks(p, s);
    CHECK(b[3].drift(0, 0) == Catch::Approx(-p.kappa * p.mu / 2));
    CHECK(b[3].diffusion(0, 0) == Catch::Approx(p.kappa * (1 - p.mu) / (2 * s.n_signal)));
    CHECK(b[1].drift(0, 0) == Catch::Approx(-p.kappa * (1 - p.mu / 2)));
    CHECK(b[1].diffusion(0, 0) == Catch::Approx(-2 * p.kappa * s.n_signal * (1 - p.mu)));

    // Near threshold with weak injection the amplitude block slows down but stays stable.
    auto q = base_params();
    q.mu_p = 1.0 + 1e-9;
    q.mu = 1e-6;
    const auto bq = build_blocks(q, model::steady_state(q));
    const Eigen::VectorXcd ev = bq[0].drift.eigenvalues();
    const double slowest = std::max(ev[0].real(), ev[1].real());
    CHECK(slowest < 0.0);
    CHECK(slowest > -1e-5);
}

TEST_CASE("oracle: scalar resolvent and singular detection")
{
    LinearNoiseSystem blk;
    blk.id = BlockId::PhaseDiff;
    blk.drift = Eigen::MatrixXd::Constant(1, 1, -0.3);
    blk.diffusion = Eigen::MatrixXd::Constant(1, 1, 2.5);
    for (double w : {0.0, 0.1, 4.0})
        CHECK(rel_err(oracle_spectrum(blk, w)(0, 0), 2.5 / (0.09 + w * w)) < 1e-14);

    blk.drift(0, 0) = 0.0;
    CHECK_THROWS_AS(oracle_spectrum(blk, 0.0), UnstableSystem);

    LinearNoiseSystem stiff;
    stiff.drift.resize(2, 2);
    stiff.drift << -1.0, 0.0, 0.0, -1e-14;
    stiff.diffusion = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(oracle_spectrum(stiff, 0.0), SingularAtFrequency);
}

TEST_CASE("mutation: a 1e-6 coefficient error is caught by the oracle")
{
    for (auto mode : {InjectionMode::Symmetric, InjectionMode::Asymmetric}) {
        const auto p = base_params(mode);
        const auto s = model::steady_state(p);
        for (std::size_t f = 0; f < SpectralSet::field_count; ++f) {
            const auto bad = testing::closed_form_perturbed(p, s, 0.7, f, 1e-6);
            CHECK(max_rel_mismatch(bad, oracle_set(p, s, 0.7)) > 1e-10);
        }
    }
}
