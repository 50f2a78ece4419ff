#include "support.hpp"
#include "tropo/errors.hpp"
#include "tropo/model.hpp"

#include <catch_amalgamated.hpp>

using namespace tropo::model;
using tropo_test::base_params;

TEST_CASE("validate: inside all limits gives no warnings")
{
    CHECK(validate(base_params()).empty());
}

TEST_CASE("validate: weak pump damping is flagged, not rejected")
{
    auto p = base_params();
    p.kappa_p = 2.0;
    p.mu_p = 4.0;
    const auto w = validate(p);
    REQUIRE(w.size() == 1);
    CHECK(w[0] == RegimeWarning::PumpDampingNotDominant);
}

TEST_CASE("validate: large injection is flagged")
{
    auto p = base_params();
    p.mu = 0.5;
    const auto w = validate(p);
    REQUIRE(w.size() == 1);
    CHECK(w[0] == RegimeWarning::MuLarge);
}

TEST_CASE("validate: hard violations throw")
{
    auto p = base_params();
    p.mu_p = 0.9;
    CHECK_THROWS_AS(validate(p), tropo::InvalidParameter);
    p = base_params();
    p.mu_p = 1.0;
    CHECK_THROWS_AS(validate(p), tropo::InvalidParameter);
    p = base_params();
    p.kappa = -1.0;
    CHECK_THROWS_AS(validate(p), tropo::InvalidParameter);
    p = base_params();
    p.g = std::nan("");
    CHECK_THROWS_AS(validate(p), tropo::InvalidParameter);
    p = base_params();
    p.mu = 1.0;
    CHECK_THROWS_AS(validate(p), tropo::InvalidParameter);
    p = base_params();
    p.transmission.signal = 0.0;
    CHECK_THROWS_AS(validate(p), tropo::InvalidParameter);
    p = base_params();
    p.transmission.pump = 1.5;
    CHECK_THROWS_AS(validate(p), tropo::InvalidParameter);
}

TEST_CASE("steady state: reference symmetric point")
{
    const auto s = steady_state(base_params());
    CHECK(s.n_threshold == Catch::Approx(2250.0).epsilon(1e-14));
    CHECK(s.n_pump == Catch::Approx(2025.0).epsilon(1e-14));
    // kappa(1-mu) N = kappa_p (mu_p-1) N_p
    CHECK(s.n_signal == Catch::Approx(100.0 * 2025.0 / 0.9).epsilon(1e-14));
    CHECK(s.n_injected == Catch::Approx(0.01 * s.n_signal).epsilon(1e-14));
    CHECK(s.n_pump_in == Catch::Approx(4.0 * 2250.0).epsilon(1e-14));
    CHECK(s.max_residual < 1e-12);
}

TEST_CASE("steady state: reference asymmetric point")
{
    const auto p = base_params(InjectionMode::Asymmetric);
    const auto s = steady_state(p);
    CHECK(p.kappa_s() == Catch::Approx(0.9).epsilon(1e-15));
    CHECK(s.n_pump == Catch::Approx(2025.0).epsilon(1e-14));
    CHECK(s.n_signal == Catch::Approx(1.0 * 0.9 * 100.0 / 4e-4).epsilon(1e-14));
    CHECK(0.9 * s.n_signal == Catch::Approx(1.0 * 100.0 * s.n_pump).epsilon(1e-13));
}

TEST_CASE("steady state: residuals, threshold and injection limits")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const auto mode = i % 2 ? InjectionMode::Asymmetric : InjectionMode::Symmetric;
        const auto p = tropo_test::random_params(rng, mode);
        const auto s = steady_state(p);
        for (double r : steady_state_residuals(p, s)) CHECK(r < 1e-12);
        CHECK(s.n_signal >= 0.0);
        CHECK(s.n_pump >= 0.0);
    }

    auto p = base_params();
    double prev = 0.0;
    for (double mp : {1.0 + 1e-9, 1.0 + 1e-6, 1.01, 1.5, 2.0, 5.0, 50.0}) {
        p.mu_p = mp;
        const double n = steady_state(p).n_signal;
        CHECK(n > prev);
        prev = n;
    }
    p.mu_p = 1.0 + 1e-12;
    CHECK(steady_state(p).n_signal < 1e-5);

    p = base_params();
    p.mu = 1e-9;
    CHECK(steady_state(p).n_injected < 1e-10 * steady_state(p).n_signal);
}
