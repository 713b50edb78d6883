#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dce/core.hpp"

using namespace dce;
using Catch::Approx;

TEST_CASE("thermal_g limits and values") {
    CHECK(thermal_g(1.0, 0.0) == 1.0);
    // high-temperature growth ~ 2 theta / omega
    CHECK(thermal_g(1.0, 500.0) == Approx(1000.0).epsilon(1e-5));
    CHECK(thermal_g(1.0, 0.5) == Approx(1.3130352854993312).epsilon(1e-12));
    CHECK_THROWS_AS(thermal_g(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(thermal_g(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(thermal_g(1.0, -0.1), DomainError);
}

TEST_CASE("derived scalars on reference states") {
    SECTION("vacuum") {
        auto d = derived_scalars(CovarianceState::vacuum());
        CHECK(d.tau == Approx(1.0));
        CHECK(d.delta == Approx(0.25));
        CHECK(d.d_minus == Approx(0.0).margin(1e-15));
        CHECK(d.d_plus == Approx(4.0));
        CHECK(d.n_mean == Approx(0.0).margin(1e-15));
        CHECK(d.purity == Approx(1.0));
    }
    SECTION("thermal n=1") {
        auto d = derived_scalars(CovarianceState{1.5, 1.5, 0.0});
        CHECK(d.tau == Approx(3.0));
        CHECK(d.delta == Approx(2.25));
        CHECK(d.d_minus == Approx(4.0));
        CHECK(d.d_plus == Approx(16.0));
        CHECK(d.purity == Approx(1.0 / 3.0));
    }
    SECTION("pure squeezed r=1") {
        double e2 = std::exp(2.0), em2 = std::exp(-2.0);
        auto d = derived_scalars(CovarianceState{e2 / 2.0, em2 / 2.0, 0.0});
        CHECK(d.delta == Approx(0.25));
        CHECK(d.tau == Approx(std::cosh(2.0)));
        CHECK(d.d_minus == Approx(2.0 - 2.0 * std::cosh(2.0)));
        CHECK(d.d_minus < 0.0);
    }
}

TEST_CASE("covariance state construction enforces invariants") {
    CHECK_THROWS_AS(CovarianceState(0.0, 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(CovarianceState(0.5, -0.5, 0.0), DomainError);
    // Delta = 0.25 - 1e-6 < 1/4 - tol
    CHECK_THROWS_AS(CovarianceState(0.5, 0.5 - 2e-6, 0.0), DomainError);
    // within tolerance passes
    CHECK_NOTHROW(CovarianceState(0.5, 0.5 - 1e-10, 0.0));
}

TEST_CASE("reservoir params validation") {
    CHECK_NOTHROW(ReservoirParams(1.0, 1.0));
    CHECK_THROWS_AS(ReservoirParams(0.5, 1.0), DomainError);
    CHECK_THROWS_AS(ReservoirParams(1.0, 0.99), DomainError);
    CHECK_THROWS_AS(ReservoirParams(1.0, 1.0, 0.0), DomainError);
}

namespace {

CovarianceState random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> nb(0.0, 4.0), rr(0.0, 1.5),
        th(0.0, M_PI);
    double nu = nb(rng) + 0.5;
    double r = rr(rng), t = th(rng);
    double lp = nu * std::exp(2.0 * r), lm = nu * std::exp(-2.0 * r);
    double c = std::cos(t), s = std::sin(t);
    return {c * c * lp + s * s * lm, s * s * lp + c * c * lm, c * s * (lp - lm)};
}

} // namespace

TEST_CASE("derived-scalar properties over random states") {
    std::mt19937_64 rng(20260809);
    for (int i = 0; i < 300; ++i) {
        auto st = random_state(rng);
        auto d = derived_scalars(st);
        CHECK(d.delta >= 0.25 - 1e-12);
        CHECK(d.tau >= 2.0 * std::sqrt(d.delta) - 1e-12);
        CHECK(d.purity * 2.0 * std::sqrt(d.delta) == Approx(1.0).epsilon(1e-14));
        CHECK(d.tau == Approx(1.0 + 2.0 * d.n_mean).epsilon(1e-15));
        // rotation leaves tau, Delta invariant
        auto rot = free_rotation(st, 0.773);
        CHECK(rot.tau() == Approx(d.tau).epsilon(1e-12));
        CHECK(rot.delta() == Approx(d.delta).epsilon(1e-10));
    }
}

TEST_CASE("thermal-form states sit exactly on D- = 0 iff tau = 2 sqrt(Delta)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> nb(0.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        double n = nb(rng);
        auto d = derived_scalars(CovarianceState::thermal(n));
        CHECK(d.d_minus == Approx(4.0 * n * n).margin(1e-10));
        CHECK(d.tau == Approx(2.0 * std::sqrt(d.delta)).epsilon(1e-12));
        // D- = (tau - 2 sqrt(D))(... ) vanishes only at n = 0 for thermal form
        if (n > 1e-3) CHECK(d.d_minus > 0.0);
    }
    auto dv = derived_scalars(CovarianceState::vacuum());
    CHECK(std::abs(dv.d_minus) < 1e-14);
}

TEST_CASE("pulse profiles") {
    SECTION("rectangular basics") {
        auto p = PulseProfile::rectangular(0.01, 0.002, 1.5);
        CHECK(p.chi(0.7) == 0.01);
        CHECK(p.chi(2.0) == 0.0);
        CHECK(p.gamma_integral() == Approx(0.003));
        CHECK(p.gamma_partial(0.5) == Approx(0.001));
        CHECK(p.validate().empty());
    }
    SECTION("validation warns on large amplitudes") {
        auto p = PulseProfile::rectangular(0.2, 0.0, 1.0);
        CHECK(p.validate().size() == 1);
        auto p2 = PulseProfile::rectangular(0.01, 0.2, 1.0);
        CHECK(p2.validate().size() == 1);
    }
    SECTION("gamma must be nonnegative") {
        CHECK_THROWS_AS(PulseProfile::rectangular(0.01, -0.1, 1.0), DomainError);
        CHECK_THROWS_AS(
            PulseProfile::sampled({0.0, 1.0}, {0.0, 0.0}, {0.1, -0.1}),
            DomainError);
    }
    SECTION("linexp closed-form integrals") {
        auto p = PulseProfile::linexp(0.03, 0.01, 0.3, 0.4, 2.0);
        double expected =
            0.03 * (0.15 + 0.4 * (1.0 - std::exp(-(2.0 - 0.3) / 0.4)));
        CHECK(p.chi_integral() == Approx(expected).epsilon(1e-14));
        CHECK(p.chi(0.15) == Approx(0.015));
        CHECK(p.chi(0.3) == Approx(0.03));
        CHECK(p.chi(0.7) == Approx(0.03 * std::exp(-1.0)));
    }
    SECTION("sampled pulses interpolate and integrate") {
        auto p = PulseProfile::sampled({0.0, 1.0, 2.0}, {0.0, 0.02, 0.0},
                                       {0.0, 0.01, 0.0});
        CHECK(p.chi(0.5) == Approx(0.01));
        CHECK(p.gamma_integral() == Approx(0.01));
        CHECK_THROWS_AS(PulseProfile::sampled({0.0, 0.0}, {0.0, 0.0}), GridError);
    }
    SECTION("schedule validation") {
        auto p = PulseProfile::rectangular(0.01, 0.0, 1.0);
        CHECK_THROWS_AS(PulseSchedule(p, 0.5, 3), DomainError);
        CHECK_THROWS_AS(PulseSchedule(p, 2.0, -1), DomainError);
        CHECK_NOTHROW(PulseSchedule(p, 2.0, 0));
    }
}

TEST_CASE("photon distribution clamping") {
    PhotonDistribution d;
    d.values = {0.5, -5e-13, 0.5};
    d.clamp_negatives();
    CHECK(d.clamped);
    CHECK(d.values[1] == 0.0);
    PhotonDistribution bad;
    bad.values = {0.5, -1e-9};
    CHECK_THROWS_AS(bad.clamp_negatives(), ConsistencyError);
}
