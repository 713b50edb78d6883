#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "dce/dynamics.hpp"
#include "dce/pulsetrain.hpp"

using namespace dce;
using namespace dce::dynamics;
using Catch::Approx;
using cplxd = std::complex<double>;

namespace {

PulseSchedule free_schedule(int periods) {
    // chi = 0, gamma = 0: "pulses" that do nothing
    auto p = PulseProfile::rectangular(0.0, 0.0, 1.0);
    return PulseSchedule(p, 2.0 * M_PI, periods);
}

} // namespace

TEST_CASE("free oscillator stays on the unit circle") {
    auto tr = integrate_xi(free_schedule(5));
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        CHECK(std::abs(tr.xi[i]) == Approx(1.0).epsilon(1e-11));
        double e = 0.5 * (std::norm(tr.xi[i]) + std::norm(tr.xi_dot[i]));
        CHECK(e == Approx(1.0).epsilon(1e-11));
        // phase convention: xi = e^{-it}
        cplxd expect = std::exp(cplxd(0.0, -tr.t[i]));
        CHECK(std::abs(tr.xi[i] - expect) < 1e-9);
    }
    CHECK(tr.max_wronskian_error < 1e-9);
}

TEST_CASE("rectangular pulse against the piecewise trigonometric solution") {
    double eps = 0.01, tp = M_PI;
    auto p = PulseProfile::rectangular(eps, 0.0, tp);
    PulseSchedule sch(p, 2.0 * M_PI, 1);
    auto tr = integrate_xi(sch);
    double wt = 1.0 + eps;
    double max_err = 0.0;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        double t = tr.t[i];
        cplxd exact;
        if (t <= tp + 1e-12) {
            exact = cplxd(std::cos(wt * t), -std::sin(wt * t) / wt);
        } else {
            cplxd xb(std::cos(wt * tp), -std::sin(wt * tp) / wt);
            cplxd xdb(-wt * std::sin(wt * tp), -std::cos(wt * tp));
            double s = t - tp;
            exact = xb * std::cos(s) + xdb * std::sin(s);
        }
        max_err = std::max(max_err, std::abs(tr.xi[i] - exact));
    }
    CHECK(max_err < 1e-8);
    CHECK(tr.max_wronskian_error < 1e-9);
}

TEST_CASE("no dissipation means no noise influx") {
    double eps = 0.02;
    auto p = PulseProfile::rectangular(eps, 0.0, 1.2);
    PulseSchedule sch(p, M_PI, 20);
    auto tr = simulate(sch, ReservoirParams(1.0, 1.0));
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        CHECK(tr.j[i] == 0.0);
        CHECK(std::abs(tr.j_tilde[i]) == 0.0);
    }
}

TEST_CASE("constant damping relaxes to the reservoir equilibrium") {
    // chi = 0, gamma = g0 throughout: J = (G/2)(1 - e^{-2 Gamma}), J~ = 0
    double g = 0.05, big_g = 2.0, g0_init = 5.0;
    auto p = PulseProfile::rectangular(0.0, g, 2.0 * M_PI);
    PulseSchedule sch(p, 2.0 * M_PI, 12); // back-to-back damping windows
    auto tr = simulate(sch, ReservoirParams(big_g, g0_init));
    for (std::size_t i = 0; i < tr.t.size(); i += 7) {
        double gamma = tr.gamma_acc[i];
        CHECK(gamma == Approx(g * tr.t[i]).epsilon(1e-12).margin(1e-15));
        double jref = 0.5 * big_g * (1.0 - std::exp(-2.0 * gamma));
        CHECK(tr.j[i] == Approx(jref).margin(1e-8));
        CHECK(std::abs(tr.j_tilde[i]) < 1e-8);
    }
    // sigma approaches G/2 inside a shrinking envelope
    for (std::size_t i = 8; i < tr.t.size(); i += 13) {
        auto st = covariance_at(tr, tr.t[i], g0_init);
        double env = 0.5 * std::abs(g0_init - big_g) *
                         std::exp(-2.0 * tr.gamma_acc[i]) +
                     1e-6;
        CHECK(std::abs(st.sigma_xx - 0.5 * big_g) <= env);
        CHECK(std::abs(st.sigma_pp - 0.5 * big_g) <= env);
        CHECK(std::abs(st.sigma_xp) <= 1e-6);
    }
    CHECK(tr.quadrature_error_estimate < 1e-8);
}

TEST_CASE("free evolution of vacuum and thermal states") {
    auto sch = free_schedule(3);
    auto tr = simulate(sch, ReservoirParams(1.0, 1.0));
    auto st = covariance_at(tr, tr.t.back(), 1.0);
    CHECK(st.sigma_xx == Approx(0.5).epsilon(1e-10));
    CHECK(st.sigma_pp == Approx(0.5).epsilon(1e-10));
    CHECK(st.sigma_xp == Approx(0.0).margin(1e-10));

    auto mp0 = mean_photons(tr, sch, tr.t.back(), 1.0);
    CHECK(mp0.total == Approx(0.0).margin(1e-10));
    auto mp3 = mean_photons(tr, sch, tr.t.back(), 3.0);
    CHECK(mp3.total == Approx(1.0).epsilon(1e-10));
    CHECK(mp3.signal == Approx(1.0).epsilon(1e-10));
    CHECK(mp3.reservoir == Approx(0.0).margin(1e-12));
}

TEST_CASE("purity is preserved without damping") {
    double eps = 0.015, tp = 1.1655612;
    auto p = PulseProfile::rectangular(eps, 0.0, tp);
    double phi = -eps * tp;
    PulseSchedule sch(p, M_PI + phi, 30);
    auto tr = simulate(sch, ReservoirParams(1.0, 1.0));
    for (double g0 : {1.0, 4.0}) {
        auto st = covariance_at(tr, tr.t.back(), g0);
        CHECK(st.delta() == Approx(0.25 * g0 * g0).epsilon(1e-8));
    }
}

TEST_CASE("photon decomposition equals the covariance route") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ue(0.0, 0.03), ug(0.0, 0.01),
        ud(0.6, 2.8), un(1.0, 3.99), ug0(1.0, 6.0), uG(1.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        double dur = ud(rng);
        PulseProfile p =
            (trial % 2 == 0)
                ? PulseProfile::rectangular(ue(rng), ug(rng), dur)
                : PulseProfile::linexp(ue(rng), ug(rng), 0.3 * dur, 0.4 * dur, dur);
        int n = 1 + static_cast<int>(un(rng));
        PulseSchedule sch(p, dur + 1.0, n);
        double g = uG(rng), g0 = ug0(rng);
        auto tr = simulate(sch, ReservoirParams(g, g0));
        auto st = covariance_at(tr, tr.t.back(), g0);
        auto mp = mean_photons(tr, sch, tr.t.back(), g0);
        double n_cov = 0.5 * (st.tau() - 1.0);
        CHECK(mp.total == Approx(n_cov).margin(1e-9).epsilon(1e-9));
        CHECK(tr.max_wronskian_error < 1e-9);
    }
}

TEST_CASE("single-pulse quadratures agree with the closed-form coefficients") {
    double eps = 0.01, tp = 1.1655612;
    double lam = 0.005;
    auto p = PulseProfile::rectangular(eps, lam / tp, tp);
    auto coef = pulsetrain::pulse_coefficients(p, 1.0);
    REQUIRE(coef.nu == Approx(eps * std::sin(tp)).epsilon(1e-6));
    PulseSchedule sch(p, M_PI + coef.phi, 1);
    auto tr = simulate(sch, ReservoirParams(1.0, 1.0));
    auto sum = pulsetrain::evolve_summary(coef.nu, coef.lambda, 1.0, 1.0, 1);
    double j_ode = tr.j.back();
    CHECK(j_ode == Approx(sum.j_n.to_double()).epsilon(0.02));
}

TEST_CASE("mean photons warns inside a pulse window") {
    auto p = PulseProfile::rectangular(0.02, 0.0, 1.5);
    PulseSchedule sch(p, M_PI, 2);
    auto tr = simulate(sch, ReservoirParams(1.0, 1.0));
    double t_inside = tr.t[4];
    REQUIRE(t_inside < 1.5);
    auto mp = mean_photons(tr, sch, t_inside, 1.0);
    CHECK(!mp.warnings.empty());
    auto mp_end = mean_photons(tr, sch, tr.t.back(), 1.0);
    CHECK(mp_end.warnings.empty());
}

TEST_CASE("scaled-frequency runs reproduce the unit-frequency physics") {
    // same dimensionless pulse, expressed at omega0 = 2
    double eps = 0.02, tp1 = 1.2, lam = 0.004;
    auto p1 = PulseProfile::rectangular(eps, lam / tp1, tp1);
    auto c1 = pulsetrain::pulse_coefficients(p1, 1.0);
    PulseSchedule s1(p1, pulsetrain::resonance_period(1.0, c1.phi, 1), 40);
    auto tr1 = simulate(s1, ReservoirParams(1.0, 1.0, 1.0));
    auto n1 = mean_photons(tr1, s1, tr1.t.back(), 1.0);

    double om = 2.0, tp2 = tp1 / om;
    auto p2 = PulseProfile::rectangular(eps, om * lam / tp1, tp2);
    auto c2 = pulsetrain::pulse_coefficients(p2, om);
    CHECK(c2.nu == Approx(c1.nu).epsilon(1e-9));
    CHECK(c2.phi == Approx(c1.phi).epsilon(1e-9));
    CHECK(c2.lambda == Approx(c1.lambda).epsilon(1e-9));
    PulseSchedule s2(p2, pulsetrain::resonance_period(om, c2.phi, 1), 40);
    auto tr2 = simulate(s2, ReservoirParams(1.0, 1.0, om));
    auto n2 = mean_photons(tr2, s2, tr2.t.back(), 1.0);
    CHECK(n2.total == Approx(n1.total).epsilon(1e-6));
}

TEST_CASE("omega must stay positive") {
    auto p = PulseProfile::rectangular(-1.5, 0.0, 1.0);
    PulseSchedule sch(p, M_PI, 1);
    CHECK_THROWS_AS(integrate_xi(sch), DomainError);
}

TEST_CASE("covariance_at rejects off-grid times") {
    auto tr = simulate(free_schedule(1), ReservoirParams(1.0, 1.0));
    CHECK_THROWS_AS(covariance_at(tr, 0.1234567, 1.0), GridError);
}
