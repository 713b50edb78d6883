#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dce/oracle.hpp"
#include "dce/pdf.hpp"

using namespace dce;
using namespace dce::oracle;
using Catch::Approx;

TEST_CASE("decomposition of reference states") {
    auto v = decompose(CovarianceState::vacuum());
    CHECK(v.n_bar == Approx(0.0).margin(1e-12));
    CHECK(v.r == Approx(0.0).margin(1e-12));

    auto th = decompose(CovarianceState::thermal(1.0));
    CHECK(th.n_bar == Approx(1.0).epsilon(1e-12));
    CHECK(th.r == Approx(0.0).margin(1e-12));

    auto sq = decompose(CovarianceState{std::exp(2.0) / 2.0,
                                        std::exp(-2.0) / 2.0, 0.0});
    CHECK(sq.n_bar == Approx(0.0).margin(1e-10));
    CHECK(sq.r == Approx(1.0).epsilon(1e-10));
    CHECK(sq.theta == Approx(0.0).margin(1e-12));
}

TEST_CASE("decomposition reconstructs the covariance entries") {
    std::mt19937_64 rng(321);
    std::uniform_real_distribution<double> nb(0.0, 5.0), rr(0.0, 1.5),
        th(-M_PI / 2.0, M_PI / 2.0);
    for (int i = 0; i < 60; ++i) {
        double nu = nb(rng) + 0.5, r = rr(rng), t = th(rng);
        double lp = nu * std::exp(2.0 * r), lm = nu * std::exp(-2.0 * r);
        double c = std::cos(t), s = std::sin(t);
        CovarianceState st{c * c * lp + s * s * lm, s * s * lp + c * c * lm,
                           c * s * (lp - lm)};
        auto rec = decompose(st).reconstruct();
        CHECK(rec.sigma_xx == Approx(st.sigma_xx).epsilon(1e-10).margin(1e-10));
        CHECK(rec.sigma_pp == Approx(st.sigma_pp).epsilon(1e-10).margin(1e-10));
        CHECK(rec.sigma_xp == Approx(st.sigma_xp).epsilon(1e-10).margin(1e-10));
    }
}

TEST_CASE("fock pdf of the vacuum") {
    auto f = fock_pdf(decompose(CovarianceState::vacuum()), 16);
    CHECK(f.values[0] == Approx(1.0).epsilon(1e-12));
    for (int m = 1; m < 16; ++m) CHECK(f.values[m] < 1e-12);
}

TEST_CASE("fock pdf of a thermal state is the diagonal passthrough") {
    auto f = fock_pdf(decompose(CovarianceState::thermal(1.0)), 200);
    for (int m = 0; m < 120; ++m)
        CHECK(f.values[m] == Approx(std::exp2(-(m + 1.0))).epsilon(1e-10).margin(1e-12));
}

TEST_CASE("fock pdf of the pure squeezed state matches the closed form") {
    auto d = decompose(CovarianceState::from_tau_delta(3.0, 0.25));
    CHECK(d.n_bar == Approx(0.0).margin(1e-9));
    CHECK(std::sinh(d.r) * std::sinh(d.r) == Approx(1.0).epsilon(1e-9));
    auto f = fock_pdf(d, 96);
    CHECK(f.values[0] == Approx(0.70710678118654752).epsilon(1e-8));
    CHECK(f.values[2] == Approx(0.17677669529663689).epsilon(1e-8));
    for (int m = 1; m < 60; m += 2) CHECK(f.values[m] < 1e-10);
}

TEST_CASE("squeeze operator is unitary on the interior block") {
    double r = 1.0;
    int dim = 200;
    auto u = squeeze_operator(r, 0.3, dim);
    int interior = dim - static_cast<int>(std::ceil(4.0 * std::exp(2.0 * r)));
    CHECK(unitarity_defect(u, interior) < 1e-9);
}

TEST_CASE("diagonal is independent of the squeeze orientation") {
    auto st = CovarianceState{1.8, 0.9, 0.55};
    auto d = decompose(st);
    auto f1 = fock_pdf(d, 160);
    auto d2 = d;
    d2.theta = 0.0;
    auto f2 = fock_pdf(d2, 160);
    for (int m = 0; m < 100; ++m)
        CHECK(f1.values[m] == Approx(f2.values[m]).margin(1e-12).epsilon(1e-9));
}

TEST_CASE("oracle agrees with the exact evaluator on a reference state") {
    CovarianceState st{7.0, 0.2, 0.6};
    auto d = decompose(st);
    int dim = 280;
    auto f = fock_pdf(d, dim);
    auto e = pdf::exact_pdf(st, 200);
    for (int m = 0; m <= 200; ++m) {
        if (e.values[m] > 1e-12)
            CHECK(f.values[m] == Approx(e.values[m]).epsilon(1e-8));
    }
    // mean within the truncation budget
    double mean = 0.0;
    for (std::size_t m = 0; m < f.values.size(); ++m)
        mean += static_cast<double>(m) * f.values[m];
    CHECK(mean == Approx(0.5 * (st.tau() - 1.0)).epsilon(1e-6));
}

TEST_CASE("insufficient dimension raises a truncation error") {
    auto d = decompose(CovarianceState::thermal(40.0));
    CHECK_THROWS_AS(fock_pdf(d, 48), TruncationError);
}
