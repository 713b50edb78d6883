#ifndef DCE_STATS_HPP
#define DCE_STATS_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "dce/core.hpp"
#include "dce/errors.hpp"

namespace dce::stats {

/// Invariant squeezing: the minimum of the freely-rotating variance
/// sigma_xx(t), normalized to the vacuum value 1/2.
struct SqueezingReport {
    double s = 1.0;          ///< 4 Delta / (tau + sqrt(tau^2 - 4 Delta))
    double t_min = 0.0;      ///< rotation phase minimizing sigma_xx, in [0, pi)
    double sigma_min = 0.5;  ///< the minimized variance
    std::optional<double> asymptote; ///< G Lambda/(nu+Lambda) if context given
};

struct PulseTrainContext {
    double nu;
    double lambda;
    double g;
};

inline double squeezing_asymptote(double nu, double lambda, double g) {
    if (nu < 0.0 || lambda < 0.0 || g < 1.0)
        throw DomainError("stats", "nu/Lambda/G", "invalid pulse-train context");
    if (nu + lambda == 0.0)
        throw DomainError("stats", "nu+Lambda", "undefined asymptote for nu = Lambda = 0");
    return g * lambda / (nu + lambda);
}

inline SqueezingReport invariant_squeezing(
    const CovarianceState& state,
    const std::optional<PulseTrainContext>& ctx = std::nullopt) {
    double tau = state.tau();
    double delta = state.delta();
    double r2 = tau * tau - 4.0 * delta;
    double r = r2 > 0.0 ? std::sqrt(r2) : 0.0;
    SqueezingReport rep;
    rep.s = 4.0 * delta / (tau + r);
    rep.sigma_min = 2.0 * delta / (tau + r); // (tau - r)/2, cancellation-free
    double phi0 = std::atan2(2.0 * state.sigma_xp, state.sigma_xx - state.sigma_pp);
    rep.t_min = 0.5 * (phi0 + M_PI);
    if (rep.t_min >= M_PI) rep.t_min -= M_PI;
    if (rep.t_min < 0.0) rep.t_min += M_PI;
    if (ctx) rep.asymptote = squeezing_asymptote(ctx->nu, ctx->lambda, ctx->g);
    return rep;
}

/// Photon-number variance of a zero-mean Gaussian state:
/// sigma_N = tau^2/2 - Delta - 1/4 (thermal states give N(N+1)).
inline double number_variance(const CovarianceState& state) {
    double tau = state.tau();
    return 0.5 * tau * tau - state.delta() - 0.25;
}

/// N^k (2k-1)!! -- the smooth-regime moment prediction, via log factorials.
inline double superchaotic_moment(double n_mean, int k) {
    if (k < 0 || k > 8)
        throw DomainError("stats", "k", "moment order limited to 0..8");
    if (k == 0) return 1.0;
    double log_dd = std::lgamma(2.0 * k + 1.0) - k * std::log(2.0) -
                    std::lgamma(k + 1.0); // (2k-1)!!
    return std::exp(k * std::log(n_mean) + log_dd);
}

/// k-th moment sum over the stored distribution with the truncation tail
/// propagated; the tail estimate uses the stored geometric pair ratio.
inline double distribution_moments(const PhotonDistribution& dist, int k) {
    if (k < 0 || k > 8)
        throw PrecisionError("stats", "k",
                             "moments above k = 8 are dominated by tail truncation",
                             "request a larger m_max and k <= 8");
    double norm = dist.sum() + dist.tail_bound;
    if (!(norm > 1.0 - std::max(1e-6, 3.0 * dist.tail_bound)) || norm > 1.5)
        throw DomainError("stats", "dist", "distribution is not normalized");
    double s = 0.0, c = 0.0;
    for (std::size_t m = 0; m < dist.values.size(); ++m) {
        double term = dist.values[m] * std::pow(static_cast<double>(m),
                                                static_cast<double>(k));
        double y = term - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    if (k == 0) return s;
    // tail moment bound: sum over f(M) q^j (M+j)^k with the stored pair ratio
    double q = dist.tail_ratio;
    if (q > 0.0 && q < 1.0 && !dist.values.empty()) {
        double big_m = static_cast<double>(dist.values.size() - 1);
        double f_end = dist.values.back();
        double tail = 0.0;
        double qj = 1.0;
        for (int j = 1; j < 2000000; ++j) {
            qj *= q;
            double term = f_end * qj *
                          std::pow(big_m + j, static_cast<double>(k));
            tail += term;
            if (term < 1e-6 * tail || term < 1e-300) break;
        }
        if (tail > 1e-6 * std::abs(s) && tail > 1e-12)
            throw PrecisionError("stats", "tail",
                                 "truncation tail dominates the requested moment",
                                 "increase m_max");
    }
    return s;
}

/// Normalization audit of a distribution: the plain sum plus the predicted
/// residual scale of its evaluation method (exact formulas should sum to 1;
/// the smooth asymptote misses O(tau^{-1/2}); paired oscillating terms are
/// predicted to contribute ~ G0/(2 tau)).
struct NormCheck {
    double sum = 0.0;
    double correction_estimate = 0.0;
};

inline NormCheck euler_maclaurin_norm_check(const PhotonDistribution& dist) {
    NormCheck out;
    out.sum = dist.sum();
    switch (dist.method) {
        case PhotonDistribution::Method::asymptotic_smooth:
            out.correction_estimate = 0.5 * std::sqrt(2.0 / (M_PI * dist.tau));
            break;
        case PhotonDistribution::Method::asymptotic_oscillating:
        case PhotonDistribution::Method::ideal_squeezed:
            out.correction_estimate =
                std::isnan(dist.g0) ? 1.0 / std::sqrt(dist.tau)
                                    : dist.g0 / (2.0 * dist.tau);
            break;
        case PhotonDistribution::Method::exact:
        case PhotonDistribution::Method::oracle:
            out.correction_estimate = dist.tail_bound;
            break;
    }
    return out;
}

} // namespace dce::stats

#endif // DCE_STATS_HPP
