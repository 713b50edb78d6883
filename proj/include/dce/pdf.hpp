#ifndef DCE_PDF_HPP
#define DCE_PDF_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "dce/core.hpp"
#include "dce/detail/dd.hpp"
#include "dce/errors.hpp"

namespace dce::pdf {

enum class Regime { smooth, oscillating, thermal_boundary };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::smooth: return "smooth";
        case Regime::oscillating: return "oscillating";
        case Regime::thermal_boundary: return "thermal-boundary";
    }
    return "?";
}

namespace detail {

using dce::detail::DD;

/// The covariance scalars that feed the exact evaluator. Computed in double,
/// upgraded to double-double when the cancellation detector fires (D- is a
/// difference of like-sized terms near the thermal boundary).
struct PdfScalars {
    double tau, delta, small_delta, d_plus, d_minus, r;
    double scale; ///< magnitude reference for D- (= D+)
};

inline PdfScalars compute_scalars(const CovarianceState& s) {
    PdfScalars p{};
    p.tau = s.tau();
    p.delta = s.delta();
    p.small_delta = 4.0 * p.delta - 1.0;
    p.d_plus = 1.0 + 4.0 * p.delta + 2.0 * p.tau;
    p.d_minus = 1.0 + 4.0 * p.delta - 2.0 * p.tau;
    p.scale = p.d_plus;
    double r2 = p.tau * p.tau - 4.0 * p.delta;
    p.r = r2 > 0.0 ? std::sqrt(r2) : 0.0;
    if (std::abs(p.d_minus) < 1e-2 * p.scale || r2 < 1e-2 * p.tau * p.tau) {
        // double-double pass
        DD sxx{s.sigma_xx}, spp{s.sigma_pp}, sxp{s.sigma_xp};
        DD tau = sxx + spp;
        DD delta = sxx * spp - sxp * sxp;
        DD sd = 4.0 * delta - DD{1.0};
        DD dp = DD{1.0} + 4.0 * delta + 2.0 * tau;
        DD dm = DD{1.0} + 4.0 * delta - 2.0 * tau;
        DD r2dd = tau * tau - 4.0 * delta;
        p.tau = tau.value();
        p.delta = delta.value();
        p.small_delta = sd.value();
        p.d_plus = dp.value();
        p.d_minus = dm.value();
        p.r = r2dd.value() > 0.0 ? dce::detail::sqrt(r2dd).value() : 0.0;
    }
    return p;
}

/// Residual resolution of the double-double pass relative to the inputs.
inline constexpr double kDdResolution = 1e-30;
/// |D-| below this (times scale) is the exact boundary for all practical m.
inline constexpr double kBoundaryEps = 1e-26;

/// log I0(z), z >= 0, safe for large z.
inline double log_bessel_i0(double z) {
    if (z < 30.0) return std::log(std::cyl_bessel_i(0.0, z));
    double inv = 1.0 / (8.0 * z);
    double series = 1.0 + inv * (1.0 + inv * (4.5 + inv * 37.5));
    return z - 0.5 * std::log(2.0 * M_PI * z) + std::log(series);
}

/// Olver-form asymptotic for log P_m(cosh(xi)), used only as a cross-check
/// against the recurrence (relative error ~ 1e-4 at m = 100, shrinking as 1/m).
inline double legendre_olver_log(int m, double x) {
    double xi = std::acosh(x);
    return 0.5 * std::log(xi / std::sinh(xi)) + log_bessel_i0((m + 0.5) * xi);
}

} // namespace detail

/// Scaled Legendre-recurrence evaluation record: P_m(argument) =
/// value * exp(log_scale). The argument is real with |x| >= 1 or purely
/// imaginary; for the imaginary axis the recurrence runs on the real,
/// all-positive sequence Q_m = i^{-m} P_m(i y).
struct LegendreEval {
    int degree = 0;
    std::complex<double> argument;
    double log_scale = 0.0;
    std::complex<double> value{1.0, 0.0};
};

/// Evaluate P_m by the upward three-term recurrence with per-step rescaling.
/// Upward is the stable direction here: outside [-1, 1] (and on the imaginary
/// axis after the i^m factoring) P_m is the dominant solution, growing like
/// (|x| + sqrt(x^2 -+ 1))^m, so relative error stays O(m * eps).
inline LegendreEval legendre_scaled(int m, std::complex<double> x) {
    if (m < 0) throw DomainError("pdf", "m", "degree must be >= 0");
    bool imag_axis = (x.real() == 0.0 && x.imag() != 0.0);
    if (!imag_axis && std::abs(x.imag()) > 0.0)
        throw DomainError("pdf", "x", "argument must be real or purely imaginary");
    double a = imag_axis ? std::abs(x.imag()) : x.real();
    double sign_flip = (!imag_axis && a < 0.0) ? -1.0 : 1.0; // P_m(-x) = (-1)^m P_m(x)
    a = std::abs(a);

    LegendreEval out;
    out.degree = m;
    out.argument = x;
    double p_prev = 1.0; // P_0 (or Q_0)
    double p_cur = a;    // P_1 (or Q_1)
    double log_scale = 0.0;
    const double big = 0x1p500, inv_big = 0x1p-500;
    const double ln_big = 500.0 * std::log(2.0);
    if (m >= 2) {
        for (int k = 1; k < m; ++k) {
            double nxt;
            if (imag_axis)
                nxt = ((2.0 * k + 1.0) * a * p_cur + k * p_prev) / (k + 1.0);
            else
                nxt = ((2.0 * k + 1.0) * a * p_cur - k * p_prev) / (k + 1.0);
            p_prev = p_cur;
            p_cur = nxt;
            double mag = std::max(std::abs(p_cur), std::abs(p_prev));
            if (mag > big) {
                p_cur *= inv_big;
                p_prev *= inv_big;
                log_scale += ln_big;
            } else if (mag < inv_big && mag > 0.0) {
                p_cur *= big;
                p_prev *= big;
                log_scale -= ln_big;
            }
        }
    }
    double base = (m == 0) ? 1.0 : (m == 1 ? a : p_cur);
    if (m <= 1) log_scale = 0.0;
    out.log_scale = log_scale;
    if (imag_axis) {
        // P_m(i y) = i^m Q_m; the input sign of y only flips odd degrees
        std::complex<double> im{0.0, x.imag() > 0.0 ? 1.0 : -1.0};
        std::complex<double> phase{1.0, 0.0};
        for (int k = 0; k < m % 4; ++k) phase *= im;
        out.value = phase * base;
    } else {
        out.value = (m % 2 == 1 ? sign_flip : 1.0) * base;
    }
    return out;
}

/// Regime of the photon distribution: sign of D- with a dead band mapped to
/// the boundary tag.
inline Regime classify_regime(const CovarianceState& s) {
    auto p = detail::compute_scalars(s);
    if (std::abs(p.d_minus) < kBoundaryDeadBand) return Regime::thermal_boundary;
    return p.d_minus > 0.0 ? Regime::smooth : Regime::oscillating;
}

/// Exact photon-number distribution of a zero-mean Gaussian state.
///
/// f(m) = 2 D-^{m/2} / D+^{(m+1)/2} * P_m(delta / sqrt(D+ D-)), evaluated
/// with the scaled recurrence and log-space prefactors. The D- < 0 branch
/// uses sqrt(D-) = i sqrt(|D-|) consistently in both the prefactor and the
/// argument, which reduces to the real, cancellation-free Q_m sequence.
///
/// m_max < 0 selects the automatic cutoff: smallest M whose geometric tail
/// bound is < 1e-9, capped at 1e6.
inline PhotonDistribution exact_pdf(const CovarianceState& state, long m_max = -1) {
    auto p = detail::compute_scalars(state);
    const double ln2 = std::log(2.0);
    const double ln_dp = std::log(p.d_plus);
    // geometric pair ratio of the tail
    const double q = (p.small_delta + 2.0 * p.r) / p.d_plus;
    const double q2 = q * q;

    PhotonDistribution dist;
    dist.method = PhotonDistribution::Method::exact;
    dist.tau = p.tau;
    dist.tail_ratio = q;

    const long cap = 1000000;
    const bool auto_stop = m_max < 0;
    const long hard_max = auto_stop ? cap : m_max;
    if (hard_max > cap)
        throw DomainError("pdf", "m_max", "m_max exceeds the 1e6 cap");
    dist.values.reserve(auto_stop ? 256 : hard_max + 1);

    const bool boundary = std::abs(p.d_minus) <= detail::kBoundaryEps * p.scale;
    if (!boundary) {
        // precision of D- limits how far the recurrence stays meaningful
        double rel = detail::kDdResolution * p.scale / std::abs(p.d_minus);
        if (0.5 * static_cast<double>(hard_max) * rel > 1e-9)
            throw PrecisionError(
                "pdf", "D_minus",
                "all significant digits of D- would be lost before m_max",
                "use extended precision or reduce m_max");
    }

    auto tail_ok = [&](long m) {
        if (m < 16 || dist.values.size() < 2) return false;
        double fm = dist.values[m];
        double fm1 = dist.values[m - 1];
        double tb = (fm + fm1) * q2 / (1.0 - q2) * 1.25;
        return tb < 1e-9;
    };

    if (boundary) {
        // D- -> 0 limit: f(m) = 2 C(m) delta^m / D+^{(2m+1)/2},
        // C(m) = (2m-1)!!/m!; 0^0 at m=0 evaluates as 1 (thermal continuity).
        double ln_sd = p.small_delta > 0.0 ? std::log(p.small_delta)
                                           : -std::numeric_limits<double>::infinity();
        for (long m = 0; m <= hard_max; ++m) {
            double lc = std::lgamma(2.0 * m + 1.0) - m * ln2 -
                        2.0 * std::lgamma(m + 1.0);
            double lf = ln2 + lc + (m > 0 ? m * ln_sd : 0.0) - (m + 0.5) * ln_dp;
            dist.values.push_back(std::exp(lf));
            if (auto_stop && tail_ok(m)) break;
        }
    } else {
        const bool oscillating = p.d_minus < 0.0;
        const double abs_dm = std::abs(p.d_minus);
        const double ln_dm = std::log(abs_dm);
        const double arg = p.small_delta / std::sqrt(p.d_plus * abs_dm);
        double p_prev = 1.0, p_cur = arg, log_scale = 0.0;
        const double big = 0x1p500, inv_big = 0x1p-500;
        const double ln_big = 500.0 * std::log(2.0);
        auto value_at = [&](long m, double pm) {
            double lp = pm > 0.0 ? std::log(pm) + log_scale
                                 : -std::numeric_limits<double>::infinity();
            double lf = ln2 + 0.5 * m * ln_dm - 0.5 * (m + 1.0) * ln_dp + lp;
            return std::exp(lf);
        };
        dist.values.push_back(value_at(0, 1.0));
        if (hard_max >= 1) dist.values.push_back(value_at(1, arg));
        for (long m = 2; m <= hard_max; ++m) {
            long k = m - 1;
            double nxt;
            if (oscillating)
                nxt = ((2.0 * k + 1.0) * arg * p_cur + k * p_prev) / (k + 1.0);
            else
                nxt = ((2.0 * k + 1.0) * arg * p_cur - k * p_prev) / (k + 1.0);
            p_prev = p_cur;
            p_cur = nxt;
            double mag = std::max(std::abs(p_cur), std::abs(p_prev));
            if (mag > big) {
                p_cur *= inv_big;
                p_prev *= inv_big;
                log_scale += ln_big;
            } else if (mag < inv_big && mag > 0.0) {
                p_cur *= big;
                p_prev *= big;
                log_scale -= ln_big;
            }
            dist.values.push_back(value_at(m, p_cur));
            if (auto_stop && tail_ok(m)) break;
        }
    }

    long last = static_cast<long>(dist.values.size()) - 1;
    double f_end = dist.values[last];
    double f_end1 = last >= 1 ? dist.values[last - 1] : 0.0;
    dist.tail_bound = (f_end + f_end1) * q2 / (1.0 - q2) * 1.25;
    dist.clamp_negatives();
    return dist;
}

/// Ideal squeezed-vacuum distribution: f(2k) from the closed form via
/// log-factorials, f(odd) = 0.
inline double ideal_squeezed_pdf(double n_mean, long m) {
    if (n_mean < 0.0)
        throw DomainError("pdf", "n_mean", "mean photon number must be >= 0");
    if (m < 0) throw DomainError("pdf", "m", "m must be >= 0");
    if (m % 2 == 1) return 0.0;
    if (n_mean == 0.0) return m == 0 ? 1.0 : 0.0;
    double k = static_cast<double>(m / 2);
    double lf = k * std::log(n_mean) - (k + 0.5) * std::log1p(n_mean) +
                std::lgamma(2.0 * k + 1.0) -
                2.0 * (k * std::log(2.0) + std::lgamma(k + 1.0));
    return std::exp(lf);
}

inline PhotonDistribution ideal_squeezed_distribution(double n_mean, long m_max) {
    PhotonDistribution d;
    d.method = PhotonDistribution::Method::ideal_squeezed;
    d.tau = 2.0 * n_mean + 1.0;
    d.g0 = 1.0;
    d.values.resize(m_max + 1);
    for (long m = 0; m <= m_max; ++m) d.values[m] = ideal_squeezed_pdf(n_mean, m);
    double rho = n_mean / (1.0 + n_mean);
    d.tail_ratio = std::sqrt(rho);
    long k = m_max / 2;
    d.tail_bound = d.values[2 * k] * rho / (1.0 - rho) * 1.25;
    return d;
}

/// Smooth superchaotic density (the D- > 0 regime at large N and m).
inline double asymptotic_smooth(double n_mean, double m) {
    return std::exp(-(m + 0.5) / (2.0 * n_mean)) /
           std::sqrt(2.0 * M_PI * n_mean * (m + 0.5));
}

inline std::vector<Warning> smooth_validity_warnings(double n_mean, double m) {
    std::vector<Warning> w;
    if (n_mean < 50.0)
        w.push_back({"asymptotic_smooth assumes N >> 1 (N < 50 given)"});
    if (m < 5.0) w.push_back({"asymptotic_smooth assumes m >> 1 (m < 5 given)"});
    return w;
}

inline PhotonDistribution smooth_distribution(double n_mean, long m_max) {
    PhotonDistribution d;
    d.method = PhotonDistribution::Method::asymptotic_smooth;
    d.tau = 2.0 * n_mean + 1.0;
    d.values.resize(m_max + 1);
    for (long m = 0; m <= m_max; ++m)
        d.values[m] = asymptotic_smooth(n_mean, static_cast<double>(m));
    // integral tail + the O(tau^{-1/2}) Euler-Maclaurin deficit allowance
    d.tail_bound = std::erfc(std::sqrt((m_max + 0.5) / (2.0 * n_mean))) +
                   0.7 / std::sqrt(d.tau);
    d.tail_ratio = std::exp(-0.5 / n_mean);
    return d;
}

/// Two-term oscillating asymptote for D- < 0: smooth part plus a (-1)^m
/// parity component, all powers in log space.
///
/// b and c are the pulse-train context (2 Delta = b tau + c); b only feeds the
/// validity warning and may be omitted.
inline double asymptotic_oscillating(double tau, double delta, double m,
                                     double b = -1.0, double c = 0.0,
                                     std::vector<Warning>* warn = nullptr) {
    (void)c;
    double small_delta = 4.0 * delta - 1.0;
    double d_plus = 1.0 + 4.0 * delta + 2.0 * tau;
    double d_minus = 1.0 + 4.0 * delta - 2.0 * tau;
    if (d_minus >= 0.0)
        throw RegimeError("pdf", "D_minus", "state is not in the oscillating regime",
                          "use asymptotic_smooth");
    if (warn) {
        double beff = b >= 0.0 ? b : 2.0 * delta / tau;
        if (beff > 0.9)
            warn->push_back({"1 - b is small; the oscillating expansion degrades"});
    }
    double r = std::sqrt(tau * tau - 4.0 * delta);
    double log_a = std::log((2.0 * r + small_delta) / d_plus);
    double log_b = std::log(-d_minus / (2.0 * r + small_delta));
    double pref = 1.0 / std::sqrt(M_PI * (m + 0.5) * r);
    double parity = (static_cast<long>(m) % 2 == 0) ? 1.0 : -1.0;
    return pref * (std::exp((m + 0.5) * log_a) + parity * std::exp((m + 0.5) * log_b));
}

inline PhotonDistribution oscillating_distribution(double tau, double delta,
                                                   long m_max, double g0 = 1.0) {
    PhotonDistribution d;
    d.method = PhotonDistribution::Method::asymptotic_oscillating;
    d.tau = tau;
    d.g0 = g0;
    d.values.resize(m_max + 1);
    for (long m = 0; m <= m_max; ++m)
        d.values[m] = asymptotic_oscillating(tau, delta, static_cast<double>(m));
    d.clamp_negatives();
    double r = std::sqrt(tau * tau - 4.0 * delta);
    double a = (2.0 * r + 4.0 * delta - 1.0) / (1.0 + 4.0 * delta + 2.0 * tau);
    d.tail_ratio = a;
    d.tail_bound = d.values[m_max] * a / (1.0 - a) * 1.25 + 0.7 / std::sqrt(tau);
    return d;
}

/// Small-dissipation form: oscillation amplitude decays with G0^2; at G0 = 1
/// odd m cancel exactly and even m double.
inline double asymptotic_small_dissipation(double tau, double g0, double m) {
    double pref = 1.0 / std::sqrt(M_PI * tau * (m + 0.5));
    double parity = (static_cast<long>(m) % 2 == 0) ? 1.0 : -1.0;
    return pref * (std::exp(-(m + 0.5) / tau) +
                   parity * std::exp(-(m + 0.5) * g0 * g0 / tau));
}

inline std::vector<Warning> small_dissipation_warnings(double tau, double g0,
                                                       double m) {
    std::vector<Warning> w;
    if (tau < 50.0) w.push_back({"small-dissipation form assumes tau >> 1"});
    if (m < 5.0) w.push_back({"small-dissipation form assumes m >> 1"});
    if (m >= 0.25 * tau * tau)
        w.push_back({"m approaches tau^2; the (1-x)^m ~ e^{-mx} step degrades"});
    if (g0 > 3.5)
        w.push_back({"oscillations are visible only for G0 ~ 1"});
    return w;
}

inline PhotonDistribution small_dissipation_distribution(double tau, double g0,
                                                         long m_max) {
    PhotonDistribution d;
    d.method = PhotonDistribution::Method::asymptotic_oscillating;
    d.tau = tau;
    d.g0 = g0;
    d.values.resize(m_max + 1);
    for (long m = 0; m <= m_max; ++m)
        d.values[m] = asymptotic_small_dissipation(tau, g0, static_cast<double>(m));
    d.clamp_negatives();
    d.tail_ratio = std::exp(-1.0 / tau);
    d.tail_bound = std::erfc(std::sqrt((m_max + 0.5) / tau)) + 0.7 / std::sqrt(tau);
    return d;
}

} // namespace dce::pdf

#endif // DCE_PDF_HPP
