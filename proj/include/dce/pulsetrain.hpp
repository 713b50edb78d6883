#ifndef DCE_PULSETRAIN_HPP
#define DCE_PULSETRAIN_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "dce/core.hpp"
#include "dce/errors.hpp"
#include "dce/logspace.hpp"

namespace dce::pulsetrain {

/// Per-pulse coefficients: parametric gain nu, loss Lambda, asymmetry phase phi.
struct PulseCoefficients {
    double nu = 0.0;      ///< |integral of omega0 chi e^{-2 i omega0 t} dt|
    double lambda = 0.0;  ///< integral of gamma dt
    double phi = 0.0;     ///< -omega0 * integral of chi dt
};

/// Composite-Simpson evaluation of the three pulse integrals (same quadrature
/// family as the dynamics module; denser, since these are one-off).
inline PulseCoefficients pulse_coefficients(const PulseProfile& pulse,
                                            double omega0 = 1.0) {
    if (!(omega0 > 0.0))
        throw DomainError("pulsetrain", "omega0", "omega0 must be > 0");
    const double tp = pulse.duration();
    int n = 4 * std::max(64, static_cast<int>(std::ceil(tp * omega0 * 64.0)));
    const double h = tp / n;
    std::complex<double> acc{0.0, 0.0};
    double acc_chi = 0.0, acc_gam = 0.0;
    for (int i = 0; i < n; i += 2) {
        double t0 = h * i, t1 = h * (i + 1), t2 = h * (i + 2);
        auto f = [&](double t) {
            return pulse.chi(t) *
                   std::exp(std::complex<double>(0.0, -2.0 * omega0 * t));
        };
        acc += h / 3.0 * (f(t0) + 4.0 * f(t1) + f(t2));
        acc_chi += h / 3.0 * (pulse.chi(t0) + 4.0 * pulse.chi(t1) + pulse.chi(t2));
        acc_gam += h / 3.0 *
                   (pulse.gamma(t0) + 4.0 * pulse.gamma(t1) + pulse.gamma(t2));
    }
    PulseCoefficients out;
    out.nu = omega0 * std::abs(acc);
    out.lambda = acc_gam;
    out.phi = -omega0 * acc_chi;
    return out;
}

/// Pulse repetition period phase-locked to the mode.
///
/// The lock condition is that the total phase accumulated per period,
/// omega0 T + omega0 * integral(chi), equals m pi; with
/// phi = -omega0 * integral(chi) this gives T = (T0/2) (m + phi/pi).
/// (Scans of N over T confirm the growth peak sits at this value.)
inline double resonance_period(double omega0, double phi, int m) {
    if (m < 1)
        throw DomainError("pulsetrain", "m", "resonance order m must be >= 1");
    double t0 = 2.0 * M_PI / omega0;
    return 0.5 * t0 * (m + phi / M_PI);
}

/// Closed-form state summary after n resonant pulses. All exponentially large
/// quantities are carried in log space (2 n nu up to ~700 is fine).
struct PulseTrainSummary {
    double nu = 0.0;
    double lambda = 0.0;
    double phi = 0.0;
    int count = 0;
    double g = 1.0;
    double g0 = 1.0;

    LogVal e_n;        ///< cosh(2 n nu)
    LogVal e_tilde_n;  ///< |E~_n| = sinh(2 n nu)
    LogVal a_plus;
    LogVal a_minus;
    LogVal j_n;        ///< A+ + A-
    LogVal j_tilde_n;  ///< A+ - A- (signed; |J~_n| is its magnitude)
    LogVal tau_n;
    LogVal delta_n;
    LogVal n_mean;     ///< (tau - 1)/2

    std::vector<Warning> warnings;

    double n_photons() const { return n_mean.to_double("N_n"); }
    double tau() const { return tau_n.to_double("tau_n"); }
    double delta() const { return delta_n.to_double("Delta_n"); }
};

/// Evaluate the closed forms for n pulses of gain nu and loss Lambda.
///
/// A- has a removable singularity at nu = Lambda; it is evaluated through
/// expm1(z)/z, continuous across the boundary. tau is assembled in the
/// cancellation-free split 2 cosh(x) Jeff - 2 sinh(x) J~ =
/// e^x (2A- + g) + e^{-x} (2A+ + g), g = (G0/2) e^{-2 n Lambda}, and
/// Delta = (2A- + g)(2A+ + g) exactly.
inline PulseTrainSummary evolve_summary(double nu, double lambda, double g, double g0,
                                        int n) {
    if (n < 0) throw DomainError("pulsetrain", "n", "pulse count must be >= 0");
    if (nu < 0.0) throw DomainError("pulsetrain", "nu", "nu must be >= 0");
    if (lambda < 0.0)
        throw DomainError("pulsetrain", "Lambda", "Lambda must be >= 0");
    if (g < 1.0) throw DomainError("pulsetrain", "G", "G must be >= 1");
    if (g0 < 1.0) throw DomainError("pulsetrain", "G0", "G0 must be >= 1");

    PulseTrainSummary s;
    s.nu = nu;
    s.lambda = lambda;
    s.count = n;
    s.g = g;
    s.g0 = g0;
    if (nu > 0.1)
        s.warnings.push_back({"nu = " + std::to_string(nu) +
                              " is not small; closed forms assume nu << 1"});
    if (lambda > 0.1)
        s.warnings.push_back({"Lambda = " + std::to_string(lambda) +
                              " is not small; closed forms assume Lambda << 1"});

    const double x = 2.0 * n * nu;
    s.e_n = LogVal::from_log(log_cosh(x));
    s.e_tilde_n = x > 0.0 ? LogVal::from_log(log_sinh(x)) : LogVal::zero();

    if (lambda == 0.0 || n == 0) {
        s.a_plus = LogVal::zero();
        s.a_minus = LogVal::zero();
    } else {
        // A+ = G L / (4 (L + nu)) * e^{2 n nu} (1 - e^{-2n(nu+L)})
        s.a_plus = LogVal::from_log(std::log(g * lambda / (4.0 * (lambda + nu))) + x +
                                    log1mexp(2.0 * n * (nu + lambda)));
        // A- = (G L / 4) e^{-2 n L} * 2n * expm1(-2n(nu-L)) / (-2n(nu-L))
        double z = -2.0 * n * (nu - lambda);
        double am = 0.25 * g * lambda * std::exp(-2.0 * n * lambda) * 2.0 * n *
                    expm1_over(z);
        s.a_minus = LogVal::from_double(am);
    }
    s.j_n = s.a_plus + s.a_minus;
    s.j_tilde_n = s.a_plus - s.a_minus;

    const double geff = 0.5 * g0 * std::exp(-2.0 * n * lambda);
    LogVal lo = 2.0 * s.a_minus + LogVal::from_double(geff); // 2A- + g
    LogVal hi = 2.0 * s.a_plus + LogVal::from_double(geff);  // 2A+ + g
    s.tau_n = LogVal::from_log(x) * lo + LogVal::from_log(-x) * hi;
    s.delta_n = lo * hi;
    s.n_mean = (s.tau_n - 1.0) / 2.0;
    return s;
}

/// Leading-order mean photon number N_n = (1/4) e^{2n(nu-Lambda)}
/// (G0 + G Lambda/(nu - Lambda)); requires the growth regime nu > Lambda.
inline LogVal asymptotic_photon_number(double nu, double lambda, double g, double g0,
                                       int n, std::vector<Warning>* warn = nullptr) {
    if (!(nu > lambda))
        throw RegimeError("pulsetrain", "nu",
                          "no exponential growth for nu <= Lambda",
                          "use evolve_summary for the exact value");
    if (warn && 2.0 * n * nu < 3.0)
        warn->push_back({"2 n nu < 3: the asymptotic form is not yet dominant"});
    double coef = g0 + g * lambda / (nu - lambda);
    return LogVal::from_log(std::log(0.25 * coef) + 2.0 * n * (nu - lambda));
}

/// Leading-order determinant Delta_n = N_n * G Lambda / (nu + Lambda);
/// the ratio Delta_n / N_n is independent of G0.
inline LogVal asymptotic_delta(double nu, double lambda, double g, LogVal n_mean) {
    if (lambda == 0.0) return LogVal::zero();
    if (!(nu >= 0.0) || nu + lambda <= 0.0)
        throw DomainError("pulsetrain", "nu", "invalid gain/loss for asymptotic_delta");
    return n_mean * (g * lambda / (nu + lambda));
}

/// Covariance state from the summary (beta = 0 orientation: squeezing along
/// the axes, sigma_xp = 0). All measurable scalars (tau, Delta, S, f(m)) are
/// independent of the overall phase beta, which a test asserts.
inline CovarianceState covariance_from_summary(const PulseTrainSummary& s) {
    LogVal tau = s.tau_n;
    LogVal delta = s.delta_n;
    LogVal r2 = tau * tau - 4.0 * delta;
    if (r2.sign < 0) r2 = LogVal::zero(); // roundoff guard near thermal form
    LogVal r = LogVal::from_log(0.5 * r2.log_mag);
    if (r2.is_zero()) r = LogVal::zero();
    LogVal sxx = (tau + r) / 2.0;
    LogVal spp = 2.0 * delta / (tau + r); // (tau - r)/2 without cancellation
    return {sxx.to_double("sigma_xx"), spp.to_double("sigma_pp"), 0.0};
}

} // namespace dce::pulsetrain

#endif // DCE_PULSETRAIN_HPP
