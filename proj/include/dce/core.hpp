#ifndef DCE_CORE_HPP
#define DCE_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "dce/errors.hpp"

namespace dce {

/// Vacuum quadrature variance. All covariances in this library use the
/// convention sigma_xx = sigma_pp = 1/2 for the ground state (hbar = 1,
/// N = <p^2 + x^2 - 1>/2); documented once here.
inline constexpr double kVacuumVariance = 0.5;

/// Absolute tolerance on the uncertainty determinant. States with
/// Delta < 1/4 - tol are rejected at construction rather than clamped:
/// downstream log-space formulas amplify invalid inputs.
inline constexpr double kUncertaintyTol = 1e-9;

/// Dead band around D_- = 0 for regime classification.
inline constexpr double kBoundaryDeadBand = 1e-9;

/// coth(omega / (2 theta)): thermal factor G = 1 + 2<n>_th of a mode of
/// frequency omega at temperature theta. Returns exactly 1 at theta = 0.
inline double thermal_g(double omega, double theta) {
    if (!(omega > 0.0))
        throw DomainError("core", "omega", "thermal_g requires omega > 0");
    if (theta < 0.0)
        throw DomainError("core", "theta", "thermal_g requires theta >= 0");
    if (theta == 0.0) return 1.0;
    return 1.0 / std::tanh(omega / (2.0 * theta));
}

/// Thermal factors of reservoir (G) and of the initial mode state (G0),
/// plus the reference frequency omega0.
struct ReservoirParams {
    double G = 1.0;
    double G0 = 1.0;
    double omega0 = 1.0;

    ReservoirParams() = default;
    ReservoirParams(double G_, double G0_, double omega0_ = 1.0)
        : G(G_), G0(G0_), omega0(omega0_) {
        if (G < 1.0)
            throw DomainError("core", "G", "reservoir factor G must be >= 1");
        if (G0 < 1.0)
            throw DomainError("core", "G0", "initial factor G0 must be >= 1");
        if (!(omega0 > 0.0))
            throw DomainError("core", "omega0", "omega0 must be > 0");
    }
};

/// One pulse of frequency detuning chi(t) and damping gamma(t) on local time
/// [0, duration]. Supported shapes: rectangular, linear-rise/exponential-decay,
/// and a user-sampled grid (linear interpolation).
class PulseProfile {
public:
    enum class Kind { rectangular, linexp, sampled };

    static PulseProfile rectangular(double chi_amp, double gamma_amp, double duration) {
        PulseProfile p;
        p.kind_ = Kind::rectangular;
        p.chi_amp_ = chi_amp;
        p.gamma_amp_ = gamma_amp;
        p.duration_ = duration;
        p.check_basics();
        return p;
    }

    /// chi(t) = amp * t/rise on [0, rise), amp * exp(-(t-rise)/decay) on
    /// [rise, duration]; gamma scaled the same shape by gamma_amp/chi_amp ratio
    /// is not assumed -- gamma uses its own amplitude with the same envelope.
    static PulseProfile linexp(double chi_amp, double gamma_amp, double rise,
                               double decay, double duration) {
        PulseProfile p;
        p.kind_ = Kind::linexp;
        p.chi_amp_ = chi_amp;
        p.gamma_amp_ = gamma_amp;
        p.rise_ = rise;
        p.decay_ = decay;
        p.duration_ = duration;
        if (!(rise > 0.0) || !(decay > 0.0) || rise >= duration)
            throw DomainError("core", "rise/decay",
                              "linexp pulse needs 0 < rise < duration and decay > 0");
        p.check_basics();
        return p;
    }

    /// Sampled (t, chi[, gamma]) columns; t strictly increasing, t.front() = 0
    /// is not required -- times are shifted so the pulse starts at 0.
    static PulseProfile sampled(std::vector<double> t, std::vector<double> chi,
                                std::vector<double> gamma = {}) {
        PulseProfile p;
        p.kind_ = Kind::sampled;
        if (t.size() < 2 || chi.size() != t.size() ||
            (!gamma.empty() && gamma.size() != t.size()))
            throw DomainError("core", "samples",
                              "sampled pulse needs >= 2 rows with matching columns");
        for (std::size_t i = 1; i < t.size(); ++i)
            if (!(t[i] > t[i - 1]))
                throw GridError("core", "t", "sample times must be strictly increasing");
        double t0 = t.front();
        for (auto& x : t) x -= t0;
        if (gamma.empty()) gamma.assign(t.size(), 0.0);
        for (double g : gamma)
            if (g < 0.0)
                throw DomainError("core", "gamma", "gamma(t) must be >= 0");
        p.ts_ = std::move(t);
        p.chis_ = std::move(chi);
        p.gammas_ = std::move(gamma);
        p.duration_ = p.ts_.back();
        return p;
    }

    Kind kind() const { return kind_; }
    double duration() const { return duration_; }

    double chi(double t) const {
        if (t < 0.0 || t > duration_) return 0.0;
        switch (kind_) {
            case Kind::rectangular: return chi_amp_;
            case Kind::linexp:
                return t < rise_ ? chi_amp_ * t / rise_
                                 : chi_amp_ * std::exp(-(t - rise_) / decay_);
            case Kind::sampled: return interp(chis_, t);
        }
        return 0.0;
    }

    double gamma(double t) const {
        if (t < 0.0 || t > duration_) return 0.0;
        switch (kind_) {
            case Kind::rectangular: return gamma_amp_;
            case Kind::linexp:
                return t < rise_ ? gamma_amp_ * t / rise_
                                 : gamma_amp_ * std::exp(-(t - rise_) / decay_);
            case Kind::sampled: return interp(gammas_, t);
        }
        return 0.0;
    }

    /// Exact/trapezoid integral of gamma over [0, t] (monotone in t).
    double gamma_partial(double t) const { return partial(false, t); }
    double gamma_integral() const { return gamma_partial(duration_); }

    double chi_partial(double t) const { return partial(true, t); }
    double chi_integral() const { return chi_partial(duration_); }

    double max_abs_chi() const {
        switch (kind_) {
            case Kind::rectangular:
            case Kind::linexp: return std::abs(chi_amp_);
            case Kind::sampled: {
                double m = 0.0;
                for (double c : chis_) m = std::max(m, std::abs(c));
                return m;
            }
        }
        return 0.0;
    }

    /// Interior times where chi/gamma have kinks; segment boundaries for
    /// the integrator grid.
    std::vector<double> breakpoints() const {
        if (kind_ == Kind::linexp) return {rise_};
        if (kind_ == Kind::sampled) return {}; // grid refinement handles kinks
        return {};
    }

    /// Soft validity findings (the model assumes |chi| << 1 and gamma << 1).
    std::vector<Warning> validate() const {
        std::vector<Warning> w;
        if (max_abs_chi() >= 0.1)
            w.push_back({"max|chi| = " + std::to_string(max_abs_chi()) +
                         " is not small; closed forms assume |chi| << 1"});
        if (gamma_integral() >= 0.1)
            w.push_back({"integral of gamma = " + std::to_string(gamma_integral()) +
                         " is not small; closed forms assume gamma << 1"});
        return w;
    }

private:
    void check_basics() const {
        if (!(duration_ > 0.0))
            throw DomainError("core", "duration", "pulse duration must be > 0");
        if (gamma_amp_ < 0.0)
            throw DomainError("core", "gamma", "gamma(t) must be >= 0");
    }

    double interp(const std::vector<double>& y, double t) const {
        auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
        if (it == ts_.begin()) return y.front();
        if (it == ts_.end()) return y.back();
        std::size_t i = static_cast<std::size_t>(it - ts_.begin());
        double w = (t - ts_[i - 1]) / (ts_[i] - ts_[i - 1]);
        return y[i - 1] * (1.0 - w) + y[i] * w;
    }

    double partial(bool use_chi, double t) const {
        t = std::clamp(t, 0.0, duration_);
        switch (kind_) {
            case Kind::rectangular:
                return (use_chi ? chi_amp_ : gamma_amp_) * t;
            case Kind::linexp: {
                double amp = use_chi ? chi_amp_ : gamma_amp_;
                if (t <= rise_) return amp * t * t / (2.0 * rise_);
                return amp * (rise_ / 2.0 +
                              decay_ * (1.0 - std::exp(-(t - rise_) / decay_)));
            }
            case Kind::sampled: {
                const auto& y = use_chi ? chis_ : gammas_;
                double acc = 0.0;
                for (std::size_t i = 1; i < ts_.size(); ++i) {
                    if (t <= ts_[i - 1]) break;
                    double t1 = std::min(t, ts_[i]);
                    double w = (ts_[i] == ts_[i - 1]) ? 0.0
                               : (t1 - ts_[i - 1]) / (ts_[i] - ts_[i - 1]);
                    double y1 = y[i - 1] * (1.0 - w) + y[i] * w;
                    acc += 0.5 * (y[i - 1] + y1) * (t1 - ts_[i - 1]);
                }
                return acc;
            }
        }
        return 0.0;
    }

    Kind kind_ = Kind::rectangular;
    double chi_amp_ = 0.0, gamma_amp_ = 0.0, duration_ = 0.0;
    double rise_ = 0.0, decay_ = 0.0;
    std::vector<double> ts_, chis_, gammas_;
};

/// n identical pulses repeating with the given period; pulse k occupies
/// [k*period, k*period + pulse.duration()].
struct PulseSchedule {
    PulseProfile pulse;
    double period = 0.0;
    int count = 0;

    PulseSchedule(PulseProfile p, double period_, int count_)
        : pulse(std::move(p)), period(period_), count(count_) {
        if (count < 0)
            throw DomainError("core", "count", "pulse count must be >= 0");
        if (count > 0 && period < pulse.duration())
            throw DomainError("core", "period",
                              "repetition period shorter than the pulse itself");
    }

    double end_time() const { return count * period; }
};

/// Zero-mean single-mode Gaussian state. Construction enforces positivity
/// and the uncertainty relation Delta >= 1/4 - kUncertaintyTol.
struct CovarianceState {
    double sigma_xx;
    double sigma_pp;
    double sigma_xp;

    CovarianceState(double sxx, double spp, double sxp)
        : sigma_xx(sxx), sigma_pp(spp), sigma_xp(sxp) {
        if (!(sigma_xx > 0.0) || !(sigma_pp > 0.0))
            throw DomainError("core", "sigma", "quadrature variances must be > 0");
        double d = delta();
        if (!(d >= 0.25 - kUncertaintyTol))
            throw DomainError("core", "Delta",
                              "uncertainty determinant " + std::to_string(d) +
                                  " violates Delta >= 1/4",
                              "state is unphysical; check upstream tolerances");
    }

    double tau() const { return sigma_xx + sigma_pp; }
    double delta() const { return sigma_xx * sigma_pp - sigma_xp * sigma_xp; }

    static CovarianceState vacuum() { return {0.5, 0.5, 0.0}; }
    static CovarianceState thermal(double n_mean) {
        return {0.5 + n_mean, 0.5 + n_mean, 0.0};
    }
    /// Diagonal state with given trace and determinant (squeezing along axes).
    static CovarianceState from_tau_delta(double tau, double delta) {
        double r2 = tau * tau - 4.0 * delta;
        double r = r2 > 0.0 ? std::sqrt(r2) : 0.0;
        // (tau - r)/2 computed as 2 delta / (tau + r): no cancellation
        return {0.5 * (tau + r), 2.0 * delta / (tau + r), 0.0};
    }
};

/// Free-evolution rotation of the state by phase t (omega0 = 1 units):
/// x -> x cos t + p sin t, p -> -x sin t + p cos t. tau and Delta are
/// invariant under this map.
inline CovarianceState free_rotation(const CovarianceState& s, double t) {
    double c = std::cos(t), sn = std::sin(t);
    double sxx = c * c * s.sigma_xx + sn * sn * s.sigma_pp + 2.0 * c * sn * s.sigma_xp;
    double spp = sn * sn * s.sigma_xx + c * c * s.sigma_pp - 2.0 * c * sn * s.sigma_xp;
    double sxp = c * sn * (s.sigma_pp - s.sigma_xx) + (c * c - sn * sn) * s.sigma_xp;
    return {sxx, spp, sxp};
}

/// Scalars derived from a covariance state.
struct DerivedScalars {
    double tau;      ///< sigma_xx + sigma_pp = 1 + 2N
    double delta;    ///< determinant of the covariance matrix
    double n_mean;   ///< (tau - 1)/2
    double d_plus;   ///< 1 + 4 Delta + 2 tau
    double d_minus;  ///< 1 + 4 Delta - 2 tau; its sign selects the PDF regime
    double purity;   ///< 1 / (2 sqrt(Delta))
};

inline DerivedScalars derived_scalars(const CovarianceState& s) {
    DerivedScalars d{};
    d.tau = s.tau();
    d.delta = s.delta();
    d.n_mean = 0.5 * (d.tau - 1.0);
    d.d_plus = 1.0 + 4.0 * d.delta + 2.0 * d.tau;
    d.d_minus = 1.0 + 4.0 * d.delta - 2.0 * d.tau;
    d.purity = 1.0 / (2.0 * std::sqrt(d.delta));
    return d;
}

/// Photon-number distribution f(0..m_max) plus evaluation metadata.
struct PhotonDistribution {
    enum class Method { exact, asymptotic_smooth, asymptotic_oscillating,
                        ideal_squeezed, oracle };

    std::vector<double> values;
    Method method = Method::exact;
    double tail_bound = 0.0;  ///< upper bound on 1 - sum(values)
    double tail_ratio = 0.0;  ///< asymptotic f(m+1)/f(m) pair ratio, in [0,1)
    double tau = std::numeric_limits<double>::quiet_NaN();  ///< source-state trace
    double g0 = std::numeric_limits<double>::quiet_NaN();   ///< initial factor, if known
    bool clamped = false;     ///< true if tiny negative values were clamped to 0

    /// Clamp values in [-1e-12, 0) to zero; larger negatives are a defect.
    void clamp_negatives() {
        for (double& v : values) {
            if (v < 0.0) {
                if (v < -1e-12)
                    throw ConsistencyError("core", "f(m)",
                                           "distribution value " + std::to_string(v) +
                                               " below -1e-12");
                v = 0.0;
                clamped = true;
            }
        }
    }

    double sum() const {
        double s = 0.0, c = 0.0;
        for (double v : values) { // Kahan
            double y = v - c;
            double t = s + y;
            c = (t - s) - y;
            s = t;
        }
        return s;
    }
};

inline const char* method_name(PhotonDistribution::Method m) {
    switch (m) {
        case PhotonDistribution::Method::exact: return "exact";
        case PhotonDistribution::Method::asymptotic_smooth: return "asymptotic-smooth";
        case PhotonDistribution::Method::asymptotic_oscillating:
            return "asymptotic-oscillating";
        case PhotonDistribution::Method::ideal_squeezed: return "ideal-squeezed";
        case PhotonDistribution::Method::oracle: return "oracle";
    }
    return "?";
}

} // namespace dce

#endif // DCE_CORE_HPP
