#ifndef DCE_DYNAMICS_HPP
#define DCE_DYNAMICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "dce/core.hpp"
#include "dce/errors.hpp"

namespace dce::dynamics {

using cplx = std::complex<double>;

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    int samples_per_period = 40;  ///< minimum grid density per 2*pi of scaled time
    int samples_per_pulse = 40;   ///< minimum grid density across each pulse
    double wronskian_fail = 1e-6; ///< accumulated raw drift beyond this aborts
};

/// Sampled solution of the mode equation plus the dissipative quadrature
/// integrals. Times are physical; xi and its derivative live in scaled time
/// s = omega0 * t, where the Wronskian normalization Im(xi xi') = 1 holds and
/// the covariance formulas apply directly.
struct ModeTrajectory {
    struct Segment {
        std::size_t first;  ///< index of the segment's first sample
        std::size_t last;   ///< index of the segment's last sample
        int pulse_index;    ///< >= 0 inside pulse windows, -1 in free gaps
    };

    std::vector<double> t;
    std::vector<cplx> xi;
    std::vector<cplx> xi_dot;
    std::vector<double> gamma_acc;   ///< Gamma(t) = integral of gamma up to t
    std::vector<double> j;           ///< J(t), filled by accumulate_quadratures
    std::vector<cplx> j_tilde;       ///< J~(t)
    std::vector<Segment> segments;
    double omega0 = 1.0;
    double reservoir_g = 0.0;        ///< G used for the quadratures (0 = not filled)
    double max_wronskian_error = 0.0;      ///< max |Im(xi xi')-1| seen at steps
    double raw_step_drift = 0.0;           ///< accumulated pre-projection drift
    double quadrature_error_estimate = 0.0; ///< Richardson estimate for J

    bool quadratures_ready() const { return !j.empty(); }

    std::size_t index_of(double time) const {
        auto it = std::lower_bound(t.begin(), t.end(),
                                   time - 1e-9 * std::max(1.0, std::abs(time)));
        if (it == t.end() ||
            std::abs(*it - time) > 1e-9 * std::max(1.0, std::abs(time)))
            throw GridError("dynamics", "t", "requested time is not a grid sample");
        return static_cast<std::size_t>(it - t.begin());
    }
};

namespace detail {

/// Dormand-Prince 5(4) tableau.
struct Dopri5 {
    static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5,
                                             8.0 / 9, 1.0, 1.0};
    static constexpr std::array<std::array<double, 6>, 7> a{{
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    }};
    static constexpr std::array<double, 7> b5{35.0 / 384, 0.0, 500.0 / 1113,
                                              125.0 / 192, -2187.0 / 6784,
                                              11.0 / 84, 0.0};
    static constexpr std::array<double, 7> b4{5179.0 / 57600, 0.0, 7571.0 / 16695,
                                              393.0 / 640, -92097.0 / 339200,
                                              187.0 / 2100, 1.0 / 40};
};

using State4 = std::array<double, 4>; // (Re xi, Im xi, Re xi', Im xi')

/// Adaptive DOPRI5 for xi'' + w2(s) xi = 0. After each accepted step the
/// solution is rescaled onto the Wronskian manifold Im(xi xi') = 1; for a
/// linear equation the rescaled trajectory is itself an integrator trajectory,
/// so the projection removes the determinant drift mode exactly. The raw
/// per-step deviation is kept as the integration-quality signal.
class XiIntegrator {
public:
    XiIntegrator(std::function<double(double)> w2, const IntegratorOptions& opt)
        : w2_(std::move(w2)), opt_(opt) {}

    void integrate(double s0, double s1, State4& u, double& raw_drift,
                   double& max_dev) {
        double span = s1 - s0;
        if (span <= 0.0) return;
        double s = s0;
        double h = last_h_ > 0.0 ? std::min(last_h_, span) : span;
        State4 k[7], utmp, u5, u4;
        int rejects = 0;
        while (s < s1 - 1e-14 * std::max(1.0, std::abs(s1))) {
            h = std::min(h, s1 - s);
            if (h < 1e-14 * std::max(1.0, std::abs(s)))
                throw IntegrationError("dynamics", s, "step size underflow",
                                       "loosen rtol or check the pulse profile");
            rhs(s, u, k[0]);
            for (int st = 1; st < 7; ++st) {
                for (int j = 0; j < 4; ++j) {
                    double acc = 0.0;
                    for (int l = 0; l < st; ++l) acc += Dopri5::a[st][l] * k[l][j];
                    utmp[j] = u[j] + h * acc;
                }
                rhs(s + Dopri5::c[st] * h, utmp, k[st]);
            }
            double err = 0.0;
            for (int j = 0; j < 4; ++j) {
                double y5 = 0.0, y4 = 0.0;
                for (int st = 0; st < 7; ++st) {
                    y5 += Dopri5::b5[st] * k[st][j];
                    y4 += Dopri5::b4[st] * k[st][j];
                }
                u5[j] = u[j] + h * y5;
                u4[j] = u[j] + h * y4;
                double sc =
                    opt_.atol + opt_.rtol * std::max(std::abs(u[j]), std::abs(u5[j]));
                err = std::max(err, std::abs(u5[j] - u4[j]) / sc);
            }
            if (err <= 1.0) {
                s += h;
                u = u5;
                double w = u[0] * u[3] - u[1] * u[2];
                double dev = std::abs(w - 1.0);
                raw_drift += dev;
                max_dev = std::max(max_dev, dev);
                if (raw_drift > opt_.wronskian_fail)
                    throw IntegrationError("dynamics", s,
                                           "Wronskian drift exceeded threshold",
                                           "tighten rtol");
                if (!(w > 0.0))
                    throw IntegrationError("dynamics", s, "Wronskian collapsed");
                double sc = 1.0 / std::sqrt(w);
                for (double& x : u) x *= sc;
                rejects = 0;
            } else if (++rejects > 50) {
                throw IntegrationError("dynamics", s, "step control stalled");
            }
            double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            h *= std::clamp(fac, 0.2, 5.0);
            last_h_ = h;
        }
    }

private:
    void rhs(double s, const State4& u, State4& f) const {
        double w2 = w2_(s);
        f[0] = u[2];
        f[1] = u[3];
        f[2] = -w2 * u[0];
        f[3] = -w2 * u[1];
    }

    std::function<double(double)> w2_;
    IntegratorOptions opt_;
    double last_h_ = -1.0;
};

/// Interval count for a segment: meets the density, is a multiple of 4 so
/// Simpson panels and their Richardson coarsening always align.
inline int segment_intervals(double len, double per_unit_density, int minimum) {
    int n = static_cast<int>(std::ceil(len * per_unit_density));
    n = std::max(n, minimum);
    return ((n + 3) / 4) * 4;
}

} // namespace detail

/// Integrate the mode amplitude over the full schedule.
///
/// The equation is solved in scaled time s = omega0 * t where the pre-pulse
/// frequency is exactly 1; the initial condition xi(0) = 1, xi'(0) = -i is the
/// e^{-is} branch imposed at the pre-pulse reference time (phase-origin
/// convention). Pulse windows use the adaptive integrator; constant-frequency
/// gaps advance by the exact rotation.
inline ModeTrajectory integrate_xi(const PulseSchedule& schedule, double omega0 = 1.0,
                                   const IntegratorOptions& opt = {}) {
    if (!(omega0 > 0.0))
        throw DomainError("dynamics", "omega0", "omega0 must be > 0");
    const PulseProfile& pulse = schedule.pulse;
    for (int i = 0; i <= 64; ++i) {
        if (1.0 + pulse.chi(pulse.duration() * i / 64.0) <= 0.0)
            throw DomainError("dynamics", "chi", "omega(t) must stay positive");
    }

    const double two_pi = 2.0 * M_PI;
    const double sp = omega0 * pulse.duration(); // pulse length, scaled time
    const double sT = omega0 * schedule.period;  // period, scaled time
    const double density = opt.samples_per_period / two_pi;

    ModeTrajectory tr;
    tr.omega0 = omega0;
    detail::XiIntegrator integ(
        [&](double s) {
            double w = 1.0 + pulse.chi(s / omega0);
            return w * w;
        },
        opt);

    detail::State4 u{1.0, 0.0, 0.0, -1.0};
    auto push = [&](double s_global, double gacc) {
        tr.t.push_back(s_global / omega0);
        tr.xi.emplace_back(u[0], u[1]);
        tr.xi_dot.emplace_back(u[2], u[3]);
        tr.gamma_acc.push_back(gacc);
    };
    push(0.0, 0.0);

    // pulse-internal boundaries at shape kinks, scaled time
    std::vector<double> bks;
    for (double b : pulse.breakpoints()) bks.push_back(omega0 * b);
    bks.push_back(sp);

    const double lambda_per_pulse = pulse.gamma_integral();
    for (int k = 0; k < schedule.count; ++k) {
        const double s0 = k * sT;
        const double gamma_base = k * lambda_per_pulse;
        // inside the pulse window, piecewise over kinks
        double prev = 0.0;
        for (double b : bks) {
            double len = b - prev;
            if (len <= 1e-15) continue;
            int n = detail::segment_intervals(
                len, std::max(density, opt.samples_per_pulse / sp), 4);
            std::size_t first = tr.t.size() - 1;
            for (int i = 1; i <= n; ++i) {
                double sl0 = prev + len * (i - 1) / n;
                double sl1 = prev + len * static_cast<double>(i) / n;
                integ.integrate(s0 + sl0, s0 + sl1, u, tr.raw_step_drift,
                                tr.max_wronskian_error);
                push(s0 + sl1, gamma_base + pulse.gamma_partial(sl1 / omega0));
            }
            tr.segments.push_back({first, tr.t.size() - 1, k});
            prev = b;
        }
        // free gap: exact rotation
        double gap = sT - sp;
        if (gap > 1e-15) {
            int n = detail::segment_intervals(gap, density, 4);
            std::size_t first = tr.t.size() - 1;
            double h = gap / n;
            double c = std::cos(h), sn = std::sin(h);
            for (int i = 1; i <= n; ++i) {
                detail::State4 v;
                v[0] = u[0] * c + u[2] * sn;
                v[1] = u[1] * c + u[3] * sn;
                v[2] = -u[0] * sn + u[2] * c;
                v[3] = -u[1] * sn + u[3] * c;
                u = v;
                push(s0 + sp + h * i, gamma_base + lambda_per_pulse);
            }
            tr.segments.push_back({first, tr.t.size() - 1, -1});
        }
    }
    return tr;
}

/// Fill J(t) and J~(t) on the trajectory grid.
///
/// Composite Simpson per segment, with per-half-panel increments (exact
/// splits of the Simpson panel) so every sample gets a value. The e^{2 Gamma}
/// weight is folded as e^{2(Gamma(s) - Gamma(t))}, keeping all exponents
/// non-positive up to one panel's width. A second accumulation on doubled
/// panels gives the Richardson error estimate.
inline void accumulate_quadratures(ModeTrajectory& tr, const PulseSchedule& schedule,
                                   double reservoir_g) {
    if (tr.t.empty())
        throw GridError("dynamics", "trajectory", "empty trajectory");
    if (reservoir_g < 1.0)
        throw DomainError("dynamics", "G", "reservoir factor G must be >= 1");
    const std::size_t n = tr.t.size();
    tr.j.assign(n, 0.0);
    tr.j_tilde.assign(n, cplx{0.0, 0.0});
    tr.reservoir_g = reservoir_g;
    const PulseProfile& pulse = schedule.pulse;

    double acc_j = 0.0;   // rebased at gamma_acc of the sample last written
    cplx acc_jt{0.0, 0.0};
    double coarse_j = 0.0;
    const double half_g = 0.5 * reservoir_g;

    for (const auto& seg : tr.segments) {
        if (seg.pulse_index < 0) {
            // gap: gamma = 0, Gamma constant; values carry forward unchanged
            for (std::size_t i = seg.first + 1; i <= seg.last; ++i) {
                tr.j[i] = half_g * acc_j;
                tr.j_tilde[i] = half_g * acc_jt;
            }
            continue;
        }
        const double t_pulse = seg.pulse_index * schedule.period;
        const std::size_t m = seg.last - seg.first; // interval count, multiple of 4
        // integrand at the segment's nodes, gamma taken from inside the pulse
        std::vector<double> w(m + 1), gs(m + 1);
        std::vector<cplx> wt(m + 1);
        for (std::size_t i = 0; i <= m; ++i) {
            std::size_t gi = seg.first + i;
            double local = tr.t[gi] - t_pulse;
            double g = pulse.gamma(std::clamp(local, 0.0, pulse.duration()));
            cplx xi = tr.xi[gi], xd = tr.xi_dot[gi];
            w[i] = g * (std::norm(xi) + std::norm(xd));
            wt[i] = g * (xi * xi + xd * xd);
            gs[i] = tr.gamma_acc[gi];
        }
        const double h = (tr.t[seg.last] - tr.t[seg.first]) / m;
        for (std::size_t i = 0; i + 2 <= m; i += 2) {
            double g0 = gs[i], g1 = gs[i + 1], g2 = gs[i + 2];
            double e0 = std::exp(2.0 * (g0 - g1));
            double e2 = std::exp(2.0 * (g2 - g1)); // bounded: one panel of Gamma
            double dj1 = h / 12.0 * (5.0 * w[i] * e0 + 8.0 * w[i + 1] - w[i + 2] * e2);
            cplx djt1 =
                h / 12.0 * (5.0 * wt[i] * e0 + 8.0 * wt[i + 1] - wt[i + 2] * e2);
            acc_j = acc_j * e0 + dj1;
            acc_jt = acc_jt * e0 + djt1;
            tr.j[seg.first + i + 1] = half_g * acc_j;
            tr.j_tilde[seg.first + i + 1] = half_g * acc_jt;
            double f0 = std::exp(2.0 * (g0 - g2));
            double f1 = std::exp(2.0 * (g1 - g2));
            double dj2 = h / 12.0 * (-w[i] * f0 + 8.0 * w[i + 1] * f1 + 5.0 * w[i + 2]);
            cplx djt2 =
                h / 12.0 * (-wt[i] * f0 + 8.0 * wt[i + 1] * f1 + 5.0 * wt[i + 2]);
            acc_j = acc_j * f1 + dj2;
            acc_jt = acc_jt * f1 + djt2;
            tr.j[seg.first + i + 2] = half_g * acc_j;
            tr.j_tilde[seg.first + i + 2] = half_g * acc_jt;
        }
        // Richardson track: Simpson on doubled panels (nodes i, i+2, i+4)
        for (std::size_t i = 0; i + 4 <= m; i += 4) {
            double g0 = gs[i], g2 = gs[i + 2], g4 = gs[i + 4];
            double e0 = std::exp(2.0 * (g0 - g4));
            double e2 = std::exp(2.0 * (g2 - g4));
            coarse_j = coarse_j * e0 +
                       2.0 * h / 3.0 * (w[i] * e0 + 4.0 * w[i + 2] * e2 + w[i + 4]);
        }
    }
    double fine_end = tr.j.empty() ? 0.0 : tr.j.back() / half_g;
    tr.quadrature_error_estimate = half_g * std::abs(fine_end - coarse_j) / 15.0;
    for (double& v : tr.j)
        if (v < 0.0 && v > -1e-14) v = 0.0;
}

/// Convenience: integrate and accumulate in one call.
inline ModeTrajectory simulate(const PulseSchedule& schedule,
                               const ReservoirParams& res,
                               const IntegratorOptions& opt = {}) {
    ModeTrajectory tr = integrate_xi(schedule, res.omega0, opt);
    accumulate_quadratures(tr, schedule, res.G);
    return tr;
}

/// Covariance of the mode state at a grid time, for initial thermal factor G0.
/// The initial state enters through J -> J + (G0/2) e^{-2 Gamma}.
inline CovarianceState covariance_at(const ModeTrajectory& tr, double t, double g0) {
    if (!tr.quadratures_ready())
        throw GridError("dynamics", "trajectory", "quadratures not accumulated");
    if (g0 < 1.0)
        throw DomainError("dynamics", "G0", "initial factor G0 must be >= 1");
    std::size_t i = tr.index_of(t);
    double jeff = tr.j[i] + 0.5 * g0 * std::exp(-2.0 * tr.gamma_acc[i]);
    cplx xi = tr.xi[i], xd = tr.xi_dot[i], jt = tr.j_tilde[i];
    double sxx = std::norm(xi) * jeff - std::real(std::conj(xi) * std::conj(xi) * jt);
    double spp = std::norm(xd) * jeff - std::real(std::conj(xd) * std::conj(xd) * jt);
    double sxp = std::real(xi * std::conj(xd)) * jeff -
                 std::real(std::conj(xi) * std::conj(xd) * jt);
    try {
        return {sxx, spp, sxp};
    } catch (const DomainError&) {
        throw ConsistencyError("dynamics", "state",
                               "assembled covariance violates the uncertainty relation",
                               "integration tolerance too loose; tighten rtol");
    }
}

struct MeanPhotons {
    double total = 0.0;
    double signal = 0.0;
    double reservoir = 0.0;
    std::vector<Warning> warnings;
};

/// Photon-number decomposition at a grid time: reservoir part E J - Re(E~* J~)
/// plus the initial-state part (G0 e^{-2 Gamma} E - 1)/2.
inline MeanPhotons mean_photons(const ModeTrajectory& tr, const PulseSchedule& schedule,
                                double t, double g0) {
    if (!tr.quadratures_ready())
        throw GridError("dynamics", "trajectory", "quadratures not accumulated");
    std::size_t i = tr.index_of(t);
    MeanPhotons out;
    if (schedule.count > 0 && schedule.period > 0.0) {
        int k = static_cast<int>(std::floor(t / schedule.period + 1e-12));
        double local = t - k * schedule.period;
        if (k < schedule.count && local < schedule.pulse.duration() * (1.0 - 1e-12) &&
            schedule.pulse.chi(local) != 0.0)
            out.warnings.push_back(
                {"photon-number decomposition evaluated inside a pulse window"});
    }
    cplx xi = tr.xi[i], xd = tr.xi_dot[i];
    double e = 0.5 * (std::norm(xi) + std::norm(xd));
    cplx et = 0.5 * (xi * xi + xd * xd);
    out.reservoir = e * tr.j[i] - std::real(std::conj(et) * tr.j_tilde[i]);
    out.signal = 0.5 * (g0 * std::exp(-2.0 * tr.gamma_acc[i]) * e - 1.0);
    out.total = out.signal + out.reservoir;
    return out;
}

} // namespace dce::dynamics

#endif // DCE_DYNAMICS_HPP
