#ifndef DCE_LOGSPACE_HPP
#define DCE_LOGSPACE_HPP

#include <cmath>
#include <limits>
#include <string>

#include "dce/errors.hpp"

namespace dce {

/// Signed magnitude in log space: sign * exp(log_mag).
/// Keeps quantities like cosh(700) or e^{2n nu} usable well past double range.
struct LogVal {
    double log_mag = -std::numeric_limits<double>::infinity();
    int sign = 0; // -1, 0, +1

    static LogVal zero() { return {}; }

    static LogVal from_double(double v) {
        if (v == 0.0) return {};
        return {std::log(std::abs(v)), v > 0 ? 1 : -1};
    }

    /// exp(x), x arbitrary.
    static LogVal from_log(double x) { return {x, 1}; }

    bool is_zero() const { return sign == 0; }

    /// Convert to double; overflow raises RangeError naming the quantity.
    double to_double(const char* quantity = "value") const {
        if (sign == 0) return 0.0;
        if (log_mag > 709.0)
            throw RangeError("logspace", quantity,
                             "log-magnitude " + std::to_string(log_mag) +
                                 " exceeds double range");
        return sign * std::exp(log_mag);
    }

    /// Like to_double but saturates to +/-inf instead of throwing.
    double to_double_saturating() const {
        if (sign == 0) return 0.0;
        if (log_mag > 709.0)
            return sign * std::numeric_limits<double>::infinity();
        return sign * std::exp(log_mag);
    }

    LogVal operator-() const { return {log_mag, -sign}; }

    friend LogVal operator*(LogVal a, LogVal b) {
        if (a.sign == 0 || b.sign == 0) return {};
        return {a.log_mag + b.log_mag, a.sign * b.sign};
    }
    friend LogVal operator*(LogVal a, double b) { return a * from_double(b); }
    friend LogVal operator*(double a, LogVal b) { return from_double(a) * b; }

    friend LogVal operator/(LogVal a, LogVal b) {
        if (b.sign == 0)
            throw DomainError("logspace", "divisor", "division by zero");
        if (a.sign == 0) return {};
        return {a.log_mag - b.log_mag, a.sign * b.sign};
    }
    friend LogVal operator/(LogVal a, double b) { return a / from_double(b); }

    friend LogVal operator+(LogVal a, LogVal b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        const LogVal& hi = (a.log_mag >= b.log_mag) ? a : b;
        const LogVal& lo = (a.log_mag >= b.log_mag) ? b : a;
        double d = lo.log_mag - hi.log_mag; // <= 0
        if (hi.sign == lo.sign)
            return {hi.log_mag + std::log1p(std::exp(d)), hi.sign};
        double t = -std::expm1(d); // 1 - e^d in [0,1]
        if (t == 0.0) return {};   // exact cancellation
        return {hi.log_mag + std::log(t), hi.sign};
    }
    friend LogVal operator+(LogVal a, double b) { return a + from_double(b); }
    friend LogVal operator-(LogVal a, LogVal b) { return a + (-b); }
    friend LogVal operator-(LogVal a, double b) { return a - from_double(b); }

    friend bool operator<(LogVal a, LogVal b) {
        if (a.sign != b.sign) return a.sign < b.sign;
        if (a.sign == 0) return false;
        return a.sign > 0 ? a.log_mag < b.log_mag : a.log_mag > b.log_mag;
    }
};

/// log(cosh x) without overflow, x >= 0.
inline double log_cosh(double x) {
    x = std::abs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
}

/// log(sinh x) for x > 0 without overflow; -inf at x = 0.
inline double log_sinh(double x) {
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x < 1e-3) return std::log(x * (1.0 + x * x / 6.0));
    return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
}

/// log(1 - e^{-x}) for x > 0.
inline double log1mexp(double x) {
    if (x <= 0.0)
        throw DomainError("logspace", "x", "log1mexp requires x > 0");
    // split per accuracy of log1p vs log(-expm1)
    return (x > 0.6931471805599453) ? std::log1p(-std::exp(-x))
                                    : std::log(-std::expm1(-x));
}

/// expm1(z)/z, continuous through z = 0.
inline double expm1_over(double z) {
    if (std::abs(z) < 1e-8) return 1.0 + 0.5 * z + z * z / 6.0;
    return std::expm1(z) / z;
}

} // namespace dce

#endif // DCE_LOGSPACE_HPP
