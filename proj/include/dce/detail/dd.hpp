#ifndef DCE_DETAIL_DD_HPP
#define DCE_DETAIL_DD_HPP

#include <cmath>

namespace dce::detail {

/// Minimal double-double number (~31 significant digits).
/// Only the operations needed by the near-boundary covariance algebra.
struct DD {
    double hi = 0.0;
    double lo = 0.0;

    DD() = default;
    DD(double h) : hi(h) {}
    DD(double h, double l) : hi(h), lo(l) {}

    double value() const { return hi + lo; }
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double v = s - a;
    double e = (a - (s - v)) + (b - v);
    return {s, e};
}

inline DD quick_two_sum(double a, double b) { // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD operator+(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    double e = s.lo + a.lo + b.lo;
    return quick_two_sum(s.hi, e);
}

inline DD operator-(DD a, DD b) { return a + DD{-b.hi, -b.lo}; }

inline DD operator*(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DD operator*(double a, DD b) { return DD{a} * b; }

inline DD operator/(DD a, DD b) {
    double q1 = a.hi / b.hi;
    DD r = a - q1 * b;
    double q2 = r.hi / b.hi;
    r = r - q2 * b;
    double q3 = r.hi / b.hi;
    DD q = quick_two_sum(q1, q2);
    return q + DD{q3};
}

inline DD sqrt(DD a) {
    if (a.hi <= 0.0) return {0.0, 0.0};
    double s = std::sqrt(a.hi);
    DD r = a - two_prod(s, s);
    return quick_two_sum(s, r.hi / (2.0 * s));
}

inline bool operator<(DD a, double b) { return a.hi < b || (a.hi == b && a.lo < 0.0); }
inline bool operator>(DD a, double b) { return a.hi > b || (a.hi == b && a.lo > 0.0); }

} // namespace dce::detail

#endif // DCE_DETAIL_DD_HPP
