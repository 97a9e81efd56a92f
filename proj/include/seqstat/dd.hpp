#ifndef SEQSTAT_DD_HPP
#define SEQSTAT_DD_HPP

#include <cmath>

namespace seqstat {

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2. Only the handful of
// operations the compensated omega chain needs.
struct dd {
    double hi = 0.0;
    double lo = 0.0;
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd dd_from(long double x) {
    double hi = static_cast<double>(x);
    return {hi, static_cast<double>(x - static_cast<long double>(hi))};
}

inline dd operator+(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    dd t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) {
    return {-a.hi, -a.lo};
}

inline dd operator-(dd a, dd b) {
    return a + (-b);
}

inline dd operator*(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd operator*(dd a, double b) {
    dd p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline long double to_ld(dd a) {
    return static_cast<long double>(a.hi) + static_cast<long double>(a.lo);
}

// Fractional part in [0,1). floor(hi) is exact, so the subtraction is exact
// and the low word carries through.
inline double dd_frac(dd a) {
    double fl = std::floor(a.hi);
    dd r = quick_two_sum(a.hi - fl, a.lo);
    double f = r.hi + r.lo;
    if (f < 0.0) {
        f += 1.0;
    }
    if (f >= 1.0) {
        f -= 1.0;
    }
    return f;
}

}

#endif
