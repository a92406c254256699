#pragma once

#include <cmath>
#include <complex>

namespace kv {

using cplx = std::complex<double>;

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    double value() const { return hi + lo; }
};

namespace ddops {

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    double e = b - (s - a);
    return {s, e};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    double e = std::fma(a, b, -p);
    return {p, e};
}

}  // namespace ddops

inline dd operator+(const dd& a, const dd& b) {
    dd s = ddops::two_sum(a.hi, b.hi);
    dd t = ddops::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = ddops::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return ddops::quick_two_sum(s.hi, s.lo);
}

inline dd operator-(const dd& a) { return {-a.hi, -a.lo}; }
inline dd operator-(const dd& a, const dd& b) { return a + (-b); }

inline dd operator*(const dd& a, const dd& b) {
    dd p = ddops::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return ddops::quick_two_sum(p.hi, p.lo);
}

inline dd operator*(const dd& a, double b) {
    dd p = ddops::two_prod(a.hi, b);
    p.lo += a.lo * b;
    return ddops::quick_two_sum(p.hi, p.lo);
}

inline dd operator/(const dd& a, const dd& b) {
    double q1 = a.hi / b.hi;
    dd r = a - b * q1;
    double q2 = r.hi / b.hi;
    r = r - b * q2;
    double q3 = r.hi / b.hi;
    dd q = ddops::quick_two_sum(q1, q2);
    return q + dd(q3);
}

inline dd& operator+=(dd& a, const dd& b) { return a = a + b; }
inline dd& operator-=(dd& a, const dd& b) { return a = a - b; }
inline dd& operator*=(dd& a, const dd& b) { return a = a * b; }

inline dd abs(const dd& a) { return a.hi < 0 ? -a : a; }

// Complex number with double-double parts.
struct cdd {
    dd re;
    dd im;

    constexpr cdd() = default;
    cdd(const dd& r, const dd& i) : re(r), im(i) {}
    cdd(const cplx& c) : re(c.real()), im(c.imag()) {}
    cdd(double r) : re(r), im(0.0) {}

    cplx value() const { return {re.value(), im.value()}; }
};

inline cdd operator+(const cdd& a, const cdd& b) { return {a.re + b.re, a.im + b.im}; }
inline cdd operator-(const cdd& a, const cdd& b) { return {a.re - b.re, a.im - b.im}; }
inline cdd operator-(const cdd& a) { return {-a.re, -a.im}; }

inline cdd operator*(const cdd& a, const cdd& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline cdd operator*(const cdd& a, double s) { return {a.re * s, a.im * s}; }

inline cdd operator/(const cdd& a, const cdd& b) {
    dd den = b.re * b.re + b.im * b.im;
    dd nr = a.re * b.re + a.im * b.im;
    dd ni = a.im * b.re - a.re * b.im;
    return {nr / den, ni / den};
}

inline cdd& operator+=(cdd& a, const cdd& b) { return a = a + b; }
inline cdd& operator*=(cdd& a, const cdd& b) { return a = a * b; }

inline double abs(const cdd& a) { return std::abs(a.value()); }

}  // namespace kv
