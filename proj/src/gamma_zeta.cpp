#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kv/specialfn.hpp"

namespace kv {

namespace {

using std::numbers::pi;

constexpr double lanczos_g = 7.0;
constexpr double lanczos_p[9] = {0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
                                 771.32342877765313,      -176.61502916214059,   12.507343278686905,
                                 -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// B_{2j}/(2j)! for j = 1..15
constexpr double bern_over_fact[15] = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -1.0 / 1307674368000.0 * 691.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
    657931.0 / 186134520519971831808000000.0,
    -3392780147.0 / 37893265687455865519472640000000.0,
    1723168255201.0 / 759790291646040068357842010112000000.0};

// B_{2j} for j = 1..10
constexpr double bern[10] = {1.0 / 6.0,   -1.0 / 30.0,    1.0 / 42.0,      -1.0 / 30.0,   5.0 / 66.0,
                             -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0};

bool is_nonpositive_integer(cplx s) {
    return s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::round(s.real());
}

// log Gamma for Re s >= 1/2 via the Lanczos sum.
cplx lgamma_lanczos(cplx s) {
    cplx z = s - 1.0;
    cplx x = lanczos_p[0];
    for (int i = 1; i < 9; ++i) x += lanczos_p[i] / (z + static_cast<double>(i));
    cplx t = z + lanczos_g + 0.5;
    return 0.5 * std::log(2 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma_lanczos(cplx s) {
    if (std::abs(s) > 60.0) return std::exp(lgamma_lanczos(s));
    cplx z = s - 1.0;
    cplx x = lanczos_p[0];
    for (int i = 1; i < 9; ++i) x += lanczos_p[i] / (z + static_cast<double>(i));
    cplx t = z + lanczos_g + 0.5;
    return std::sqrt(2 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// log(sin(pi s)) without overflow for large |Im s|.
cplx log_sin_pi(cplx s) {
    const double y = s.imag();
    if (std::abs(y) < 20.0) return std::log(sin_pi(s));
    // sin(pi s) = (e^{i pi s} - e^{-i pi s}) / (2i); keep the dominant exponential
    const cplx ipis(0.0, pi);
    if (y > 0) return -ipis * s + std::log(1.0 - std::exp(2.0 * ipis * s)) - std::log(cplx(0.0, 2.0));
    return ipis * s + std::log(1.0 - std::exp(-2.0 * ipis * s)) - std::log(cplx(0.0, -2.0));
}

}  // namespace

cplx sin_pi(cplx s) {
    const double n = std::round(s.real());
    cplx f(s.real() - n, s.imag());
    cplx v = std::sin(pi * f);
    return (static_cast<long long>(n) % 2 == 0) ? v : -v;
}

cplx cos_pi(cplx s) { return sin_pi(s + 0.5); }

cplx lgamma_c(cplx s) {
    if (is_nonpositive_integer(s)) throw std::domain_error("gamma: pole at a nonpositive integer");
    if (s.real() < 0.5) return std::log(pi) - log_sin_pi(s) - lgamma_lanczos(1.0 - s);
    return lgamma_lanczos(s);
}

cplx gamma_c(cplx s) {
    if (is_nonpositive_integer(s)) throw std::domain_error("gamma: pole at a nonpositive integer");
    if (s.real() < 0.5) {
        if (std::abs(s.imag()) > 20.0 || std::abs(s) > 60.0) return std::exp(lgamma_c(s));
        return pi / (sin_pi(s) * gamma_lanczos(1.0 - s));
    }
    return gamma_lanczos(s);
}

cplx rgamma_c(cplx s) {
    if (is_nonpositive_integer(s)) return 0.0;
    if (s.real() < 0.5) {
        if (std::abs(s.imag()) > 20.0 || std::abs(s) > 60.0) return std::exp(-lgamma_c(s));
        return sin_pi(s) * gamma_lanczos(1.0 - s) / pi;
    }
    return 1.0 / gamma_lanczos(s);
}

namespace {

// Euler-Maclaurin for sum_{n>=0} (n + a)^{-s}, Re s >= 1/2, a > 0.
cplx hurwitz_em(cplx s, double a) {
    const int N = 20 + static_cast<int>(std::abs(s));
    cplx sum = 0.0;
    for (int n = N - 1; n >= 0; --n) sum += std::exp(-s * std::log(a + n));
    const double base = a + N;
    cplx Ns = std::exp(-s * std::log(base));
    sum += Ns * base / (s - 1.0) + 0.5 * Ns;
    // sum_j B_{2j}/(2j)! s(s+1)...(s+2j-2) base^{-s-2j+1}
    cplx poch = s;
    cplx npow = Ns / base;
    const double inv2 = 1.0 / (base * base);
    for (int j = 1; j <= 15; ++j) {
        cplx term = bern_over_fact[j - 1] * poch * npow;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        poch *= (s + static_cast<double>(2 * j - 1)) * (s + static_cast<double>(2 * j));
        npow *= inv2;
    }
    return sum;
}

cplx zeta_em(cplx s) { return hurwitz_em(s, 1.0); }

}  // namespace

cplx zeta_c(cplx s) {
    if (s == cplx(1.0, 0.0)) throw std::domain_error("zeta: pole at s = 1");
    if (s == cplx(0.0, 0.0)) return -0.5;
    if (s.real() >= 0.5) return zeta_em(s);
    // zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
    cplx sn = sin_pi(0.5 * s);
    if (sn == cplx(0.0, 0.0)) return 0.0;
    cplx one_m = 1.0 - s;
    cplx logpref = s * std::log(2.0) + (s - 1.0) * std::log(pi) + lgamma_c(one_m);
    return std::exp(logpref) * sn * zeta_em(one_m);
}

cplx hurwitz_zeta_c(cplx s, double a) {
    if (!(a > 0.0)) throw std::domain_error("hurwitz_zeta: needs a > 0");
    if (!(s.real() > 1.0)) throw std::domain_error("hurwitz_zeta: needs Re s > 1");
    return hurwitz_em(s, a);
}

cplx digamma_c(cplx s) {
    if (is_nonpositive_integer(s)) throw std::domain_error("digamma: pole at a nonpositive integer");
    if (s.real() < 0.5) {
        // psi(s) = psi(1-s) - pi cot(pi s)
        return digamma_c(1.0 - s) - pi * cos_pi(s) / sin_pi(s);
    }
    cplx acc = 0.0;
    while (std::abs(s) < 15.0) {
        acc -= 1.0 / s;
        s += 1.0;
    }
    cplx inv = 1.0 / s;
    cplx inv2 = inv * inv;
    cplx r = std::log(s) - 0.5 * inv;
    cplx p = inv2;
    for (int j = 1; j <= 10; ++j) {
        r -= bern[j - 1] / (2.0 * j) * p;
        p *= inv2;
    }
    return acc + r;
}

}  // namespace kv
