#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kv/specialfn.hpp"

namespace kv {

namespace {

using std::numbers::pi;

constexpr double series_radius = 20.0;
constexpr double integer_window = 1e-4;

bool is_integer(cplx v) { return v.imag() == 0.0 && v.real() == std::round(v.real()); }

// (x/2)^nu sum_m (sign x^2/4)^m / (m! Gamma(m+nu+1)), accumulated in double-double.
cplx ji_series(cplx nu, cplx x, double sign) {
    const cplx q = sign * 0.25 * x * x;
    int m0 = 0;
    // negative integer order: the first n terms vanish
    if (is_integer(nu) && nu.real() < 0) m0 = static_cast<int>(-nu.real());
    cplx start = rgamma_c(nu + static_cast<double>(m0) + 1.0);
    for (int m = 1; m <= m0; ++m) start *= q / static_cast<double>(m);
    cdd term(start);
    cdd sum = term;
    const cdd xd(x);
    const cdd qd = xd * xd * (0.25 * sign);
    const cdd nud(nu);
    double peak = std::abs(start);
    for (int m = m0;; ++m) {
        const cdd den = (nud + cdd(static_cast<double>(m + 1))) * static_cast<double>(m + 1);
        term = term * qd / den;
        sum += term;
        double at = abs(term);
        peak = std::max(peak, at);
        if (m > m0 + 2 && at <= 1e-33 * peak + 1e-300 && std::abs(static_cast<double>(m)) > std::abs(nu))
            break;
        if (m > 2000) break;
    }
    return sum.value() * std::exp(nu * std::log(0.5 * x));
}

// Y_n, K_n at integer n >= 0 from the logarithmic series.
cplx yk_integer_series(int n, cplx x, BesselKind kind) {
    const bool is_y = kind == BesselKind::Y;
    const cplx half = 0.5 * x;
    const cplx lg = std::log(half);
    const double sign = is_y ? -1.0 : 1.0;
    const cplx q = sign * 0.25 * x * x;

    // finite part: sum_{k<n} (n-k-1)!/k! (x/2)^{2k-n} [(-1)^k for K]
    cdd finite(0.0);
    {
        double fact_nk1 = 1.0;
        for (int j = 1; j <= n - 1; ++j) fact_nk1 *= j;
        cplx pw = std::pow(half, -static_cast<double>(n));
        double kf = 1.0;
        for (int k = 0; k < n; ++k) {
            if (k > 0) kf *= k;
            double c = fact_nk1 / kf;
            if (!is_y && (k % 2 == 1)) c = -c;
            finite += cdd(pw * c);
            pw *= half * half;
            if (n - k - 1 > 0) fact_nk1 /= (n - k - 1);
        }
    }
    // psi series: sum_k [psi(k+1) + psi(n+k+1)] q^k / (k!(n+k)!)
    dd hk(0.0), hnk(0.0);
    for (int j = 1; j <= n; ++j) hnk += dd(1.0) / dd(static_cast<double>(j));
    double nfact = 1.0;
    for (int j = 2; j <= n; ++j) nfact *= j;
    cdd term(1.0 / nfact);
    const dd two_gamma = consts::euler_gamma_dd * 2.0;
    cdd psisum(0.0);
    const cdd qd(q);
    double peak = 1.0 / nfact;
    for (int k = 0;; ++k) {
        dd coef = hk + hnk - two_gamma;
        psisum += cdd(term.re * coef, term.im * coef);
        double at = abs(term);
        peak = std::max(peak, at);
        if (k > 4 && at <= 1e-33 * peak) break;
        if (k > 2000) break;
        term = term * qd / cdd(cplx(static_cast<double>((k + 1) * (n + k + 1)), 0.0));
        hk += dd(1.0) / dd(static_cast<double>(k + 1));
        hnk += dd(1.0) / dd(static_cast<double>(n + k + 1));
    }
    const cplx pwn = std::pow(half, static_cast<double>(n));
    if (is_y) {
        cplx jn = ji_series(static_cast<double>(n), x, -1.0);
        return (2.0 / pi) * jn * lg - finite.value() / pi - psisum.value() * pwn / pi;
    }
    cplx in = ji_series(static_cast<double>(n), x, 1.0);
    const double sg = (n % 2 == 0) ? 1.0 : -1.0;
    return -sg * lg * in + 0.5 * finite.value() + sg * 0.5 * psisum.value() * pwn;
}

// Hankel-type coefficients a_k(nu) = prod_{j=1}^k (4nu^2 - (2j-1)^2) / (k! 8^k)
struct Asym {
    cplx P, Q, S, A;  // P, Q for J/Y; S = sum a_k/x^k; A = sum (-1)^k a_k/x^k
};

Asym asymptotic_sums(cplx nu, cplx x) {
    const cplx mu = 4.0 * nu * nu;
    Asym r{0.0, 0.0, 0.0, 0.0};
    cplx a = 1.0;  // a_k / x^k
    double prev = 1e300;
    for (int k = 0; k < 200; ++k) {
        double at = std::abs(a);
        if (k > 2 && at > prev) break;  // asymptotic series started to diverge
        r.S += a;
        r.A += (k % 2 == 0) ? a : -a;
        if (k % 2 == 0) r.P += (k % 4 == 0) ? a : -a;
        else r.Q += (k % 4 == 1) ? a : -a;
        if (at < 1e-17 * std::abs(r.S)) break;
        prev = at;
        const double odd = 2.0 * (k + 1) - 1.0;
        a *= (mu - odd * odd) / (static_cast<double>(k + 1) * 8.0 * x);
    }
    return r;
}

cplx jy_asymptotic(cplx nu, cplx x, BesselKind kind) {
    Asym s = asymptotic_sums(nu, x);
    cplx w = x - 0.5 * pi * nu - 0.25 * pi;
    cplx pre = std::sqrt(2.0 / (pi * x));
    if (kind == BesselKind::J) return pre * (s.P * std::cos(w) - s.Q * std::sin(w));
    return pre * (s.P * std::sin(w) + s.Q * std::cos(w));
}

cplx k_asymptotic(cplx nu, cplx x) {
    Asym s = asymptotic_sums(nu, x);
    return std::sqrt(pi / (2.0 * x)) * std::exp(-x) * s.S;
}

cplx i_asymptotic(cplx nu, cplx x) {
    Asym s = asymptotic_sums(nu, x);
    cplx pre = 1.0 / std::sqrt(2.0 * pi * x);
    cplx main = std::exp(x) * pre * s.A;
    const cplx i(0.0, 1.0);
    cplx rot = (x.imag() >= 0) ? i * std::exp(i * pi * nu) : -i * std::exp(-i * pi * nu);
    return main + rot * std::exp(-x) * pre * s.S;
}

cplx bessel_generic(cplx nu, BesselKind kind, cplx x);

// Interpolate through the integer value and generic values at n +- h, n +- 2h.
cplx near_integer(cplx nu, int n, BesselKind kind, cplx x) {
    const double h = 2e-3;
    const double nodes[5] = {-2 * h, -h, 0.0, h, 2 * h};
    cplx vals[5];
    for (int i = 0; i < 5; ++i) {
        if (nodes[i] == 0.0) vals[i] = bessel(static_cast<double>(n), kind, x);
        else vals[i] = bessel_generic(static_cast<double>(n) + nodes[i], kind, x);
    }
    cplx d = nu - static_cast<double>(n);
    cplx out = 0.0;
    for (int i = 0; i < 5; ++i) {
        cplx l = 1.0;
        for (int j = 0; j < 5; ++j)
            if (j != i) l *= (d - nodes[j]) / (nodes[i] - nodes[j]);
        out += l * vals[i];
    }
    return out;
}

// Non-integer order, no near-integer switching.
cplx bessel_generic(cplx nu, BesselKind kind, cplx x) {
    const double ax = std::abs(x);
    switch (kind) {
        case BesselKind::J:
            return ax <= series_radius ? ji_series(nu, x, -1.0) : jy_asymptotic(nu, x, kind);
        case BesselKind::I:
            return ax <= series_radius ? ji_series(nu, x, 1.0) : i_asymptotic(nu, x);
        case BesselKind::Y: {
            if (ax > series_radius) return jy_asymptotic(nu, x, kind);
            cplx jp = ji_series(nu, x, -1.0), jm = ji_series(-nu, x, -1.0);
            return (jp * cos_pi(nu) - jm) / sin_pi(nu);
        }
        case BesselKind::K: {
            if (ax > series_radius) return k_asymptotic(nu, x);
            if (ax > 2.0 && x.real() > 0.0) return bessel_k_integral(nu, x);
            cplx ip = ji_series(nu, x, 1.0), im = ji_series(-nu, x, 1.0);
            return 0.5 * pi * (im - ip) / sin_pi(nu);
        }
    }
    return 0.0;
}

}  // namespace

cplx bessel_k_integral(cplx nu, cplx x) {
    if (!(x.real() > 0.0)) throw std::domain_error("bessel_k_integral: needs Re x > 0");
    const double phi = std::abs(std::arg(x));
    const double d = 0.5 * pi - phi;  // half-width of the strip of decay
    const double h = std::min(0.25, d / 6.0);
    // integrand at t: exp(-x cosh t) cosh(nu t); truncate once it is negligible
    const double rx = x.real();
    const double ref = std::exp(-rx);
    cplx sum = 0.5 * std::exp(-x);
    for (int j = 1; j < 100000; ++j) {
        double t = j * h;
        double env = std::exp(-rx * std::cosh(t) + std::abs(nu.real()) * t);
        if (env < 1e-18 * ref && t > 1.0) break;
        sum += std::exp(-x * std::cosh(t)) * std::cosh(nu * t);
    }
    return sum * h;
}

cplx bessel(cplx nu, BesselKind kind, cplx x) {
    if ((kind == BesselKind::Y || kind == BesselKind::K) && x == cplx(0.0, 0.0))
        throw std::domain_error("bessel: Y and K are singular at x = 0");
    const double ax = std::abs(x);
    const double nr = std::round(nu.real());
    const bool integer = is_integer(nu);
    if (integer) {
        int n = static_cast<int>(nr);
        if (kind == BesselKind::J || kind == BesselKind::I) {
            if (n < 0) {
                cplx v = bessel(static_cast<double>(-n), kind, x);
                return (kind == BesselKind::J && (-n) % 2 == 1) ? -v : v;
            }
            return bessel_generic(nu, kind, x);
        }
        if (n < 0) {
            cplx v = bessel(static_cast<double>(-n), kind, x);
            return (kind == BesselKind::Y && (-n) % 2 == 1) ? -v : v;
        }
        if (kind == BesselKind::Y) return ax > series_radius ? jy_asymptotic(nu, x, kind) : yk_integer_series(n, x, kind);
        if (ax > series_radius) return k_asymptotic(nu, x);
        if (ax > 2.0 && x.real() > 0.0) return bessel_k_integral(nu, x);
        return yk_integer_series(n, x, kind);
    }
    if ((kind == BesselKind::Y || kind == BesselKind::K) && std::abs(nu - nr) < integer_window &&
        ax <= series_radius && !(kind == BesselKind::K && ax > 2.0 && x.real() > 0.0))
        return near_integer(nu, static_cast<int>(nr), kind, x);
    return bessel_generic(nu, kind, x);
}

}  // namespace kv
