#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kv/quadrature.hpp"
#include "kv/specialfn.hpp"

namespace kv {

namespace {

using std::numbers::pi;

bool nonpositive_integer(cplx v, double tol = 0.0) {
    double r = std::round(v.real());
    return r <= 0.0 && std::abs(v.imag()) <= tol && std::abs(v.real() - r) <= tol;
}

// Magnitude beyond which the series form loses accuracy to cancellation.
constexpr double series_limit = 3.0;

// The residue route wants the pole at +-b well away from the positive axis.
bool off_axis(cplx b) { return std::abs(b) * std::abs(std::sin(std::arg(b))) >= 1.5 && std::abs(std::arg(b)) >= 0.3; }

}  // namespace

cplx hyp1f2(cplx a, cplx b, cplx c, cplx x) {
    if (nonpositive_integer(b) || nonpositive_integer(c))
        throw std::domain_error("hyp1f2: lower parameter at a nonpositive integer");
    cdd term(1.0), sum(1.0);
    double peak = 1.0;
    for (int n = 0; n < 5000; ++n) {
        cplx an = a + static_cast<double>(n);
        if (an == cplx(0.0, 0.0)) break;  // terminating series
        cplx ratio = an * x / ((b + static_cast<double>(n)) * (c + static_cast<double>(n)) * static_cast<double>(n + 1));
        term = term * cdd(ratio);
        sum += term;
        double at = abs(term);
        peak = std::max(peak, at);
        if (n > 4 && at <= 1e-33 * peak && std::abs(ratio) < 1.0) break;
    }
    return sum.value();
}

cplx b_transform_series(cplx z, cplx b) {
    const cplx cz = cos_pi(0.5 * z);
    if (std::abs(cz) == 0.0) throw std::domain_error("b_transform_series: removable point, use the odd closed form");
    // sum_n b^{2n} / Gamma(2n - z + 2) by ratio recursion in double-double
    int n0 = 0;
    // skip leading terms with 1/Gamma = 0 when 2 - z is a nonpositive integer
    while (nonpositive_integer(2.0 * n0 - z + 2.0) && n0 < 1000) ++n0;
    cplx first = rgamma_c(2.0 * n0 - z + 2.0) * std::pow(b * b, static_cast<double>(n0));
    cdd term(first), sum(first);
    double peak = std::abs(first);
    const cdd bd(b);
    const cdd b2d = bd * bd;
    const cdd zd(z);
    for (int n = n0; n < 5000; ++n) {
        const cdd den = (cdd(2.0 * n + 2.0) - zd) * (cdd(2.0 * n + 3.0) - zd);
        term = term * b2d / den;
        sum += term;
        double at = abs(term);
        peak = std::max(peak, at);
        if (n > n0 + 2 && at <= 1e-33 * peak && static_cast<double>(2 * n) > std::abs(b)) break;
    }
    const cplx lead = std::pow(b, z - 1.0) * std::cosh(b);
    return 0.5 * pi / cz * (lead - sum.value());
}

cplx b_transform_hyp(cplx z, cplx b) {
    const cplx cz = cos_pi(0.5 * z);
    const cplx lead = 0.5 * pi * std::pow(b, z - 1.0) * std::cosh(b) / cz;
    return lead + gamma_c(z - 1.0) * sin_pi(0.5 * z) * hyp1f2(1.0, 1.0 - 0.5 * z, 1.5 - 0.5 * z, 0.25 * b * b);
}

cplx b_transform_even(int m, cplx b) {
    if (m < 0) throw std::domain_error("b_transform_even: m must be nonnegative");
    const double sg = (m % 2 == 0) ? 1.0 : -1.0;
    return 0.5 * pi * sg * std::pow(b, 2.0 * m - 1.0) * std::exp(-b);
}

cplx b_transform_neg_even(int m, cplx b) {
    if (m < 1) throw std::domain_error("b_transform_neg_even: m must be positive");
    const double sg = (m % 2 == 0) ? 1.0 : -1.0;
    cplx poly = 0.0;
    cplx pw = b;
    double fact = 1.0;  // Gamma(2j+2) = (2j+1)!
    for (int j = 0; j < m; ++j) {
        poly += pw / fact;
        pw *= b * b;
        fact *= (2.0 * j + 2.0) * (2.0 * j + 3.0);
    }
    return 0.5 * pi / b * std::pow(b, -2.0 * m) * sg * (std::exp(-b) + poly);
}

cplx b_transform_odd(int m, cplx b) {
    if (m < 0) throw std::domain_error("b_transform_odd: m must be nonnegative");
    const double sg = (m % 2 == 0) ? 1.0 : -1.0;
    const cplx lb = std::log(b);
    const cdd b2d = cdd(b) * cdd(b);
    // sum_n b^{2n}/(2n)! (psi(2n+1) - log b); psi(2n+1) = H_{2n} - gamma
    cdd term(1.0), sum(0.0);
    dd harmonic(0.0);
    double peak = 1.0;
    for (int n = 0; n < 5000; ++n) {
        dd psi = harmonic - consts::euler_gamma_dd;
        cdd factor(dd(psi.hi, psi.lo) - dd(lb.real()), dd(-lb.imag()));
        sum += term * factor;
        double at = abs(term);
        peak = std::max(peak, at);
        if (n > 2 && at <= 1e-33 * peak && static_cast<double>(2 * n) > std::abs(b)) break;
        term = term * b2d / cdd((2.0 * n + 1.0) * (2.0 * n + 2.0));
        harmonic += dd(1.0) / dd(2.0 * n + 1.0);
        harmonic += dd(1.0) / dd(2.0 * n + 2.0);
    }
    return sg * std::pow(b, 2.0 * m) * sum.value();
}

cplx b_transform_rotated(cplx z, cplx b) {
    if (!(z.real() > -1.0)) throw std::domain_error("b_transform_rotated: needs Re z > -1");
    if (b.real() < 0.0) b = -b;
    if (b.real() == 0.0) throw std::domain_error("b_transform: b on the imaginary axis");
    // B = (I+ + I-)/2, I+- = int_0^inf t^z e^{+-it} / (t^2 + b^2) dt, each rotated off the
    // real axis by an angle that stays short of the poles at +-ib.
    const double ab = std::arg(b);
    const double up = std::min(0.25 * pi, 0.5 * (ab + 0.5 * pi));
    const double dn = std::min(0.25 * pi, 0.5 * (0.5 * pi - ab));
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-300;
    cfg.rel_tol = 1e-15;
    cfg.max_subdivisions = 2000;
    const cplx i(0.0, 1.0);
    auto piece = [&](double phi, double sgn) -> cplx {
        const cplx rot = std::exp(sgn * i * phi);
        const double decay = std::sin(phi);
        const double L = (45.0 + std::max(0.0, z.real()) * std::log(45.0 / decay + 1.0)) / decay;
        auto f = [&](double y) -> cplx {
            if (y == 0.0) return 0.0;
            cplx t = rot * y;
            return std::exp(z * std::log(y)) * std::exp(sgn * i * t) / (t * t + b * b);
        };
        // split at the scale of the nearby pole so the endpoint rule sees a smooth bulk
        double s1 = std::min(std::abs(b), L * 0.5);
        QuadResult head = integrate_tanh_sinh(f, 0.0, s1, cfg);
        QuadResult body = integrate_finite(f, s1, L, cfg);
        return std::exp(sgn * i * phi * (z + 1.0)) * (head.value + body.value);
    };
    return 0.5 * (piece(up, 1.0) + piece(dn, -1.0));
}

cplx b_transform_residue(cplx z, cplx b) {
    if (!(z.real() > -1.0)) throw std::domain_error("b_transform_residue: needs Re z > -1");
    if (b.real() < 0.0) b = -b;
    const double ab = std::arg(b);
    if (ab == 0.0 || b.real() == 0.0) throw std::domain_error("b_transform_residue: b must lie strictly inside a quadrant");
    // Both exponentials rotated onto the imaginary axis; one of them sweeps over the
    // pole at +-ib, which leaves the residue term.
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-300;
    cfg.rel_tol = 1e-15;
    cfg.max_subdivisions = 2000;
    const cplx b2 = b * b;
    auto f = [&](double y) -> cplx {
        if (y == 0.0) return 0.0;
        return std::exp(z * std::log(y) - y) / (b2 - y * y);
    };
    const double L = 45.0 + std::max(0.0, z.real()) * std::log(45.0 + z.real()) * 2.0;
    const double s1 = std::min(1.0, std::abs(b) * 0.5);
    QuadResult head = integrate_tanh_sinh(f, 0.0, s1, cfg);
    QuadResult body = integrate_finite(f, s1, L, cfg);
    const cplx J = head.value + body.value;
    const cplx i(0.0, 1.0);
    const cplx pole = ab > 0.0 ? -i * b : i * b;
    return -sin_pi(0.5 * z) * J + 0.5 * pi * std::exp(z * std::log(pole) - b) / b;
}

cplx b_transform(cplx z, cplx b) {
    if (b.real() < 0.0) b = -b;  // the transform depends on b^2 only
    if (b.real() == 0.0) throw std::domain_error("b_transform: b must not lie on the imaginary axis");
    const double zr = std::round(z.real());
    const bool integral = z.imag() == 0.0 && std::abs(z.real() - zr) < 1e-14;
    const long m = static_cast<long>(zr);
    if (integral) {
        if (m < 0 && (-m) % 2 == 1) throw std::domain_error("b_transform: pole at a negative odd integer");
        if (m % 2 == 0) return m >= 0 ? b_transform_even(static_cast<int>(m / 2), b)
                                      : b_transform_neg_even(static_cast<int>(-m / 2), b);
        // positive odd integer
        if (std::abs(b) <= series_limit) return b_transform_odd(static_cast<int>((m - 1) / 2), b);
        return off_axis(b) ? b_transform_residue(z, b) : b_transform_rotated(z, b);
    }
    const bool near_odd = std::abs(z.imag()) < 1e-3 && std::abs(z.real() - zr) < 1e-3 && (std::abs(m) % 2 == 1);
    if (near_odd && m < 0) {
        // generic form is still exact here; only the pole itself is excluded
        return b_transform_series(z, b);
    }
    if (near_odd || std::abs(b) > series_limit) {
        if (z.real() > -1.0) return off_axis(b) ? b_transform_residue(z, b) : b_transform_rotated(z, b);
    }
    return b_transform_series(z, b);
}

}  // namespace kv
