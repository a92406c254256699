#include "kv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kv/combinat.hpp"
#include "kv/dd.hpp"
#include "kv/parallel.hpp"
#include "kv/specialfn.hpp"

namespace kv {

namespace {

using std::numbers::pi;
const cplx I(0.0, 1.0);

// Relative error of the leading term of each residue branch (complex Gamma).
constexpr double branch_rel_error = 4e-15;
constexpr double horizon = 1e12;
// Parameter distance below which the series is treated as degenerate. The
// direct sum loses about log10(1/distance) digits, so the window is wide.
constexpr double degenerate_window = 0.04;
// Node spacing in z for the degenerate interpolation.
constexpr double interp_step = 0.08;
constexpr int interp_half = 6;

double nearest_with_parity(double v, int parity) {
    // nearest integer n with n = parity (mod 2)
    double n = std::round(v);
    if (static_cast<long long>(std::abs(n)) % 2 != parity) n += (v >= n) ? 1.0 : -1.0;
    return n;
}

// Nearest degenerate z for H (and, with all_odd, for K).
double degenerate_point(const KernelParams& p, bool k_kernel) {
    const double zr = p.z.real();
    const int parity = (p.k + 1) % 2;
    double best = nearest_with_parity(zr, parity);
    if (k_kernel) {
        double odd = nearest_with_parity(zr, 1);
        if (std::abs(odd - zr) < std::abs(best - zr)) best = odd;
    }
    return best;
}

double degeneracy_distance(const KernelParams& p, bool k_kernel) {
    double z0 = degenerate_point(p, k_kernel);
    return std::abs(p.z - cplx(z0, 0.0));
}

cplx log_big_x(int k, cplx log_x) {
    return std::log(0.25) + 2.0 * k * (log_x - std::log(2.0 * k));
}

cplx h_prefactor(const KernelParams& p) {
    return pi / (std::sqrt(static_cast<double>(p.k)) * std::pow(2.0, (1.0 + p.z) / static_cast<double>(p.k)));
}

cplx k_prefactor(const KernelParams& p) {
    return 1.0 / (std::sqrt(static_cast<double>(p.k)) * std::pow(2.0, (1.0 + p.z) / static_cast<double>(p.k)));
}

struct SeriesOut {
    std::vector<cplx> values;
    double est_error = 0.0;
    bool within_horizon = true;
};

// Evaluates at z0 + s for two symmetric stencils in s and
// interpolates to the requested z. The stencil disagreement is the error.
template <class Eval>
SeriesOut interpolate_in_z(const KernelParams& p, double z0, int orders, Eval&& eval) {
    // a complex offset is fine: the interpolating polynomial is evaluated at it
    const cplx delta = p.z - z0;
    auto stencil = [&](double h) {
        std::vector<double> nodes;
        for (int i = 1; i <= interp_half; ++i) {
            nodes.push_back(i * h);
            nodes.push_back(-i * h);
        }
        const int n = static_cast<int>(nodes.size());
        std::vector<cplx> out(orders + 1, 0.0);
        std::vector<cplx> lw(n);
        for (int i = 0; i < n; ++i) {
            cplx l = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) l *= (delta - nodes[j]) / (nodes[i] - nodes[j]);
            lw[i] = l;
        }
        bool ok = true;
        for (int i = 0; i < n; ++i) {
            KernelParams q = p;
            q.z = cplx(z0 + nodes[i], 0.0);
            SeriesOut node = eval(q);
            ok = ok && node.within_horizon;
            for (int r = 0; r <= orders; ++r) out[r] += lw[i] * node.values[r];
        }
        return std::make_pair(out, ok);
    };
    auto [a, ok_a] = stencil(interp_step);
    auto [b, ok_b] = stencil(0.8 * interp_step);
    SeriesOut res;
    res.values = a;
    res.within_horizon = ok_a && ok_b;
    for (int r = 0; r <= orders; ++r) res.est_error = std::max(res.est_error, 2.0 * std::abs(a[r] - b[r]));
    res.est_error += 1e-16 * std::abs(a[0]);
    return res;
}

SeriesOut slater_out(const std::vector<cplx>& b, int m, cplx log_x, double power, cplx x, int orders, cplx pref) {
    SlaterResult s = slater_series(b, m, log_x, power, x, orders);
    SeriesOut o;
    o.values.resize(orders + 1);
    for (int r = 0; r <= orders; ++r) o.values[r] = s.values[r] * pref;
    o.est_error = s.est_error * std::abs(pref);
    o.within_horizon = s.within_horizon;
    return o;
}

// H series with the logarithm of the argument supplied (x > 0).
SeriesOut h_series_raw(const KernelParams& p, double x, int orders) {
    auto direct = [&](const KernelParams& q) {
        auto mp = combinat::meijer_params_h(q.k, q.z);
        return slater_out(mp.b, q.k + 1, log_big_x(q.k, std::log(x)), 2.0 * q.k, x, orders, h_prefactor(q));
    };
    if (degeneracy_distance(p, false) < degenerate_window)
        return interpolate_in_z(p, degenerate_point(p, false), orders, direct);
    return direct(p);
}

SeriesOut k_series_raw(const KernelParams& p, cplx log_x) {
    const cplx x = std::exp(log_x);
    auto direct = [&](const KernelParams& q) {
        auto mp = combinat::meijer_params_k(q.k, q.z);
        return slater_out(mp.bprime, q.k + 2, log_big_x(q.k, log_x), 2.0 * q.k, x, 0, k_prefactor(q));
    };
    if (degeneracy_distance(p, true) < degenerate_window)
        return interpolate_in_z(p, degenerate_point(p, true), 0, direct);
    return direct(p);
}

cplx k_at_zero(const KernelParams& p) {
    const double k = p.k;
    if (!(p.z.real() < k - 1.0)) throw std::domain_error("K at x = 0 needs Re z < k - 1");
    return gamma_c((k - 1.0 - p.z) / k) / k;
}

// log(Gamma(s) cos(pi s / 2)) without overflow for large |Im s|.
cplx log_gamma_cos(cplx s) {
    const double y = s.imag();
    cplx lc;
    if (std::abs(y) < 20.0) {
        lc = std::log(cos_pi(0.5 * s));
    } else {
        // cos(pi s/2) = (e^{i pi s/2} + e^{-i pi s/2})/2; keep the dominant exponential
        const cplx e = (y > 0) ? -I * 0.5 * pi * s : I * 0.5 * pi * s;
        const cplx rest = (y > 0) ? std::exp(I * pi * s) : std::exp(-I * pi * s);
        lc = e + std::log(1.0 + rest) - std::log(2.0);
    }
    return lgamma_c(s) + lc;
}

KernelValue make_value(cplx v, Route r, double err) { return KernelValue{v, r, err}; }

}  // namespace

std::string route_name(Route r) {
    switch (r) {
        case Route::series: return "series";
        case Route::quadrature: return "quadrature";
        case Route::contour: return "contour";
        case Route::bessel_closed_form: return "bessel_closed_form";
        case Route::asymptotic: return "asymptotic";
    }
    return "unknown";
}

void validate_strip(const KernelParams& p) {
    if (p.k < 1) throw std::domain_error("k must be a positive integer");
    if (!(p.z.real() > -1.0 && p.z.real() < static_cast<double>(p.k)))
        throw std::domain_error("z outside the strip -1 < Re z < k");
}

double h_degeneracy_distance(const KernelParams& p) { return degeneracy_distance(p, false); }
double k_degeneracy_distance(const KernelParams& p) { return degeneracy_distance(p, true); }

SlaterResult slater_series(const std::vector<cplx>& b, int m, cplx log_x, double power, cplx x, int max_deriv) {
    const int q = static_cast<int>(b.size());
    if (m < 1 || m > q) throw std::domain_error("slater_series: need 1 <= m <= q");
    if (max_deriv > 0 && x == cplx(0.0, 0.0)) throw std::domain_error("slater_series: derivatives need x != 0");
    const int R = max_deriv;
    const cplx X = std::exp(log_x);
    const cdd minus_x = -cdd(X);
    const cdd xinv = R > 0 ? cdd(1.0) / cdd(x) : cdd(1.0);
    std::vector<cdd> bd(b.begin(), b.end());

    SlaterResult out;
    out.values.assign(R + 1, 0.0);
    std::vector<cdd> total(R + 1, cdd(0.0));
    std::vector<double> abs_branch(R + 1, 0.0);
    double trunc = 0.0;

    for (int h = 0; h < m; ++h) {
        // Terms with 1/Gamma(1 - b_j + b_h + n) = 0 are skipped.
        int n0 = 0;
        for (int j = m; j < q; ++j) {
            cplx c = 1.0 - b[j] + b[h];
            double r = std::round(c.real());
            if (c.imag() == 0.0 && std::abs(c.real() - r) < 1e-12 && r <= 0.0)
                n0 = std::max(n0, static_cast<int>(-r) + 1);
        }
        cplx t0 = std::exp((b[h] + static_cast<double>(n0)) * log_x);
        double fact = 1.0;
        for (int i = 2; i <= n0; ++i) fact *= i;
        t0 *= ((n0 % 2 == 0) ? 1.0 : -1.0) / fact;
        for (int j = 0; j < m; ++j)
            if (j != h) t0 *= gamma_c(b[j] - b[h] - static_cast<double>(n0));
        for (int j = m; j < q; ++j) t0 *= rgamma_c(1.0 - b[j] + b[h] + static_cast<double>(n0));
        if (t0 == cplx(0.0, 0.0)) continue;

        cdd t(t0);
        std::vector<cdd> sum(R + 1, cdd(0.0));
        double peak_term = std::abs(t0);
        for (int n = n0; n < n0 + 20000; ++n) {
            sum[0] += t;
            if (R > 0) {
                const cdd pw = (bd[h] + cdd(static_cast<double>(n))) * power;
                cdd f = t;
                for (int r = 1; r <= R; ++r) {
                    f = f * (pw - cdd(static_cast<double>(r - 1))) * xinv;
                    sum[r] += f;
                }
            }
            ++out.terms;
            const double at = abs(t);
            peak_term = std::max(peak_term, at);
            out.peak = std::max(out.peak, std::max(at, abs(sum[0])));
            cdd D(static_cast<double>(n + 1));
            for (int j = 0; j < m; ++j)
                if (j != h) D = D * (bd[j] - bd[h] - cdd(static_cast<double>(n + 1)));
            for (int j = m; j < q; ++j) D = D * (cdd(1.0) - bd[j] + bd[h] + cdd(static_cast<double>(n)));
            const double dabs = abs(D);
            // once terms shrink geometrically and are negligible, stop
            if (n > n0 + 2 && std::abs(X) < 0.5 * dabs && at <= 1e-34 * peak_term) {
                trunc += at;
                break;
            }
            t = t * minus_x / D;
        }
        for (int r = 0; r <= R; ++r) {
            total[r] += sum[r];
            abs_branch[r] += abs(sum[r]);
        }
    }
    for (int r = 0; r <= R; ++r) out.values[r] = total[r].value();
    double worst = 0.0;
    for (int r = 0; r <= R; ++r) worst = std::max(worst, branch_rel_error * abs_branch[r]);
    out.est_error = worst + trunc + 1e-30 * out.peak;
    out.within_horizon = out.peak <= horizon * std::abs(out.values[0]);
    return out;
}

std::vector<KernelValue> h_series_derivs(const KernelParams& p, double x, int max_deriv) {
    validate_strip(p);
    if (x < 0.0) throw std::domain_error("h_series: x must be nonnegative");
    if (x == 0.0) {
        std::vector<KernelValue> out;
        for (int j = 0; j <= max_deriv; ++j)
            out.push_back(make_value(h_derivative_at_zero(p, j), Route::series, 1e-15));
        return out;
    }
    SeriesOut s = h_series_raw(p, x, max_deriv);
    std::vector<KernelValue> out;
    for (int r = 0; r <= max_deriv; ++r) out.push_back(make_value(s.values[r], Route::series, s.est_error));
    if (!s.within_horizon)
        throw HorizonExceeded("h_series: cancellation exceeds the accuracy horizon", out[0]);
    return out;
}

KernelValue h_series(const KernelParams& p, double x) { return h_series_derivs(p, x, 0)[0]; }

std::vector<KernelValue> h_contour_derivs(const KernelParams& p, double x, int max_deriv, bool sine) {
    validate_strip(p);
    if (!(x > 0.0)) throw std::domain_error("h_contour: x must be positive");
    const int k = p.k;
    const double kd = k;
    const cplx z = p.z;
    const double lam = std::pow(kd / x, 1.0 / (kd + 1.0));
    const double Lam = std::pow(lam, -kd);
    const double d = std::min(0.3, 2.0 / kd);
    const cplx diag = std::exp(I * 0.25 * pi);

    QuadratureConfig cfg;
    cfg.abs_tol = 1e-18;
    cfg.rel_tol = 1e-14;
    cfg.max_subdivisions = 3000;

    std::vector<KernelValue> out(max_deriv + 1);
    for (int r = 0; r <= max_deriv; ++r) {
        const cplx expo = z - kd + static_cast<double>(r);
        cplx total = 0.0;
        double err = 0.0, mag = 0.0;
        for (int s1 : {1, -1}) {
            for (int s2 : {1, -1}) {
                auto f = [&](cplx s) -> cplx {
                    const cplx ls = std::log(s);
                    return std::exp(expo * ls + I * Lam * (s1 * kd * s + static_cast<double>(s2) * std::exp(-kd * ls)));
                };
                // log-magnitude of the integrand, used to place cut-offs
                auto logmag = [&](cplx s) {
                    const cplx ls = std::log(s);
                    return (expo * ls + I * Lam * (s1 * kd * s + static_cast<double>(s2) * std::exp(-kd * ls))).real();
                };
                const double budget = 48.0 + std::log1p(1.0 / (Lam * kd));
                cplx val = 0.0;
                double e = 0.0;
                auto add = [&](const QuadResult& q) {
                    val += q.value;
                    e += q.error;
                };
                if (s1 == s2) {
                    // through the saddle at s = 1
                    const cplx dir = (s1 > 0) ? diag : std::conj(diag);
                    const cplx P = 1.0 - d * dir;
                    const double ref = logmag(1.0);
                    double rmax = 1.0;
                    while (logmag(1.0 + rmax * dir) > ref - budget && rmax < 1e8) rmax *= 2.0;
                    add(integrate_finite([&](double u) { return u == 0.0 ? cplx(0.0) : f(u * P) * P; }, 0.0, 1.0, cfg));
                    auto g = [&](double rr) { return f(1.0 + rr * dir) * dir; };
                    add(integrate_finite(g, -d, 0.0, cfg));
                    double lo = 0.0;
                    double step = std::min(1.0, 4.0 / std::sqrt(Lam * kd * (kd + 1.0)));
                    while (lo < rmax) {
                        double hi = std::min(rmax, lo + step);
                        add(integrate_finite(g, lo, hi, cfg));
                        lo = hi;
                        step *= 2.0;
                    }
                } else {
                    // ray where both ends decay
                    const double theta = (s1 > 0 ? 1.0 : -1.0) * pi / (kd + 1.0);
                    const cplx dir = std::exp(I * theta);
                    double ref = -std::numeric_limits<double>::infinity();
                    for (double rho = 1e-3; rho < 1e3; rho *= 1.2) ref = std::max(ref, logmag(rho * dir));
                    double rlo = 1.0, rhi = 1.0;
                    while (logmag(rlo * dir) > ref - budget && rlo > 1e-12) rlo *= 0.5;
                    while (logmag(rhi * dir) > ref - budget && rhi < 1e8) rhi *= 2.0;
                    auto g = [&](double rho) { return f(rho * dir) * dir; };
                    for (double a = rlo; a < rhi; a *= 2.0) add(integrate_finite(g, a, std::min(2.0 * a, rhi), cfg));
                }
                cplx w = (sine ? -0.25 * s1 * s2 : 0.25) * std::pow(cplx(0.0, static_cast<double>(s1)), r);
                total += w * val;
                err += std::abs(w) * e;
                mag += std::abs(w * val);
            }
        }
        const cplx scale = std::pow(lam, z - kd + 1.0 + static_cast<double>(r));
        out[r] = make_value(scale * total, Route::contour, std::abs(scale) * (err + 4e-16 * mag));
    }
    return out;
}

KernelValue h_contour(const KernelParams& p, double x) { return h_contour_derivs(p, x, 0)[0]; }

KernelValue h_eval(const KernelParams& p, double x) {
    validate_strip(p);
    if (x <= 0.0) return h_series(p, 0.0);
    const double kd = p.k;
    const double t = std::pow(0.25, 1.0 / (2 * kd + 2)) * std::pow(x / (2 * kd), kd / (kd + 1.0));
    if (t <= 4.0) {
        try {
            KernelValue v = h_series(p, x);
            if (v.est_error <= 1e-12 * std::max(1.0, std::abs(v.value))) return v;
        } catch (const HorizonExceeded&) {
        }
    }
    return h_contour(p, x);
}

KernelValue h_quadrature(const KernelParams& p, double x, const QuadratureConfig& cfg_in) {
    validate_strip(p);
    if (x < 0.0) throw std::domain_error("h_quadrature: x must be nonnegative");
    const double kd = p.k;
    const cplx z = p.z;
    QuadratureConfig cfg = cfg_in;
    cfg.abs_tol = std::min(cfg.abs_tol, 1e-15);
    cfg.rel_tol = std::min(cfg.rel_tol, 1e-13);
    cfg.osc_max_halfperiods = std::max(cfg.osc_max_halfperiods, 64);
    const double eps = 0.5;
    const double mcut = std::max(2.0, 8.0 / std::max(x, 1.0));
    const double tol = 1e-17;

    cplx total = 0.0;
    double err = 0.0;

    // (0, eps]: with T = t^{-k}, expand cos(x T^{-1/k}) in powers of x.
    {
        const double E = std::pow(eps, -kd);
        double coef = 1.0 / kd;  // x^{2m}/(2m)!/k
        for (int m = 0; m < 200; ++m) {
            const cplx a = (kd - z - 1.0 - 2.0 * m) / kd;
            auto env = [&](double T) { return std::exp((a - 1.0) * std::log(T)); };
            QuadResult q = integrate_osc_tail(env, 1.0, 0.0, E, cfg);
            const double sg = (m % 2 == 0) ? 1.0 : -1.0;
            total += sg * coef * q.value;
            err += coef * q.error;
            if (x == 0.0) break;
            const double next = coef * x * x / ((2.0 * m + 1.0) * (2.0 * m + 2.0));
            // remaining terms are bounded by a geometric tail of 2 E^{Re a - 1} (x eps)^{2m}/(2m)!
            if (m > 0 && next * std::pow(E, a.real() - 1.0) * 4.0 < tol) {
                err += next * 4.0 * std::pow(E, a.real() - 1.0);
                break;
            }
            coef = next;
        }
    }
    // [eps, mcut]: plain adaptive quadrature.
    {
        auto g = [&](double t) { return std::exp((z - kd) * std::log(t)) * std::cos(x * t) * std::cos(std::pow(t, -kd)); };
        QuadResult q = integrate_finite(g, eps, mcut, cfg);
        total += q.value;
        err += q.error;
    }
    // [mcut, inf): expand cos(t^{-k}).
    {
        double coef = 1.0;  // 1/(2m)!
        for (int m = 0; m < 200; ++m) {
            const cplx expo = z - kd - 2.0 * kd * m;
            cplx v;
            double e = 0.0;
            if (x == 0.0) {
                if (!(expo.real() < -1.0)) throw std::domain_error("H at x = 0 needs Re z < k - 1");
                v = -std::exp((expo + 1.0) * std::log(mcut)) / (expo + 1.0);
            } else {
                auto env = [&](double t) { return std::exp(expo * std::log(t)); };
                QuadResult q = integrate_osc_tail(env, x, 0.0, mcut, cfg);
                v = q.value;
                e = q.error;
            }
            const double sg = (m % 2 == 0) ? 1.0 : -1.0;
            total += sg * coef * v;
            err += coef * e;
            const double next = coef / ((2.0 * m + 1.0) * (2.0 * m + 2.0));
            const double bound = next * std::pow(mcut, expo.real() - 2.0 * kd + 1.0) * 4.0 / std::max(x, 1e-3);
            if (bound < tol) {
                err += bound;
                break;
            }
            coef = next;
        }
    }
    return make_value(total, Route::quadrature, err);
}

KernelValue k_real(const KernelParams& p, double x, const QuadratureConfig& cfg_in) {
    validate_strip(p);
    if (x < 0.0) throw std::domain_error("k_real: x must be nonnegative");
    if (x == 0.0) return make_value(k_at_zero(p), Route::quadrature, 1e-15 * std::abs(k_at_zero(p)));
    const double kd = p.k;
    const cplx z = p.z;
    QuadratureConfig cfg = cfg_in;
    cfg.abs_tol = std::min(cfg.abs_tol, 1e-15);
    cfg.rel_tol = std::min(cfg.rel_tol, 1e-13);
    auto env = [&](double t) -> cplx {
        if (t <= 0.0) return 0.0;
        const double lt = std::log(t);
        return std::exp((z - kd) * lt - std::exp(-kd * lt));
    };
    const double cut = 4.0;
    QuadResult head = integrate_finite([&](double t) { return env(t) * std::cos(x * t); }, 0.0, cut, cfg);
    QuadResult tail = integrate_osc_tail(env, x, 0.0, cut, cfg);
    return make_value(head.value + tail.value, Route::quadrature, head.error + tail.error);
}

KernelValue k_contour(const KernelParams& p, cplx x, const QuadratureConfig& cfg_in, double c) {
    validate_strip(p);
    if (x == cplx(0.0, 0.0)) throw std::domain_error("k_contour: x must be nonzero");
    const double kd = p.k;
    const double delta = 1.0 / kd - 2.0 * std::abs(std::arg(x)) / pi;
    if (!(delta > 1e-12))
        throw std::domain_error("k_contour: |arg x| must be below pi/(2k); the line integral only converges conditionally there");
    const double lower = std::max(0.0, 1.0 - kd + p.z.real());
    if (c < 0.0) c = lower + 0.5;
    if (!(c > lower)) throw std::domain_error("k_contour: abscissa must exceed max(0, 1 - k + Re z)");
    const cplx lx = std::log(x);
    ContourSpec spec;
    spec.c = c;
    spec.delta = delta;
    spec.sigma = c + (c - 1.0 - p.z.real()) / kd + 0.5;
    spec.decay_class = DecayClass::exponential;
    spec.integrand = [&](cplx s) {
        const cplx w = (s - 1.0 - p.z) / kd + 1.0;
        return std::exp(log_gamma_cos(s) + lgamma_c(w) - s * lx) / kd;
    };
    QuadratureConfig cfg = cfg_in;
    cfg.abs_tol = std::min(cfg.abs_tol, 1e-15);
    cfg.rel_tol = std::min(cfg.rel_tol, 1e-13);
    QuadResult q = integrate_vertical_line(spec, cfg);
    return make_value(q.value, Route::contour, q.error);
}

KernelValue k_series(const KernelParams& p, cplx x) {
    validate_strip(p);
    if (x == cplx(0.0, 0.0)) return make_value(k_at_zero(p), Route::series, 1e-15 * std::abs(k_at_zero(p)));
    const double lim = pi / (2.0 * p.k);
    if (std::abs(std::arg(x)) > lim * (1.0 + 1e-12)) throw std::domain_error("k_series: needs |arg x| <= pi/(2k)");
    SeriesOut s = k_series_raw(p, std::log(x));
    KernelValue v = make_value(s.values[0], Route::series, s.est_error);
    if (!s.within_horizon) throw HorizonExceeded("k_series: cancellation exceeds the accuracy horizon", v);
    return v;
}

KernelValue h_from_k_combination(const KernelParams& p, double x) {
    validate_strip(p);
    if (x < 0.0) throw std::domain_error("h_from_k_combination: x must be nonnegative");
    const double kd = p.k;
    const cplx phase = std::exp(I * pi * (kd - 1.0 - p.z) / (2.0 * kd));
    if (x == 0.0) {
        const cplx k0 = k_at_zero(p);
        return make_value(0.5 * (phase + 1.0 / phase) * k0, Route::series, 1e-15 * std::abs(k0));
    }
    // the rays are built from the logarithm so the argument sits exactly on them
    const double ray = pi / (2.0 * kd);
    SeriesOut lower = k_series_raw(p, cplx(std::log(x), -ray));
    SeriesOut upper = k_series_raw(p, cplx(std::log(x), ray));
    const cplx v = 0.5 * (phase * lower.values[0] + upper.values[0] / phase);
    const double e = 0.5 * (std::abs(phase) * lower.est_error + upper.est_error / std::abs(phase));
    KernelValue out = make_value(v, Route::series, e);
    if (!lower.within_horizon || !upper.within_horizon)
        throw HorizonExceeded("h_from_k_combination: cancellation exceeds the accuracy horizon", out);
    return out;
}

cplx h_k1_closed_form(cplx z, double x) {
    if (!(z.real() > -1.0 && z.real() < 1.0)) throw std::domain_error("h_k1_closed_form: needs -1 < Re z < 1");
    if (!(x > 0.0)) throw std::domain_error("h_k1_closed_form: x must be positive");
    const double y = 2.0 * std::sqrt(x);
    const cplx m = (2.0 / pi) * bessel_k(z, y) - bessel_y(z, y);
    return 0.5 * pi * std::pow(x, -0.5 * z) * (cos_pi(0.5 * z) * m - sin_pi(0.5 * z) * bessel_j(z, y));
}

cplx h_derivative_at_zero(const KernelParams& p, int j) {
    validate_strip(p);
    const int k = p.k;
    if (j < 0 || j > 2 * k + 1) throw std::domain_error("h_derivative_at_zero: j must lie in [0, 2k+1]");
    const double zr = p.z.real();
    if (!(-j - 1.0 < zr && zr < -j - 1.0 + k))
        throw std::domain_error("h_derivative_at_zero: needs -j-1 < Re z < -j-1+k");
    if (j % 2 == 1) return 0.0;
    const double kd = k;
    const cplx a = (kd - j - 1.0 - p.z) / kd;
    const double sg = ((j / 2) % 2 == 0) ? 1.0 : -1.0;
    return sg / kd * gamma_c(a) * cos_pi(0.5 * a);
}

cplx h_at_zero(const KernelParams& p) {
    validate_strip(p);
    if (!(p.z.real() < p.k - 1.0)) throw std::domain_error("H(0) is finite only for Re z < k - 1");
    return h_derivative_at_zero(p, 0);
}

cplx h_mellin(const KernelParams& p, cplx s) {
    const double kd = p.k;
    const cplx w = (s - 1.0 - p.z) / kd + 1.0;
    return gamma_c(s) * cos_pi(0.5 * s) * gamma_c(w) * cos_pi(0.5 * w) / kd;
}

std::vector<cplx> ode_coefficients(const KernelParams& p) {
    const double kd = p.k;
    const double sg = (p.k % 2 == 0) ? 1.0 : -1.0;
    return {1.0, 2.0 * p.z + kd + 3.0, (p.z + 1.0) * (p.z + kd + 1.0), sg * kd * kd};
}

double ode_residual(const KernelParams& p, double x, OdeTarget which) {
    validate_strip(p);
    if (!(x > 0.0)) throw std::domain_error("ode_residual: x must be positive");
    const int k = p.k;
    const int top = 2 * k + 2;
    std::vector<cplx> w(top + 1);
    if (which == OdeTarget::H) {
        auto d = h_series_derivs(p, x, top);
        for (int r = 0; r <= top; ++r) w[r] = d[r].value;
    } else {
        auto d = h_contour_derivs(p, x, top, true);
        for (int r = 0; r <= top; ++r) w[r] = d[r].value;
    }
    auto c = ode_coefficients(p);
    const cplx t1 = c[0] * x * x * w[top];
    const cplx t2 = c[1] * x * w[top - 1];
    const cplx t3 = c[2] * w[top - 2];
    const cplx t4 = c[3] * w[0];
    const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4)});
    if (scale == 0.0) return 0.0;
    return std::abs(t1 + t2 + t3 + t4) / scale;
}

namespace {

cplx big_x_root(const KernelParams& p, double y) {
    // X^{1/(2k+2)} with X = (1/4)(y/2k)^{2k}
    const double kd = p.k;
    return std::pow(0.25, 1.0 / (2 * kd + 2)) * std::pow(y / (2 * kd), kd / (kd + 1.0));
}

cplx asymptotic_amplitude_c(const KernelParams& p, double y) {
    const double kd = p.k;
    const double X = 0.25 * std::pow(y / (2 * kd), 2 * kd);
    const cplx theta = 1.0 / (4.0 * (kd + 1.0)) - (1.0 + p.z) / (2.0 * kd * (kd + 1.0));
    return std::sqrt(pi) * std::exp(theta * std::log(X)) /
           (std::sqrt(kd * (kd + 1.0)) * std::pow(2.0, (1.0 + p.z) / kd));
}

}  // namespace

double h_asymptotic_phase(const KernelParams& p, double y) {
    return 0.25 * pi + (2.0 * p.k + 2.0) * big_x_root(p, y).real();
}

double h_asymptotic_amplitude(const KernelParams& p, double y) { return std::abs(asymptotic_amplitude_c(p, y)); }

cplx h_asymptotic(const KernelParams& p, double y) {
    validate_strip(p);
    if (!(y > 0.0)) throw std::domain_error("h_asymptotic: y must be positive");
    return asymptotic_amplitude_c(p, y) * std::cos(h_asymptotic_phase(p, y));
}

bool h_small_x_bound(const KernelParams& p, int samples) {
    validate_strip(p);
    // H(0) is infinite unless Re z < k - 1
    if (!(p.z.real() < p.k - 1.0)) return false;
    const double bound = 2.0 * (std::abs(h_at_zero(p)) + 1.0);
    for (int i = 1; i <= samples; ++i) {
        const double x = 0.1 * i / samples;
        if (std::abs(h_eval(p, x).value) > bound) return false;
    }
    return true;
}

// ---- interpolant ----

HInterpolant::HInterpolant(const KernelParams& p, double x0, double x1, int degree) {
    build(p, x0, x1, degree, [p](double x) { return h_eval(p, x); });
}

void HInterpolant::build(const KernelParams& p, double x0, double x1, int degree,
                         const std::function<KernelValue(double)>& eval) {
    if (!(x0 > 0.0 && x1 > x0)) throw std::domain_error("HInterpolant: need 0 < x0 < x1");
    x0_ = x0;
    x1_ = x1;
    degree_ = degree;
    const double kd = p.k;
    // phase psi(x) = (2k+2) X^{1/(2k+2)} grows like x^{k/(k+1)}
    const double cpsi = (2 * kd + 2) * std::pow(0.25, 1.0 / (2 * kd + 2)) * std::pow(1.0 / (2 * kd), kd / (kd + 1.0));
    const double expo = kd / (kd + 1.0);
    auto psi = [&](double x) { return cpsi * std::pow(x, expo); };
    auto psi_inv = [&](double v) { return std::pow(v / cpsi, 1.0 / expo); };
    const double dpsi = 2.0;
    breaks_.clear();
    breaks_.push_back(x0);
    double x = x0;
    while (x < x1) {
        double nx = std::min(1.5 * x, psi_inv(psi(x) + dpsi));
        if (nx > x1 || x1 - nx < 1e-3 * (nx - x)) nx = x1;
        breaks_.push_back(nx);
        x = nx;
    }
    const int np = static_cast<int>(breaks_.size()) - 1;
    const int n = degree + 1;
    std::vector<double> nodes(n);
    for (int j = 0; j < n; ++j) nodes[j] = std::cos(pi * (j + 0.5) / n);
    std::vector<cplx> values(static_cast<std::size_t>(np) * n);
    std::vector<double> errs(values.size(), 0.0);
    parallel_for(values.size(), [&](std::size_t idx) {
        const int i = static_cast<int>(idx / n), j = static_cast<int>(idx % n);
        const double a = breaks_[i], b = breaks_[i + 1];
        KernelValue v = eval(0.5 * (a + b) + 0.5 * (b - a) * nodes[j]);
        values[idx] = v.value;
        errs[idx] = v.est_error;
    });
    max_err_ = 0.0;
    for (double e : errs) max_err_ = std::max(max_err_, e);
    coeffs_.assign(np, std::vector<cplx>(n, 0.0));
    for (int i = 0; i < np; ++i) {
        for (int m = 0; m < n; ++m) {
            cplx acc = 0.0;
            for (int j = 0; j < n; ++j) acc += values[static_cast<std::size_t>(i) * n + j] * std::cos(pi * m * (j + 0.5) / n);
            coeffs_[i][m] = acc * (2.0 / n);
        }
        coeffs_[i][0] *= 0.5;
    }
}

cplx HInterpolant::operator()(double x) const {
    if (coeffs_.empty()) throw std::logic_error("HInterpolant: not built");
    if (x < x0_ || x > x1_) throw std::domain_error("HInterpolant: x outside the tabulated range");
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    int i = static_cast<int>(it - breaks_.begin()) - 1;
    i = std::clamp(i, 0, static_cast<int>(coeffs_.size()) - 1);
    const double a = breaks_[i], b = breaks_[i + 1];
    const double t = (2.0 * x - a - b) / (b - a);
    const auto& c = coeffs_[i];
    cplx b1 = 0.0, b2 = 0.0;
    for (int m = static_cast<int>(c.size()) - 1; m >= 1; --m) {
        cplx b0 = c[m] + 2.0 * t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return c[0] + t * b1 - b2;
}

}  // namespace kv
