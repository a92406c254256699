#include "kv/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kv/arith.hpp"
#include "kv/dual_tail.hpp"
#include "kv/parallel.hpp"
#include "kv/specialfn.hpp"

namespace kv {

namespace {

using std::numbers::pi;

bool is_log_case(const KernelParams& p) { return std::abs(p.z - cplx(p.k - 1.0, 0.0)) < 1e-12; }

// (2 pi)^{1+1/k}: H is evaluated at this times (n t)^{1/k}
double kernel_scale(int k) { return std::pow(2.0 * pi, 1.0 + 1.0 / k); }

void check_interval(double alpha, double beta) {
    if (!(alpha > 0.0 && beta > alpha)) throw std::domain_error("need 0 < alpha < beta");
    if (alpha == std::floor(alpha) || beta == std::floor(beta))
        throw std::domain_error("alpha and beta must not be integers");
}

// H on [0, hi]: direct evaluation below lo, a Chebyshev table above.
class KernelTable {
public:
    KernelTable(const KernelParams& p, double lo, double hi) : p_(p), lo_(lo) {
        if (hi > lo) table_ = HInterpolant(p, lo, hi);
    }
    cplx operator()(double u) const {
        if (u < lo_ || table_.breaks().empty()) return h_eval(p_, u).value;
        return table_(std::min(u, table_.hi()));
    }
    // panel edges in u covering [a, b]
    std::vector<double> panels(double a, double b) const {
        std::vector<double> out{a};
        if (!table_.breaks().empty()) {
            for (double x : table_.breaks())
                if (x > a && x < b) out.push_back(x);
        }
        out.push_back(b);
        return out;
    }
    double lo() const { return lo_; }

private:
    KernelParams p_;
    double lo_;
    HInterpolant table_;
};

std::vector<long> dyadic_levels(long n) {
    std::vector<long> lv;
    for (long m = 1; m < n; m *= 2) lv.push_back(m);
    lv.push_back(n);
    return lv;
}

// Prefix sums of per-n terms at the dyadic levels.
void record_levels(VerificationReport& r, const std::vector<cplx>& terms, cplx base) {
    const long n = static_cast<long>(terms.size());
    const std::vector<long> lv = dyadic_levels(n);
    cplx acc = base;
    std::size_t li = 0;
    for (long i = 0; i < n; ++i) {
        acc += terms[i];
        if (li < lv.size() && i + 1 == lv[li]) {
            r.partial.emplace_back(lv[li], acc);
            r.trace.push_back(std::abs(r.lhs - acc));
            ++li;
        }
    }
    r.rhs = acc;
    r.terms = n;
    cplx riesz = base;
    for (long i = 0; i < n; ++i) {
        const double wgt = 1.0 - static_cast<double>(i + 1) / static_cast<double>(n + 1);
        riesz += wgt * wgt * terms[i];
    }
    r.rhs_riesz = riesz;
    r.has_riesz = true;
}

// The last three recorded levels end no higher than they start.
bool last_three_trend(const std::vector<double>& tr) {
    if (tr.size() < 3) return true;
    return tr.back() <= tr[tr.size() - 3];
}

QuadratureConfig tight() {
    QuadratureConfig c;
    c.abs_tol = 1e-16;
    c.rel_tol = 1e-13;
    return c;
}

}  // namespace

TestFunctionSpec TestFunctionSpec::exp_decay(cplx w) {
    if (!(w.real() > 0.0)) throw std::domain_error("exp_decay: Re w must be positive");
    return {TestKind::exp_decay, w, 0};
}

TestFunctionSpec TestFunctionSpec::gaussian() { return {TestKind::gaussian, 1.0, 0}; }

TestFunctionSpec TestFunctionSpec::poly_exp(int power, cplx w) {
    if (power < 0) throw std::domain_error("poly_exp: power must be nonnegative");
    if (!(w.real() > 0.0)) throw std::domain_error("poly_exp: Re w must be positive");
    return {TestKind::poly_exp, w, power};
}

cplx TestFunctionSpec::operator()(double t) const {
    switch (kind) {
        case TestKind::exp_decay: return std::exp(-w * t);
        case TestKind::gaussian: return std::exp(-t * t);
        case TestKind::poly_exp: return std::pow(t, power) * std::exp(-w * t);
    }
    return 0.0;
}

cplx TestFunctionSpec::mellin(cplx s) const {
    switch (kind) {
        case TestKind::exp_decay: return gamma_c(s) * std::exp(-s * std::log(w));
        case TestKind::gaussian: return 0.5 * gamma_c(0.5 * s);
        case TestKind::poly_exp: return gamma_c(s + static_cast<double>(power)) * std::exp(-(s + static_cast<double>(power)) * std::log(w));
    }
    return 0.0;
}

cplx TestFunctionSpec::mellin_deriv_at_one() const {
    switch (kind) {
        case TestKind::exp_decay: return -(consts::euler_gamma + std::log(w)) / w;
        case TestKind::gaussian: return std::sqrt(pi) / 4.0 * (-consts::euler_gamma - 2.0 * std::log(2.0));
        case TestKind::poly_exp: {
            const double j = power;
            return gamma_c(1.0 + j) * std::exp(-(1.0 + j) * std::log(w)) * (digamma_c(1.0 + j) - std::log(w));
        }
    }
    return 0.0;
}

cplx TestFunctionSpec::at_zero() const {
    if (kind == TestKind::poly_exp && power > 0) return 0.0;
    return 1.0;
}

std::vector<cplx> TestFunctionSpec::odd_taylor(int count) const {
    std::vector<cplx> c(count, 0.0);
    if (kind == TestKind::gaussian) return c;
    // t^j e^{-wt} = sum_i (-w)^i t^{i+j} / i!
    const int j = kind == TestKind::poly_exp ? power : 0;
    for (int m = 0; m < count; ++m) {
        const int i = 2 * m + 1 - j;
        if (i < 0) continue;
        cplx v = 1.0;
        for (int q = 1; q <= i; ++q) v *= -w / static_cast<double>(q);
        c[m] = v;
    }
    return c;
}

double TestFunctionSpec::cutoff() const {
    if (kind == TestKind::gaussian) return std::sqrt(44.0);
    double t = 44.0 / w.real();
    // t^j e^{-Re w t} <= e^{-44}
    for (int it = 0; it < 30 && power > 0; ++it) t = (44.0 + power * std::log(std::max(t, 1.0))) / w.real();
    return t;
}

std::string TestFunctionSpec::name() const {
    switch (kind) {
        case TestKind::exp_decay: return "exp";
        case TestKind::gaussian: return "gaussian";
        case TestKind::poly_exp: return "poly_exp";
    }
    return "";
}

cplx voronoi_lhs(const VoronoiConfig& cfg, const TestFunctionSpec& f) {
    validate_strip(cfg.p);
    check_interval(cfg.alpha, cfg.beta);
    const long lo = static_cast<long>(std::floor(cfg.alpha)) + 1;
    const long hi = static_cast<long>(std::floor(cfg.beta));
    if (hi < lo) return 0.0;
    const DivisorTable t = build_table(cfg.p.k, cfg.p.z, hi, TableKind::sigma);
    cplx acc = 0.0;
    for (long n = lo; n <= hi; ++n) acc += t.sigma[n] * f(static_cast<double>(n));
    return acc;
}

cplx finite_dual_scale(const KernelParams& p) {
    // 4 (2 pi)^{(1+z)/k - 1}; the same constant as in the infinite version
    return 4.0 * std::exp(((1.0 + p.z) / static_cast<double>(p.k) - 1.0) * std::log(2.0 * pi));
}

namespace {

cplx finite_integral_with(const KernelTable& H, const KernelParams& p, const TestFunctionSpec& f, double alpha,
                          double beta, long n) {
    const double kd = p.k;
    const double c = kernel_scale(p.k) * std::pow(static_cast<double>(n), 1.0 / kd);
    const cplx e = (1.0 + p.z) / kd - 1.0;
    auto g = [&](double t) { return f(t) * std::exp(e * std::log(t)) * H(c * std::pow(t, 1.0 / kd)); };
    const std::vector<double> edges = H.panels(c * std::pow(alpha, 1.0 / kd), c * std::pow(beta, 1.0 / kd));
    cplx acc = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = std::pow(edges[i] / c, kd), b = std::pow(edges[i + 1] / c, kd);
        acc += gauss_kronrod15(g, std::max(a, alpha), std::min(b, beta)).value;
    }
    return acc;
}

cplx schwartz_integral_with(const KernelTable& H, const KernelParams& p, const TestFunctionSpec& f, long n) {
    // y = (u / a_n)^k turns the integral into k a_n^{-(1+z)} int_0^U H(u) u^z f((u/a_n)^k) du
    const double kd = p.k;
    const double an = kernel_scale(p.k) * std::pow(static_cast<double>(n), 1.0 / kd);
    const double U = an * std::pow(f.cutoff(), 1.0 / kd);
    auto g = [&](double u) -> cplx {
        if (u == 0.0) return 0.0;
        return H(u) * std::exp(p.z * std::log(u)) * f(std::pow(u / an, kd));
    };
    const QuadratureConfig cfg = tight();
    const double us = std::min(H.lo(), U);
    cplx acc = integrate_tanh_sinh(g, 0.0, us, cfg).value;
    if (U > us) {
        const std::vector<double> edges = H.panels(us, U);
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) acc += integrate_finite(g, edges[i], edges[i + 1], cfg).value;
    }
    return kd * std::exp(-(1.0 + p.z) * std::log(an)) * acc;
}

}  // namespace

cplx finite_dual_integral(const KernelParams& p, const TestFunctionSpec& f, double alpha, double beta, long n) {
    const KernelTable H(p, 1e300, 0.0);
    // direct evaluation: adaptive in t
    const double kd = p.k;
    const double c = kernel_scale(p.k) * std::pow(static_cast<double>(n), 1.0 / kd);
    const cplx e = (1.0 + p.z) / kd - 1.0;
    auto g = [&](double t) { return f(t) * std::exp(e * std::log(t)) * H(c * std::pow(t, 1.0 / kd)); };
    return integrate_finite(g, alpha, beta, tight()).value;
}

cplx schwartz_dual_integral(const KernelParams& p, const TestFunctionSpec& f, long n) {
    const KernelTable H(p, 2.0, 0.0);
    const double kd = p.k;
    const double an = kernel_scale(p.k) * std::pow(static_cast<double>(n), 1.0 / kd);
    const double U = an * std::pow(f.cutoff(), 1.0 / kd);
    auto g = [&](double u) -> cplx {
        if (u == 0.0) return 0.0;
        return H(u) * std::exp(p.z * std::log(u)) * f(std::pow(u / an, kd));
    };
    QuadratureConfig cfg = tight();
    cfg.max_subdivisions = 20000;
    cplx acc = integrate_tanh_sinh(g, 0.0, 2.0, cfg).value + integrate_finite(g, 2.0, U, cfg).value;
    return kd * std::exp(-(1.0 + p.z) * std::log(an)) * acc;
}

VerificationReport voronoi_rhs(const VoronoiConfig& cfg, const TestFunctionSpec& f, double tol) {
    const KernelParams& p = cfg.p;
    validate_strip(p);
    check_interval(cfg.alpha, cfg.beta);
    if (cfg.n_terms < 1) throw std::domain_error("n_terms must be positive");
    VerificationReport r;
    r.identity = is_log_case(p) ? "voronoi_finite_log" : "voronoi_finite";
    r.params = {{"k", p.k}, {"z", complex_json(p.z)}, {"alpha", cfg.alpha}, {"beta", cfg.beta},
                {"N", cfg.n_terms}, {"f", f.name()}, {"w", complex_json(f.w)}};
    r.lhs = voronoi_lhs(cfg, f);
    const double kd = p.k;

    // main term
    QuadratureConfig qc = cfg.quad;
    qc.abs_tol = std::min(qc.abs_tol, 1e-14);
    if (is_log_case(p)) {
        auto g = [&](double t) { return f(t) * ((kd + 1.0) * consts::euler_gamma + std::log(t)) / kd; };
        r.rhs_main = integrate_finite(g, cfg.alpha, cfg.beta, qc).value;
    } else {
        const cplx zk = zeta_c(kd - p.z), zs = zeta_c((1.0 + p.z) / kd);
        const cplx e = (1.0 + p.z) / kd - 1.0;
        auto g = [&](double t) { return f(t) * (zk + std::exp(e * std::log(t)) * zs / kd); };
        r.rhs_main = integrate_finite(g, cfg.alpha, cfg.beta, qc).value;
    }

    // dual series through a tabulated kernel
    const long N = cfg.n_terms;
    const double c = kernel_scale(p.k);
    const KernelTable H(p, c * std::pow(cfg.alpha, 1.0 / kd),
                        c * std::pow(static_cast<double>(N) * cfg.beta, 1.0 / kd) * (1.0 + 1e-12));
    const DivisorTable st = build_table(p.k, p.z, N, TableKind::s);
    const cplx scale = finite_dual_scale(p);
    std::vector<cplx> terms(N);
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
        const long n = static_cast<long>(i) + 1;
        terms[i] = scale * st.s_table[n] * finite_integral_with(H, p, f, cfg.alpha, cfg.beta, n);
    });
    record_levels(r, terms, r.rhs_main);
    r.route = "h_eval chebyshev table + gauss-kronrod panels";
    r.tolerance = tol;
    r.trend_ok = last_three_trend(r.trace);
    // the last three dyadic truncations must all sit within tolerance
    bool all = true;
    for (std::size_t i = r.trace.size() >= 3 ? r.trace.size() - 3 : 0; i < r.trace.size(); ++i) all = all && r.trace[i] <= tol;
    r.est_error = r.trace.size() >= 2 ? std::abs(r.partial.back().second - r.partial[r.partial.size() - 2].second) : 0.0;
    r.pass = all && r.trend_ok;
    return r;
}

VerificationReport voronoi_bessel_k1(cplx z, double alpha, double beta, long n_terms, const TestFunctionSpec& f,
                                     double tol) {
    if (!(z.real() > -1.0 && z.real() < 1.0)) throw std::domain_error("need -1 < Re z < 1");
    if (z == cplx(0.0, 0.0)) throw std::domain_error("z = 0 is the logarithmic case");
    check_interval(alpha, beta);
    VerificationReport r;
    r.identity = "voronoi_bessel_k1";
    r.params = {{"z", complex_json(z)}, {"alpha", alpha}, {"beta", beta}, {"N", n_terms}, {"f", f.name()},
                {"w", complex_json(f.w)}};
    const long lo = static_cast<long>(std::floor(alpha)) + 1, hi = static_cast<long>(std::floor(beta));
    for (long j = lo; j <= hi; ++j) r.lhs += sigma_zk(1, -z, j) * f(static_cast<double>(j));

    const cplx z1 = zeta_c(1.0 + z), z2 = zeta_c(1.0 - z);
    auto gm = [&](double t) { return (z1 + std::exp(-z * std::log(t)) * z2) * f(t); };
    QuadratureConfig qc;
    qc.abs_tol = 1e-14;
    r.rhs_main = integrate_finite(gm, alpha, beta, qc).value;

    const cplx cz = cos_pi(0.5 * z), sz = sin_pi(0.5 * z);
    const DivisorTable st = build_table(1, -z, n_terms, TableKind::sigma);
    std::vector<cplx> terms(n_terms);
    parallel_for(static_cast<std::size_t>(n_terms), [&](std::size_t i) {
        const long n = static_cast<long>(i) + 1;
        const double sn = std::sqrt(static_cast<double>(n));
        auto g = [&](double t) {
            const double x = 4.0 * pi * sn * std::sqrt(t);
            const cplx ker = (2.0 / pi * bessel_k(z, x) - bessel_y(z, x)) * cz - bessel_j(z, x) * sz;
            return std::exp(-0.5 * z * std::log(t)) * f(t) * ker;
        };
        // panels of two radians in the Bessel phase 4 pi sqrt(n t)
        const double ph0 = 4.0 * pi * sn * std::sqrt(alpha), ph1 = 4.0 * pi * sn * std::sqrt(beta);
        const int np = std::max(1, static_cast<int>(std::ceil((ph1 - ph0) / 2.0)));
        cplx acc = 0.0;
        for (int j = 0; j < np; ++j) {
            const double pa = ph0 + (ph1 - ph0) * j / np, pb = ph0 + (ph1 - ph0) * (j + 1) / np;
            const double a = std::pow(pa / (4.0 * pi * sn), 2), b = std::pow(pb / (4.0 * pi * sn), 2);
            acc += gauss_kronrod15(g, j == 0 ? alpha : a, j == np - 1 ? beta : b).value;
        }
        terms[i] = 2.0 * pi * st.sigma[n] * std::exp(0.5 * z * std::log(static_cast<double>(n))) * acc;
    });
    record_levels(r, terms, r.rhs_main);
    r.route = "bessel kernels + gauss-kronrod panels";
    r.tolerance = tol;
    r.trend_ok = last_three_trend(r.trace);
    bool all = true;
    for (std::size_t i = r.trace.size() >= 3 ? r.trace.size() - 3 : 0; i < r.trace.size(); ++i) all = all && r.trace[i] <= tol;
    r.est_error = r.trace.size() >= 2 ? std::abs(r.partial.back().second - r.partial[r.partial.size() - 2].second) : 0.0;
    r.pass = all && r.trend_ok;
    return r;
}

VerificationReport voronoi_schwartz(const KernelParams& p, const TestFunctionSpec& f, long N, double tol) {
    validate_strip(p);
    if (N < 1) throw std::domain_error("N must be positive");
    VerificationReport r;
    const bool log_case = is_log_case(p);
    r.identity = log_case ? "voronoi_schwartz_log" : "voronoi_schwartz";
    r.params = {{"k", p.k}, {"z", complex_json(p.z)}, {"N", N}, {"f", f.name()}, {"w", complex_json(f.w)}};
    const double kd = p.k;

    // left side: f decays, sum until the bound on the rest is negligible
    {
        const double T = f.cutoff();
        const long M = std::max(2L, static_cast<long>(std::ceil(T)) + 1);
        const DivisorTable t = build_table(p.k, p.z, M, TableKind::sigma);
        for (long n = M; n >= 1; --n) r.lhs += t.sigma[n] * f(static_cast<double>(n));
    }

    const cplx f0 = f.at_zero(), F1 = f.mellin(1.0);
    if (log_case) {
        r.rhs_main = -0.5 * zeta_c(1.0 - kd) * f0 + ((kd + 1.0) * consts::euler_gamma * F1 + f.mellin_deriv_at_one()) / kd;
    } else {
        const cplx s = (1.0 + p.z) / kd;
        r.rhs_main = -0.5 * zeta_c(-p.z) * f0 + zeta_c(kd - p.z) * F1 + f.mellin(s) * zeta_c(s) / kd;
    }

    const cplx pref = std::exp(((kd + 1.0) * (1.0 + p.z) / kd - p.z) * std::log(2.0 * pi)) / (pi * pi);
    const PowerLawTail tail(p, f.odd_taylor(12), pref);
    const double c = kernel_scale(p.k);
    const double hi = c * std::pow(static_cast<double>(N) * f.cutoff(), 1.0 / kd) * (1.0 + 1e-12);
    const KernelTable H(p, std::min(2.0, hi), hi);
    const DivisorTable st = build_table(p.k, p.z, N, TableKind::s);
    std::vector<cplx> terms(N);
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
        const long n = static_cast<long>(i) + 1;
        const cplx sn = st.s_table[n];
        terms[i] = pref * sn * schwartz_integral_with(H, p, f, n) - tail.at(n, sn);
    });
    record_levels(r, terms, r.rhs_main + tail.restored());
    r.route = tail.orders() > 0 ? "h_eval chebyshev table + power-law tail restored in closed form"
                                : "h_eval chebyshev table";
    r.params["tail_orders"] = tail.orders();
    r.tolerance = tol;
    r.relative = false;
    r.trend_ok = last_three_trend(r.trace);
    r.est_error = r.trace.size() >= 2 ? std::abs(r.partial.back().second - r.partial[r.partial.size() - 2].second) : 0.0;
    r.decide();
    return r;
}

VerificationReport classical_voronoi_check(double x, long N, double tol) {
    if (!(x > 0.0) || x == std::floor(x)) throw std::domain_error("x must be a positive non-integer");
    if (N < 1) throw std::domain_error("N must be positive");
    VerificationReport r;
    r.identity = "voronoi_classical";
    r.params = {{"x", x}, {"N", N}};
    const long m = static_cast<long>(std::floor(x));
    const DivisorTable t = build_table(1, 0.0, std::max(N, std::max(m, 1L)), TableKind::sigma);
    for (long n = 1; n <= m; ++n) r.lhs += t.sigma[n];
    r.rhs_main = x * (std::log(x) + 2.0 * consts::euler_gamma - 1.0) + 0.25;
    std::vector<cplx> terms(N);
    const double sx = std::sqrt(x);
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
        const double n = static_cast<double>(i + 1);
        const double arg = 4.0 * pi * std::sqrt(n * x);
        terms[i] = sx * t.sigma[i + 1] / std::sqrt(n) * (-bessel_y(1.0, arg) - 2.0 / pi * bessel_k(1.0, arg));
    });
    record_levels(r, terms, r.rhs_main);
    r.route = "bessel y1 and k1";
    r.tolerance = tol;
    r.trend_ok = last_three_trend(r.trace);
    r.est_error = r.trace.size() >= 2 ? std::abs(r.partial.back().second - r.partial[r.partial.size() - 2].second) : 0.0;
    r.decide();
    return r;
}

}  // namespace kv
