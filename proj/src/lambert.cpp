#include "kv/lambert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kv/arith.hpp"
#include "kv/dual_tail.hpp"
#include "kv/parallel.hpp"
#include "kv/quadrature.hpp"
#include "kv/specialfn.hpp"

namespace kv {

namespace {

using std::numbers::pi;
const cplx I(0.0, 1.0);

// e^{i pi num / (2k)}
cplx root4k(int k, double num) { return std::exp(I * (pi * num / (2.0 * k))); }

double parity_sign(long n) { return (n % 2 == 0) ? 1.0 : -1.0; }

void check_w(cplx w) {
    if (!(w.real() > 0.0)) throw std::domain_error("Re w must be positive");
}

void check_wigert(const KernelParams& p) {
    validate_strip(p);
    if (std::abs(p.z - cplx(p.k - 1.0, 0.0)) < 1e-12)
        throw std::domain_error("z = k - 1 is excluded: the main term has a double pole there");
}

// e^x - 1 without cancellation for small |x|
cplx expm1_c(cplx x) {
    if (std::abs(x) > 1e-3) return std::exp(x) - 1.0;
    cplx term = x, sum = x;
    for (int j = 2; j < 12; ++j) {
        term *= x / static_cast<double>(j);
        sum += term;
    }
    return sum;
}

// |sigma_z^(k)(n)| <= d(n) n^{max(Re z, 0)/k} <= 2 sqrt(n) n^{...}
double sigma_bound(const KernelParams& p, double n) {
    return 2.0 * std::sqrt(n) * std::pow(n, std::max(p.z.real(), 0.0) / p.k);
}

constexpr long block = 32;
constexpr long max_dual_terms = 60000;

// Thm-2.5 normalisation of the dual terms, (2 pi)^{(k+1)(1+z)/k - z} / pi^2.
cplx dual_prefactor(const KernelParams& p) {
    const double k = p.k;
    return std::exp(((k + 1.0) * (1.0 + p.z) / k - p.z) * std::log(2.0 * pi)) / (pi * pi);
}

PowerLawTail exp_tail(const KernelParams& p, cplx w) {
    // odd Taylor coefficients of e^{-wy}
    std::vector<cplx> c;
    cplx t = -w;
    for (int m = 0; m < 12; ++m) {
        c.push_back(t);
        t *= w * w / ((2.0 * m + 2.0) * (2.0 * m + 3.0));
    }
    return PowerLawTail(p, c, dual_prefactor(p));
}

}  // namespace

SeriesValue lambert_lhs(const LambertConfig& cfg) {
    validate_strip(cfg.p);
    check_w(cfg.w);
    const double rw = cfg.w.real();
    const double ratio_tail = 1.0 / (-std::expm1(-rw));
    SeriesValue out;
    cplx acc = 0.0;
    double absum = 0.0;
    long n = 1;
    for (;; ++n) {
        const cplx t = sigma_zk(cfg.p.k, cfg.p.z, n) * std::exp(-static_cast<double>(n) * cfg.w);
        acc += t;
        absum += std::abs(t);
        const double tail = sigma_bound(cfg.p, n + 1.0) * std::exp(-rw * n) * ratio_tail;
        if (cfg.n_lhs > 0 ? n >= cfg.n_lhs : (n >= 8 && tail <= 1e-18 * std::abs(acc))) {
            out.est_error = tail + 2e-16 * absum;
            break;
        }
        if (n > 100000000) throw std::runtime_error("lambert_lhs: Re w too small for direct summation");
    }
    out.value = acc;
    out.terms = n;
    return out;
}

SeriesValue lambert_lhs_resummed(const LambertConfig& cfg) {
    validate_strip(cfg.p);
    check_w(cfg.w);
    const double rw = cfg.w.real();
    SeriesValue out;
    cplx acc = 0.0;
    double absum = 0.0;
    long d = 1;
    for (;; ++d) {
        const double dk = std::pow(static_cast<double>(d), cfg.p.k);
        const cplx dz = std::exp(cfg.p.z * std::log(static_cast<double>(d)));
        const cplx t = dz / expm1_c(dk * cfg.w);
        acc += t;
        absum += std::abs(t);
        const double next = std::pow(d + 1.0, cfg.p.k);
        const double tail = std::pow(d + 1.0, std::abs(cfg.p.z.real()) + 2.0) * std::exp(-next * rw) / (-std::expm1(-rw));
        if (d >= 2 && tail <= 1e-18 * std::abs(acc)) {
            out.est_error = tail + 2e-16 * absum;
            break;
        }
        if (d > 100000000) throw std::runtime_error("lambert_lhs_resummed: Re w too small");
    }
    out.value = acc;
    out.terms = d;
    return out;
}

cplx lambert_main_terms(const KernelParams& p, cplx w) {
    const double k = p.k;
    const cplx s = (1.0 + p.z) / k;
    return -0.5 * zeta_c(-p.z) + zeta_c(k - p.z) / w + gamma_c(s) * zeta_c(s) * std::exp(-s * std::log(w)) / k;
}

cplx wigert_dual_term(const KernelParams& p, cplx w, long n, cplx s_n) {
    const int k = p.k;
    const double kd = k;
    const double nd = static_cast<double>(n);
    const cplx a = 2.0 * pi * std::exp(std::log(2.0 * pi * nd / w) / kd);
    const cplx log2pi = std::log(2.0 * pi);
    if (k % 2 == 0) {
        const cplx pref = parity_sign(k / 2 - 1) * std::exp((2.0 + 2.0 / kd - p.z) * log2pi) /
                          (pi * pi * kd * std::exp(2.0 * std::log(w) / kd)) * s_n *
                          std::exp((1.0 - p.z) / kd * std::log(nd));
        cplx sum = 0.0;
        for (int j = 1; j <= k / 2; ++j) {
            const double odd = 2.0 * j - 1.0;
            const cplx A = root4k(k, (2.0 - kd) * odd);
            sum += A * b_transform(p.z, a * root4k(k, odd)) + std::conj(A) * b_transform(p.z, a * root4k(k, -odd));
        }
        return pref * sum;
    }
    const cplx pref = parity_sign((k - 1) / 2) * std::exp((1.0 + 1.0 / kd - p.z) * log2pi) /
                      (pi * pi * kd * std::exp(std::log(w) / kd)) * s_n * std::exp(-p.z / kd * std::log(nd));
    const cplx z1 = p.z + 1.0;
    cplx sum = b_transform(z1, a);
    for (int j = 1; j <= (k - 1) / 2; ++j) {
        const double ev = 2.0 * j;
        const cplx B = root4k(k, (1.0 - kd) * ev);
        sum += B * b_transform(z1, a * root4k(k, ev)) + std::conj(B) * b_transform(z1, a * root4k(k, -ev));
    }
    return pref * sum;
}

WigertRhs wigert_rhs(const LambertConfig& cfg) {
    check_wigert(cfg.p);
    check_w(cfg.w);
    const KernelParams& p = cfg.p;
    WigertRhs out;
    out.main = lambert_main_terms(p, cfg.w);

    // power-law part removed term by term, restored in closed form
    const PowerLawTail tail_part = exp_tail(p, cfg.w);
    out.asymptotic_orders = tail_part.orders();
    out.asymptotic_start = tail_part.last_start();
    cplx acc = tail_part.restored();
    double noise = 0.0;
    long n_end = 0;
    const long cap = cfg.n_rhs > 0 ? cfg.n_rhs : max_dual_terms;
    std::vector<cplx> diff(block), full(block);
    for (long lo = 1; lo <= cap; lo += block) {
        const long count = std::min(block, cap - lo + 1);
        parallel_for(static_cast<std::size_t>(count), [&](std::size_t i) {
            const long n = lo + static_cast<long>(i);
            const cplx s_n = s_zk(p.k, p.z, n);
            full[i] = wigert_dual_term(p, cfg.w, n, s_n);
            diff[i] = full[i] - tail_part.at(n, s_n);
        });
        double worst = 0.0, biggest = 0.0;
        for (long i = 0; i < count; ++i) {
            acc += diff[i];
            worst = std::max(worst, std::abs(diff[i]));
            biggest = std::max(biggest, std::abs(full[i]));
        }
        noise += 4e-16 * biggest * static_cast<double>(count);
        n_end = lo + count - 1;
        out.trace.emplace_back(n_end, out.main + acc);
        const double tail = worst * static_cast<double>(n_end);
        const double total = std::abs(out.main + acc);
        if (cfg.n_rhs == 0 && (tail <= 1e-15 * total || tail <= noise)) {
            out.est_error = tail + noise;
            break;
        }
        out.est_error = tail + noise;
    }
    out.dual = acc;
    out.value = out.main + acc;
    out.terms = n_end;
    out.est_error += 1e-15 * std::abs(out.main);
    return out;
}

namespace {

// Tail past N = r^k is about k r^{k-1} n^{max(Re e, 0)} e^{-r Re u} / Re u; make it e^{-36}.
long lbar_limit(int k, cplx z, double re_u) {
    if (!(re_u > 0.0)) throw std::domain_error("lbar: needs Re u > 0");
    const double growth = std::max(0.0, (1.0 + z.real()) / k - 1.0) * k + k - 1.0;
    double r = 36.0 / re_u;
    for (int it = 0; it < 50; ++it) r = (36.0 + growth * std::log(std::max(r, 1.0)) + std::log(k / re_u + 1.0)) / re_u;
    const double n = std::pow(r, k);
    if (n > 4e7) throw std::length_error("lbar: argument too close to the imaginary axis for a direct sum");
    return std::max(16L, static_cast<long>(n) + 1);
}

SeriesValue lbar_from_table(const DivisorTable& t, cplx u, long N) {
    SeriesValue out;
    cplx acc = 0.0;
    double absum = 0.0;
    const double kd = t.k;
    for (long n = N; n >= 1; --n) {
        const cplx term = t.s_table[n] * std::exp(-std::pow(static_cast<double>(n), 1.0 / kd) * u);
        acc += term;
        absum += std::abs(term);
    }
    out.value = acc;
    out.terms = N;
    out.est_error = 4e-16 * absum + 1e-18 * std::abs(acc);
    return out;
}

}  // namespace

SeriesValue lbar(int k, cplx z, cplx u) {
    const long N = lbar_limit(k, z, u.real());
    const DivisorTable t = build_table(k, z, N, TableKind::s);
    return lbar_from_table(t, u, N);
}

SeriesValue wigert_even_corollary(int k, int m, cplx w) {
    if (k < 2 || k % 2 != 0) throw std::domain_error("wigert_even_corollary: k must be even and at least 2");
    if (m < 0 || 2 * m >= k) throw std::domain_error("wigert_even_corollary: needs 0 <= 2m < k");
    check_w(w);
    const double kd = k;
    const cplx z(2.0 * m, 0.0);
    const cplx base = 2.0 * pi * std::exp(std::log(2.0 * pi / w) / kd);
    std::vector<cplx> args;
    std::vector<cplx> weights;
    for (int j = 1; j <= k / 2; ++j) {
        const double odd = 2.0 * j - 1.0;
        const double phase = (1.0 - kd + 2.0 * m) * odd;
        args.push_back(base * root4k(k, odd));
        weights.push_back(root4k(k, phase));
        args.push_back(base * root4k(k, -odd));
        weights.push_back(root4k(k, -phase));
    }
    double min_re = 1e300;
    for (const cplx& u : args) min_re = std::min(min_re, u.real());
    const long N = lbar_limit(k, z, min_re);
    const DivisorTable t = build_table(k, z, N, TableKind::s);
    SeriesValue out;
    cplx sum = 0.0;
    for (std::size_t i = 0; i < args.size(); ++i) {
        SeriesValue l = lbar_from_table(t, args[i], N);
        sum += weights[i] * l.value;
        out.est_error += l.est_error;
    }
    const cplx coef = parity_sign(k / 2 + m - 1) / kd * std::exp((1.0 + 2.0 * m) / kd * std::log(2.0 * pi / w));
    const cplx main = lambert_main_terms(KernelParams{k, z}, w);
    out.value = main + coef * sum;
    out.est_error = std::abs(coef) * out.est_error + 1e-15 * std::abs(main);
    out.terms = N;
    return out;
}

SeriesValue wigert_odd_corollary(int k, int m, cplx w) {
    if (k < 3 || k % 2 != 1) throw std::domain_error("wigert_odd_corollary: k must be odd and greater than 1");
    if (m < 1 || 2 * m >= k + 1) throw std::domain_error("wigert_odd_corollary: needs 1 <= m < (k+1)/2");
    check_w(w);
    const double kd = k;
    const cplx z(2.0 * m - 1.0, 0.0);
    const cplx base = 2.0 * pi * std::exp(std::log(2.0 * pi / w) / kd);
    std::vector<cplx> args{base};
    std::vector<cplx> weights{1.0};
    for (int j = 1; j <= (k - 1) / 2; ++j) {
        const double ang = 2.0 * j;  // e^{i pi j / k} = root4k(2j)
        const double phase = (2.0 * m - kd) * ang;
        args.push_back(base * root4k(k, ang));
        weights.push_back(root4k(k, phase));
        args.push_back(base * root4k(k, -ang));
        weights.push_back(root4k(k, -phase));
    }
    double min_re = 1e300;
    for (const cplx& u : args) min_re = std::min(min_re, u.real());
    const long N = lbar_limit(k, z, min_re);
    const DivisorTable t = build_table(k, z, N, TableKind::s);
    SeriesValue out;
    cplx sum = 0.0;
    for (std::size_t i = 0; i < args.size(); ++i) {
        SeriesValue l = lbar_from_table(t, args[i], N);
        sum += weights[i] * l.value;
        out.est_error += l.est_error;
    }
    const cplx coef = parity_sign((k - 1) / 2 + m) / kd * std::exp(2.0 * m / kd * std::log(2.0 * pi / w));
    const cplx main = lambert_main_terms(KernelParams{k, z}, w);
    out.value = main + coef * sum;
    out.est_error = std::abs(coef) * out.est_error + 1e-15 * std::abs(main);
    out.terms = N;
    return out;
}

SeriesValue wigert_classical_even(int k, cplx w) {
    if (k < 2 || k % 2 != 0) throw std::domain_error("wigert_classical_even: k must be even and at least 2");
    check_w(w);
    const double kd = k;
    const cplx base = 2.0 * pi * std::exp(std::log(2.0 * pi / w) / kd);
    SeriesValue out;
    // sum_n n^{1/k-1} / (exp(n^{1/k} u) - 1)
    auto lk = [&](cplx u) {
        const long N = lbar_limit(k, 0.0, u.real());
        cplx acc = 0.0;
        double absum = 0.0;
        for (long n = N; n >= 1; --n) {
            const double r = std::pow(static_cast<double>(n), 1.0 / kd);
            const cplx t = r / static_cast<double>(n) / expm1_c(r * u);
            acc += t;
            absum += std::abs(t);
        }
        out.est_error += 4e-16 * absum;
        out.terms = std::max(out.terms, N);
        return acc;
    };
    cplx sum = 0.0;
    for (int j = 0; j <= k / 2 - 1; ++j) {
        const double odd = 2.0 * j + 1.0;
        sum += root4k(k, odd * (kd - 1.0)) * lk(base * root4k(k, -odd)) +
               root4k(k, -odd * (kd - 1.0)) * lk(base * root4k(k, odd));
    }
    const cplx coef = parity_sign(k / 2 - 1) / kd * std::exp(std::log(2.0 * pi / w) / kd);
    const cplx main = zeta_c(kd) / w + std::exp(-std::log(w) / kd) * gamma_c(1.0 + 1.0 / kd) * zeta_c(1.0 / kd) + 0.25;
    out.value = main + coef * sum;
    out.est_error = std::abs(coef) * out.est_error + 1e-15 * std::abs(main);
    return out;
}

double partial_fraction_check(int k, cplx a, double t) {
    if (k < 1) throw std::domain_error("partial_fraction_check: k must be positive");
    const double kd = k;
    const cplx tk = std::pow(cplx(t), k);
    const cplx a2k = std::pow(a, 2 * k);
    const cplx den = tk * tk + a2k;
    if (std::abs(den) < 1e-300) throw std::domain_error("partial_fraction_check: t^{2k} + a^{2k} vanishes");
    const cplx lhs = tk / den;
    const cplx a1k = std::pow(a, 1 - k);
    const double t2 = t * t;
    auto coef_odd_index = [&](int j) { return a1k / (2.0 * kd) * root4k(k, (1.0 - kd) * (2.0 * j - 1.0)); };

    // simple fractions over all 2k roots
    cplx full = 0.0;
    for (int j = 1; j <= k; ++j) {
        const cplx root = a * root4k(k, 2.0 * j - 1.0);
        const cplx c1 = coef_odd_index(j);
        const cplx c2 = parity_sign(k - 1) * c1;
        full += c1 / (t - root) + c2 / (t + root);
    }
    // paired quadratic form
    cplx paired = 0.0;
    for (int j = 1; j <= k; ++j) {
        const cplx r = a * root4k(k, 2.0 * j - 1.0);
        const cplx c = coef_odd_index(j);
        paired += (k % 2 == 1 ? c : c * root4k(k, 2.0 * j - 1.0)) / (t2 - r * r);
    }
    paired *= (k % 2 == 1) ? 2.0 * t : 2.0 * a;
    // conjugate-pair form
    cplx simplified = 0.0;
    if (k % 2 == 1) {
        cplx s = 1.0 / (t2 + a * a);
        for (int j = 1; j <= (k - 1) / 2; ++j) {
            const cplx B = root4k(k, (1.0 - kd) * 2.0 * j);
            const cplx rp = a * root4k(k, 2.0 * j), rm = a * root4k(k, -2.0 * j);
            s += B / (t2 + rp * rp) + std::conj(B) / (t2 + rm * rm);
        }
        simplified = parity_sign((k - 1) / 2) * a1k * t / kd * s;
    } else {
        cplx s = 0.0;
        for (int j = 1; j <= k / 2; ++j) {
            const double odd = 2.0 * j - 1.0;
            const cplx A = root4k(k, (2.0 - kd) * odd);
            const cplx rp = a * root4k(k, odd), rm = a * root4k(k, -odd);
            s += A / (t2 + rp * rp) + std::conj(A) / (t2 + rm * rm);
        }
        simplified = parity_sign(k / 2 - 1) * std::pow(a, 2 - k) / kd * s;
    }
    return std::max({std::abs(lhs - full), std::abs(lhs - paired), std::abs(lhs - simplified)});
}

cplx exact_cosine_integral(int k, int m, double a) {
    if (k < 2 || k % 2 != 0) throw std::domain_error("exact_cosine_integral: k must be even");
    if (m < 0 || 2 * m >= k) throw std::domain_error("exact_cosine_integral: needs 0 <= 2m < k");
    if (!(a > 0.0)) throw std::domain_error("exact_cosine_integral: a must be positive");
    const double kd = k;
    cplx sum = 0.0;
    for (int j = 1; j <= k / 2; ++j) {
        const double odd = 2.0 * j - 1.0;
        const double ph = (1.0 - kd + 2.0 * m) * odd;
        sum += std::exp(I * (pi * ph / (2.0 * kd)) - a * root4k(k, odd)) +
               std::exp(-I * (pi * ph / (2.0 * kd)) - a * root4k(k, -odd));
    }
    return pi * parity_sign(k / 2 + m - 1) / (2.0 * kd) * std::pow(a, 2.0 * m - kd + 1.0) * sum;
}

cplx cosine_integral_quadrature(int k, int m, double a) {
    const double a2k = std::pow(a, 2 * k);
    auto env = [&](double t) -> cplx { return std::pow(t, k + 2 * m) / (std::pow(t, 2 * k) + a2k); };
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-15;
    cfg.rel_tol = 1e-13;
    const double split = 10.0;
    QuadResult head = integrate_finite([&](double t) { return env(t) * std::cos(t); }, 0.0, split, cfg);
    QuadResult tail = integrate_osc_tail(env, 1.0, 0.0, split, oscillatory_defaults());
    return head.value + tail.value;
}

}  // namespace kv
