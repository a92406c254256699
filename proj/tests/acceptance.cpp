// One line per acceptance criterion. Exit status is nonzero only with --strict.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "kv/combinat.hpp"
#include "kv/kernels.hpp"
#include "kv/lambert.hpp"
#include "kv/specialfn.hpp"
#include "kv/summation.hpp"

using namespace kv;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

int failures = 0;

void run(const char* name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = o.pass && dt <= budget_s;
    if (!ok) ++failures;
    std::printf("[%s] %s: %s; %.2f s of %.0f s\n", ok ? "PASS" : "FAIL", name, o.detail.c_str(), dt, budget_s);
    std::fflush(stdout);
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

Outcome wigert_grid() {
    const cplx ws[] = {1.0, 2.0, {1.0, 1.0 / 3.0}};
    double worst = 0.0;
    int cells = 0;
    for (int k = 1; k <= 4; ++k) {
        const cplx zs[] = {0.0, 0.5, {1.0 / 3.0, 1.0 / 7.0}, k - 0.75};
        for (int wi = 0; wi < 3; ++wi) {
            // rotate through the z values so every one appears; z = k - 1 is excluded
            int zi = (k - 1 + wi) % 4;
            if (std::abs(zs[zi] - cplx(k - 1.0)) < 1e-12) zi = (zi + 1) % 4;
            const LambertConfig cfg{{k, zs[zi]}, ws[wi]};
            worst = std::max(worst, rel(wigert_rhs(cfg).value, lambert_lhs(cfg).value));
            ++cells;
        }
    }
    return {worst <= 1e-9, fmt("%d cells, worst relative discrepancy %.2e (tol 1e-9)", cells, worst)};
}

Outcome wigert_even() {
    double worst = 0.0;
    for (double w : {0.5, 1.0, 2.0}) {
        const cplx l = lambert_lhs({{2, 0.0}, w}).value;
        worst = std::max({worst, rel(wigert_even_corollary(2, 0, w).value, l), rel(wigert_classical_even(2, w).value, l)});
    }
    return {worst <= 1e-10, fmt("k=2 m=0 w in {1/2,1,2}, worst relative %.2e (tol 1e-10)", worst)};
}

Outcome wigert_odd() {
    const double a = rel(wigert_odd_corollary(3, 1, 1.0).value, lambert_lhs({{3, 1.0}, 1.0}).value);
    const double b = rel(wigert_odd_corollary(5, 2, 2.0).value, lambert_lhs({{5, 3.0}, 2.0}).value);
    return {std::max(a, b) <= 1e-10, fmt("(k=3,m=1,w=1) %.2e, (k=5,m=2,w=2) %.2e (tol 1e-10)", a, b)};
}

Outcome hardy() {
    double worst = 0.0;
    for (double x : {0.25, 1.0, 4.0, 9.0}) {
        const double r = 2.0 * std::sqrt(x);
        const cplx want = bessel_k(0.0, r) - pi / 2.0 * bessel_y(0.0, r);
        worst = std::max(worst, std::abs(h_series({1, 0.0}, x).value - want));
    }
    return {worst <= 1e-9, fmt("max |series - (K0 - pi/2 Y0)| = %.2e (tol 1e-9)", worst)};
}

std::vector<cplx> kernel_z_values(int k) { return {0.0, 0.5, {1.0 / 3.0, 1.0 / 7.0}, k - 0.75}; }

Outcome hk_identity() {
    int points = 0, bad = 0;
    double worst_err = 0.0, worst_gap = 0.0;
    for (int k = 1; k <= 3; ++k)
        for (cplx z : kernel_z_values(k))
            for (double x : {0.5, 1.5, 3.0, 5.0, 8.0}) {
                const KernelParams p{k, z};
                const KernelValue a = h_series(p, x), b = h_from_k_combination(p, x);
                const double gap = std::abs(a.value - b.value);
                worst_err = std::max({worst_err, a.est_error, b.est_error});
                worst_gap = std::max(worst_gap, gap);
                if (gap > a.est_error + b.est_error || a.est_error > 1e-8 || b.est_error > 1e-8) ++bad;
                ++points;
            }
    return {bad == 0, fmt("%d points, %d outside summed est_error; max gap %.2e, max est_error %.2e (cap 1e-8)", points,
                          bad, worst_gap, worst_err)};
}

Outcome cross_route() {
    double worst_h = 0.0, worst_k = 0.0;
    int points = 0;
    const double xs[] = {0.5, 1.5, 3.0, 5.0, 8.0};
    for (int k = 1; k <= 3; ++k)
        for (cplx z : {cplx(0.5), cplx(k - 0.75, 0.2)})
            for (double x : xs) {
                const KernelParams p{k, z};
                worst_h = std::max(worst_h, std::abs(h_series(p, x).value - h_quadrature(p, x).value));
                const cplx s = k_series(p, x).value, r = k_real(p, x).value, c = k_contour(p, x).value;
                worst_k = std::max({worst_k, std::abs(s - r), std::abs(r - c), std::abs(s - c)});
                ++points;
            }
    return {std::max(worst_h, worst_k) <= 1e-7,
            fmt("%d points, H series/quadrature %.2e, K series/real/contour %.2e (tol 1e-7)", points, worst_h, worst_k)};
}

Outcome ode() {
    struct Pt {
        int k;
        double z, x;
    };
    double worst = 0.0;
    const Pt pts[] = {{1, 0.2, 1.0}, {1, -0.5, 3.0}, {1, 0.0, 4.0}, {1, -0.3, 0.4}, {1, -0.8, 6.0},
                      {2, 0.5, 0.7}, {2, 0.0, 2.0},  {2, 0.9, 5.0}, {2, -0.4, 1.3}, {2, 0.3, 7.5}};
    for (Pt t : pts) worst = std::max(worst, ode_residual({t.k, t.z}, t.x, OdeTarget::H));
    // coefficients of the equation against the coefficient identity in exact arithmetic
    bool exact = true;
    for (int k = 1; k <= 2; ++k)
        for (const gauss_rational& z : {gauss_rational(rational(1, 4)), gauss_rational(rational(1, 2), rational(3, 4))}) {
            const auto c = ode_coefficients({k, z.to_complex()});
            for (int i = 0; i < 3; ++i) {
                const gauss_rational e = combinat::lemma45_lhs_exact(k, z, 2 * k + 2 - i);
                exact = exact && e.to_complex() == c[i];
            }
        }
    return {worst <= 1e-6 && exact,
            fmt("10 points, max normalized residual %.2e (tol 1e-6); coefficients exact: %s", worst, exact ? "yes" : "no")};
}

Outcome lemma45() {
    std::mt19937 gen(45);
    std::uniform_int_distribution<int> num(-60, 60), den(1, 23);
    int exact_bad = 0, exact_n = 0;
    for (int k = 1; k <= 6; ++k)
        for (int t = 0; t < 5; ++t) {
            const gauss_rational z(rational(num(gen), den(gen)), rational(num(gen), den(gen)));
            for (int m = 1; m <= 2 * k + 2; ++m) {
                ++exact_n;
                if (!(combinat::lemma45_lhs_exact(k, z, m) == combinat::lemma45_rhs_exact(k, z, m))) ++exact_bad;
            }
        }
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const cplx z{u(gen), u(gen)};
        for (int k = 1; k <= 6; ++k) {
            const auto e = combinat::elem_sym_all(combinat::h_params<cplx>(k, z));
            for (int m = 1; m <= 2 * k + 2; ++m) {
                // relative to the sum of |summands|
                double scale = 0.0, pw = 1.0;
                for (int j = 0; j <= 2 * k + 2 - m; ++j, pw *= 2.0 * k)
                    scale += pw * std::abs(e[j]) * static_cast<double>(combinat::stirling2(2 * k + 2 - j, m));
                worst = std::max(worst, std::abs(combinat::lemma45_lhs(k, z, m) - combinat::lemma45_rhs(k, z, m)) / scale);
            }
        }
    }
    return {exact_bad == 0 && worst <= 1e-10,
            fmt("exact: %d/%d identities hold; floating: worst relative %.2e (tol 1e-10)", exact_n - exact_bad, exact_n, worst)};
}

Outcome b_closed_forms() {
    double even = 0.0;
    for (cplx b : {cplx(0.5), cplx(1.3), cplx(2.0, 1.0), cplx(2.7, -0.4)}) {
        for (int m = 0; m <= 2; ++m) even = std::max(even, rel(b_transform_even(m, b), b_transform_series(2.0 * m, b)));
        for (int m = 1; m <= 2; ++m) even = std::max(even, rel(b_transform_neg_even(m, b), b_transform_series(-2.0 * m, b)));
    }
    double odd = 0.0;
    for (cplx b : {cplx(0.5), cplx(1.0), cplx(2.0, 1.0), cplx(2.7, -0.4)})
        odd = std::max(odd, std::abs(b_transform_odd(0, b) - b_transform_rotated(1.0, b)));
    double cosine = 0.0;
    for (auto [k, m, a] : {std::tuple{2, 0, 2.0}, {4, 1, 1.0}, {4, 0, 0.7}, {6, 2, 1.3}})
        cosine = std::max(cosine, std::abs(exact_cosine_integral(k, m, a) - cosine_integral_quadrature(k, m, a)));
    return {even <= 1e-10 && odd <= 1e-8 && cosine <= 1e-7,
            fmt("even/neg-even closed forms %.2e (1e-10), z=1 vs quadrature %.2e (1e-8), cosine integral %.2e (1e-7)", even,
                odd, cosine)};
}

Outcome partial_fractions() {
    std::mt19937 gen(64);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const int k = 1 + i % 6;
        const cplx a = std::polar(0.3 + 2.5 * u(gen), (u(gen) - 0.5) * 1.2);
        worst = std::max(worst, partial_fraction_check(k, a, 0.05 + 4.0 * u(gen)));
    }
    return {worst <= 1e-12, fmt("200 samples, k <= 6, max residual %.2e (tol 1e-12)", worst)};
}

std::string trace_text(const VerificationReport& r) {
    std::string s;
    for (std::size_t i = r.partial.size() >= 3 ? r.partial.size() - 3 : 0; i < r.partial.size(); ++i)
        s += fmt("%sN=%ld:%.1e", s.empty() ? "" : " ", r.partial[i].first, r.trace[i]);
    return s;
}

Outcome finite_voronoi() {
    const auto f = TestFunctionSpec::exp_decay(1.0);
    VoronoiConfig c;
    c.n_terms = 1024;
    c.p = {2, 0.5};
    const VerificationReport a = voronoi_rhs(c, f, 1e-3);
    c.p = {2, 1.0};
    const VerificationReport b = voronoi_rhs(c, f, 1e-3);
    const VerificationReport d = voronoi_bessel_k1(0.5, 0.5, 10.5, 1024, f, 1e-4);
    auto one = [](const char* n, const VerificationReport& r) {
        return fmt("%s %s [%s, trend %s, riesz %.1e]", n, r.pass ? "ok" : "off", trace_text(r).c_str(),
                   r.trend_ok ? "ok" : "up", std::abs(r.rhs_riesz - r.lhs));
    };
    return {a.pass && b.pass && d.pass,
            one("z=1/2", a) + "; " + one("z=k-1", b) + "; " + one("k=1 bessel z=1/2", d)};
}

Outcome schwartz() {
    double worst = 0.0;
    for (auto [k, z, w] : {std::tuple{2, cplx(0.5), cplx(1.0)}, {3, cplx(1.0 / 3.0), cplx(2.0)}, {1, cplx(0.25, 0.1), cplx(1.0, 1.0 / 3.0)}}) {
        const VerificationReport r = voronoi_schwartz({k, z}, TestFunctionSpec::exp_decay(w), 200);
        worst = std::max(worst, std::abs(r.rhs - wigert_rhs({{k, z}, w}).value));
    }
    const VerificationReport g = voronoi_schwartz({2, 0.0}, TestFunctionSpec::gaussian(), 200);
    return {worst <= 1e-9 && g.discrepancy() <= 1e-4,
            fmt("exp vs Lambert pipeline %.2e (tol 1e-9); gaussian N=200 discrepancy %.2e (tol 1e-4)", worst, g.discrepancy())};
}

Outcome classical() {
    const VerificationReport r = classical_voronoi_check(5.5, 5000, 5e-3);
    return {r.pass && r.lhs == cplx(10.0),
            fmt("LHS %.0f, |LHS - RHS(5000)| = %.2e (tol 5e-3) [%s, riesz %.1e]", r.lhs.real(), r.discrepancy(),
                trace_text(r).c_str(), std::abs(r.rhs_riesz - r.lhs))};
}

Outcome asymptotics() {
    const KernelParams p{1, 0.0};
    auto mag = [&](double y) { return std::abs(h_eval(p, y).value); };
    // coarse scan for local maxima of |H|, each refined by golden-section search
    double worst = 0.0;
    int peaks = 0;
    const double h = 0.05;
    double a = mag(20.0 - h), b = mag(20.0);
    for (double y = 20.0 + h; y <= 40.0 + 1e-9; y += h) {
        const double c = mag(y);
        if (b > a && b >= c) {
            double lo = y - 2.0 * h, hi = y;
            const double g = 0.5 * (std::sqrt(5.0) - 1.0);
            while (hi - lo > 1e-7) {
                const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
                (mag(m1) < mag(m2) ? lo : hi) = mag(m1) < mag(m2) ? m1 : m2;
            }
            const double yp = 0.5 * (lo + hi);
            worst = std::max(worst, std::abs(mag(yp) / h_asymptotic_amplitude(p, yp) - 1.0));
            ++peaks;
        }
        a = b;
        b = c;
    }
    return {peaks > 0 && worst <= 0.1, fmt("k=1, %d peaks on [20,40], max |ratio - 1| = %.2e (tol 0.1)", peaks, worst)};
}

}  // namespace

int main(int argc, char** argv) {
    const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
    run("generalized Wigert identity", 60, wigert_grid);
    run("even corollary recovers Wigert", 10, wigert_even);
    run("odd corollary exactness", 20, wigert_odd);
    run("Hardy reduction", 1, hardy);
    run("H from K combination", 30, hk_identity);
    run("cross-route kernel agreement", 120, cross_route);
    run("differential equation", 10, ode);
    run("coefficient identity", 5, lemma45);
    run("cosine transform closed forms", 20, b_closed_forms);
    run("partial fractions", 2, partial_fractions);
    run("finite-interval summation", 600, finite_voronoi);
    run("half-line summation", 300, schwartz);
    run("classical divisor problem", 30, classical);
    run("large-argument asymptotics", 10, asymptotics);
    std::printf("%d of 14 criteria failed\n", failures);
    return strict && failures > 0 ? 1 : 0;
}
