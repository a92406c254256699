#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kv/arith.hpp"
#include "kv/lambert.hpp"
#include "kv/quadrature.hpp"
#include "kv/specialfn.hpp"
#include "kv/summation.hpp"

using namespace kv;
using std::numbers::pi;

TEST_CASE("test functions") {
    const auto e = TestFunctionSpec::exp_decay(2.0);
    CHECK(std::abs(e(1.5) - std::exp(-3.0)) < 1e-16);
    CHECK(std::abs(e.mellin(1.0) - 0.5) < 1e-15);
    CHECK(std::abs(e.at_zero() - 1.0) == 0.0);
    const auto g = TestFunctionSpec::gaussian();
    CHECK(std::abs(g.mellin(1.0) - std::sqrt(pi) / 2.0) < 1e-15);
    for (cplx c : g.odd_taylor(5)) CHECK(std::abs(c) == 0.0);
    const auto pe = TestFunctionSpec::poly_exp(2, 1.5);
    CHECK(std::abs(pe.at_zero()) == 0.0);
    CHECK(std::abs(pe.odd_taylor(3)[0]) == 0.0);                    // t^1
    CHECK(std::abs(pe.odd_taylor(3)[1] - cplx(-1.5)) < 1e-15);     // t^3
    CHECK_THROWS_AS(TestFunctionSpec::exp_decay(-1.0), std::domain_error);

    // Mellin transforms and their derivative at 1 against quadrature
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-14;
    for (const TestFunctionSpec& f : {e, g, pe}) {
        const double T = f.cutoff();
        const cplx m = integrate_finite([&](double t) { return f(t) * std::pow(t, 0.7); }, 0.0, T, cfg).value;
        CHECK(std::abs(m - f.mellin(1.7)) < 1e-10);
        const cplx d = integrate_finite([&](double t) { return f(t) * std::log(t); }, 0.0, T, cfg).value;
        CHECK(std::abs(d - f.mellin_deriv_at_one()) < 1e-10);
    }
}

TEST_CASE("left side of the finite formula") {
    VoronoiConfig c;
    c.p = {1, 0.0};
    c.alpha = 0.5;
    c.beta = 3.5;
    const auto f = TestFunctionSpec::exp_decay(1.0);
    CHECK(std::abs(voronoi_lhs(c, f) - (std::exp(-1.0) + 2.0 * std::exp(-2.0) + 2.0 * std::exp(-3.0))) < 1e-15);
    c.alpha = 1.1;
    c.beta = 1.9;
    CHECK(std::abs(voronoi_lhs(c, f)) == 0.0);
    c.alpha = 2.0;
    CHECK_THROWS_AS(voronoi_lhs(c, f), std::domain_error);
    c = {};
    c.p = {2, 0.5};
    const DivisorTable t = build_table(2, 0.5, 10);
    cplx want = 0.0;
    for (long n = 1; n <= 10; ++n) want += t.sigma[n] * std::exp(-static_cast<double>(n));
    CHECK(std::abs(voronoi_lhs(c, f) - want) < 1e-15);
}

TEST_CASE("k = 1, z = 0 dual terms are the Bessel pair") {
    VoronoiConfig c;
    c.p = {1, 0.0};
    c.n_terms = 8;
    const auto f = TestFunctionSpec::exp_decay(1.0);
    const VerificationReport r = voronoi_rhs(c, f);
    QuadratureConfig q;
    q.abs_tol = 1e-15;
    cplx want = integrate_finite([&](double t) { return (2.0 * consts::euler_gamma + std::log(t)) * f(t); }, c.alpha, c.beta, q).value;
    for (long n = 1; n <= 8; ++n) {
        auto g = [&](double t) {
            const double x = 4.0 * pi * std::sqrt(n * t);
            return f(t) * (2.0 / pi * bessel_k(0.0, x) - bessel_y(0.0, x));
        };
        want += 2.0 * pi * sigma_zk(1, 0.0, n) * integrate_finite(g, c.alpha, c.beta, q).value;
    }
    CHECK(std::abs(r.rhs - want) < 1e-9);
}

TEST_CASE("k = 1 generic kernel matches the Bessel corollary term by term") {
    const auto f = TestFunctionSpec::exp_decay(1.0);
    VoronoiConfig c;
    c.p = {1, -0.5};
    c.n_terms = 16;
    const VerificationReport a = voronoi_rhs(c, f);
    const VerificationReport b = voronoi_bessel_k1(0.5, c.alpha, c.beta, 16, f);
    CHECK(std::abs(a.lhs - b.lhs) < 1e-14);
    CHECK(std::abs(a.rhs_main - b.rhs_main) < 1e-10);
    for (std::size_t i = 0; i < a.partial.size(); ++i) CHECK(std::abs(a.partial[i].second - b.partial[i].second) < 1e-9);
}

TEST_CASE("finite right side is additive over interval splits") {
    const auto f = TestFunctionSpec::exp_decay({1.0, 0.5});
    VoronoiConfig whole, left, right;
    whole.p = left.p = right.p = {2, 0.5};
    whole.n_terms = left.n_terms = right.n_terms = 32;
    whole.alpha = left.alpha = 0.5;
    whole.beta = right.beta = 6.5;
    left.beta = right.alpha = 3.25;
    const cplx sum = voronoi_rhs(left, f).rhs + voronoi_rhs(right, f).rhs;
    CHECK(std::abs(voronoi_rhs(whole, f).rhs - sum) < 1e-10);
}

TEST_CASE("smoothed finite sums reach the left side") {
    // plain truncations oscillate; the Riesz mean of the same terms converges
    VoronoiConfig c;
    c.p = {2, 0.5};
    c.n_terms = 512;
    const VerificationReport r = voronoi_rhs(c, TestFunctionSpec::exp_decay(1.0));
    CHECK(std::abs(r.rhs_riesz - r.lhs) < 5e-4);
    c.p = {2, 1.0};
    const VerificationReport l = voronoi_rhs(c, TestFunctionSpec::exp_decay(1.0));
    CHECK(l.identity == "voronoi_finite_log");
    CHECK(std::abs(l.rhs_riesz - l.lhs) < 5e-4);
}

TEST_CASE("half-line formula") {
    const KernelParams p{2, 0.5};
    const auto f = TestFunctionSpec::exp_decay(1.0);
    const VerificationReport r = voronoi_schwartz(p, f, 64);
    const cplx wig = wigert_rhs({p, 1.0}).value;
    CHECK(std::abs(r.rhs - wig) < 1e-9);
    CHECK(std::abs(r.lhs - lambert_lhs({p, 1.0}).value) < 1e-13);
    CHECK(r.pass);
    // gaussian has no power-law tail to restore
    const VerificationReport g = voronoi_schwartz({2, 0.0}, TestFunctionSpec::gaussian(), 200);
    CHECK(g.discrepancy() < 1e-4);
    // logarithmic case
    const VerificationReport l = voronoi_schwartz({2, 1.0}, f, 64);
    CHECK(l.identity == "voronoi_schwartz_log");
    CHECK(l.discrepancy() < 1e-8);
    // polynomial times exponential
    const VerificationReport q = voronoi_schwartz({3, 0.4}, TestFunctionSpec::poly_exp(2, 1.5), 200);
    CHECK(q.discrepancy() < 1e-8);
}

TEST_CASE("classical divisor problem") {
    const VerificationReport r = classical_voronoi_check(0.5, 2000);
    CHECK(std::abs(r.lhs) == 0.0);
    CHECK(std::abs(r.rhs_riesz) < 1e-2);
    CHECK_THROWS_AS(classical_voronoi_check(3.0, 10), std::domain_error);
    const VerificationReport s = classical_voronoi_check(5.5, 500);
    CHECK(s.lhs.real() == 10.0);
}

TEST_CASE("report serialization") {
    const VerificationReport r = classical_voronoi_check(5.5, 64);
    const auto j = r.to_json();
    CHECK(j["schema"] == 1);
    CHECK(j["trace"].size() == r.partial.size());
    CHECK(j.contains("route"));
    CHECK(j.contains("est_error"));
    CHECK(j["tolerances"]["value"] == 5e-3);
}
