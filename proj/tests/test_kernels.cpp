#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "kv/combinat.hpp"
#include "kv/kernels.hpp"
#include "kv/specialfn.hpp"

using namespace kv;
using std::numbers::pi;

namespace {

double hardy(double x) {
    const double r = 2.0 * std::sqrt(x);
    return (bessel_k(0.0, r) - pi / 2.0 * bessel_y(0.0, r)).real();
}

cplx h_zero_formula(const KernelParams& p) {
    const cplx a = (static_cast<double>(p.k) - 1.0 - p.z) / static_cast<double>(p.k);
    return gamma_c(a) * cos_pi(0.5 * a) / static_cast<double>(p.k);
}

}  // namespace

TEST_CASE("strip validation") {
    CHECK_THROWS_AS(validate_strip({2, 2.0}), std::domain_error);
    CHECK_THROWS_AS(validate_strip({1, -1.0}), std::domain_error);
    CHECK_THROWS_AS(validate_strip({0, 0.0}), std::domain_error);
    CHECK_NOTHROW(validate_strip({3, {2.5, 4.0}}));
}

TEST_CASE("series route: value at zero and the k = 1 reduction") {
    for (KernelParams p : {KernelParams{2, 0.0}, KernelParams{3, 1.0}, KernelParams{3, {0.4, 0.3}}}) {
        CHECK(std::abs(h_series(p, 0.0).value - h_zero_formula(p)) < 1e-13);
        CHECK(std::abs(h_at_zero(p) - h_zero_formula(p)) < 1e-13);
    }
    CHECK(std::abs(h_zero_formula({3, 1.0}) - gamma_c(1.0 / 3.0) * std::cos(pi / 6.0) / 3.0) < 1e-15);
    for (double x : {0.25, 1.0, 4.0, 9.0}) {
        const KernelValue v = h_series({1, 0.0}, x);
        CHECK(v.route == Route::series);
        CHECK(std::abs(v.value - hardy(x)) < 1e-9);
    }
}

TEST_CASE("independent routes for H agree") {
    struct Pt {
        int k;
        cplx z;
        double x;
    };
    for (Pt t : {Pt{2, 0.5, 3.0}, Pt{2, 0.0, 2.0}, Pt{1, 0.0, 4.0}, Pt{3, 0.7, 1.5}, Pt{1, {0.3, 0.4}, 2.5}}) {
        const KernelParams p{t.k, t.z};
        const KernelValue s = h_series(p, t.x), q = h_quadrature(p, t.x), c = h_contour(p, t.x);
        CHECK(std::abs(s.value - q.value) <= std::max(s.est_error + q.est_error, 1e-7));
        CHECK(std::abs(s.value - c.value) <= 1e-9);
    }
    CHECK(std::abs(h_quadrature({1, 0.0}, 4.0).value - hardy(4.0)) < 1e-7);
    CHECK(std::abs(h_quadrature({3, 1.0}, 0.0).value - gamma_c(1.0 / 3.0) * std::cos(pi / 6.0) / 3.0) < 1e-8);
}

TEST_CASE("independent routes for K agree") {
    const KernelParams p{2, 0.3};
    for (double x : {0.5, 1.5, 2.0, 10.0}) {
        const cplx a = k_series(p, x).value, b = k_real(p, x).value, c = k_contour(p, x).value;
        CHECK(std::abs(a - b) < 1e-9);
        CHECK(std::abs(b - c) < 1e-9);
    }
    // abscissa invariance
    const cplx x = std::polar(2.0, 0.5);
    const KernelParams q{2, {0.3, 0.1}};
    CHECK(std::abs(k_contour(q, x).value - k_contour(q, x, {}, 1.7).value) < 1e-9);
    CHECK(std::abs(k_contour(q, x).value - k_series(q, x).value) < 1e-9);
    // value at zero
    for (KernelParams r : {KernelParams{2, 0.3}, KernelParams{3, 1.2}}) {
        const cplx want = gamma_c((r.k - 1.0 - r.z) / static_cast<double>(r.k)) / static_cast<double>(r.k);
        CHECK(std::abs(k_real(r, 0.0).value - want) < 1e-9);
        CHECK(std::abs(k_series(r, 0.0).value - want) < 1e-12);
    }
    // k = 1, z = 0 at 4 pi^2 against the modified Bessel pair
    const cplx ref = bessel_k(0.0, 4.0 * pi * std::exp(cplx(0, pi / 4))) + bessel_k(0.0, 4.0 * pi * std::exp(cplx(0, -pi / 4)));
    CHECK(std::abs(k_contour({1, 0.0}, 4.0 * pi * pi).value - ref) < 1e-12);
    CHECK(std::abs(k_real({1, 0.0}, 4.0 * pi * pi).value - ref) < 1e-12);
}

TEST_CASE("H from two values of K") {
    std::mt19937 gen(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const int k = 1 + static_cast<int>(u(gen) * 4.0);
        const KernelParams p{k, {-0.9 + (k + 0.8) * u(gen), 0.5 * u(gen)}};
        const double x = 5.0 * u(gen);
        KernelValue a, b;
        try {
            a = h_series(p, x);
        } catch (const std::domain_error&) {
            continue;  // degenerate draw
        }
        b = h_from_k_combination(p, x);
        CHECK(std::abs(a.value - b.value) <= std::max(a.est_error + b.est_error, 1e-10));
    }
    CHECK(std::abs(h_from_k_combination({1, 0.0}, 2.0).value - hardy(2.0)) < 1e-9);
    CHECK(std::abs(h_from_k_combination({2, 0.4}, 0.0).value - h_zero_formula({2, 0.4})) < 1e-12);
}

TEST_CASE("closed form at k = 1") {
    CHECK(std::abs(h_k1_closed_form(0.0, 3.0) - hardy(3.0)) < 1e-12);
    CHECK(std::abs(h_k1_closed_form(1.0 / 3.0, 2.0) - h_series({1, 1.0 / 3.0}, 2.0).value) < 1e-10);
    // the bracket is even in z
    for (double z : {0.2, 0.45, 0.7}) {
        const double r = 2.0 * std::sqrt(2.0);
        auto bracket = [&](double v) {
            return (2.0 / pi * bessel_k(v, r) - bessel_y(v, r)) * std::cos(pi * v / 2) - bessel_j(v, r) * std::sin(pi * v / 2);
        };
        CHECK(std::abs(bracket(z) - bracket(-z)) < 1e-11);
    }
}

TEST_CASE("derivatives at zero") {
    CHECK(std::abs(h_derivative_at_zero({3, -0.5}, 1)) == 0.0);
    CHECK(std::abs(h_derivative_at_zero({3, -0.5}, 0) - h_zero_formula({3, -0.5})) < 1e-14);
    CHECK_THROWS_AS(h_derivative_at_zero({2, 0.0}, 6), std::domain_error);
    // j = 2, k = 3, z = -1/2: H = H(0) + A x^2 + B x^{5/2} + C x^4 + D x^{9/2} + ... near 0, fit A
    const KernelParams p{3, -0.5};
    const std::array<double, 4> ex{2.0, 2.5, 4.0, 4.5};
    const std::array<double, 4> xs{0.02, 0.04, 0.06, 0.08};
    double m[4][5];
    const double h0 = h_series(p, 0.0).value.real();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) m[i][j] = std::pow(xs[i], ex[j]);
        m[i][4] = h_series(p, xs[i]).value.real() - h0;
    }
    for (int c = 0; c < 4; ++c)
        for (int r = c + 1; r < 4; ++r) {
            const double f = m[r][c] / m[c][c];
            for (int j = c; j < 5; ++j) m[r][j] -= f * m[c][j];
        }
    double sol[4];
    for (int r = 3; r >= 0; --r) {
        double s = m[r][4];
        for (int j = r + 1; j < 4; ++j) s -= m[r][j] * sol[j];
        sol[r] = s / m[r][r];
    }
    CHECK(std::abs(2.0 * sol[0] - h_derivative_at_zero(p, 2).real()) < 1e-5);
}

TEST_CASE("differential equation") {
    CHECK(ode_residual({1, 0.2}, 1.0, OdeTarget::H) < 1e-8);
    CHECK(ode_residual({2, 0.5}, 0.7, OdeTarget::H) < 1e-6);
    CHECK(ode_residual({1, 0.2}, 1.0, OdeTarget::I_sine) < 1e-6);
    CHECK(ode_residual({2, 0.5}, 0.7, OdeTarget::I_sine) < 1e-6);
    for (int k = 1; k <= 4; ++k) {
        const cplx z{0.3, -0.2};
        const auto c = ode_coefficients({k, z});
        CHECK(std::abs(c[0] - combinat::lemma45_lhs(k, z, 2 * k + 2)) < 1e-10);
        CHECK(std::abs(c[1] - combinat::lemma45_lhs(k, z, 2 * k + 1)) < 1e-10);
        CHECK(std::abs(c[2] - combinat::lemma45_lhs(k, z, 2 * k)) < 1e-10);
    }
}

TEST_CASE("large argument behaviour") {
    const KernelParams p{1, 0.0};
    for (double y : {30.0, 50.0}) {
        const cplx want = std::sqrt(pi) / (2.0 * std::pow(y, 0.25)) * std::cos(pi / 4.0 + 2.0 * std::sqrt(y));
        CHECK(std::abs(h_asymptotic(p, y) - want) < 1e-14);
    }
    double worst = 0.0;
    for (double y = 20.0; y <= 40.0; y += 0.01) worst = std::max(worst, std::abs(h_eval(p, y).value) / h_asymptotic_amplitude(p, y));
    CHECK(worst <= 1.1);
    CHECK(worst >= 0.9);
}

TEST_CASE("boundedness near zero") {
    CHECK(h_small_x_bound({2, 0.0}));
    CHECK(h_small_x_bound({3, -0.5}));
    // Re z = 0.9 > k - 1: H grows like a negative power of x at the origin
    CHECK_FALSE(h_small_x_bound({1, 0.9}));
}

TEST_CASE("chebyshev table") {
    const KernelParams p{2, 0.5};
    const HInterpolant t(p, 10.0, 400.0);
    CHECK(t.max_node_error() < 1e-12);
    for (double x = 10.3; x < 400.0; x *= 1.37) CHECK(std::abs(t(x) - h_contour(p, x).value) < 1e-12);
    CHECK_THROWS(HInterpolant(p, 0.0, 5.0));
}
