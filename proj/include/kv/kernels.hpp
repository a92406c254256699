#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kv/quadrature.hpp"

namespace kv {

using cplx = std::complex<double>;

// (k, z) with -1 < Re z < k.
struct KernelParams {
    int k = 1;
    cplx z{0.0, 0.0};
};

enum class Route { series, quadrature, contour, bessel_closed_form, asymptotic };
std::string route_name(Route r);

struct KernelValue {
    cplx value{0.0, 0.0};
    Route route = Route::series;
    double est_error = 0.0;
};

// Raised when a series sum loses more than twelve digits to cancellation.
class HorizonExceeded : public std::runtime_error {
public:
    HorizonExceeded(const std::string& what, KernelValue partial_result)
        : std::runtime_error(what), partial(partial_result) {}
    KernelValue partial;
};

// Throws std::domain_error naming the violated constraint.
void validate_strip(const KernelParams& p);

// Distance from z to the nearest parameter value at which two of the first m
// Meijer parameters differ by an integer (0 when exactly degenerate).
double h_degeneracy_distance(const KernelParams& p);
double k_degeneracy_distance(const KernelParams& p);

// Slater residue expansion of G^{m,0}_{0,q}(X | b). log_x is log X on the
// branch the caller wants (|Im| <= pi). Derivatives are taken with respect to
// x where X = scale * x^power; orders 0..max_deriv are returned.
struct SlaterResult {
    std::vector<cplx> values;  // d^r/dx^r, r = 0..max_deriv
    double est_error = 0.0;
    double peak = 0.0;         // largest partial-sum magnitude over all branches
    bool within_horizon = true;
    int terms = 0;
};
SlaterResult slater_series(const std::vector<cplx>& b, int m, cplx log_x, double power, cplx x, int max_deriv = 0);

// Derivatives 0..max_deriv of H at real x >= 0 from the Meijer-G series.
// Degenerate parameters are handled by interpolation in z.
std::vector<KernelValue> h_series_derivs(const KernelParams& p, double x, int max_deriv);
KernelValue h_series(const KernelParams& p, double x);

// Oscillatory quadrature of the defining integral.
KernelValue h_quadrature(const KernelParams& p, double x, const QuadratureConfig& cfg = {});

// Steepest-descent contour form of the defining integral; exact for x > 0,
// accurate where the series loses digits to cancellation. Returns derivatives
// 0..max_deriv. With sine = true the sine-kernel companion is evaluated.
std::vector<KernelValue> h_contour_derivs(const KernelParams& p, double x, int max_deriv, bool sine = false);
KernelValue h_contour(const KernelParams& p, double x);

// Picks the series when it is inside its horizon, the contour route otherwise.
KernelValue h_eval(const KernelParams& p, double x);

KernelValue k_real(const KernelParams& p, double x, const QuadratureConfig& cfg = {});
KernelValue k_contour(const KernelParams& p, cplx x, const QuadratureConfig& cfg = {}, double c = -1.0);
KernelValue k_series(const KernelParams& p, cplx x);

// Combination of K on the two boundary rays.
KernelValue h_from_k_combination(const KernelParams& p, double x);

// k = 1 closed form through Bessel functions.
cplx h_k1_closed_form(cplx z, double x);

// j-th derivative of H at 0.
cplx h_derivative_at_zero(const KernelParams& p, int j);

// Value at x = 0 for Re z < k - 1.
cplx h_at_zero(const KernelParams& p);

// Mellin transform of H: int_0^inf H(x) x^{s-1} dx (continued).
cplx h_mellin(const KernelParams& p, cplx s);

enum class OdeTarget { H, I_sine };
// Normalized residual of the order 2k+2 equation at x.
double ode_residual(const KernelParams& p, double x, OdeTarget which);
// Coefficients (x^2, x, 1, const) of the equation: 1, 2z+k+3, (z+1)(z+k+1), (-1)^k k^2.
std::vector<cplx> ode_coefficients(const KernelParams& p);

// Leading large-y term.
cplx h_asymptotic(const KernelParams& p, double y);
double h_asymptotic_amplitude(const KernelParams& p, double y);
double h_asymptotic_phase(const KernelParams& p, double y);

// Samples |H| on (0, 0.1] and checks |H| <= 2(|H(0)| + 1).
bool h_small_x_bound(const KernelParams& p, int samples = 50);

// Piecewise Chebyshev interpolant of H on [x0, x1], panels sized by the
// local oscillation phase. Built once, then cheap to evaluate.
class HInterpolant {
public:
    HInterpolant() = default;
    template <class F>
    HInterpolant(const KernelParams& p, double x0, double x1, F&& eval, int degree = 20);
    HInterpolant(const KernelParams& p, double x0, double x1, int degree = 20);

    cplx operator()(double x) const;
    double lo() const { return x0_; }
    double hi() const { return x1_; }
    // Panel breakpoints, useful as quadrature panel boundaries.
    const std::vector<double>& breaks() const { return breaks_; }
    double max_node_error() const { return max_err_; }

private:
    void build(const KernelParams& p, double x0, double x1, int degree,
               const std::function<KernelValue(double)>& eval);
    double x0_ = 0.0, x1_ = 0.0;
    int degree_ = 20;
    std::vector<double> breaks_;
    std::vector<std::vector<cplx>> coeffs_;
    double max_err_ = 0.0;
};

template <class F>
HInterpolant::HInterpolant(const KernelParams& p, double x0, double x1, F&& eval, int degree) {
    build(p, x0, x1, degree, std::function<KernelValue(double)>(std::forward<F>(eval)));
}

}  // namespace kv
