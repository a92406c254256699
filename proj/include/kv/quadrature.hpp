#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace kv {

using cplx = std::complex<double>;

struct QuadratureConfig {
    double abs_tol = 1e-13;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
    int osc_max_halfperiods = 64;
    int accel_order = 24;
    double contour_height_cut = 0.0;  // 0 selects T from the decay budget
    bool dd_mode = true;
};

QuadratureConfig contour_defaults();
QuadratureConfig oscillatory_defaults();

struct QuadResult {
    cplx value{0.0, 0.0};
    double error = 0.0;
    long evals = 0;
    bool converged = true;
};

using RealFn = std::function<cplx(double)>;
using ComplexFn = std::function<cplx(cplx)>;

// Single 15-point Kronrod panel; error is |K15 - G7|.
QuadResult gauss_kronrod15(const RealFn& f, double a, double b);

// Adaptive Gauss-Kronrod on [a, b]; falls back to tanh-sinh when the
// subdivision budget runs out (endpoint singularities).
QuadResult integrate_finite(const RealFn& f, double a, double b, const QuadratureConfig& cfg);

// Double-exponential rule; tolerates algebraic endpoint singularities.
QuadResult integrate_tanh_sinh(const RealFn& f, double a, double b, const QuadratureConfig& cfg);

// Straight segment z0 -> z1 in the complex plane.
QuadResult integrate_segment(const ComplexFn& f, cplx z0, cplx z1, const QuadratureConfig& cfg);

// int_a^inf envelope(t) cos(freq t + phase0) dt, split at the zeros of the
// cosine, accelerated by repeated averaging of the alternating partial sums.
QuadResult integrate_osc_tail(const RealFn& envelope, double freq, double phase0, double a,
                              const QuadratureConfig& cfg);

enum class DecayClass { exponential, polynomial };

struct ContourSpec {
    double c = 0.5;
    ComplexFn integrand;
    DecayClass decay_class = DecayClass::exponential;
    // |integrand(c+iy)| <~ sqrt(2 pi) |y|^{sigma - 1/2} exp(-pi delta |y| / 2)
    double delta = 1.0;
    double sigma = 0.5;
};

// Height T solving sqrt(2 pi) T^{sigma-1/2} exp(-pi T delta / 2) = tol.
double contour_height(double delta, double sigma, double tol);

// (1/(2 pi i)) int_{(c)} integrand(s) ds.
QuadResult integrate_vertical_line(const ContourSpec& spec, const QuadratureConfig& cfg);

// Repeated averaging of partial sums; returns the accelerated limit and an
// error estimate from the last two levels.
std::pair<cplx, double> euler_accelerate(const std::vector<cplx>& partial_sums, int order);

}  // namespace kv
