#include "kv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace kv {

namespace {

constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.0};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

double tolerance(const QuadratureConfig& cfg, cplx value) {
    return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
}

}  // namespace

QuadratureConfig contour_defaults() {
    QuadratureConfig c;
    c.rel_tol = 1e-10;
    return c;
}

QuadratureConfig oscillatory_defaults() {
    QuadratureConfig c;
    c.rel_tol = 1e-8;
    return c;
}

QuadResult gauss_kronrod15(const RealFn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cplx fc = f(c);
    cplx rk = fc * wgk[7];
    cplx rg = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        cplx f1 = f(c - dx);
        cplx f2 = f(c + dx);
        rk += wgk[j] * (f1 + f2);
        if (j % 2 == 1) rg += wg[j / 2] * (f1 + f2);
    }
    QuadResult r;
    r.value = rk * h;
    r.error = std::abs((rk - rg) * h);
    r.evals = 15;
    return r;
}

QuadResult integrate_tanh_sinh(const RealFn& f, double a, double b, const QuadratureConfig& cfg) {
    using std::numbers::pi;
    if (a == b) return {};
    const double len = b - a;
    // Nodes a + len/(1+e^{-2u}) written so that both ends keep full relative precision.
    auto node = [&](double t, double& x, double& w) {
        const double u = 0.5 * pi * std::sinh(t);
        const double du = 0.5 * pi * std::cosh(t);
        const double e = std::exp(-2.0 * std::abs(u));
        const double small = len * e / (1.0 + e);
        x = (u < 0) ? a + small : b - small;
        // d/dt of len/(1+e^{-2u}) = len * 2 e^{-2|u|}/(1+e^{-2|u|})^2 * du
        w = len * 2.0 * e / ((1.0 + e) * (1.0 + e)) * du;
    };
    const double tmax = 6.5;
    QuadResult res;
    double h = 0.5;
    cplx sum = 0.0;
    long evals = 0;
    auto add = [&](double t) -> cplx {
        double x, w;
        node(t, x, w);
        if (w == 0.0 || x <= a || x >= b) return 0.0;
        ++evals;
        cplx v = f(x) * w;
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return 0.0;
        return v;
    };
    sum += add(0.0);
    for (double t = h; t <= tmax; t += h) sum += add(t) + add(-t);
    cplx prev = sum * h;
    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        cplx extra = 0.0;
        for (double t = h; t <= tmax; t += 2 * h) extra += add(t) + add(-t);
        sum += extra;
        cplx cur = sum * h;
        double diff = std::abs(cur - prev);
        prev = cur;
        res.value = cur;
        res.error = diff;
        if (level >= 3 && diff <= tolerance(cfg, cur)) {
            res.evals = evals;
            res.converged = true;
            return res;
        }
    }
    res.evals = evals;
    res.converged = res.error <= tolerance(cfg, res.value);
    return res;
}

QuadResult integrate_finite(const RealFn& f, double a, double b, const QuadratureConfig& cfg) {
    if (a == b) return {};
    if (a > b) {
        QuadResult r = integrate_finite(f, b, a, cfg);
        r.value = -r.value;
        return r;
    }
    std::priority_queue<Panel> heap;
    QuadResult first = gauss_kronrod15(f, a, b);
    long evals = first.evals;
    heap.push({a, b, first.value, first.error});
    cplx total = first.value;
    double err = first.error;
    int splits = 0;
    while (err > tolerance(cfg, total) && splits < cfg.max_subdivisions) {
        Panel p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            heap.push(p);
            break;
        }
        QuadResult l = gauss_kronrod15(f, p.a, m);
        QuadResult r = gauss_kronrod15(f, m, p.b);
        evals += 30;
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        heap.push({p.a, m, l.value, l.error});
        heap.push({m, p.b, r.value, r.error});
        ++splits;
    }
    // Re-sum to drop the drift of the running totals.
    cplx sum = 0.0;
    double esum = 0.0;
    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const auto& p : panels) {
        sum += p.value;
        esum += p.error;
    }
    QuadResult res{sum, esum, evals, esum <= tolerance(cfg, sum)};
    if (!res.converged) {
        QuadResult ts = integrate_tanh_sinh(f, a, b, cfg);
        ts.evals += evals;
        if (ts.error < res.error) return ts;
    }
    return res;
}

QuadResult integrate_segment(const ComplexFn& f, cplx z0, cplx z1, const QuadratureConfig& cfg) {
    const cplx dz = z1 - z0;
    return integrate_finite([&](double u) { return f(z0 + u * dz) * dz; }, 0.0, 1.0, cfg);
}

std::pair<cplx, double> euler_accelerate(const std::vector<cplx>& partial_sums, int order) {
    const int n = static_cast<int>(partial_sums.size());
    if (n == 0) return {0.0, std::numeric_limits<double>::infinity()};
    const int L = std::min(order, n - 1);
    std::vector<cplx> row(partial_sums.end() - (L + 1), partial_sums.end());
    cplx prev = row.back();
    double err = std::numeric_limits<double>::infinity();
    cplx best = row.back();
    for (int level = 0; level < L; ++level) {
        const int m = static_cast<int>(row.size());
        std::vector<cplx> next(m - 1);
        for (int i = 0; i + 1 < m; ++i) next[i] = 0.5 * (row[i] + row[i + 1]);
        row.swap(next);
        cplx cur = row.back();
        double d = std::abs(cur - prev);
        // Keep the level where successive estimates agree best.
        if (d < err) {
            err = d;
            best = cur;
        }
        prev = cur;
    }
    if (L == 0) err = std::abs(partial_sums.back() - (n > 1 ? partial_sums[n - 2] : cplx(0.0)));
    return {best, err};
}

QuadResult integrate_osc_tail(const RealFn& envelope, double freq, double phase0, double a,
                              const QuadratureConfig& cfg) {
    using std::numbers::pi;
    if (!(freq > 0.0)) throw std::domain_error("integrate_osc_tail: frequency must be positive");
    if (cfg.osc_max_halfperiods < 8) throw std::domain_error("integrate_osc_tail: need at least 8 half-periods");
    auto g = [&](double t) { return envelope(t) * std::cos(freq * t + phase0); };
    // first zero of cos(freq t + phase0) at or beyond a
    double m0 = std::ceil((freq * a + phase0 - 0.5 * pi) / pi);
    auto zero = [&](double m) { return (0.5 * pi + m * pi - phase0) / freq; };
    double t0 = zero(m0);
    if (t0 < a) t0 = zero(m0 + 1), m0 += 1;

    QuadratureConfig inner = cfg;
    inner.abs_tol = cfg.abs_tol * 1e-2;
    inner.rel_tol = std::min(cfg.rel_tol, 1e-13);
    QuadResult head = integrate_finite(g, a, t0, inner);
    long evals = head.evals;
    double qerr = head.error;

    const int n = cfg.osc_max_halfperiods;
    std::vector<cplx> partial;
    partial.reserve(n);
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) {
        double l = zero(m0 + j), r = zero(m0 + j + 1);
        QuadResult p = gauss_kronrod15(g, l, r);
        if (p.error > 1e-3 * inner.abs_tol + 1e-15 * std::abs(p.value)) p = integrate_finite(g, l, r, inner);
        evals += p.evals;
        qerr += p.error;
        s += p.value;
        partial.push_back(s);
    }
    auto [tail, aerr] = euler_accelerate(partial, cfg.accel_order);
    QuadResult res;
    res.value = head.value + tail;
    res.error = aerr + qerr;
    res.evals = evals;
    res.converged = res.error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value));
    return res;
}

double contour_height(double delta, double sigma, double tol) {
    using std::numbers::pi;
    if (!(delta > 0.0)) throw std::domain_error("contour_height: non-positive decay rate");
    const double p = sigma - 0.5;
    auto lhs = [&](double T) { return 0.5 * std::log(2 * pi) + p * std::log(T) - 0.5 * pi * T * delta; };
    const double target = std::log(tol);
    double lo = 1.0, hi = 2.0;
    while (lhs(hi) > target) hi *= 2.0;
    if (lhs(lo) <= target) return lo;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (lhs(mid) > target ? lo : hi) = mid;
    }
    return hi;
}

QuadResult integrate_vertical_line(const ContourSpec& spec, const QuadratureConfig& cfg) {
    using std::numbers::pi;
    if (spec.decay_class == DecayClass::polynomial || !(spec.delta > 0.0))
        throw std::domain_error(
            "integrate_vertical_line: integrand decays only polynomially on the line; no stable truncation");
    const double T = cfg.contour_height_cut > 0.0 ? cfg.contour_height_cut
                                                  : contour_height(spec.delta, spec.sigma, cfg.abs_tol / 10.0);
    auto g = [&](double y) { return spec.integrand(cplx(spec.c, y)); };
    QuadResult total;
    const double width = 2.0;
    const int panels = std::max(2, static_cast<int>(std::ceil(2 * T / width)));
    QuadratureConfig inner = cfg;
    inner.abs_tol = cfg.abs_tol / panels;
    for (int i = 0; i < panels; ++i) {
        double y0 = -T + 2 * T * i / panels;
        double y1 = -T + 2 * T * (i + 1) / panels;
        QuadResult p = integrate_finite(g, y0, y1, inner);
        total.value += p.value;
        total.error += p.error;
        total.evals += p.evals;
        total.converged = total.converged && p.converged;
    }
    // ds = i dy, prefactor 1/(2 pi i)
    total.value /= 2 * pi;
    total.error /= 2 * pi;
    return total;
}

}  // namespace kv
