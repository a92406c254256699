#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kv/arith.hpp"
#include "kv/combinat.hpp"
#include "kv/kernels.hpp"
#include "kv/lambert.hpp"
#include "kv/parallel.hpp"
#include "kv/report.hpp"
#include "kv/specialfn.hpp"
#include "kv/summation.hpp"

using namespace kv;
using nlohmann::json;

namespace {

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "re" or "re,im"
cplx parse_complex(const std::string& s) {
    auto num = [&](const std::string& t) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            throw Usage("not a number: '" + t + "'");
        }
        if (used != t.size()) throw Usage("not a number: '" + t + "'");
        return v;
    };
    const auto comma = s.find(',');
    if (comma == std::string::npos) return {num(s), 0.0};
    return {num(s.substr(0, comma)), num(s.substr(comma + 1))};
}

json quad_json(const QuadratureConfig& q) {
    return {{"abs_tol", q.abs_tol},
            {"rel_tol", q.rel_tol},
            {"max_subdivisions", q.max_subdivisions},
            {"osc_max_halfperiods", q.osc_max_halfperiods},
            {"accel_order", q.accel_order}};
}

struct Options {
    int k = 1;
    std::string z = "0";
    std::string x = "1";
    std::string w = "1";
    std::string b = "1";
    std::string a = "1";
    double alpha = 0.5, beta = 10.5;
    long n = 1024;
    std::string f = "exp";
    int power = 1;
    int m = 0;
    double t = 1.0;
    std::string route = "auto";
    std::string form = "generic";
    std::string which = "lemma45";
    std::string table = "both";
    std::string what = "h";
    double from = 0.1, to = 10.0;
    int steps = 100;
    double tol = -1.0;
    unsigned threads = 0;
    std::string output = "json";
    std::string path;
};

class Emitter {
public:
    explicit Emitter(const Options& o) : o_(o) {
        if (!o.path.empty()) {
            file_.open(o.path);
            if (!file_) throw Usage("cannot open output file " + o.path);
        }
    }
    std::ostream& out() { return o_.path.empty() ? std::cout : file_; }

private:
    const Options& o_;
    std::ofstream file_;
};

QuadratureConfig quad_from(const Options& o) {
    QuadratureConfig q;
    if (o.tol > 0.0) q.rel_tol = o.tol;
    return q;
}

int emit_report(const Options& o, VerificationReport r, const QuadratureConfig& q) {
    r.params["quadrature"] = quad_json(q);
    Emitter e(o);
    if (o.output == "csv") {
        auto& s = e.out();
        s.precision(17);
        s << "identity,lhs_re,lhs_im,rhs_re,rhs_im,discrepancy,tolerance,relative,pass,route,est_error,terms\n";
        s << r.identity << ',' << r.lhs.real() << ',' << r.lhs.imag() << ',' << r.rhs.real() << ',' << r.rhs.imag()
          << ',' << r.discrepancy() << ',' << r.tolerance << ',' << (r.relative ? 1 : 0) << ',' << (r.pass ? 1 : 0)
          << ',' << r.route << ',' << r.est_error << ',' << r.terms << '\n';
    } else {
        e.out() << r.to_json().dump(2) << '\n';
    }
    return r.pass ? 0 : 2;
}

int emit_value(const Options& o, const std::string& what, json params, cplx v, const std::string& route, double err) {
    Emitter e(o);
    if (o.output == "csv") {
        auto& s = e.out();
        s.precision(17);
        s << "quantity,re,im,route,est_error\n" << what << ',' << v.real() << ',' << v.imag() << ',' << route << ','
          << err << '\n';
    } else {
        json j{{"schema", 1}, {"quantity", what}, {"params", params}, {"value", complex_json(v)},
               {"route", route},  {"est_error", err}};
        e.out() << j.dump(2) << '\n';
    }
    return 0;
}

KernelParams kparams(const Options& o) {
    KernelParams p{o.k, parse_complex(o.z)};
    validate_strip(p);
    return p;
}

double real_arg(const std::string& s, const char* name) {
    const cplx v = parse_complex(s);
    if (v.imag() != 0.0) throw Usage(std::string(name) + " must be real");
    return v.real();
}

KernelValue eval_h(const KernelParams& p, double x, const std::string& route, const QuadratureConfig& q) {
    if (route == "auto") return h_eval(p, x);
    if (route == "series") return h_series(p, x);
    if (route == "contour") return h_contour(p, x);
    if (route == "quadrature") return h_quadrature(p, x, q);
    if (route == "k-combination") return h_from_k_combination(p, x);
    throw Usage("unknown route for H: " + route);
}

KernelValue eval_k(const KernelParams& p, double x, const std::string& route, const QuadratureConfig& q) {
    if (route == "auto" || route == "real") return k_real(p, x, q);
    if (route == "series") return k_series(p, x);
    if (route == "contour") return k_contour(p, x, q);
    throw Usage("unknown route for K: " + route);
}

TestFunctionSpec test_function(const Options& o) {
    if (o.f == "exp") return TestFunctionSpec::exp_decay(parse_complex(o.w));
    if (o.f == "gaussian") return TestFunctionSpec::gaussian();
    if (o.f == "poly_exp") return TestFunctionSpec::poly_exp(o.power, parse_complex(o.w));
    throw Usage("unknown test function: " + o.f);
}

int cmd_eval_h(const Options& o) {
    const KernelParams p = kparams(o);
    const QuadratureConfig q = quad_from(o);
    const double x = real_arg(o.x, "x");
    const KernelValue v = eval_h(p, x, o.route, q);
    return emit_value(o, "H", {{"k", p.k}, {"z", complex_json(p.z)}, {"x", x}, {"quadrature", quad_json(q)}}, v.value,
                      route_name(v.route), v.est_error);
}

int cmd_eval_k(const Options& o) {
    const KernelParams p = kparams(o);
    const QuadratureConfig q = quad_from(o);
    const double x = real_arg(o.x, "x");
    const KernelValue v = eval_k(p, x, o.route, q);
    return emit_value(o, "K", {{"k", p.k}, {"z", complex_json(p.z)}, {"x", x}, {"quadrature", quad_json(q)}}, v.value,
                      route_name(v.route), v.est_error);
}

int cmd_eval_b(const Options& o) {
    const cplx z = parse_complex(o.z), b = parse_complex(o.b);
    return emit_value(o, "B", {{"z", complex_json(z)}, {"b", complex_json(b)}, {"quadrature", quad_json(quad_from(o))}},
                      b_transform(z, b), "b_transform", 0.0);
}

int cmd_verify_voronoi(const Options& o) {
    const TestFunctionSpec f = test_function(o);
    const double tol = o.tol;
    VoronoiConfig cfg;
    cfg.quad = quad_from(o);
    if (o.form == "classical") {
        return emit_report(o, classical_voronoi_check(real_arg(o.x, "x"), o.n, tol > 0 ? tol : 5e-3), cfg.quad);
    }
    if (o.form == "bessel") {
        return emit_report(o, voronoi_bessel_k1(parse_complex(o.z), o.alpha, o.beta, o.n, f, tol > 0 ? tol : 1e-4),
                           cfg.quad);
    }
    if (o.form != "generic") throw Usage("unknown form: " + o.form);
    cfg.p = kparams(o);
    cfg.alpha = o.alpha;
    cfg.beta = o.beta;
    cfg.n_terms = o.n;
    return emit_report(o, voronoi_rhs(cfg, f, tol > 0 ? tol : 1e-3), cfg.quad);
}

int cmd_verify_schwartz(const Options& o) {
    return emit_report(o, voronoi_schwartz(kparams(o), test_function(o), o.n, o.tol > 0 ? o.tol : 1e-4), quad_from(o));
}

int cmd_verify_lambert(const Options& o) {
    const cplx w = parse_complex(o.w);
    VerificationReport r;
    r.relative = true;
    if (o.form == "generic") {
        LambertConfig cfg{kparams(o), w};
        const SeriesValue l = lambert_lhs(cfg);
        const WigertRhs rhs = wigert_rhs(cfg);
        r.identity = "wigert_general";
        r.params = {{"k", o.k}, {"z", complex_json(cfg.p.z)}, {"w", complex_json(w)},
                    {"asymptotic_orders", rhs.asymptotic_orders}, {"asymptotic_start", rhs.asymptotic_start}};
        r.lhs = l.value;
        r.rhs = rhs.value;
        r.rhs_main = rhs.main;
        r.partial = rhs.trace;
        for (auto& [n, v] : r.partial) r.trace.push_back(std::abs(v - r.lhs));
        r.terms = rhs.terms;
        r.est_error = rhs.est_error + l.est_error;
        r.route = "b_transform dual series";
        r.tolerance = o.tol > 0 ? o.tol : 1e-9;
    } else if (o.form == "even" || o.form == "odd" || o.form == "wigert") {
        const int z = o.form == "even" ? 2 * o.m : o.form == "odd" ? 2 * o.m - 1 : 0;
        LambertConfig cfg{{o.k, static_cast<double>(z)}, w};
        const SeriesValue l = lambert_lhs(cfg);
        SeriesValue c = o.form == "even" ? wigert_even_corollary(o.k, o.m, w)
                        : o.form == "odd" ? wigert_odd_corollary(o.k, o.m, w)
                                          : wigert_classical_even(o.k, w);
        r.identity = "wigert_" + o.form;
        r.params = {{"k", o.k}, {"m", o.m}, {"z", z}, {"w", complex_json(w)}};
        r.lhs = l.value;
        r.rhs = c.value;
        r.terms = c.terms;
        r.est_error = c.est_error + l.est_error;
        r.route = "rotated lbar series";
        r.tolerance = o.tol > 0 ? o.tol : 1e-10;
    } else {
        throw Usage("unknown form: " + o.form);
    }
    r.decide();
    return emit_report(o, r, quad_from(o));
}

int cmd_verify_lemmas(const Options& o) {
    VerificationReport r;
    const QuadratureConfig q = quad_from(o);
    r.identity = o.which;
    if (o.which == "lemma45") {
        if (o.k < 1 || o.k > 12) throw Usage("lemma45: k must lie in [1, 12]");
        const cplx zc = parse_complex(o.z);
        const gauss_rational z(rational(zc.real()), rational(zc.imag()));
        bool all = true;
        json rows = json::array();
        for (int m = 1; m <= 2 * o.k + 2; ++m) {
            const bool eq = combinat::lemma45_lhs_exact(o.k, z, m) == combinat::lemma45_rhs_exact(o.k, z, m);
            all = all && eq;
            rows.push_back({{"m", m}, {"exact", eq}});
        }
        r.params = {{"k", o.k}, {"z", complex_json(zc)}, {"rows", rows}};
        r.lhs = combinat::lemma45_lhs(o.k, zc, 2 * o.k + 1);
        r.rhs = combinat::lemma45_rhs(o.k, zc, 2 * o.k + 1);
        r.route = "exact rational";
        r.tolerance = 0.0;
        r.pass = all;
        return emit_report(o, r, q);
    }
    if (o.which == "partial-fractions") {
        const double res = partial_fraction_check(o.k, parse_complex(o.a), o.t);
        r.params = {{"k", o.k}, {"a", complex_json(parse_complex(o.a))}, {"t", o.t}};
        r.rhs = res;
        r.route = "direct";
        r.tolerance = o.tol > 0 ? o.tol : 1e-12;
    } else if (o.which == "b-special") {
        const cplx zc = parse_complex(o.z), b = parse_complex(o.b);
        const double zr = zc.real();
        if (zc.imag() != 0.0 || zr != std::round(zr)) throw Usage("b-special: z must be an integer");
        const long m = std::lround(zr);
        r.params = {{"z", m}, {"b", complex_json(b)}};
        if (m % 2 == 0) {
            r.lhs = m >= 0 ? b_transform_even(static_cast<int>(m / 2), b) : b_transform_neg_even(static_cast<int>(-m / 2), b);
            r.rhs = b_transform_series(zc, b);
            r.route = "closed form vs continuation series";
            r.tolerance = o.tol > 0 ? o.tol : 1e-10;
            r.relative = true;
        } else {
            if (m < 0) throw Usage("b-special: B has a pole at negative odd z");
            r.lhs = b_transform_odd(static_cast<int>((m - 1) / 2), b);
            r.rhs = b_transform_rotated(zc, b);
            r.route = "closed form vs quadrature";
            r.tolerance = o.tol > 0 ? o.tol : 1e-8;
        }
    } else if (o.which == "cosine-integral") {
        const double a = real_arg(o.a, "a");
        r.params = {{"k", o.k}, {"m", o.m}, {"a", a}};
        r.lhs = exact_cosine_integral(o.k, o.m, a);
        r.rhs = cosine_integral_quadrature(o.k, o.m, a);
        r.route = "closed form vs quadrature";
        r.tolerance = o.tol > 0 ? o.tol : 1e-7;
    } else if (o.which == "hk") {
        const KernelParams p = kparams(o);
        const double x = real_arg(o.x, "x");
        const KernelValue a = h_eval(p, x), b = h_from_k_combination(p, x);
        r.params = {{"k", p.k}, {"z", complex_json(p.z)}, {"x", x}};
        r.lhs = a.value;
        r.rhs = b.value;
        r.est_error = a.est_error + b.est_error;
        r.route = route_name(a.route) + " vs k-combination";
        r.tolerance = o.tol > 0 ? o.tol : std::max(r.est_error, 1e-8);
    } else if (o.which == "ode") {
        const KernelParams p = kparams(o);
        const double x = real_arg(o.x, "x");
        r.params = {{"k", p.k}, {"z", complex_json(p.z)}, {"x", x}};
        r.rhs = ode_residual(p, x, OdeTarget::H);
        r.route = "normalized residual";
        r.tolerance = o.tol > 0 ? o.tol : 1e-6;
    } else {
        throw Usage("unknown lemma: " + o.which);
    }
    r.decide();
    return emit_report(o, r, q);
}

int cmd_tabulate(const Options& o) {
    if (o.steps < 1) throw Usage("steps must be positive");
    const QuadratureConfig q = quad_from(o);
    Emitter e(o);
    json rows = json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "x,re,im,route,est_error\n";
    for (int i = 0; i <= o.steps; ++i) {
        const double x = o.from + (o.to - o.from) * i / o.steps;
        cplx v;
        std::string route;
        double err = 0.0;
        if (o.what == "h" || o.what == "k") {
            const KernelParams p = kparams(o);
            const KernelValue kv = o.what == "h" ? eval_h(p, x, o.route, q) : eval_k(p, x, o.route, q);
            v = kv.value;
            route = route_name(kv.route);
            err = kv.est_error;
        } else if (o.what == "b") {
            v = b_transform(parse_complex(o.z), x);
            route = "b_transform";
        } else {
            throw Usage("unknown table: " + o.what);
        }
        csv << x << ',' << v.real() << ',' << v.imag() << ',' << route << ',' << err << '\n';
        rows.push_back({{"x", x}, {"value", complex_json(v)}, {"route", route}, {"est_error", err}});
    }
    if (o.output == "csv") e.out() << csv.str();
    else
        e.out() << json{{"schema", 1}, {"table", o.what}, {"k", o.k}, {"z", complex_json(parse_complex(o.z))},
                        {"quadrature", quad_json(q)}, {"rows", rows}}.dump(2)
                << '\n';
    return 0;
}

int cmd_sieve(const Options& o) {
    const KernelParams p = kparams(o);
    if (o.n < 1) throw Usage("N must be positive");
    const TableKind kind = o.table == "sigma" ? TableKind::sigma : o.table == "s" ? TableKind::s : TableKind::both;
    if (o.table != "sigma" && o.table != "s" && o.table != "both") throw Usage("unknown table: " + o.table);
    const DivisorTable t = build_table(p.k, p.z, o.n, kind);
    Emitter e(o);
    if (o.output == "csv") {
        t.write_csv(e.out());
    } else {
        json rows = json::array();
        for (long n = 1; n <= t.limit; ++n) {
            json row{{"n", n}};
            if (!t.sigma.empty()) row["sigma"] = complex_json(t.sigma[n]);
            if (!t.s_table.empty()) row["s"] = complex_json(t.s_table[n]);
            rows.push_back(row);
        }
        e.out() << json{{"schema", 1}, {"k", p.k}, {"z", complex_json(p.z)}, {"rows", rows}}.dump(2) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized divisor-sum kernels, Voronoi and Lambert identities"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--threads", o.threads, "worker thread cap (0 = all cores)");
    app.add_option("--output", o.output, "output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output-file", o.path, "write to this file instead of stdout");
    app.add_option("--tol", o.tol, "tolerance override");

    auto common = [&](CLI::App* c) {
        c->add_option("--k", o.k, "k");
        c->add_option("--z", o.z, "z as re or re,im");
    };
    auto* eh = app.add_subcommand("eval-h", "evaluate H");
    common(eh);
    eh->add_option("--x", o.x, "argument")->required();
    eh->add_option("--route", o.route, "auto, series, contour, quadrature, k-combination");
    auto* ek = app.add_subcommand("eval-k", "evaluate K");
    common(ek);
    ek->add_option("--x", o.x, "argument")->required();
    ek->add_option("--route", o.route, "auto, real, series, contour");
    auto* eb = app.add_subcommand("eval-b", "evaluate B(z, b)");
    eb->add_option("--z", o.z, "z");
    eb->add_option("--b", o.b, "b")->required();
    auto* vv = app.add_subcommand("verify-voronoi", "finite-interval summation formula");
    common(vv);
    vv->add_option("--alpha", o.alpha);
    vv->add_option("--beta", o.beta);
    vv->add_option("--N", o.n, "dual terms");
    vv->add_option("--f", o.f, "exp, gaussian, poly_exp");
    vv->add_option("--w", o.w, "decay rate");
    vv->add_option("--power", o.power);
    vv->add_option("--form", o.form, "generic, bessel (k = 1), classical");
    vv->add_option("--x", o.x, "x for the classical form");
    auto* vs = app.add_subcommand("verify-voronoi-schwartz", "summation formula over the whole half-line");
    common(vs);
    vs->add_option("--N", o.n, "dual terms");
    vs->add_option("--f", o.f, "exp, gaussian, poly_exp");
    vs->add_option("--w", o.w, "decay rate");
    vs->add_option("--power", o.power);
    auto* vl = app.add_subcommand("verify-lambert", "Lambert series transformation");
    common(vl);
    vl->add_option("--w", o.w, "w with Re w > 0");
    vl->add_option("--form", o.form, "generic, even, odd, wigert");
    vl->add_option("--m", o.m);
    auto* vm = app.add_subcommand("verify-lemmas", "auxiliary identities");
    common(vm);
    vm->add_option("--which", o.which, "lemma45, partial-fractions, b-special, cosine-integral, hk, ode");
    vm->add_option("--m", o.m);
    vm->add_option("--a", o.a);
    vm->add_option("--b", o.b);
    vm->add_option("--t", o.t);
    vm->add_option("--x", o.x);
    auto* tb = app.add_subcommand("tabulate", "tabulate H, K or B on a grid");
    common(tb);
    tb->add_option("--what", o.what, "h, k, b");
    tb->add_option("--from", o.from);
    tb->add_option("--to", o.to);
    tb->add_option("--steps", o.steps);
    tb->add_option("--route", o.route);
    auto* sv = app.add_subcommand("sieve", "divisor tables");
    common(sv);
    sv->add_option("--N", o.n)->required();
    sv->add_option("--table", o.table, "sigma, s, both");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }
    set_max_threads(o.threads);
    try {
        if (*eh) return cmd_eval_h(o);
        if (*ek) return cmd_eval_k(o);
        if (*eb) return cmd_eval_b(o);
        if (*vv) return cmd_verify_voronoi(o);
        if (*vs) return cmd_verify_schwartz(o);
        if (*vl) return cmd_verify_lambert(o);
        if (*vm) return cmd_verify_lemmas(o);
        if (*tb) return cmd_tabulate(o);
        if (*sv) return cmd_sieve(o);
    } catch (const Usage& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
