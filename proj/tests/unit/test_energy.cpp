#include <doctest.h>

#include <cmath>

#include "config.hpp"
#include "energy.hpp"
#include "error.hpp"
#include "oracle.hpp"
#include "random.hpp"

using namespace varfrac;

namespace {

ProblemConfig small_config() {
    ProblemConfig cfg = load_config(VARFRAC_DEFAULT_CONFIG);
    cfg.grid = 64;
    return cfg;
}

const Problem& shared_problem() {
    static const Problem problem = make_problem(small_config());
    return problem;
}

std::vector<double> random_interior(std::size_t n, Rng& rng, double amp) {
    std::vector<double> u(n);
    for (double& x : u) x = rng.uniform(-amp, amp);
    return u;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

GeometryInputs worked_inputs() {
    GeometryInputs in;
    in.p_lower = 1.0;
    in.p_upper = 3.0;
    in.k_lower = 1.0;
    in.k_upper = 1.5;
    in.q_lower = 1.5;
    in.q_upper = 2.0;
    in.alpha = 0.05;
    in.beta = 0.1;
    in.c_p = 1.0;
    in.c_k = 1.0;
    return in;
}

} // namespace

TEST_SUITE("energy") {

TEST_CASE("zero function") {
    const Problem& pr = shared_problem();
    const std::vector<double> zero(pr.unknowns(), 0.0);
    const EnergyBreakdown e = pr.energy(zero);
    CHECK(e.kinetic == 0.0);
    CHECK(e.potential == 0.0);
    CHECK(e.source_p == 0.0);
    CHECK(e.source_k == 0.0);
    CHECK(e.total == 0.0);
    const GradientResult g = pr.gradient(zero);
    CHECK(g.nonsmooth_source);
    for (double v : g.values) CHECK(std::fabs(v) < 1e-12);
}

TEST_CASE("breakdown invariants and evenness") {
    const Problem& pr = shared_problem();
    Rng rng(21);
    for (int i = 0; i < 5; ++i) {
        std::vector<double> u = random_interior(pr.unknowns(), rng, 1.5);
        std::vector<double> neg(u);
        for (double& x : neg) x = -x;
        const EnergyBreakdown a = pr.energy(u), b = pr.energy(neg);
        CHECK(a.total == a.kinetic + a.potential - a.source_p - a.source_k);
        CHECK(a.kinetic >= 0.0);
        CHECK(a.potential >= 0.0);
        CHECK(a.source_p >= 0.0);
        CHECK(a.source_k >= 0.0);
        CHECK(std::fabs(a.kinetic - b.kinetic) <= 1e-12 * a.kinetic);
        CHECK(std::fabs(a.potential - b.potential) <= 1e-12 * a.potential);
        CHECK(std::fabs(a.source_p - b.source_p) <= 1e-12 * a.source_p);
        CHECK(std::fabs(a.source_k - b.source_k) <= 1e-12 * a.source_k);
        const auto ga = pr.gradient(u).values, gb = pr.gradient(neg).values;
        for (std::size_t j = 0; j < ga.size(); ++j) CHECK(std::fabs(ga[j] + gb[j]) < 1e-12);
    }
}

TEST_CASE("hat energy matches the oracle") {
    const ProblemConfig cfg = small_config();
    const Problem& pr = shared_problem();
    auto hat = [](double x) { return std::max(0.0, 1.0 - std::fabs(x - 0.5) / 0.5); };
    const GridFunction u = GridFunction::interpolate(pr.grid(), hat);
    const std::vector<double> inner = u.interior();
    const double got = pr.energy(inner).total;

    const FieldSet f = make_fields(cfg, cfg.omega);
    const oracle::Nodal nod = oracle::sample(0.0, 1.0, 2, hat);
    const double kin = oracle::kinetic(nod, f.q, f.s, true, effective_tail_radius(cfg),
                                       oracle::Weight::Energy);
    const oracle::Lower lower{&f.p, &f.k, &f.v, cfg.alpha, cfg.beta, cfg.lambda};
    const double want = kin + oracle::lower_order_energy(nod, lower);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("directional derivatives match central differences") {
    const Problem& pr = shared_problem();
    Rng rng(8);
    const double h = 1e-5;
    for (int i = 0; i < 20; ++i) {
        const std::vector<double> u = random_interior(pr.unknowns(), rng, 1.0);
        const std::vector<double> v = random_interior(pr.unknowns(), rng, 1.0);
        std::vector<double> plus(u), minus(u);
        for (std::size_t j = 0; j < u.size(); ++j) {
            plus[j] += h * v[j];
            minus[j] -= h * v[j];
        }
        const double fd = (pr.value(plus) - pr.value(minus)) / (2.0 * h);
        const double gv = dot(pr.gradient(u).values, v);
        CHECK(std::fabs(gv - fd) < 1e-4 * std::fabs(gv));
    }
}

TEST_CASE("odd functions have odd gradients") {
    // p and k must be mirror-symmetric too; the shipped ones are not
    ProblemConfig cfg = small_config();
    cfg.fields.p = "2.2 + 0.3*sin(abs(x - 0.5))";
    cfg.fields.k = "1.2";
    const Problem pr = make_problem(cfg);
    const Grid& g = pr.grid();
    const GridFunction u = GridFunction::interpolate(
        g, [](double x) { return std::sin(2.0 * 3.141592653589793 * x); });
    const auto grad = pr.gradient(u.interior()).values;
    double gmax = 0.0;
    for (double v : grad) gmax = std::max(gmax, std::fabs(v));
    const std::size_t m = grad.size();
    for (std::size_t i = 0; i < m; ++i) CHECK(std::fabs(grad[i] + grad[m - 1 - i]) < 1e-8 * gmax);
}

TEST_CASE("energy is affine in lambda") {
    const Problem& pr = shared_problem();
    Rng rng(13);
    const std::vector<double> u = random_interior(pr.unknowns(), rng, 1.0);
    const double mass = pr.potential_mass(u);
    REQUIRE(mass > 0.0);
    double prev = pr.with_lambda(1.0).value(u);
    for (double lam : {2.0, 10.0, 100.0}) {
        const double cur = pr.with_lambda(lam).value(u);
        CHECK(cur > prev);
        prev = cur;
    }
    const double slope = pr.with_lambda(3.0).value(u) - pr.with_lambda(2.0).value(u);
    CHECK(std::fabs(slope - 0.5 * mass) < 1e-9 * std::max(1.0, mass));
}

TEST_CASE("worked geometry example") {
    const GeometryConstants g = geometry_constants(worked_inputs());
    CHECK(g.A == doctest::Approx(1.0));
    CHECK(g.B == doctest::Approx(1.0));
    CHECK(g.D == doctest::Approx(0.5));
    CHECK(g.rho == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
    const double want_psi =
        0.5 * std::pow(10.0 / 3.0, 0.5) - 0.05 * std::pow(10.0 / 3.0, 1.5) - 0.1;
    CHECK(g.psi_at_rho == doctest::Approx(want_psi).epsilon(1e-12));
    CHECK(g.psi_at_rho == doctest::Approx(0.5086).epsilon(1e-3));
    CHECK(g.delta == doctest::Approx(3.095).epsilon(1e-3));
    CHECK(g.rho >= 1.0);

    double best = -1e300, arg = 0.0;
    const int n = 1'000'000;
    for (int i = 1; i <= n; ++i) {
        const double sigma = 100.0 * i / n;
        const double v = psi(g, sigma);
        if (v > best) {
            best = v;
            arg = sigma;
        }
    }
    // refine around the grid maximum by golden section
    double lo = arg - 1e-4, hi = arg + 1e-4;
    for (int i = 0; i < 100; ++i) {
        const double m1 = lo + (hi - lo) * 0.381966, m2 = hi - (hi - lo) * 0.381966;
        if (psi(g, m1) < psi(g, m2))
            lo = m1;
        else
            hi = m2;
    }
    CHECK(std::fabs(0.5 * (lo + hi) - g.rho) < 1e-6);
    CHECK(std::fabs(arg - g.rho) < 1e-4);
}

TEST_CASE("admissibility boundary") {
    GeometryInputs in = worked_inputs();
    const GeometryConstants base = evaluate_geometry(in);
    in.alpha = base.alpha_max;
    in.beta = 0.0;
    CHECK_NOTHROW(geometry_constants(in));
    in.alpha = 2.0 * base.alpha_max;
    try {
        geometry_constants(in);
        FAIL("expected Inadmissible");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Inadmissible);
    }
    in = worked_inputs();
    in.beta = 2.0 * base.beta_max;
    CHECK_THROWS_AS(geometry_constants(in), Error);
    CHECK_FALSE(evaluate_geometry(in).admissible);

    // strict product bound gives a positive psi maximum
    in = worked_inputs();
    const GeometryConstants g = evaluate_geometry(in);
    CHECK(g.product_value < g.product_bound);
    CHECK(g.psi_at_rho > 0.0);
}

TEST_CASE("escape point and its failure mode") {
    const Problem& pr = shared_problem();
    const std::vector<double> v0 = normalized_hat(pr, Interval{0.3, 0.7});
    CHECK(pr.norm_lambda(v0) == doctest::Approx(1.0).epsilon(1e-9));
    const double rho = 1.7;
    const std::vector<double> e = make_e_point(pr, v0, rho);
    CHECK(pr.norm_lambda(e) > rho);
    CHECK(pr.value(e) < 0.0);

    const ProblemConfig cfg = small_config();
    const FieldSet f = make_fields(cfg, cfg.omega);
    const oracle::Nodal nod = oracle::from_grid_function(pr.function(e));
    const double kin = oracle::kinetic(nod, f.q, f.s, true, effective_tail_radius(cfg),
                                       oracle::Weight::Energy);
    const oracle::Lower lower{&f.p, &f.k, &f.v, cfg.alpha, cfg.beta, cfg.lambda};
    CHECK(kin + oracle::lower_order_energy(nod, lower) < 0.0);

    try {
        make_e_point(pr.with_sources(0.0, cfg.beta), v0, rho);
        FAIL("expected EscapeFailure");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::EscapeFailure);
    }
}

TEST_CASE("energy is positive on the mountain-pass ring") {
    const Problem& pr = shared_problem();
    const GeometryConstants g = geometry_constants(GeometryInputs{
        pr.p().lower(), pr.p().upper(), pr.k().lower(), pr.k().upper(), pr.q().lower(),
        pr.q().upper(), pr.alpha(), pr.beta(), 0.76, 0.71});
    Rng rng(17);
    int below_delta = 0;
    for (int i = 0; i < 50; ++i) {
        std::vector<double> u = random_interior(pr.unknowns(), rng, 1.0);
        const double scale = g.rho / pr.norm_lambda(u);
        for (double& x : u) x *= scale;
        const double val = pr.value(u);
        CHECK(val > 0.0);
        below_delta += val < g.delta ? 1 : 0;
    }
    MESSAGE("ring samples below delta: " << below_delta);
}

}
