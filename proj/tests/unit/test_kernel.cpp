#include <doctest.h>

#include <cmath>
#include <numbers>

#include "error.hpp"
#include "kernel.hpp"
#include "oracle.hpp"
#include "random.hpp"

using namespace varfrac;

namespace {

const Interval unit{0.0, 1.0};
const Interval s_box{-9.5, 10.5};

double hat(double x) { return std::max(0.0, 1.0 - std::fabs(x - 0.5) / 0.5); }

ExponentField q_const(double v) { return ExponentField::constant("q", v, 2, unit); }
ExponentField s_const(double v) { return ExponentField::constant("s", v, 2, s_box); }
ExponentField q_default() {
    return ExponentField("q", Expr::parse("1.5 + 0.05*cos(x - y)"), 2, unit, 101);
}

std::vector<double> nodal_of(const Grid& g, double (*f)(double)) {
    const GridFunction u = GridFunction::interpolate(g, f);
    return {u.values().begin(), u.values().end()};
}

} // namespace

TEST_SUITE("kernel") {

TEST_CASE("trivial modulars") {
    const Grid g(unit, 32);
    const KernelQuadrature k(g, q_default(), s_const(0.35));
    const std::vector<double> zero(g.nodes(), 0.0);
    CHECK(k.modular(zero, Region::Omega) == 0.0);
    CHECK(k.modular(zero, Region::FullPlane) == 0.0);
    CHECK(k.seminorm(zero, Region::Omega) == 0.0);
    const std::vector<double> c(g.nodes(), 1.7);
    CHECK(k.modular(c, Region::Omega) == 0.0);
    CHECK(k.seminorm(c, Region::Omega) == 0.0);
    CHECK(k.modular(c, Region::FullPlane) > 0.0);
}

TEST_CASE("hat modular matches the oracle") {
    const Grid g(unit, 64);
    const ExponentField q = q_const(2.0), s = s_const(0.35);
    const KernelQuadrature k(g, q, s);
    const double got = k.modular(nodal_of(g, hat), Region::Omega);
    const double want =
        oracle::kinetic(oracle::sample(0.0, 1.0, 2, hat), q, s, false, 0.0, oracle::Weight::Modular);
    CHECK(got == doctest::Approx(want).epsilon(1e-3));
}

TEST_CASE("seminorm identities") {
    const Grid g(unit, 64);
    const ExponentField s = s_const(0.35);
    const KernelQuadrature k2(g, q_const(2.0), s);
    const auto u = nodal_of(g, hat);
    CHECK(k2.seminorm(u, Region::Omega) ==
          doctest::Approx(std::sqrt(k2.modular(u, Region::Omega))).epsilon(1e-9));

    const ExponentField q = q_default();
    const KernelQuadrature kq(g, q, s);
    const oracle::Nodal base = oracle::sample(0.0, 1.0, 2, hat);
    auto at = [&](double lam) {
        oracle::Nodal v = base;
        for (double& x : v.u) x /= lam;
        return oracle::kinetic(v, q, s, false, 0.0, oracle::Weight::Modular);
    };
    double lo = 1e-3, hi = 1e3;
    for (int i = 0; i < 60; ++i) {
        const double mid = std::sqrt(lo * hi);
        (at(mid) > 1.0 ? lo : hi) = mid;
    }
    const double want = std::sqrt(lo * hi);
    CHECK(kq.seminorm(u, Region::Omega) == doctest::Approx(want).epsilon(1e-3));
}

TEST_CASE("swapping the kernel arguments changes nothing") {
    const Grid g(unit, 64);
    const ExponentField q = q_default(), s = s_const(0.35);
    const KernelQuadrature a(g, q, s), b(g, q, s, {}, true);
    Rng rng(2);
    std::vector<double> u(g.nodes());
    for (double& x : u) x = rng.uniform(-1.0, 1.0);
    u.front() = u.back() = 0.0;
    for (Region r : {Region::Omega, Region::FullPlane}) {
        const double ma = a.modular(u, r), mb = b.modular(u, r);
        CHECK(std::fabs(ma - mb) < 1e-12 * ma);
    }
}

TEST_CASE("scaling law at constant exponent") {
    const Grid g(unit, 64);
    const KernelQuadrature k(g, q_const(1.6), s_const(0.35));
    const auto u = nodal_of(g, hat);
    for (Region r : {Region::Omega, Region::FullPlane}) {
        const double m = k.modular(u, r);
        for (double c : {0.3, 2.0, -5.0}) {
            std::vector<double> cu(u);
            for (double& x : cu) x *= c;
            CHECK(std::fabs(k.modular(cu, r) - std::pow(std::fabs(c), 1.6) * m) <
                  1e-9 * std::pow(std::fabs(c), 1.6) * m);
        }
    }
}

TEST_CASE("refinement converges toward a fine oracle") {
    auto f = [](double x) { return std::sin(std::numbers::pi * x) * (1.0 + 0.5 * x); };
    const ExponentField q = q_default(), s = s_const(0.35);
    const double ref = oracle::kinetic(oracle::sample(0.0, 1.0, 512, f), q, s, false, 0.0,
                                       oracle::Weight::Modular);
    std::vector<double> err;
    for (std::size_t n : {32u, 64u, 128u}) {
        const Grid g(unit, n);
        const GridFunction u = GridFunction::interpolate(g, f);
        err.push_back(std::fabs(KernelQuadrature(g, q, s).modular(u.values(), Region::Omega) - ref));
    }
    CHECK(std::log2(err[0] / err[1]) >= 1.0);
    CHECK(std::log2(err[1] / err[2]) >= 1.0);
}

TEST_CASE("tail: larger radius, larger modular, smaller remainder") {
    const Grid g(unit, 32);
    const ExponentField q = q_const(2.0), s = s_const(0.35);
    const auto u = nodal_of(g, hat);
    double prev_m = 0.0, prev_r = 0.0, prev_R = 0.0;
    for (double R : {2.0, 5.0, 20.0}) {
        QuadratureOptions o;
        o.tail_radius = R;
        const KernelQuadrature k(g, q, s, o);
        CHECK(k.tail_radius() == R);
        const double m = k.modular(u, Region::FullPlane);
        const double rem = k.tail_bound(u).modular;
        if (prev_R > 0.0) {
            CHECK(m >= prev_m);
            CHECK(rem < prev_r);
            // per x the ratio is ((R - |x - c|) / (R' - |x - c|))^(-q s), |x - c| <= 1/2
            const double lo = std::pow((prev_R - 0.5) / (R - 0.5), 0.7);
            const double hi = std::pow(prev_R / R, 0.7);
            CHECK(rem / prev_r >= lo * (1.0 - 1e-9));
            CHECK(rem / prev_r <= hi * (1.0 + 1e-9));
        }
        prev_m = m;
        prev_r = rem;
        prev_R = R;
    }
}

TEST_CASE("weak form: zero, odd symmetry, finite differences") {
    const Grid g(unit, 32);
    const KernelQuadrature k(g, q_default(), s_const(0.35));
    std::vector<double> grad(g.nodes());
    const std::vector<double> zero(g.nodes(), 0.0);
    k.energy_and_gradient(zero, grad);
    for (double v : grad) CHECK(v == 0.0);

    auto odd = [](double x) { return std::sin(2.0 * std::numbers::pi * x); };
    const GridFunction u = GridFunction::interpolate(g, odd);
    k.energy_and_gradient(u.values(), grad);
    double gmax = 0.0;
    for (double v : grad) gmax = std::max(gmax, std::fabs(v));
    for (std::size_t i = 1; i < g.cells(); ++i)
        CHECK(std::fabs(grad[i] + grad[g.cells() - i]) < 1e-8 * gmax);

    Rng rng(4);
    std::vector<double> w(g.nodes());
    for (double& x : w) x = rng.uniform(-1.0, 1.0);
    w.front() = w.back() = 0.0;
    k.energy_and_gradient(w, grad);
    const double h = 1e-5;
    for (std::size_t i = 1; i < g.cells(); i += 5) {
        std::vector<double> plus(w), minus(w);
        plus[i] += h;
        minus[i] -= h;
        const double fd = (k.energy(plus) - k.energy(minus)) / (2.0 * h);
        CHECK(std::fabs(fd - grad[i]) < 1e-4 * std::fabs(grad[i]));
    }
}

TEST_CASE("node budget overflow") {
    QuadratureOptions o;
    o.node_budget = 1000;
    try {
        KernelQuadrature(Grid(unit, 64), q_const(2.0), s_const(0.35), o);
        FAIL("expected GradingOverflow");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GradingOverflow);
    }
    CHECK(KernelQuadrature::estimate_node_count(64, {}) > 1000);
}

}
