#include <doctest.h>

#include <cmath>

#include "config.hpp"
#include "error.hpp"
#include "solvers.hpp"

using namespace varfrac;

namespace {

ProblemConfig small_config() {
    ProblemConfig cfg = load_config(VARFRAC_DEFAULT_CONFIG);
    cfg.grid = 64;
    cfg.quadrature.gauss_order = 4;
    return cfg;
}

struct Fixture {
    ProblemConfig cfg = small_config();
    Problem problem = make_problem(cfg);
    Interval omega0 = run_hypotheses(cfg).omega0;
    SolveContext context = prepare_context(problem, omega0, cfg.embedding);
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

const PairResult& pair() {
    static const PairResult p = solve_both(fixture().problem, fixture().context, fixture().cfg.solver);
    return p;
}

} // namespace

TEST_SUITE("solvers") {

TEST_CASE("residual of zero is zero") {
    const Problem& pr = fixture().problem;
    CHECK(residual_norm(pr, std::vector<double>(pr.unknowns(), 0.0)) < 1e-12);
}

TEST_CASE("solve_both finds an ordered distinct pair") {
    const Fixture& f = fixture();
    const PairResult& r = pair();
    INFO(r.saddle.diagnostic << " / " << r.minimizer.diagnostic);
    REQUIRE(r.saddle.converged);
    REQUIRE(r.minimizer.converged);
    CHECK(r.saddle.classification == Classification::Saddle);
    CHECK(r.minimizer.classification == Classification::BallMinimizer);
    CHECK(r.saddle.residual_norm < f.cfg.solver.tol_residual);
    CHECK(r.minimizer.residual_norm < f.cfg.solver.tol_residual);
    CHECK(residual_norm(f.problem, r.saddle.solution) < f.cfg.solver.tol_residual);
    CHECK(residual_norm(f.problem, r.minimizer.solution) < f.cfg.solver.tol_residual);
    CHECK(r.saddle.critical_value > 0.0);
    CHECK(r.minimizer.critical_value < 0.0);
    CHECK(r.minimizer.norm_lambda < f.context.geometry.rho);
    CHECK(r.ordered);
    CHECK(r.distinct);
    CHECK(r.distance > 1e-6);
    CHECK(f.problem.value(r.saddle.solution) == r.saddle.critical_value);
}

TEST_CASE("history monotonicity") {
    const PairResult& r = pair();
    double prev = INFINITY;
    for (const HistoryEntry& h : r.saddle.history) {
        if (h.phase != 'p') continue;
        CHECK(h.value <= prev);
        prev = h.value;
    }
    prev = INFINITY;
    for (const HistoryEntry& h : r.minimizer.history) {
        if (h.phase != 'd') continue;
        CHECK(h.value <= prev);
        prev = h.value;
    }
}

TEST_CASE("ball start has negative energy") {
    const Fixture& f = fixture();
    const double w0n = f.problem.norm_lambda(f.context.w0);
    const double tau = 0.5 * std::min(f.context.tau0, f.context.geometry.rho / w0n);
    std::vector<double> start(f.context.w0);
    for (double& x : start) x *= tau;
    CHECK(f.problem.value(start) < 0.0);
}

TEST_CASE("no negative start without the k source") {
    const Fixture& f = fixture();
    const Problem no_k = f.problem.with_sources(f.cfg.alpha, 0.0);
    const SolverReport r =
        ball_minimize(no_k, f.context.geometry.rho, f.context.tau0, f.context.w0, f.cfg.solver);
    CHECK_FALSE(r.converged);
    CHECK(r.diagnostic.find("EmptyNegativeCone") != std::string::npos);
}

TEST_CASE("inadmissible parameters refuse to start") {
    ProblemConfig cfg = small_config();
    cfg.alpha = 100.0;
    const Problem pr = make_problem(cfg);
    try {
        prepare_context(pr, fixture().omega0, cfg.embedding);
        FAIL("expected Inadmissible");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Inadmissible);
    }
}

TEST_CASE("repeated solves are bit-identical") {
    const Fixture& f = fixture();
    const PairResult again = solve_both(f.problem, f.context, f.cfg.solver);
    CHECK(again.saddle.solution == pair().saddle.solution);
    CHECK(again.minimizer.solution == pair().minimizer.solution);
    CHECK(again.saddle.critical_value == pair().saddle.critical_value);
    CHECK(again.saddle.iterations == pair().saddle.iterations);
}

TEST_CASE("single-lambda sweep agrees with solve_both") {
    const Fixture& f = fixture();
    const double lambdas[] = {1.0};
    const auto recs = lambda_sweep(f.problem, f.context, lambdas, f.cfg.solver, nullptr);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].ok);
    CHECK(recs[0].pair.saddle.critical_value ==
          doctest::Approx(pair().saddle.critical_value).epsilon(1e-6));
    CHECK(recs[0].pair.minimizer.critical_value ==
          doctest::Approx(pair().minimizer.critical_value).epsilon(1e-3));
    CHECK(recs[0].potential_mass1 >= 0.0);
    CHECK(recs[0].potential_mass2 >= 0.0);
}

TEST_CASE("distance up to sign") {
    const Grid g(Interval{0.0, 1.0}, 32);
    const GridFunction u = GridFunction::interpolate(g, [](double x) { return x * (1 - x); });
    CHECK(distance_up_to_sign(u, u.scaled(-1.0), Interval{0.0, 1.0}) == 0.0);
    CHECK(distance_up_to_sign(u, u, Interval{0.0, 1.0}) == 0.0);
    CHECK(distance_up_to_sign(u, GridFunction::zero(g), Interval{0.0, 1.0}) ==
          doctest::Approx(l2_norm(u)));
}

TEST_CASE("limit problem: two solutions, even, supported on omega0") {
    const Fixture& f = fixture();
    const Problem lp = make_limit_problem(f.cfg, f.omega0);
    CHECK_FALSE(lp.has_potential());
    CHECK(lp.grid().domain().lo == f.omega0.lo);
    CHECK(lp.grid().domain().hi == f.omega0.hi);
    const LimitResult lim = limit_solve(lp, f.cfg.embedding, f.cfg.solver);
    REQUIRE(lim.pair.saddle.converged);
    REQUIRE(lim.pair.minimizer.converged);
    CHECK(lim.pair.ordered);
    for (const SolverReport* r : {&lim.pair.saddle, &lim.pair.minimizer}) {
        std::vector<double> neg(r->solution);
        for (double& x : neg) x = -x;
        CHECK(lim.problem.value(neg) == r->critical_value);
        const GridFunction u = lim.problem.function(r->solution);
        CHECK(u(f.omega0.lo - 1e-3) == 0.0);
        CHECK(u(f.omega0.hi + 1e-3) == 0.0);
    }
}

TEST_CASE("deflated search returns sorted distinct solutions") {
    const Fixture& f = fixture();
    const Problem lp = make_limit_problem(f.cfg, f.omega0);
    const auto found = deflated_search(lp, 3, f.cfg.solver);
    REQUIRE(found.size() >= 3);
    for (std::size_t i = 0; i < found.size(); ++i) {
        CHECK(found[i].converged);
        CHECK(found[i].classification == Classification::Deflated);
        std::vector<double> neg(found[i].solution);
        for (double& x : neg) x = -x;
        CHECK(lp.value(neg) == found[i].critical_value);
        if (i > 0) CHECK(found[i].critical_value > found[i - 1].critical_value);
        for (std::size_t j = 0; j < i; ++j) {
            CHECK(distance_up_to_sign(lp.function(found[i].solution), lp.function(found[j].solution),
                                      lp.grid().domain()) > 1e-4);
        }
    }
}

}
