#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "fields.hpp"

using namespace varfrac;

namespace {

const Interval unit{0.0, 1.0};

struct Defaults {
    ExponentField p{"p", Expr::parse("2.2 + 0.3*sin(x)"), 1, unit, 1001};
    ExponentField q{"q", Expr::parse("1.5 + 0.05*cos(x - y)"), 2, unit, 201};
    ExponentField s{"s", Expr::parse("0.35"), 2, Interval{-9.5, 10.5}, 201};
    ExponentField k{"k", Expr::parse("1.1 + 0.1*x"), 1, unit, 1001};
    Potential v{Expr::parse("max(0, abs(x - 0.5) - 0.2)^2"), unit};
};

const HypothesisEntry& entry(const HypothesisReport& r, const char* name) {
    const HypothesisEntry* e = r.find(name);
    REQUIRE(e != nullptr);
    return *e;
}

} // namespace

TEST_SUITE("fields") {

TEST_CASE("infer_bounds examples") {
    const Bounds p = infer_bounds(Expr::parse("2.2+0.3*sin(x)"), 1, unit, 1001);
    CHECK(p.min == doctest::Approx(2.2).epsilon(1e-15));
    CHECK(p.max == doctest::Approx(2.2 + 0.3 * std::sin(1.0)).epsilon(1e-15));
    CHECK(p.resolution == 1001);

    const Bounds c = infer_bounds(Expr::parse("1.5"), 1, unit, 17);
    CHECK(c.min == 1.5);
    CHECK(c.max == 1.5);

    const Bounds q = infer_bounds(Expr::parse("1.5+0.1*cos(x-y)"), 2, unit, 101);
    CHECK(q.min == doctest::Approx(1.5 + 0.1 * std::cos(1.0)).epsilon(1e-14));
    CHECK(q.max == doctest::Approx(1.6).epsilon(1e-15));
    CHECK(q.argmax.size() == 2);
}

TEST_CASE("infer_bounds is monotone under nested refinement") {
    for (int arity : {1, 2}) {
        const Expr e = Expr::parse(arity == 1 ? "1.7 + 0.2*sin(7*x)" : "1.7 + 0.2*sin(7*x) * cos(3*y)");
        int r = 5;
        Bounds prev = infer_bounds(e, arity, unit, r);
        for (int level = 0; level < 5; ++level) {
            r = 2 * r - 1;
            const Bounds next = infer_bounds(e, arity, unit, r);
            CHECK(next.min <= prev.min);
            CHECK(next.max >= prev.max);
            CHECK(next.min <= next.max);
            prev = next;
        }
    }
}

TEST_CASE("infer_bounds reports the offending point") {
    try {
        infer_bounds(Expr::parse("1/(x - 0.5)"), 1, unit, 3);
        FAIL("expected an evaluation error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Evaluation);
        CHECK(std::string(e.what()).find("0.5") != std::string::npos);
    }
    CHECK_THROWS_AS(infer_bounds(Expr::parse("x"), 1, unit, 1), Error);
}

TEST_CASE("fields reject the wrong arity") {
    CHECK_THROWS_AS(ExponentField("p", Expr::parse("x + y"), 1, unit, 11), Error);
    CHECK_THROWS_AS(Potential(Expr::parse("y"), unit), Error);
}

TEST_CASE("projection clamps both arguments onto the domain square") {
    const ExponentField q("q", Expr::parse("x + 10*y"), 2, unit, 11);
    CHECK(q.projected(-3.0, 2.0) == doctest::Approx(10.0));
    CHECK(q.projected(0.25, 0.5) == doctest::Approx(5.25));
}

TEST_CASE("default fields pass every hypothesis") {
    const Defaults d;
    const HypothesisReport r = check_hypotheses(d.p, d.q, d.s, d.k, d.v, 1);
    for (const HypothesisEntry& e : r.entries) {
        INFO(e.name << ": " << e.detail);
        CHECK(e.passed);
        CHECK(e.witness.empty());
    }
    CHECK(r.all_passed());
    CHECK(r.entries.size() == 13);
    CHECK(entry(r, "DIM").value == doctest::Approx(0.5425).epsilon(1e-9));
    // arithmetic consequences used downstream
    CHECK(r.q.max < r.p.min);
    CHECK(r.p.min > 2.0);
    CHECK(r.k.max < 2.0);
    CHECK(r.q.max * r.s.max < 1.0);
}

TEST_CASE("Q3 fails for a field of x alone, with a witness") {
    const Defaults d;
    const ExponentField q("q", Expr::parse("1.5 + 0.1*x"), 2, unit, 101);
    const HypothesisReport r = check_hypotheses(d.p, q, d.s, d.k, d.v, 1);
    const HypothesisEntry& e = entry(r, "Q3");
    CHECK_FALSE(e.passed);
    REQUIRE(e.witness.size() == 3);
    const double x = e.witness[0], y = e.witness[1], z = e.witness[2];
    CHECK(std::fabs(q(x, y) - q(x - z, y - z)) >= 1e-12);
    CHECK(entry(r, "Q1").passed == false);
}

TEST_CASE("P2 fails for a jump in p") {
    const Defaults d;
    const ExponentField p("p", Expr::parse("2.2 + 0.4*max(0, min(1, (x-0.5)*1e6))"), 1, unit, 1001);
    const HypothesisReport r = check_hypotheses(p, d.q, d.s, d.k, d.v, 1);
    const HypothesisEntry& e = entry(r, "P2");
    CHECK_FALSE(e.passed);
    CHECK(e.witness.size() == 2);
}

TEST_CASE("failing hypotheses always carry witnesses") {
    const ExponentField p("p", Expr::parse("1.8 + 0.1*x"), 1, unit, 101);
    const ExponentField q("q", Expr::parse("2.5 + x*y"), 2, unit, 41);
    const ExponentField s("s", Expr::parse("0.9 + 0.05*x"), 2, unit, 41);
    const ExponentField k("k", Expr::parse("2.5"), 1, unit, 101);
    const Potential v(Expr::parse("1 - x"), unit);
    const HypothesisReport r = check_hypotheses(p, q, s, k, v, 1);
    CHECK_FALSE(r.all_passed());
    for (const HypothesisEntry& e : r.entries) {
        if (!e.passed) {
            INFO(e.name);
            CHECK_FALSE(e.witness.empty());
        }
    }
    CHECK_FALSE(entry(r, "S1").passed);
    CHECK_FALSE(entry(r, "K1").passed);
    CHECK_FALSE(entry(r, "DIM").passed);
}

TEST_CASE("zero set examples") {
    const Potential v(Expr::parse("max(0,abs(x-0.5)-0.2)^2"), unit);
    const ZeroSet z = extract_zero_set(v, 1e-12, 1001);
    REQUIRE(z.intervals.size() == 1);
    CHECK(z.intervals[0].lo == doctest::Approx(0.3).epsilon(1e-3));
    CHECK(z.intervals[0].hi == doctest::Approx(0.7).epsilon(1e-3));
    CHECK(z.omega0.lo == doctest::Approx(0.4333).epsilon(1e-3));
    CHECK(z.omega0.hi == doctest::Approx(0.5667).epsilon(1e-3));
    CHECK(z.omega0.lo > z.intervals[0].lo);
    CHECK(z.omega0.hi < z.intervals[0].hi);

    try {
        extract_zero_set(Potential(Expr::parse("1"), unit), 1e-12, 101);
        FAIL("expected EmptyZeroSet");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyZeroSet);
    }

    const ZeroSet all = extract_zero_set(Potential(Expr::parse("0"), unit), 1e-12, 101);
    REQUIRE(all.intervals.size() == 1);
    CHECK(all.intervals[0].lo == 0.0);
    CHECK(all.intervals[0].hi == 1.0);
    const Defaults d;
    const HypothesisReport r = check_hypotheses(d.p, d.q, d.s, d.k, Potential(Expr::parse("0"), unit), 1);
    CHECK_FALSE(entry(r, "V1").passed);
}

TEST_CASE("symmetric expressions pass symmetry exactly") {
    const Defaults d;
    const ExponentField q("q", Expr::parse("1.5 + 0.05*cos(x - y) + 0.01*(x + y)"), 2, unit, 101);
    const HypothesisReport r = check_hypotheses(d.p, q, d.s, d.k, d.v, 1);
    CHECK(entry(r, "Q1").passed);
}

}
