#pragma once

#include <string>
#include <vector>

#include "expr.hpp"
#include "grid.hpp"

namespace varfrac {

struct Bounds {
    double min = 0.0;
    double max = 0.0;
    // sample locations of the extrema; one or two coordinates per arity
    std::vector<double> argmin;
    std::vector<double> argmax;
    int resolution = 0;
};

// Min/max of `e` on a uniform grid of `resolution` points per axis over
// domain (arity 1) or domain x domain (arity 2). An evaluation error aborts
// with the offending point in the message.
Bounds infer_bounds(const Expr& e, int arity, Interval domain, int resolution);

/**
 * Expression-backed exponent with grid-scan estimates of its ess inf / ess sup.
 * The bounds are estimates at the recorded resolution, not certificates.
 */
class ExponentField {
public:
    ExponentField() = default;
    ExponentField(std::string name, Expr expr, int arity, Interval domain, int resolution);

    static ExponentField constant(std::string name, double value, int arity, Interval domain);

    double operator()(double x) const { return expr_.eval(x); }
    double operator()(double x, double y) const { return expr_.eval(x, y); }

    // Two-variable evaluation with (x, y) projected onto the closed domain square.
    double projected(double x, double y) const;

    const std::string& name() const { return name_; }
    const Expr& expr() const { return expr_; }
    int arity() const { return arity_; }
    const Interval& domain() const { return domain_; }
    const Bounds& bounds() const { return bounds_; }
    double lower() const { return bounds_.min; }
    double upper() const { return bounds_.max; }
    bool is_constant() const { return bounds_.min == bounds_.max; }

private:
    std::string name_;
    Expr expr_;
    int arity_ = 1;
    Interval domain_;
    Bounds bounds_;
};

struct ZeroSet {
    std::vector<Interval> intervals;  // maximal grid runs with V <= zeta_tol
    Interval omega0;                  // middle third of the longest run
};

class Potential {
public:
    Potential() = default;
    Potential(Expr expr, Interval domain);

    double operator()(double x) const { return expr_.eval(x); }
    const Expr& expr() const { return expr_; }
    const Interval& domain() const { return domain_; }

private:
    Expr expr_;
    Interval domain_;
};

// Throws Error(EmptyZeroSet) when no sample satisfies V <= zeta_tol.
ZeroSet extract_zero_set(const Potential& v, double zeta_tol, int resolution);

struct HypothesisEntry {
    std::string name;
    bool passed = false;
    std::vector<double> witness;
    std::string detail;
    double value = 0.0;  // the estimated quantity when one applies (e.g. M for P2)
};

struct HypothesisOptions {
    int resolution_1d = 1001;
    int resolution_2d = 201;
    int resolution_shift = 41;
    double symmetry_tol = 1e-12;
    double holder_stability = 0.05;
    double zeta_tol = 1e-12;
};

struct HypothesisReport {
    std::vector<HypothesisEntry> entries;
    Bounds p, q, s, k, v;
    Bounds s_omega;  // s restricted to Omega x Omega
    std::vector<Interval> zero_set;
    Interval omega0;
    bool has_zero_set = false;
    int n = 1;
    HypothesisOptions options;

    bool all_passed() const;
    const HypothesisEntry* find(const std::string& name) const;
};

HypothesisReport check_hypotheses(const ExponentField& p, const ExponentField& q,
                                  const ExponentField& s, const ExponentField& k,
                                  const Potential& v, int n,
                                  const HypothesisOptions& options = {});

} // namespace varfrac
