#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "energy.hpp"
#include "fields.hpp"
#include "solvers.hpp"

namespace varfrac {

struct FieldSources {
    std::string p, q, s, k, v;
};

/**
 * A full problem instance as read from JSON. Expressions are kept as text and
 * parsed (and arity-checked) by validate().
 */
struct ProblemConfig {
    Interval omega{0.0, 1.0};
    int n = 1;
    FieldSources fields;
    double alpha = 1.0;
    double beta = 0.2;
    double lambda = 1.0;
    int grid = 128;
    QuadratureOptions quadrature;
    SolverOptions solver;
    PrepareOptions embedding;
    HypothesisOptions hypotheses;
    std::string output = "out";

    // Throws Error(Validation) naming the offending field.
    void validate() const;
};

// Throws Error(Io), Error(Parse) with the JSON location, or Error(Validation).
ProblemConfig load_config(const std::filesystem::path& path);
ProblemConfig parse_config(const std::string& text);

// Tail radius actually used: the configured one or 10 |Omega|.
double effective_tail_radius(const ProblemConfig& cfg);

struct FieldSet {
    ExponentField p, q, s, k;
    Potential v;
};

// Fields on `domain`; s lives on the square enclosing the truncated exterior.
FieldSet make_fields(const ProblemConfig& cfg, Interval domain);

Problem make_problem(const ProblemConfig& cfg);

// The potential-free problem on its own grid over omega0, same cell count.
Problem make_limit_problem(const ProblemConfig& cfg, Interval omega0);

HypothesisReport run_hypotheses(const ProblemConfig& cfg);

} // namespace varfrac
