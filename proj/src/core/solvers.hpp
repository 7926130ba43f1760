#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "energy.hpp"
#include "spaces.hpp"

namespace varfrac {

struct SolverOptions {
    double tol_residual = 1e-6;
    int max_iters = 5000;
    int path_points = 41;
    std::uint64_t seed = 1;
    // Newton polishing starts once the residual has dropped by this factor.
    double newton_switch = 1e-2;
    int newton_max = 60;
    int gmres_restart = 40;
};

enum class Classification { Saddle, BallMinimizer, Deflated };
const char* to_string(Classification c);

struct HistoryEntry {
    double value = 0.0;
    double residual = 0.0;
    char phase = 'p';  // 'p' path, 'd' descent, 'n' Newton
};

struct SolverReport {
    std::vector<double> solution;  // interior nodal values
    double critical_value = 0.0;
    double residual_norm = 0.0;  // max |<I'(u), phi_i>|
    double norm_lambda = 0.0;
    int iterations = 0;
    int newton_iterations = 0;
    Classification classification = Classification::Saddle;
    std::vector<HistoryEntry> history;
    bool converged = false;
    bool nonsmooth_source = false;
    std::string diagnostic;
};

// Residual of a candidate: max-norm of the weak gradient.
double residual_norm(const Problem& problem, std::span<const double> u);

// Path-deformation mountain pass from 0 to e. Throws Error(PathCollapse) if
// the path maximum sits on an endpoint for 50 consecutive iterations. With
// `via`, the initial path is the broken line 0 -> via -> e.
SolverReport mountain_pass(const Problem& problem, std::span<const double> e,
                           const SolverOptions& options,
                           std::optional<std::span<const double>> via = std::nullopt);

// Projected descent in the closed ball |u|_lambda <= rho from tau w0, or from
// `start` when given. Returns converged = false with an EmptyNegativeCone
// diagnostic when no tau > 0 gives negative energy. Throws Error(BoundaryTrap)
// after 100 consecutive iterations on the sphere.
SolverReport ball_minimize(const Problem& problem, double rho, double tau0,
                           std::span<const double> w0, const SolverOptions& options,
                           std::optional<std::span<const double>> start = std::nullopt);

struct PrepareOptions {
    int dictionary_size = 40;
    double safety_factor = 1.5;
    std::uint64_t seed = 1;
};

// Everything solve_both needs besides the solver controls.
struct SolveContext {
    Interval omega0;
    EmbeddingEstimate c_p, c_k;
    GeometryConstants geometry;
    std::vector<double> w0;  // normalized hat on omega0, also used as v0
    double w0_k_modular = 0.0;
    double tau0 = 0.0;
    std::vector<double> e;
};

// Throws Error(Inadmissible) when alpha, beta violate the admissibility bounds.
SolveContext prepare_context(const Problem& problem, Interval omega0,
                             const PrepareOptions& options);

struct PairResult {
    SolverReport saddle;     // u1, critical value > 0
    SolverReport minimizer;  // u2, critical value < 0
    double distance = 0.0;   // L2 distance of u1 and u2
    bool distinct = false;
    bool ordered = false;  // I(u2) < 0 < I(u1)
};

struct WarmStart {
    std::vector<double> saddle;
    std::vector<double> minimizer;
};

PairResult solve_both(const Problem& problem, const SolveContext& context,
                      const SolverOptions& options, const WarmStart* warm = nullptr);

struct LimitResult {
    Problem problem;
    SolveContext context;
    PairResult pair;
};

// Two solutions of the potential-free problem posed on its own (smaller) grid.
LimitResult limit_solve(const Problem& omega0_problem, const PrepareOptions& prepare,
                        const SolverOptions& options);

struct SweepRecord {
    double lambda = 0.0;
    PairResult pair;
    double potential_mass1 = 0.0, potential_mass2 = 0.0;
    double distance1 = 0.0, distance2 = 0.0;  // to the limit solutions, on omega0
    bool ok = false;
    std::string status;
};

// L2 distance on `region` between u and the nearer of +-v.
double distance_up_to_sign(const GridFunction& u, const GridFunction& v, Interval region);

std::vector<SweepRecord> lambda_sweep(const Problem& problem, const SolveContext& context,
                                      std::span<const double> lambdas,
                                      const SolverOptions& options, const LimitResult* limit);

struct DeflationOptions {
    double distinct_tol = 1e-4;
    int max_unproductive = 20;
    int newton_max = 80;
};

// Distinct nontrivial critical points sorted by critical value. Throws
// Error(SearchExhausted) if fewer than `count` were found.
std::vector<SolverReport> deflated_search(const Problem& problem, int count,
                                          const SolverOptions& options,
                                          const DeflationOptions& deflation = {});

} // namespace varfrac
