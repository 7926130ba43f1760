#include "solvers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "error.hpp"
#include "random.hpp"

namespace varfrac {

namespace {

using Vec = Eigen::VectorXd;

constexpr double kArmijo = 1e-4;

Vec to_vec(std::span<const double> v) { return Eigen::Map<const Vec>(v.data(), v.size()); }
std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

// Fixed SPD metric (q = 2 kinetic form plus potential mass) for preconditioning.
class Metric {
public:
    explicit Metric(const Problem& problem) {
        const std::size_t n = problem.unknowns();
        const std::vector<double> a = problem.metric_matrix();
        Eigen::MatrixXd m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                            Eigen::RowMajor>>(a.data(), n, n);
        llt_.compute(m);
        a_ = std::move(m);
        if (llt_.info() != Eigen::Success) {
            throw Error(ErrorCode::Evaluation, "preconditioner matrix is not positive definite");
        }
    }
    Vec apply(const Vec& g) const { return llt_.solve(g); }
    double dot(const Vec& a, const Vec& b) const { return a.dot(a_ * b); }
    double norm(const Vec& a) const { return std::sqrt(std::max(0.0, dot(a, a))); }

private:
    Eigen::MatrixXd a_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

struct Point {
    Vec u;
    double value = 0.0;
    Vec grad;
    double residual = 0.0;
    bool nonsmooth = false;
};

Point evaluate(const Problem& problem, Vec u) {
    Point p;
    p.u = std::move(u);
    GradientResult g = problem.gradient(std::span<const double>(p.u.data(), p.u.size()));
    p.value = g.energy;
    p.grad = to_vec(g.values);
    p.residual = p.grad.cwiseAbs().maxCoeff();
    p.nonsmooth = g.nonsmooth_source;
    return p;
}

double value_of(const Problem& problem, const Vec& u) {
    return problem.value(std::span<const double>(u.data(), u.size()));
}

Vec grad_of(const Problem& problem, const Vec& u) {
    return to_vec(problem.gradient(std::span<const double>(u.data(), u.size())).values);
}

// Right-preconditioned restarted GMRES for op(x) = b; op already includes the
// preconditioner, so the returned y must be mapped back by the caller.
Vec gmres(const std::function<Vec(const Vec&)>& op, const Vec& b, int restart, int cycles,
          double rtol) {
    const Eigen::Index n = b.size();
    Vec x = Vec::Zero(n);
    const double bnorm = b.norm();
    if (bnorm == 0.0) return x;
    for (int cycle = 0; cycle < cycles; ++cycle) {
        Vec r = cycle == 0 ? Vec(b) : Vec(b - op(x));
        double beta = r.norm();
        if (beta <= rtol * bnorm) break;
        const int m = static_cast<int>(std::min<Eigen::Index>(restart, n));
        Eigen::MatrixXd v(n, m + 1);
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
        Vec cs = Vec::Zero(m), sn = Vec::Zero(m), s = Vec::Zero(m + 1);
        v.col(0) = r / beta;
        s(0) = beta;
        int k = 0;
        for (; k < m; ++k) {
            Vec w = op(v.col(k));
            for (int i = 0; i <= k; ++i) {
                h(i, k) = w.dot(v.col(i));
                w -= h(i, k) * v.col(i);
            }
            h(k + 1, k) = w.norm();
            if (h(k + 1, k) > 0.0) v.col(k + 1) = w / h(k + 1, k);
            for (int i = 0; i < k; ++i) {
                const double t = cs(i) * h(i, k) + sn(i) * h(i + 1, k);
                h(i + 1, k) = -sn(i) * h(i, k) + cs(i) * h(i + 1, k);
                h(i, k) = t;
            }
            const double den = std::hypot(h(k, k), h(k + 1, k));
            cs(k) = den == 0.0 ? 1.0 : h(k, k) / den;
            sn(k) = den == 0.0 ? 0.0 : h(k + 1, k) / den;
            h(k, k) = den;
            h(k + 1, k) = 0.0;
            s(k + 1) = -sn(k) * s(k);
            s(k) = cs(k) * s(k);
            if (std::fabs(s(k + 1)) <= rtol * bnorm || h(k, k) == 0.0) {
                ++k;
                break;
            }
        }
        Vec y = Vec::Zero(k);
        for (int i = k - 1; i >= 0; --i) {
            double t = s(i);
            for (int j = i + 1; j < k; ++j) t -= h(i, j) * y(j);
            y(i) = h(i, i) == 0.0 ? 0.0 : t / h(i, i);
        }
        x += v.leftCols(k) * y;
        if (std::fabs(s(k)) <= rtol * bnorm) break;
    }
    return x;
}

// Newton direction for grad = 0 at p, with finite-difference Jacobian products.
Vec newton_direction(const Problem& problem, const Metric& metric, const Point& p,
                     const SolverOptions& options) {
    const double unorm = p.u.norm();
    auto op = [&](const Vec& y) -> Vec {
        const Vec x = metric.apply(y);
        const double xn = x.norm();
        if (xn == 0.0) return Vec::Zero(x.size());
        const double eps = 1.5e-8 * (1.0 + unorm) / xn;
        return (grad_of(problem, p.u + eps * x) - p.grad) / eps;
    };
    const double rtol = std::clamp(p.grad.norm(), 1e-6, 1e-2);
    const Vec y = gmres(op, -p.grad, options.gmres_restart, 3, rtol);
    return metric.apply(y);
}

struct NewtonHooks {
    // Extra acceptance test for a trial point (e.g. stays in the ball).
    std::function<bool(const Point& from, const Point& to)> accept;
    // Scale applied to the undeflated Newton direction (deflation); merit multiplier.
    std::function<double(const Vec& u, const Vec& d)> step_scale;
    std::function<double(const Vec& u)> merit_factor;
};

// Damped Newton on the weak gradient. Returns true when the residual drops
// below the tolerance. `p` is updated to the last accepted iterate.
bool newton_polish(const Problem& problem, const Metric& metric, Point& p,
                   const SolverOptions& options, int max_iters, SolverReport& report,
                   const NewtonHooks& hooks = {}) {
    auto merit = [&](const Point& q) {
        const double f = hooks.merit_factor ? hooks.merit_factor(q.u) : 1.0;
        return f * q.grad.norm();
    };
    for (int it = 0; it < max_iters; ++it) {
        if (p.residual < options.tol_residual) return true;
        Vec d = newton_direction(problem, metric, p, options);
        if (hooks.step_scale) d *= hooks.step_scale(p.u, d);
        if (!d.allFinite()) return false;
        const double m0 = merit(p);
        bool accepted = false;
        double t = 1.0;
        for (int k = 0; k < 30; ++k, t *= 0.5) {
            Point trial = evaluate(problem, p.u + t * d);
            if (!std::isfinite(trial.value)) continue;
            if (merit(trial) >= (1.0 - kArmijo * t) * m0) continue;
            if (hooks.accept && !hooks.accept(p, trial)) continue;
            p = std::move(trial);
            accepted = true;
            break;
        }
        ++report.newton_iterations;
        report.history.push_back({p.value, p.residual, 'n'});
        if (!accepted) return false;
    }
    return p.residual < options.tol_residual;
}

void finish(SolverReport& report, const Problem& problem, const Point& p) {
    report.solution = to_std(p.u);
    report.critical_value = p.value;
    report.residual_norm = p.residual;
    report.nonsmooth_source = p.nonsmooth;
    report.norm_lambda = problem.norm_lambda(report.solution);
}

} // namespace

const char* to_string(Classification c) {
    switch (c) {
        case Classification::Saddle: return "saddle";
        case Classification::BallMinimizer: return "ball_minimizer";
        case Classification::Deflated: return "deflated";
    }
    return "unknown";
}

double residual_norm(const Problem& problem, std::span<const double> u) {
    return max_abs(problem.gradient(u).values);
}

SolverReport mountain_pass(const Problem& problem, std::span<const double> e,
                           const SolverOptions& options,
                           std::optional<std::span<const double>> via) {
    const int m = std::max(options.path_points, 3) - 1;
    const Vec end = to_vec(e);
    if (!(value_of(problem, end) < 0.0)) {
        throw Error(ErrorCode::Argument, "mountain pass end point must have negative energy");
    }
    std::vector<Vec> path(m + 1);
    if (via) {
        const Vec mid = to_vec(*via);
        const int half = m / 2;
        for (int j = 0; j <= m; ++j) {
            if (j <= half) {
                path[j] = (double(j) / half) * mid;
            } else {
                path[j] = mid + (double(j - half) / (m - half)) * (end - mid);
            }
        }
    } else {
        for (int j = 0; j <= m; ++j) path[j] = (double(j) / m) * end;
    }
    std::vector<double> energy(m + 1);
    for (int j = 0; j <= m; ++j) energy[j] = value_of(problem, path[j]);

    const Metric metric(problem);
    SolverReport report;
    report.classification = Classification::Saddle;
    double step = 1.0;
    int endpoint_streak = 0;
    double first_residual = -1.0;
    double switch_factor = options.newton_switch;
    std::optional<Point> done;

    for (int it = 0; it < options.max_iters && !done; ++it) {
        report.iterations = it + 1;
        const int jmax = static_cast<int>(std::max_element(energy.begin(), energy.end()) -
                                          energy.begin());
        if (jmax == 0 || jmax == m) {
            report.history.push_back({energy[jmax], 0.0, 'p'});
            if (++endpoint_streak >= 50) {
                throw Error(ErrorCode::PathCollapse,
                            "path maximum stayed on an endpoint for 50 iterations");
            }
            continue;
        }
        endpoint_streak = 0;
        Point p = evaluate(problem, path[jmax]);
        report.history.push_back({p.value, p.residual, 'p'});
        if (p.residual < options.tol_residual) {
            done = p;
            break;
        }
        if (first_residual < 0.0) first_residual = p.residual;

        const bool try_newton =
            p.residual < switch_factor * first_residual || (it + 1) % 250 == 0;
        if (try_newton) {
            Point q = p;
            NewtonHooks hooks;
            hooks.accept = [](const Point&, const Point& to) { return to.value > 0.0; };
            if (newton_polish(problem, metric, q, options, options.newton_max, report, hooks) &&
                q.value > 0.0) {
                done = q;
                break;
            }
            switch_factor *= 0.1;
        }

        // Descend across the path only, with steps short against the local spacing.
        const Vec chord = path[jmax + 1] - path[jmax - 1];
        const double chord_norm = metric.norm(chord);
        Vec d = -metric.apply(p.grad);
        if (chord_norm > 0.0) {
            const Vec tangent = chord / chord_norm;
            d -= metric.dot(d, tangent) * tangent;
        }
        const double slope = p.grad.dot(d);
        const double dn = metric.norm(d);
        const double cap = dn > 0.0 ? 0.5 * chord_norm / dn : 0.0;
        double t = std::min(2.0 * step, cap);
        bool accepted = false;
        double trial_value = 0.0;
        Vec trial;
        for (int k = 0; k < 60 && slope < 0.0; ++k, t *= 0.5) {
            trial = p.u + t * d;
            trial_value = value_of(problem, trial);
            if (trial_value <= p.value + kArmijo * t * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            report.diagnostic = "line search failed on the path maximum";
            break;
        }
        step = t;
        const double old_max = energy[jmax];
        path[jmax] = std::move(trial);
        energy[jmax] = trial_value;
        for (int j : {jmax - 1, jmax + 1}) {
            if (j < 1 || j > m - 1) continue;
            Vec c = 0.5 * (path[j - 1] + path[j + 1]);
            const double vc = value_of(problem, c);
            if (vc <= old_max) {
                path[j] = std::move(c);
                energy[j] = vc;
            }
        }
    }

    if (done) {
        finish(report, problem, *done);
        report.converged = done->residual < options.tol_residual;
        if (!(report.critical_value > 0.0)) {
            report.converged = false;
            report.diagnostic = "saddle candidate has non-positive energy";
        }
    } else {
        const int jmax = static_cast<int>(std::max_element(energy.begin(), energy.end()) -
                                          energy.begin());
        finish(report, problem, evaluate(problem, path[jmax]));
        report.converged = false;
        if (report.diagnostic.empty()) report.diagnostic = "iteration limit reached";
    }
    return report;
}

SolverReport ball_minimize(const Problem& problem, double rho, double tau0,
                           std::span<const double> w0, const SolverOptions& options,
                           std::optional<std::span<const double>> start) {
    SolverReport report;
    report.classification = Classification::BallMinimizer;
    const KernelQuadrature& kernel = problem.kernel();
    auto inside = [&](const Vec& u) {
        const std::vector<double> nodal = problem.nodal(std::span<const double>(u.data(), u.size()));
        return kernel.modular(nodal, Region::Omega, rho) <= 1.0;
    };
    auto norm = [&](const Vec& u) {
        return problem.norm_lambda(std::span<const double>(u.data(), u.size()));
    };

    Vec u;
    if (start && value_of(problem, to_vec(*start)) < 0.0 && inside(to_vec(*start))) {
        u = to_vec(*start);
    } else {
        const Vec w = to_vec(w0);
        double tau = 0.5 * std::min(tau0, rho / norm(w));
        bool found = false;
        for (int h = 0; h <= 60; ++h, tau *= 0.5) {
            if (value_of(problem, tau * w) < 0.0) {
                found = true;
                break;
            }
        }
        if (!found) {
            report.converged = false;
            report.diagnostic = "EmptyNegativeCone: no tau > 0 with I(tau w0) < 0";
            finish(report, problem, evaluate(problem, Vec::Zero(w.size())));
            return report;
        }
        u = tau * w;
    }

    const Metric metric(problem);
    Point p = evaluate(problem, u);
    double step = 1.0;
    int sphere_streak = 0;
    double first_residual = -1.0;
    double switch_factor = options.newton_switch;
    bool converged = false;
    std::vector<double> values;

    NewtonHooks hooks;
    hooks.accept = [&](const Point& from, const Point& to) {
        return to.value <= from.value && inside(to.u);
    };

    for (int it = 0; it < options.max_iters; ++it) {
        report.iterations = it + 1;
        report.history.push_back({p.value, p.residual, 'd'});
        values.push_back(p.value);
        if (p.residual < options.tol_residual) {
            converged = true;
            break;
        }
        if (first_residual < 0.0) first_residual = p.residual;
        const bool stalled =
            values.size() > 20 && values[values.size() - 21] - values.back() < 1e-14;
        if (p.residual < switch_factor * first_residual || stalled) {
            Point q = p;
            if (newton_polish(problem, metric, q, options, options.newton_max, report, hooks)) {
                p = q;
                converged = true;
                break;
            }
            if (q.value <= p.value) p = q;
            switch_factor *= 0.1;
            if (stalled) {
                report.diagnostic = "descent stalled";
                break;
            }
        }

        const Vec d = -metric.apply(p.grad);
        double t = std::min(2.0 * step, 1e8);
        bool accepted = false;
        bool on_sphere = false;
        Point trial;
        for (int k = 0; k < 60; ++k, t *= 0.5) {
            Vec x = p.u + t * d;
            on_sphere = false;
            if (!inside(x)) {
                x *= rho / norm(x);
                on_sphere = true;
            }
            const double vx = value_of(problem, x);
            if (vx <= p.value + kArmijo * p.grad.dot(x - p.u)) {
                trial = evaluate(problem, std::move(x));
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            report.diagnostic = "line search failed";
            break;
        }
        step = t;
        sphere_streak = on_sphere ? sphere_streak + 1 : 0;
        if (sphere_streak >= 100) {
            throw Error(ErrorCode::BoundaryTrap,
                        "ball descent stayed on the sphere for 100 iterations");
        }
        p = std::move(trial);
    }

    finish(report, problem, p);
    report.converged = converged && p.residual < options.tol_residual;
    if (report.converged && !(report.critical_value < 0.0)) {
        report.converged = false;
        report.diagnostic = "minimizer has non-negative energy";
    }
    if (report.converged && !(report.norm_lambda < rho)) {
        report.converged = false;
        report.diagnostic = "minimizer is not strictly inside the ball";
    }
    if (!report.converged && report.diagnostic.empty()) report.diagnostic = "iteration limit reached";
    return report;
}

SolveContext prepare_context(const Problem& problem, Interval omega0,
                             const PrepareOptions& options) {
    SolveContext ctx;
    ctx.omega0 = omega0;
    const EmbeddingEstimator estimator(problem.kernel(), options.dictionary_size, options.seed);
    ctx.c_p = estimator.estimate(problem.p(), options.safety_factor);
    ctx.c_k = estimator.estimate(problem.k(), options.safety_factor);
    GeometryInputs in;
    in.p_lower = problem.p().lower();
    in.p_upper = problem.p().upper();
    in.k_lower = problem.k().lower();
    in.k_upper = problem.k().upper();
    in.q_lower = problem.q().lower();
    in.q_upper = problem.q().upper();
    in.alpha = problem.alpha();
    in.beta = problem.beta();
    in.c_p = ctx.c_p.constant;
    in.c_k = ctx.c_k.constant;
    ctx.geometry = geometry_constants(in);
    ctx.w0 = normalized_hat(problem, omega0);
    ctx.w0_k_modular = problem.source_modular(ctx.w0, true);
    ctx.tau0 = tau0(problem.beta(), in.k_upper, in.q_lower, 1.0, ctx.w0_k_modular);
    ctx.e = make_e_point(problem, ctx.w0, ctx.geometry.rho);
    return ctx;
}

PairResult solve_both(const Problem& problem, const SolveContext& context,
                      const SolverOptions& options, const WarmStart* warm) {
    PairResult out;
    std::optional<std::span<const double>> via, start;
    if (warm && !warm->saddle.empty()) via = std::span<const double>(warm->saddle);
    if (warm && !warm->minimizer.empty()) start = std::span<const double>(warm->minimizer);
    out.saddle = mountain_pass(problem, context.e, options, via);
    out.minimizer =
        ball_minimize(problem, context.geometry.rho, context.tau0, context.w0, options, start);
    out.distance = l2_distance(problem.function(out.saddle.solution),
                               problem.function(out.minimizer.solution),
                               problem.grid().domain());
    out.distinct = out.distance > 1e-6;
    out.ordered = out.minimizer.critical_value < 0.0 && 0.0 < out.saddle.critical_value;
    return out;
}

LimitResult limit_solve(const Problem& omega0_problem, const PrepareOptions& prepare,
                        const SolverOptions& options) {
    const Problem reduced = omega0_problem.without_potential();
    SolveContext ctx = prepare_context(reduced, reduced.grid().domain(), prepare);
    PairResult pair = solve_both(reduced, ctx, options);
    return LimitResult{reduced, std::move(ctx), std::move(pair)};
}

double distance_up_to_sign(const GridFunction& u, const GridFunction& v, Interval region) {
    return std::min(l2_distance(u, v, region), l2_distance(u, v.scaled(-1.0), region));
}

std::vector<SweepRecord> lambda_sweep(const Problem& problem, const SolveContext& context,
                                      std::span<const double> lambdas,
                                      const SolverOptions& options, const LimitResult* limit) {
    if (lambdas.empty()) throw Error(ErrorCode::Argument, "lambda list is empty");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0) || (i > 0 && !(lambdas[i] > lambdas[i - 1]))) {
            throw Error(ErrorCode::Argument, "lambdas must be positive and strictly ascending");
        }
    }
    std::vector<SweepRecord> out;
    WarmStart warm;
    for (double lambda : lambdas) {
        SweepRecord rec;
        rec.lambda = lambda;
        const Problem pl = problem.with_lambda(lambda);
        try {
            rec.pair = solve_both(pl, context, options, warm.saddle.empty() ? nullptr : &warm);
            const SolverReport& r1 = rec.pair.saddle;
            const SolverReport& r2 = rec.pair.minimizer;
            rec.potential_mass1 = pl.potential_mass(r1.solution);
            rec.potential_mass2 = pl.potential_mass(r2.solution);
            if (limit) {
                const GridFunction u1 = pl.function(r1.solution);
                const GridFunction u2 = pl.function(r2.solution);
                const Problem& lp = limit->problem;
                const Interval region = lp.grid().domain();
                rec.distance1 =
                    distance_up_to_sign(u1, lp.function(limit->pair.saddle.solution), region);
                rec.distance2 =
                    distance_up_to_sign(u2, lp.function(limit->pair.minimizer.solution), region);
            }
            rec.ok = r1.converged && r2.converged && rec.pair.distinct && rec.pair.ordered;
            rec.status = rec.ok ? "ok" : "not_converged";
            if (r1.converged && r2.converged) {
                warm.saddle = r1.solution;
                warm.minimizer = r2.solution;
            }
        } catch (const Error& err) {
            rec.ok = false;
            rec.status = to_string(err.code());
        }
        out.push_back(std::move(rec));
    }
    return out;
}

namespace {

// Exact L2 inner product of interior-node piecewise-linear functions (zero ends).
double l2_dot(const Vec& a, const Vec& b, double h) {
    double s = 0.0;
    const Eigen::Index n = a.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        s += 4.0 * a(i) * b(i);
        if (i + 1 < n) s += a(i) * b(i + 1) + a(i + 1) * b(i);
    }
    return s * h / 6.0;
}

} // namespace

std::vector<SolverReport> deflated_search(const Problem& problem, int count,
                                          const SolverOptions& options,
                                          const DeflationOptions& deflation) {
    if (count < 1) throw Error(ErrorCode::Argument, "count must be >= 1");
    const std::size_t n = problem.unknowns();
    const double h = problem.grid().h();
    const Interval dom = problem.grid().domain();
    const Metric metric(problem);
    std::vector<Vec> known;  // found solutions; 0 and -u_k are deflated as well
    std::vector<SolverReport> found;
    Rng rng(options.seed);

    auto l2 = [&](const Vec& a) { return std::sqrt(std::max(0.0, l2_dot(a, a, h))); };
    // m(u) = prod (1 + 1/|u|^2) prod_k (1 + 1/|u - u_k|^2)(1 + 1/|u + u_k|^2)
    auto log_m_and_grad_dot = [&](const Vec& u, const Vec* d, double* dot) {
        double lm = 0.0;
        double dd = 0.0;
        auto term = [&](const Vec& diff) {
            const double r2 = l2_dot(diff, diff, h);
            lm += std::log1p(1.0 / r2);
            if (d) {
                const double dr2 = 2.0 * l2_dot(diff, *d, h);  // d(r2)
                dd += (-dr2 / (r2 * r2)) / (1.0 + 1.0 / r2);
            }
        };
        term(u);
        for (const Vec& k : known) {
            term(u - k);
            term(u + k);
        }
        if (dot) *dot = dd;
        return lm;
    };

    NewtonHooks hooks;
    hooks.step_scale = [&](const Vec& u, const Vec& d) {
        double dot = 0.0;
        log_m_and_grad_dot(u, &d, &dot);
        const double den = 1.0 - dot;
        return den > 1e-8 ? 1.0 / den : 1.0;
    };
    hooks.merit_factor = [&](const Vec& u) {
        return std::exp(log_m_and_grad_dot(u, nullptr, nullptr));
    };

    auto direction = [&](int r) {
        Vec w(n);
        std::vector<double> coef;
        if (r < 4) {
            coef.assign(r + 1, 0.0);
            coef[r] = 1.0;
        } else {
            coef.resize(6);
            for (double& c : coef) c = rng.uniform(-1.0, 1.0);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double x = (problem.grid().node(i + 1) - dom.lo) / dom.length();
            double v = 0.0;
            for (std::size_t j = 0; j < coef.size(); ++j) {
                v += coef[j] * std::sin(double(j + 1) * std::numbers::pi * x);
            }
            w(i) = v;
        }
        const double nw = problem.norm_lambda(std::span<const double>(w.data(), n));
        return Vec(w / nw);
    };

    // Ray maximum and the dip before it, from a log-spaced scan of I(t w).
    auto ray_starts = [&](const Vec& w) {
        std::vector<double> ts, vs;
        for (int j = -30; j <= 20; ++j) {
            ts.push_back(std::ldexp(1.0, j));
            vs.push_back(value_of(problem, ts.back() * w));
        }
        const std::size_t jmax = std::max_element(vs.begin(), vs.end()) - vs.begin();
        const std::size_t jmin = std::min_element(vs.begin(), vs.begin() + jmax + 1) - vs.begin();
        std::vector<Vec> starts;
        if (vs[jmax] > 0.0) starts.push_back(ts[jmax] * w);
        if (vs[jmin] < 0.0) starts.push_back(ts[jmin] * w);
        return starts;
    };

    int unproductive = 0;
    int restart = 0;
    while (static_cast<int>(found.size()) < count) {
        if (unproductive >= deflation.max_unproductive) {
            throw Error(ErrorCode::SearchExhausted,
                        "deflated search found " + std::to_string(found.size()) + " of " +
                            std::to_string(count) + " solutions before " +
                            std::to_string(deflation.max_unproductive) +
                            " unproductive restarts");
        }
        const Vec w = direction(restart++);
        bool productive = false;
        for (const Vec& s : ray_starts(w)) {
            SolverReport report;
            report.classification = Classification::Deflated;
            Point p = evaluate(problem, s);
            const bool ok =
                newton_polish(problem, metric, p, options, deflation.newton_max, report, hooks);
            if (!ok) continue;
            if (l2(p.u) <= deflation.distinct_tol) continue;
            bool fresh = true;
            for (const Vec& k : known) {
                if (l2(p.u - k) <= deflation.distinct_tol || l2(p.u + k) <= deflation.distinct_tol) {
                    fresh = false;
                    break;
                }
            }
            if (!fresh) continue;
            known.push_back(p.u);
            report.iterations = report.newton_iterations;
            finish(report, problem, p);
            report.converged = true;
            found.push_back(std::move(report));
            productive = true;
            if (static_cast<int>(found.size()) >= count) break;
        }
        unproductive = productive ? 0 : unproductive + 1;
    }
    std::stable_sort(found.begin(), found.end(), [](const SolverReport& a, const SolverReport& b) {
        return a.critical_value < b.critical_value;
    });
    std::vector<SolverReport> out;
    for (SolverReport& r : found) {
        if (!out.empty()) {
            const double prev = out.back().critical_value;
            if (std::fabs(r.critical_value - prev) <= 1e-12 * std::max(1.0, std::fabs(prev))) {
                continue;
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace varfrac
