#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

#include "error.hpp"
#include "spaces.hpp"

namespace varfrac {

namespace {

namespace fs = std::filesystem;

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Run {
    Run(const ProblemConfig& c, const CommandOptions& o) : cfg(c), opt(o) {}

    const ProblemConfig& cfg;
    const CommandOptions& opt;
    Json payload = Json::object();
    Json timings = Json::object();
    CommandStatus status = CommandStatus::Ok;
    ErrorCode error = ErrorCode::Argument;
    std::string message;

    fs::path out_dir() const { return opt.out_dir.empty() ? fs::path(cfg.output) : fs::path(opt.out_dir); }

    void ensure_out_dir() const {
        std::error_code ec;
        fs::create_directories(out_dir(), ec);
        if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir().string() + ": " + ec.message());
    }

    void fail(ErrorCode code, const std::string& msg) {
        status = status_of(code);
        error = code;
        message = msg;
    }

    template <class F>
    auto timed(const char* name, F&& f) {
        Stopwatch sw;
        auto result = f();
        timings[name] = sw.seconds();
        return result;
    }
};

GridFunction make_test_function(const Problem& problem, const std::string& source) {
    const Grid& g = problem.grid();
    if (source.empty()) {
        const Interval d = g.domain();
        return GridFunction::interpolate(g, [&](double x) {
            return std::max(0.0, 1.0 - std::fabs(x - d.mid()) / (0.5 * d.length()));
        });
    }
    const Expr e = Expr::parse(source);
    if (e.uses_y()) throw Error(ErrorCode::Validation, "function must depend on x only");
    return GridFunction::interpolate(g, [&](double x) { return e.eval(x); });
}

HypothesisReport require_hypotheses(Run& run) {
    HypothesisReport rep = run.timed("hypotheses", [&] { return run_hypotheses(run.cfg); });
    run.payload["hypotheses_passed"] = rep.all_passed();
    if (!rep.all_passed()) {
        std::string failed;
        for (const HypothesisEntry& e : rep.entries) {
            if (!e.passed) failed += (failed.empty() ? "" : ", ") + e.name;
        }
        run.payload["hypotheses"] = to_json(rep);
        throw Error(ErrorCode::Hypothesis, "hypotheses failed: " + failed);
    }
    return rep;
}

Json context_json(const SolveContext& ctx) {
    Json j;
    j["omega0"] = to_json(ctx.omega0);
    j["c_p"] = to_json(ctx.c_p);
    j["c_k"] = to_json(ctx.c_k);
    j["geometry"] = to_json(ctx.geometry);
    j["tau0"] = ctx.tau0;
    j["w0_k_modular"] = ctx.w0_k_modular;
    return j;
}

Json pair_json(const PairResult& pair) {
    Json j;
    j["saddle"] = to_json(pair.saddle);
    j["minimizer"] = to_json(pair.minimizer);
    j["distance"] = pair.distance;
    j["distinct"] = pair.distinct;
    j["ordered"] = pair.ordered;
    return j;
}

bool pair_ok(const PairResult& pair) {
    return pair.saddle.converged && pair.minimizer.converged && pair.distinct && pair.ordered;
}

void cmd_check(Run& run) {
    const HypothesisReport rep = run.timed("hypotheses", [&] { return run_hypotheses(run.cfg); });
    run.payload["report"] = to_json(rep);
    if (!rep.all_passed()) run.fail(ErrorCode::Hypothesis, "some hypotheses failed");
}

void cmd_norm(Run& run) {
    const Problem problem = run.timed("assembly", [&] { return make_problem(run.cfg); });
    const GridFunction u = make_test_function(problem, run.opt.function);
    const int g = run.cfg.quadrature.gauss_order;
    Json lp;
    for (const ExponentField* f : {&problem.p(), &problem.k()}) {
        Json j;
        j["modular"] = modular(u, *f, g);
        j["luxemburg_norm"] = luxemburg_norm(u, *f, g);
        const SandwichCheck sw = check_sandwich(u, *f, g);
        j["sandwich"] = {{"lhs", sw.lhs}, {"mid", sw.mid}, {"rhs", sw.rhs}, {"holds", sw.holds}};
        lp[f->name()] = std::move(j);
    }
    run.payload["lebesgue"] = std::move(lp);
    const KernelQuadrature& kq = problem.kernel();
    const std::span<const double> v = u.values();
    Json gs;
    gs["modular_omega"] = kq.modular(v, Region::Omega);
    gs["modular_full"] = kq.modular(v, Region::FullPlane);
    gs["seminorm_omega"] = kq.seminorm(v, Region::Omega);
    gs["seminorm_full"] = kq.seminorm(v, Region::FullPlane);
    gs["tail_remainder"] = kq.tail_bound(v).modular;
    run.payload["gagliardo"] = std::move(gs);
}

void cmd_energy(Run& run) {
    const Problem problem = run.timed("assembly", [&] { return make_problem(run.cfg); });
    const GridFunction u = make_test_function(problem, run.opt.function);
    const std::vector<double> interior = u.interior();
    const EnergyBreakdown e = problem.energy(interior);
    run.payload["energy"] = to_json(e);
    const GradientResult g = problem.gradient(interior);
    double res = 0.0;
    for (double x : g.values) res = std::max(res, std::fabs(x));
    run.payload["residual_norm"] = res;
    run.payload["nonsmooth_source"] = g.nonsmooth_source;
    run.payload["kinetic_tail_remainder"] = problem.kernel().tail_bound(u.values()).energy;
    run.payload["norm_lambda"] = problem.norm_lambda(interior);
    run.payload["potential_mass"] = problem.potential_mass(interior);
}

void cmd_geometry(Run& run) {
    const HypothesisReport rep = require_hypotheses(run);
    const Problem problem = run.timed("assembly", [&] { return make_problem(run.cfg); });
    const EmbeddingEstimator est = run.timed("embedding", [&] {
        return EmbeddingEstimator(problem.kernel(), run.cfg.embedding.dictionary_size,
                                  run.cfg.embedding.seed);
    });
    const EmbeddingEstimate cp = est.estimate(problem.p(), run.cfg.embedding.safety_factor);
    const EmbeddingEstimate ck = est.estimate(problem.k(), run.cfg.embedding.safety_factor);
    GeometryInputs in;
    in.p_lower = problem.p().lower();
    in.p_upper = problem.p().upper();
    in.k_lower = problem.k().lower();
    in.k_upper = problem.k().upper();
    in.q_lower = problem.q().lower();
    in.q_upper = problem.q().upper();
    in.alpha = problem.alpha();
    in.beta = problem.beta();
    in.c_p = cp.constant;
    in.c_k = ck.constant;
    const GeometryConstants g = evaluate_geometry(in);
    run.payload["omega0"] = to_json(rep.omega0);
    run.payload["c_p"] = to_json(cp);
    run.payload["c_k"] = to_json(ck);
    run.payload["geometry"] = to_json(g);
    if (!g.admissible) {
        try {
            geometry_constants(in);
        } catch (const Error& err) {
            run.fail(err.code(), err.what());
            return;
        }
    }
    const SolveContext ctx = prepare_context(problem, rep.omega0, run.cfg.embedding);
    run.payload["tau0"] = ctx.tau0;
    run.payload["e_norm"] = problem.norm_lambda(ctx.e);
    run.payload["e_energy"] = problem.value(ctx.e);
}

void cmd_solve(Run& run) {
    const HypothesisReport rep = require_hypotheses(run);
    const Problem problem = run.timed("assembly", [&] { return make_problem(run.cfg); });
    const SolveContext ctx = run.timed("prepare", [&] {
        return prepare_context(problem, rep.omega0, run.cfg.embedding);
    });
    run.payload["context"] = context_json(ctx);
    const PairResult pair =
        run.timed("solve", [&] { return solve_both(problem, ctx, run.cfg.solver); });
    run.payload["result"] = pair_json(pair);
    if (run.opt.write_files) {
        run.ensure_out_dir();
        write_profile_csv(run.out_dir() / "u1.csv", problem.function(pair.saddle.solution));
        write_profile_csv(run.out_dir() / "u2.csv", problem.function(pair.minimizer.solution));
        run.payload["files"] = Json::array({"u1.csv", "u2.csv"});
    }
    if (!pair_ok(pair)) {
        std::string why = !pair.saddle.converged      ? "saddle: " + pair.saddle.diagnostic
                          : !pair.minimizer.converged ? "minimizer: " + pair.minimizer.diagnostic
                          : !pair.ordered             ? "critical values are not ordered"
                                                      : "solutions are not distinct";
        run.fail(ErrorCode::NotConverged, why);
    }
}

void cmd_sweep(Run& run) {
    const HypothesisReport rep = require_hypotheses(run);
    const Problem problem = run.timed("assembly", [&] { return make_problem(run.cfg); });
    const SolveContext ctx = run.timed("prepare", [&] {
        return prepare_context(problem, rep.omega0, run.cfg.embedding);
    });
    run.payload["context"] = context_json(ctx);
    const LimitResult limit = run.timed("limit", [&] {
        return limit_solve(make_limit_problem(run.cfg, rep.omega0), run.cfg.embedding,
                           run.cfg.solver);
    });
    run.payload["limit"] = pair_json(limit.pair);
    const std::vector<SweepRecord> recs = run.timed("sweep", [&] {
        return lambda_sweep(problem, ctx, run.opt.lambdas, run.cfg.solver, &limit);
    });
    Json arr = Json::array();
    for (const SweepRecord& r : recs) arr.push_back(to_json(r));
    run.payload["records"] = std::move(arr);
    if (run.opt.write_files) {
        run.ensure_out_dir();
        write_sweep_csv(run.out_dir() / "sweep.csv", recs);
        write_profile_csv(run.out_dir() / "limit_u1.csv",
                          limit.problem.function(limit.pair.saddle.solution));
        write_profile_csv(run.out_dir() / "limit_u2.csv",
                          limit.problem.function(limit.pair.minimizer.solution));
        run.payload["files"] = Json::array({"sweep.csv", "limit_u1.csv", "limit_u2.csv"});
    }
}

void cmd_multi(Run& run) {
    const HypothesisReport rep = require_hypotheses(run);
    const Problem problem =
        run.timed("assembly", [&] { return make_limit_problem(run.cfg, rep.omega0); });
    run.payload["omega0"] = to_json(rep.omega0);
    const std::vector<SolverReport> found = run.timed("search", [&] {
        return deflated_search(problem, run.opt.count, run.cfg.solver);
    });
    Json arr = Json::array();
    for (const SolverReport& r : found) {
        Json j = to_json(r);
        std::vector<double> neg(r.solution);
        for (double& x : neg) x = -x;
        j["value_of_negative"] = problem.value(neg);
        arr.push_back(std::move(j));
    }
    run.payload["solutions"] = std::move(arr);
    if (run.opt.write_files) {
        run.ensure_out_dir();
        Json files = Json::array();
        for (std::size_t i = 0; i < found.size(); ++i) {
            const std::string name = "multi_" + std::to_string(i + 1) + ".csv";
            write_profile_csv(run.out_dir() / name, problem.function(found[i].solution));
            files.push_back(name);
        }
        run.payload["files"] = std::move(files);
    }
}

} // namespace

CommandStatus status_of(ErrorCode code) {
    switch (code) {
    case ErrorCode::BracketFailure:
    case ErrorCode::EscapeFailure:
    case ErrorCode::PathCollapse:
    case ErrorCode::BoundaryTrap:
    case ErrorCode::SearchExhausted:
    case ErrorCode::NotConverged:
        return CommandStatus::NotConverged;
    default:
        return CommandStatus::Invalid;
    }
}

CommandResult run_command(const std::string& command, const ProblemConfig& cfg,
                          const CommandOptions& options) {
    Run run(cfg, options);
    run.payload["command"] = command;
    run.payload["config"] = to_json(cfg);
    try {
        if (command == "check") cmd_check(run);
        else if (command == "norm") cmd_norm(run);
        else if (command == "energy") cmd_energy(run);
        else if (command == "geometry") cmd_geometry(run);
        else if (command == "solve") cmd_solve(run);
        else if (command == "sweep") cmd_sweep(run);
        else if (command == "multi") cmd_multi(run);
        else throw Error(ErrorCode::Argument, "unknown command \"" + command + "\"");
    } catch (const Error& err) {
        run.fail(err.code(), err.what());
    } catch (const std::exception& err) {
        run.fail(ErrorCode::Evaluation, err.what());
    }
    if (run.status != CommandStatus::Ok) {
        run.payload["error"] = {{"code", to_string(run.error)}, {"message", run.message}};
    }
    if (options.profile) run.payload["profile"] = run.timings;
    CommandResult out;
    out.payload = std::move(run.payload);
    out.status = run.status;
    out.error = run.error;
    out.message = run.message;
    return out;
}

} // namespace varfrac
