#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace varfrac {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::Validation, msg); }

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& known) {
    if (!obj.is_object()) invalid(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) {
            invalid("unknown key \"" + (where.empty() ? key : where + "." + key) + "\"");
        }
    }
}

double get_number(const json& obj, const std::string& key, const std::string& name, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) invalid(name + " must be a number");
    return v.get<double>();
}

long long get_integer(const json& obj, const std::string& key, const std::string& name,
                      long long fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) invalid(name + " must be an integer");
    return v.get<long long>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& name) {
    if (!obj.contains(key)) invalid(name + " is required");
    const json& v = obj.at(key);
    if (!v.is_string()) invalid(name + " must be a string");
    return v.get<std::string>();
}

Expr parse_field(const std::string& source, const std::string& name, bool allow_y) {
    Expr e;
    try {
        e = Expr::parse(source);
    } catch (const Error& err) {
        invalid("fields." + name + ": " + err.what());
    }
    if (!allow_y && e.uses_y()) invalid("fields." + name + " must depend on x only");
    return e;
}

} // namespace

void ProblemConfig::validate() const {
    if (!(std::isfinite(omega.lo) && std::isfinite(omega.hi) && omega.lo < omega.hi)) {
        invalid("omega must satisfy a < b");
    }
    if (n != 1) invalid("n must be 1");
    if (!(alpha > 0.0)) invalid("alpha must be > 0");
    if (!(beta > 0.0)) invalid("beta must be > 0");
    if (!(lambda > 0.0)) invalid("lambda must be > 0");
    if (grid < 64 || (grid & (grid - 1)) != 0) invalid("grid must be a power of two >= 64");
    if (quadrature.gauss_order < 1 || quadrature.gauss_order > 16) {
        invalid("quadrature.gauss_order must be in 1..16");
    }
    if (quadrature.grading_depth < 1 || quadrature.grading_depth > 40) {
        invalid("quadrature.grading_depth must be in 1..40");
    }
    if (quadrature.tail_radius < 0.0) invalid("quadrature.tail_radius must be >= 0");
    if (quadrature.tail_radius > 0.0 && quadrature.tail_radius <= 0.5 * omega.length()) {
        invalid("quadrature.tail_radius must exceed half the domain length");
    }
    if (quadrature.node_budget == 0) invalid("quadrature.node_budget must be > 0");
    if (!(solver.tol_residual > 0.0)) invalid("solver.tol_residual must be > 0");
    if (solver.max_iters < 1) invalid("solver.max_iters must be >= 1");
    if (solver.path_points < 3) invalid("solver.path_points must be >= 3");
    if (embedding.dictionary_size < 1) invalid("embedding.dictionary_size must be >= 1");
    if (!(embedding.safety_factor >= 1.0)) invalid("embedding.safety_factor must be >= 1");
    if (hypotheses.resolution_1d < 2) invalid("hypotheses.resolution_1d must be >= 2");
    if (hypotheses.resolution_2d < 2) invalid("hypotheses.resolution_2d must be >= 2");
    if (!(hypotheses.zeta_tol > 0.0)) invalid("hypotheses.zeta_tol must be > 0");
    parse_field(fields.p, "p", false);
    parse_field(fields.q, "q", true);
    parse_field(fields.s, "s", true);
    parse_field(fields.k, "k", false);
    parse_field(fields.v, "V", false);
}

ProblemConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
    }
    reject_unknown(doc, "", {"omega", "n", "fields", "alpha", "beta", "lambda", "grid", "quadrature",
                             "solver", "embedding", "hypotheses", "output"});
    ProblemConfig cfg;

    if (!doc.contains("omega")) invalid("omega is required");
    const json& om = doc.at("omega");
    if (!om.is_array() || om.size() != 2 || !om[0].is_number() || !om[1].is_number()) {
        invalid("omega must be an array [a, b]");
    }
    cfg.omega = {om[0].get<double>(), om[1].get<double>()};
    cfg.n = static_cast<int>(get_integer(doc, "n", "n", 1));

    if (!doc.contains("fields")) invalid("fields is required");
    const json& f = doc.at("fields");
    reject_unknown(f, "fields", {"p", "q", "s", "k", "V"});
    cfg.fields.p = get_string(f, "p", "fields.p");
    cfg.fields.q = get_string(f, "q", "fields.q");
    cfg.fields.s = get_string(f, "s", "fields.s");
    cfg.fields.k = get_string(f, "k", "fields.k");
    cfg.fields.v = get_string(f, "V", "fields.V");

    cfg.alpha = get_number(doc, "alpha", "alpha", cfg.alpha);
    cfg.beta = get_number(doc, "beta", "beta", cfg.beta);
    cfg.lambda = get_number(doc, "lambda", "lambda", cfg.lambda);
    cfg.grid = static_cast<int>(get_integer(doc, "grid", "grid", cfg.grid));

    if (doc.contains("quadrature")) {
        const json& q = doc.at("quadrature");
        reject_unknown(q, "quadrature", {"gauss_order", "grading_depth", "tail_radius", "node_budget"});
        QuadratureOptions& o = cfg.quadrature;
        o.gauss_order = static_cast<int>(get_integer(q, "gauss_order", "quadrature.gauss_order", o.gauss_order));
        o.grading_depth =
            static_cast<int>(get_integer(q, "grading_depth", "quadrature.grading_depth", o.grading_depth));
        o.tail_radius = get_number(q, "tail_radius", "quadrature.tail_radius", o.tail_radius);
        const long long budget = get_integer(q, "node_budget", "quadrature.node_budget",
                                             static_cast<long long>(o.node_budget));
        if (budget <= 0) invalid("quadrature.node_budget must be > 0");
        o.node_budget = static_cast<std::size_t>(budget);
    }
    if (doc.contains("solver")) {
        const json& s = doc.at("solver");
        reject_unknown(s, "solver", {"tol_residual", "max_iters", "path_points", "seed"});
        SolverOptions& o = cfg.solver;
        o.tol_residual = get_number(s, "tol_residual", "solver.tol_residual", o.tol_residual);
        o.max_iters = static_cast<int>(get_integer(s, "max_iters", "solver.max_iters", o.max_iters));
        o.path_points = static_cast<int>(get_integer(s, "path_points", "solver.path_points", o.path_points));
        const long long seed = get_integer(s, "seed", "solver.seed", static_cast<long long>(o.seed));
        if (seed < 0) invalid("solver.seed must be >= 0");
        o.seed = static_cast<std::uint64_t>(seed);
    }
    cfg.embedding.seed = cfg.solver.seed;
    if (doc.contains("embedding")) {
        const json& e = doc.at("embedding");
        reject_unknown(e, "embedding", {"dictionary_size", "safety_factor"});
        cfg.embedding.dictionary_size = static_cast<int>(
            get_integer(e, "dictionary_size", "embedding.dictionary_size", cfg.embedding.dictionary_size));
        cfg.embedding.safety_factor =
            get_number(e, "safety_factor", "embedding.safety_factor", cfg.embedding.safety_factor);
    }
    if (doc.contains("hypotheses")) {
        const json& h = doc.at("hypotheses");
        reject_unknown(h, "hypotheses", {"resolution_1d", "resolution_2d", "zeta_tol"});
        HypothesisOptions& o = cfg.hypotheses;
        o.resolution_1d =
            static_cast<int>(get_integer(h, "resolution_1d", "hypotheses.resolution_1d", o.resolution_1d));
        o.resolution_2d =
            static_cast<int>(get_integer(h, "resolution_2d", "hypotheses.resolution_2d", o.resolution_2d));
        o.zeta_tol = get_number(h, "zeta_tol", "hypotheses.zeta_tol", o.zeta_tol);
    }
    if (doc.contains("output")) cfg.output = get_string(doc, "output", "output");

    cfg.validate();
    return cfg;
}

ProblemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::Io, "cannot read " + path.string());
    return parse_config(text.str());
}

double effective_tail_radius(const ProblemConfig& cfg) {
    return cfg.quadrature.tail_radius > 0.0 ? cfg.quadrature.tail_radius : 10.0 * cfg.omega.length();
}

FieldSet make_fields(const ProblemConfig& cfg, Interval domain) {
    const double r = cfg.quadrature.tail_radius > 0.0 ? cfg.quadrature.tail_radius
                                                      : 10.0 * domain.length();
    const double c = domain.mid();
    const int r1 = cfg.hypotheses.resolution_1d;
    const int r2 = cfg.hypotheses.resolution_2d;
    FieldSet out;
    out.p = ExponentField("p", parse_field(cfg.fields.p, "p", false), 1, domain, r1);
    out.q = ExponentField("q", parse_field(cfg.fields.q, "q", true), 2, domain, r2);
    out.s = ExponentField("s", parse_field(cfg.fields.s, "s", true), 2, Interval{c - r, c + r}, r2);
    out.k = ExponentField("k", parse_field(cfg.fields.k, "k", false), 1, domain, r1);
    out.v = Potential(parse_field(cfg.fields.v, "V", false), domain);
    return out;
}

Problem make_problem(const ProblemConfig& cfg) {
    FieldSet f = make_fields(cfg, cfg.omega);
    QuadratureOptions quad = cfg.quadrature;
    quad.tail_radius = effective_tail_radius(cfg);
    return Problem(Grid(cfg.omega, static_cast<std::size_t>(cfg.grid)), f.p, f.q, f.s, f.k, f.v,
                   cfg.alpha, cfg.beta, cfg.lambda, quad);
}

Problem make_limit_problem(const ProblemConfig& cfg, Interval omega0) {
    FieldSet f = make_fields(cfg, omega0);
    QuadratureOptions quad = cfg.quadrature;
    if (quad.tail_radius <= 0.0) quad.tail_radius = 10.0 * omega0.length();
    return Problem(Grid(omega0, static_cast<std::size_t>(cfg.grid)), f.p, f.q, f.s, f.k, f.v,
                   cfg.alpha, cfg.beta, cfg.lambda, quad)
        .without_potential();
}

HypothesisReport run_hypotheses(const ProblemConfig& cfg) {
    const FieldSet f = make_fields(cfg, cfg.omega);
    return check_hypotheses(f.p, f.q, f.s, f.k, f.v, cfg.n, cfg.hypotheses);
}

} // namespace varfrac
