#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace varfrac {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json to_json(const Interval& i) { return Json::array({i.lo, i.hi}); }

Json to_json(const Bounds& b) {
    Json j;
    j["min"] = b.min;
    j["max"] = b.max;
    j["argmin"] = b.argmin;
    j["argmax"] = b.argmax;
    j["resolution"] = b.resolution;
    return j;
}

Json to_json(const HypothesisReport& r) {
    Json j;
    j["all_passed"] = r.all_passed();
    j["n"] = r.n;
    Json entries = Json::array();
    for (const HypothesisEntry& e : r.entries) {
        Json je;
        je["name"] = e.name;
        je["passed"] = e.passed;
        je["witness"] = e.witness;
        je["value"] = e.value;
        je["detail"] = e.detail;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    Json bounds;
    bounds["p"] = to_json(r.p);
    bounds["q"] = to_json(r.q);
    bounds["s"] = to_json(r.s);
    bounds["s_omega"] = to_json(r.s_omega);
    bounds["k"] = to_json(r.k);
    bounds["V"] = to_json(r.v);
    j["bounds"] = std::move(bounds);
    Json zs = Json::array();
    for (const Interval& i : r.zero_set) zs.push_back(to_json(i));
    j["zero_set"] = std::move(zs);
    j["omega0"] = r.has_zero_set ? to_json(r.omega0) : Json(nullptr);
    return j;
}

Json to_json(const EnergyBreakdown& e) {
    Json j;
    j["kinetic"] = e.kinetic;
    j["potential"] = e.potential;
    j["source_p"] = e.source_p;
    j["source_k"] = e.source_k;
    j["total"] = e.total;
    return j;
}

Json to_json(const GeometryConstants& g) {
    Json j;
    j["A"] = g.A;
    j["B"] = g.B;
    j["D"] = g.D;
    j["rho"] = g.rho;
    j["psi_at_rho"] = g.psi_at_rho;
    j["delta"] = g.delta;
    j["alpha_max"] = g.alpha_max;
    j["beta_max"] = g.beta_max;
    j["product_value"] = g.product_value;
    j["product_bound"] = g.product_bound;
    j["admissible"] = g.admissible;
    j["alpha"] = g.inputs.alpha;
    j["beta"] = g.inputs.beta;
    j["c_p"] = g.inputs.c_p;
    j["c_k"] = g.inputs.c_k;
    return j;
}

Json to_json(const EmbeddingEstimate& e) {
    Json j;
    j["constant"] = e.constant;
    j["max_ratio"] = e.max_ratio;
    j["argmax"] = e.argmax;
    return j;
}

Json to_json(const SolverReport& r, bool with_history) {
    Json j;
    j["classification"] = to_string(r.classification);
    j["converged"] = r.converged;
    j["critical_value"] = r.critical_value;
    j["residual_norm"] = r.residual_norm;
    j["norm_lambda"] = r.norm_lambda;
    j["iterations"] = r.iterations;
    j["newton_iterations"] = r.newton_iterations;
    j["nonsmooth_source"] = r.nonsmooth_source;
    j["diagnostic"] = r.diagnostic;
    j["unknowns"] = r.solution.size();
    if (with_history) {
        Json h = Json::array();
        for (const HistoryEntry& e : r.history) {
            h.push_back(Json::array({e.value, e.residual, std::string(1, e.phase)}));
        }
        j["history"] = std::move(h);
    }
    return j;
}

Json to_json(const SweepRecord& r) {
    Json j;
    j["lambda"] = r.lambda;
    j["ok"] = r.ok;
    j["status"] = r.status;
    j["value1"] = r.pair.saddle.critical_value;
    j["value2"] = r.pair.minimizer.critical_value;
    j["residual1"] = r.pair.saddle.residual_norm;
    j["residual2"] = r.pair.minimizer.residual_norm;
    j["potential_mass1"] = r.potential_mass1;
    j["potential_mass2"] = r.potential_mass2;
    j["dist1"] = r.distance1;
    j["dist2"] = r.distance2;
    return j;
}

Json to_json(const ProblemConfig& cfg) {
    Json j;
    j["omega"] = to_json(cfg.omega);
    j["n"] = cfg.n;
    j["fields"] = {{"p", cfg.fields.p},
                   {"q", cfg.fields.q},
                   {"s", cfg.fields.s},
                   {"k", cfg.fields.k},
                   {"V", cfg.fields.v}};
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["lambda"] = cfg.lambda;
    j["grid"] = cfg.grid;
    j["quadrature"] = {{"gauss_order", cfg.quadrature.gauss_order},
                       {"grading_depth", cfg.quadrature.grading_depth},
                       {"tail_radius", effective_tail_radius(cfg)},
                       {"node_budget", cfg.quadrature.node_budget}};
    j["solver"] = {{"tol_residual", cfg.solver.tol_residual},
                   {"max_iters", cfg.solver.max_iters},
                   {"path_points", cfg.solver.path_points},
                   {"seed", cfg.solver.seed}};
    j["embedding"] = {{"dictionary_size", cfg.embedding.dictionary_size},
                      {"safety_factor", cfg.embedding.safety_factor}};
    return j;
}

void write_profile_csv(const std::filesystem::path& path, const GridFunction& u) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << "node,value\n";
    const std::span<const double> v = u.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        out << format_double(u.grid().node(i)) << ',' << format_double(v[i]) << '\n';
    }
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

Profile read_profile_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "node,value") {
        throw Error(ErrorCode::Parse, path.string() + ": expected header node,value");
    }
    Profile p;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw Error(ErrorCode::Parse, path.string() + ": malformed row " + std::to_string(row));
        }
        try {
            std::size_t used = 0;
            p.x.push_back(std::stod(line.substr(0, comma), &used));
            p.u.push_back(std::stod(line.substr(comma + 1), &used));
        } catch (const std::exception&) {
            throw Error(ErrorCode::Parse, path.string() + ": malformed row " + std::to_string(row));
        }
    }
    return p;
}

namespace {

// Free text in a CSV cell; commas and line breaks would shift columns.
std::string csv_field(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

} // namespace

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << "lambda,value1,value2,potential_mass1,potential_mass2,dist1,dist2,status\n";
    for (const SweepRecord& r : records) {
        out << format_double(r.lambda) << ',' << format_double(r.pair.saddle.critical_value) << ','
            << format_double(r.pair.minimizer.critical_value) << ','
            << format_double(r.potential_mass1) << ',' << format_double(r.potential_mass2) << ','
            << format_double(r.distance1) << ',' << format_double(r.distance2) << ','
            << csv_field(r.ok ? std::string("ok") : r.status) << '\n';
    }
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

} // namespace varfrac
