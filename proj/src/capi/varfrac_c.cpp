#include "varfrac/varfrac.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "error.hpp"

struct vf_config {
    varfrac::ProblemConfig cfg;
};

struct vf_problem {
    varfrac::Problem problem;
};

namespace {

thread_local std::string last_error;

vf_status code_of(varfrac::ErrorCode c) { return static_cast<vf_status>(static_cast<int>(c)); }

vf_status fail(vf_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

template <class F>
vf_status guarded(F&& f) {
    try {
        last_error.clear();
        return f();
    } catch (const varfrac::Error& e) {
        return fail(code_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(VF_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(VF_E_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* vf_version(void) { return "0.1.0"; }

const char* vf_status_name(vf_status status) {
    if (status == VF_OK) return "Ok";
    if (status == VF_E_INTERNAL) return "InternalError";
    if (status >= VF_E_IO && status <= VF_E_ARGUMENT) {
        return varfrac::to_string(static_cast<varfrac::ErrorCode>(status));
    }
    return "UnknownError";
}

const char* vf_last_error(void) { return last_error.c_str(); }

int vf_exit_code(vf_status status) {
    if (status == VF_OK) return 0;
    if (status >= VF_E_IO && status <= VF_E_ARGUMENT) {
        return static_cast<int>(varfrac::status_of(static_cast<varfrac::ErrorCode>(status)));
    }
    return 1;
}

void vf_run_options_init(vf_run_options* options) {
    if (!options) return;
    *options = vf_run_options{};
    options->write_files = 1;
}

vf_status vf_config_load(const char* path, vf_config** out) {
    if (!path || !out) return fail(VF_E_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new vf_config{varfrac::load_config(path)};
        return VF_OK;
    });
}

vf_status vf_config_parse(const char* json_text, vf_config** out) {
    if (!json_text || !out) return fail(VF_E_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new vf_config{varfrac::parse_config(json_text)};
        return VF_OK;
    });
}

void vf_config_free(vf_config* config) { delete config; }

vf_status vf_config_set_lambda(vf_config* config, double lambda) {
    if (!config) return fail(VF_E_ARGUMENT, "null argument");
    return guarded([&] {
        varfrac::ProblemConfig next = config->cfg;
        next.lambda = lambda;
        next.validate();
        config->cfg = std::move(next);
        return VF_OK;
    });
}

vf_status vf_config_set_sources(vf_config* config, double alpha, double beta) {
    if (!config) return fail(VF_E_ARGUMENT, "null argument");
    return guarded([&] {
        varfrac::ProblemConfig next = config->cfg;
        next.alpha = alpha;
        next.beta = beta;
        next.validate();
        config->cfg = std::move(next);
        return VF_OK;
    });
}

vf_status vf_config_to_json(const vf_config* config, char** json_out) {
    if (!config || !json_out) return fail(VF_E_ARGUMENT, "null argument");
    *json_out = nullptr;
    return guarded([&] {
        *json_out = dup_string(varfrac::to_json(config->cfg).dump(2));
        return VF_OK;
    });
}

vf_status vf_run(const vf_config* config, const char* command, const vf_run_options* options,
                 char** json_out) {
    if (!config || !command || !json_out) return fail(VF_E_ARGUMENT, "null argument");
    *json_out = nullptr;
    return guarded([&] {
        varfrac::CommandOptions opt;
        if (options) {
            if (options->lambdas && options->lambda_count > 0) {
                opt.lambdas.assign(options->lambdas, options->lambdas + options->lambda_count);
            }
            if (options->count > 0) opt.count = options->count;
            if (options->out_dir) opt.out_dir = options->out_dir;
            opt.write_files = options->write_files != 0;
            opt.profile = options->profile != 0;
            if (options->function) opt.function = options->function;
        }
        const varfrac::CommandResult r = varfrac::run_command(command, config->cfg, opt);
        *json_out = dup_string(r.payload.dump(2));
        if (r.status == varfrac::CommandStatus::Ok) return VF_OK;
        return fail(code_of(r.error), r.message);
    });
}

void vf_string_free(char* s) { std::free(s); }

vf_status vf_problem_create(const vf_config* config, vf_problem** out) {
    if (!config || !out) return fail(VF_E_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new vf_problem{varfrac::make_problem(config->cfg)};
        return VF_OK;
    });
}

void vf_problem_free(vf_problem* problem) { delete problem; }

size_t vf_problem_unknowns(const vf_problem* problem) {
    return problem ? problem->problem.unknowns() : 0;
}

vf_status vf_problem_node(const vf_problem* problem, size_t index, double* x) {
    if (!problem || !x) return fail(VF_E_ARGUMENT, "null argument");
    if (index >= problem->problem.unknowns()) return fail(VF_E_ARGUMENT, "index out of range");
    *x = problem->problem.grid().node(index + 1);
    return VF_OK;
}

vf_status vf_energy(const vf_problem* problem, const double* u, size_t n, vf_energy_parts* out) {
    if (!problem || !u || !out) return fail(VF_E_ARGUMENT, "null argument");
    if (n != problem->problem.unknowns()) return fail(VF_E_ARGUMENT, "wrong vector length");
    return guarded([&] {
        const varfrac::EnergyBreakdown e = problem->problem.energy(std::span<const double>(u, n));
        *out = vf_energy_parts{e.kinetic, e.potential, e.source_p, e.source_k, e.total};
        return VF_OK;
    });
}

vf_status vf_gradient(const vf_problem* problem, const double* u, size_t n, double* grad,
                      int* nonsmooth) {
    if (!problem || !u || !grad) return fail(VF_E_ARGUMENT, "null argument");
    if (n != problem->problem.unknowns()) return fail(VF_E_ARGUMENT, "wrong vector length");
    return guarded([&] {
        const varfrac::GradientResult g = problem->problem.gradient(std::span<const double>(u, n));
        std::memcpy(grad, g.values.data(), g.values.size() * sizeof(double));
        if (nonsmooth) *nonsmooth = g.nonsmooth_source ? 1 : 0;
        return VF_OK;
    });
}

} // extern "C"
