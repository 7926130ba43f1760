#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "varfrac/varfrac.h"

namespace {

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        out.push_back(v);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variable-order fractional q(x,y)-Laplacian problems: checks, energies and solvers"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string lambda_list = "1,10,100,1000";
    std::string function;
    int count = 3;
    bool profile = false;
    bool no_files = false;

    struct Spec {
        const char* name;
        const char* help;
    };
    const Spec commands[] = {
        {"check", "Check the hypotheses on the exponent fields and potential"},
        {"norm", "Lebesgue modulars, Luxemburg norms and Gagliardo seminorms of a function"},
        {"energy", "Energy breakdown and residual of a function"},
        {"geometry", "Embedding constants, mountain-pass constants and admissibility"},
        {"solve", "Saddle point and ball minimizer"},
        {"sweep", "Solutions along a list of lambda values and their distance to the limit problem"},
        {"multi", "Deflated search for several solutions of the limit problem"},
    };
    for (const Spec& s : commands) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Directory for CSV artifacts");
        sub->add_flag("--profile", profile, "Add wall-clock timings to the report");
        sub->add_flag("--no-files", no_files, "Do not write CSV artifacts");
        const std::string name = s.name;
        if (name == "sweep") {
            sub->add_option("--lambda-list", lambda_list, "Comma-separated ascending lambdas")
                ->capture_default_str();
        }
        if (name == "multi") {
            sub->add_option("--count", count, "Number of distinct solutions")
                ->capture_default_str()
                ->check(CLI::PositiveNumber);
        }
        if (name == "norm" || name == "energy") {
            sub->add_option("--function", function, "u(x) as an expression; default: centred hat");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    std::vector<double> lambdas;
    try {
        lambdas = parse_list(lambda_list);
    } catch (const std::exception&) {
        std::fprintf(stderr, "error: --lambda-list must be comma-separated numbers\n");
        return 1;
    }

    vf_config* cfg = nullptr;
    vf_status st = vf_config_load(config_path.c_str(), &cfg);
    if (st != VF_OK) {
        std::fprintf(stderr, "error: %s: %s\n", vf_status_name(st), vf_last_error());
        return vf_exit_code(st);
    }

    vf_run_options opt;
    vf_run_options_init(&opt);
    opt.lambdas = lambdas.data();
    opt.lambda_count = lambdas.size();
    opt.count = count;
    opt.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
    opt.write_files = no_files ? 0 : 1;
    opt.profile = profile ? 1 : 0;
    opt.function = function.empty() ? nullptr : function.c_str();

    char* json = nullptr;
    st = vf_run(cfg, command.c_str(), &opt, &json);
    if (json) {
        std::fputs(json, stdout);
        std::fputc('\n', stdout);
        vf_string_free(json);
    }
    if (st != VF_OK) std::fprintf(stderr, "error: %s: %s\n", vf_status_name(st), vf_last_error());
    vf_config_free(cfg);
    return vf_exit_code(st);
}
