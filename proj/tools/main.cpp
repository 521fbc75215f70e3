#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "slicereg/jobspec.hpp"

namespace {

const char* const kCommands[] = {"eval-kernel", "transform",          "split",
                                 "jump-check",  "holder",             "series-fit",
                                 "verify-fundamental", "solve-global", "report"};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"slicereg: slice-regular quaternionic function calculator"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string out_path;
    double tol = 1e-11;
    std::uint64_t seed = 0;
    int refine = -1;

    for (const char* name : kCommands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--spec", spec_path, "job spec file (JSON)")->required();
        sub->add_option("--out", out_path, "output file; '-' or empty for stdout");
        sub->add_option("--tol", tol, "quadrature tolerance");
        sub->add_option("--seed", seed, "seed for randomized probe sets");
        sub->add_option("--refine", refine, "refinement ladder length / level");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    std::ifstream file(spec_path);
    if (!file) {
        std::cerr << "cannot read spec file: " << spec_path << "\n";
        return slicereg::cli::kValidation;
    }
    nlohmann::json spec;
    try {
        file >> spec;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "spec is not valid JSON: " << e.what() << "\n";
        return slicereg::cli::kValidation;
    }

    slicereg::cli::JobOptions opts;
    opts.seed = seed;
    opts.tol = tol;
    opts.refine = refine;
    return slicereg::cli::run_job(command, spec, out_path, opts);
}
