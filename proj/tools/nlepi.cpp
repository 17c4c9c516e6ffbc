// Command-line entry point: run configured simulations, convergence /
// viscosity studies, and analytic equilibrium reports.
#include <iostream>

#include <CLI11.hpp>

#include "nlepi/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"finite-volume solver for compartment models with nonlocal aggregation movement"};
    app.require_subcommand(1);

    std::string run_cfg;
    auto* run = app.add_subcommand("run", "simulate a configured model and write CSV artifacts");
    run->add_option("config", run_cfg, "path to a run configuration file")->required();

    std::string study_cfg, study_kind;
    auto* study = app.add_subcommand("study", "refinement or vanishing-viscosity study");
    study->add_option("config", study_cfg, "path to a run configuration file")->required();
    study->add_option("--kind", study_kind, "refinement | viscosity")->required();

    double M = 0, alpha = 0, beta = 0, gamma = 0;
    std::string format = "text";
    auto* eq = app.add_subcommand("equilibria", "print the analytic steady-state report");
    eq->add_option("--M", M, "total mass")->required();
    eq->add_option("--alpha", alpha, "recovery rate")->required();
    eq->add_option("--beta", beta, "transmission rate")->required();
    eq->add_option("--gamma", gamma, "repulsion range of W(x) = x^2 - gamma|x|")->required();
    eq->add_option("--format", format, "text | csv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            nlepi::RunConfig cfg = nlepi::parse_config_file(run_cfg);
            return nlepi::cmd_run(cfg, std::cout);
        }
        if (study->parsed()) {
            nlepi::RunConfig cfg = nlepi::parse_config_file(study_cfg);
            if (study_kind == "refinement")
                return nlepi::cmd_study(cfg, nlepi::StudyKind::refinement, std::cout);
            if (study_kind == "viscosity")
                return nlepi::cmd_study(cfg, nlepi::StudyKind::viscosity, std::cout);
            throw nlepi::validation_error("study: --kind must be refinement or viscosity");
        }
        return nlepi::cmd_equilibria(M, alpha, beta, gamma, format, std::cout);
    } catch (const nlepi::solver_abort& e) {
        std::cerr << "solver abort: " << e.what() << "\n";
        return 2;
    } catch (const nlepi::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
