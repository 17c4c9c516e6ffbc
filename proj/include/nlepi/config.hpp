// Sectioned key=value run configuration: parsing, validation, canonical
// printing, and builders turning a config into model/grid/state/solver
// objects. Unknown keys and sections are errors, with line numbers.
#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "nlepi/models.hpp"
#include "nlepi/solver.hpp"

namespace nlepi {

struct ProfileSpec {
    enum class Kind { indicator, gaussian, constant };
    Kind kind = Kind::constant;
    std::array<double, 2> lo{0.0, 0.0};      // indicator box
    std::array<double, 2> hi{0.0, 0.0};
    double value = 0.0;                      // indicator / constant level
    std::array<double, 2> center{0.0, 0.0};  // gaussian
    double width = 0.0;
    double mass = 0.0;

    bool operator==(const ProfileSpec&) const = default;
};

struct KernelConfig {
    enum class Kind { zero, quadabs, gaussian, tabulated };
    Kind kind = Kind::zero;
    double gamma = 0.0;
    double amplitude = 0.0;
    double sigma = 0.0;
    bool attractive = true;
    std::string file;  // tabulated CSV path

    bool operator==(const KernelConfig&) const = default;
};

struct RunConfig {
    // [model]
    std::string kind;  // sir | sis | generic
    double alpha = 0.0;
    double beta = 0.0;
    double epsilon = 0.0;
    std::vector<std::string> compartments;  // as implied by kind (or listed, for generic)
    bool kernel_shared = false;
    KernelConfig shared_kernel;
    std::map<std::string, KernelConfig> pair_kernels;  // key "XI.ETA"

    // [grid]
    int dim = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};
    std::array<int, 2> n{0, 1};

    // [init] one profile per compartment
    std::map<std::string, ProfileSpec> init;

    // [solver]
    double t_final = 0.0;
    double dt = 0.0;
    double cfl = 0.0;
    std::string rk = "ssp2";
    int snapshot_every = 0;
    bool strict_cfl = true;

    // [output]
    std::string directory;
    std::string prefix = "run";

    // [study] (optional)
    std::vector<double> study_eps;
    std::vector<double> study_dx;
    double study_t_final = -1.0;  // < 0 means "use solver t_final"

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);
std::string print_config(const RunConfig& config);

KernelSpec build_kernel(const KernelConfig& kc);
Grid build_grid_from(const RunConfig& config);
ModelSpec build_model(const RunConfig& config);
State build_initial_state(const RunConfig& config, const Grid& grid);
SolverConfig build_solver_config(const RunConfig& config);

}  // namespace nlepi
