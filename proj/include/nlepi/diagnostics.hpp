// Run-time verification quantities (mass, Lp norms, positivity floor,
// support tracking) and the two study drivers: grid-refinement order and
// the vanishing-viscosity ladder.
#pragma once

#include "nlepi/equilibria.hpp"
#include "nlepi/solver.hpp"

namespace nlepi {

// Per-snapshot series of the quantities the structural lemmas constrain.
struct DiagnosticSeries {
    std::vector<double> times;
    std::vector<double> total_mass;
    std::vector<std::vector<double>> per_compartment_mass;  // [snapshot][compartment]
    std::vector<std::vector<double>> linf_per_compartment;
    std::vector<double> min_value;
    std::vector<double> support_width_n;

    size_t size() const { return times.size(); }
};

// Sum of cell averages times cell measure, ascending cell index.
double total_mass(const Grid& grid, const Field& field);

enum class LpNorm { l1, l2, linf };

double lp_norm(const Grid& grid, const Field& field, LpNorm p);

// Snapshot sink that appends one row per received state.
class DiagnosticsCollector {
  public:
    explicit DiagnosticsCollector(double support_threshold = 0.1)
        : support_threshold_(support_threshold) {}

    SnapshotSink sink();
    const DiagnosticSeries& series() const { return series_; }

  private:
    double support_threshold_;
    DiagnosticSeries series_;
};

struct RefinementResult {
    std::vector<double> dx;
    std::vector<double> l1_diffs;   // between successive resolutions
    std::vector<double> orders;     // log2 ratios of successive diffs
    double fitted_order = 0.0;      // mean of the log2 ratios
    bool exact = false;             // all differences identically zero
};

// Runs the model from the projected initial data on each grid of the
// ladder (1D, fixed domain) to config.t_final, restricts fine solutions by
// conservative 2-cell averaging, and fits the L1 convergence order.
// dx_list must hold >= 3 strictly decreasing widths with pairwise ratio 2.
RefinementResult refinement_order(const ModelSpec& model,
                                  const std::vector<std::function<double(double)>>& init_fns,
                                  double lo, double hi, const SolverConfig& config,
                                  const std::vector<double>& dx_list);

struct ViscosityResult {
    std::vector<double> eps;
    // distances[k][xi] = L2 distance of the eps[k] run to the eps=0 run at
    // the final time, per compartment.
    std::vector<std::vector<double>> distances;
    bool strictly_decreasing = false;  // along eps, for every compartment
};

// Reruns the model with each artificial-diffusion value against an eps=0
// reference on the same grid and horizon. eps_list must be strictly
// decreasing and nonnegative.
ViscosityResult viscosity_study(const ModelSpec& model, const State& init,
                                const SolverConfig& config, const std::vector<double>& eps_list);

}  // namespace nlepi
