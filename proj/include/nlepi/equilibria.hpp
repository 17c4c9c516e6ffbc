// Closed-form steady states of the 1D SIS model with the shared
// repulsive-attractive kernel W(x) = x^2 - gamma*|x|, and the metrics used
// to classify simulation outcomes against them.
//
// The total density of any steady state is the plateau
//     N(x) = (M/gamma) * 1_{[c-gamma/2, c+gamma/2]}(x),
// and the threshold for an endemic split of that plateau is the
// space-dependent basic reproduction number R0 = M*beta/(gamma*alpha):
//     disease-free: S = M/gamma, I = 0            (always)
//     endemic:      S = alpha/beta, I = M/gamma - alpha/beta   (iff R0 > 1)
#pragma once

#include "nlepi/grid.hpp"
#include "nlepi/solver.hpp"

namespace nlepi {

struct EquilibriumReport {
    double M = 0.0;      // total mass
    double gamma = 0.0;  // repulsion range
    double alpha = 0.0;
    double beta = 0.0;
    double r0 = 0.0;
    double center = 0.0;
    double support_lo = 0.0;  // center - gamma/2
    double support_hi = 0.0;  // center + gamma/2
    double disease_free_s = 0.0;  // M/gamma
    bool endemic = false;
    double endemic_s = 0.0;  // alpha/beta, set iff endemic
    double endemic_i = 0.0;  // M/gamma - alpha/beta, set iff endemic
};

// R0 = M*beta/(gamma*alpha). Requires alpha > 0 and gamma > 0.
double compute_r0(double M, double beta, double gamma, double alpha);

EquilibriumReport analytic_steady_states(double M, double alpha, double beta, double gamma,
                                         double center = 0.0);

// Midpoint projection of (M/gamma) * 1_{[center-gamma/2, center+gamma/2]}.
// The support must sit at least 5 cells inside the grid.
Field steady_total_profile(const Grid& grid, double M, double gamma, double center);

enum class Norm { l1, l2, linf };

// Sum over compartments of the discrete norm of state - reference
// (cell-measure weighted for L1/L2).
double distance_to_state(const Grid& grid, const State& state, const std::vector<Field>& reference,
                         Norm norm);

// Extent (along the first axis) of the cells exceeding
// threshold_fraction * max(field); 0 for nonpositive fields.
double support_width(const Field& field, double threshold_fraction = 0.1);

// Density-weighted mean position of a nonnegative field (first axis),
// used to recenter analytic profiles before measuring distances.
double center_of_mass(const Field& field);

}  // namespace nlepi
