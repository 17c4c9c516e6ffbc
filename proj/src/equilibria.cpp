#include "nlepi/equilibria.hpp"

#include <algorithm>
#include <cmath>

namespace nlepi {

double compute_r0(double M, double beta, double gamma, double alpha) {
    require(alpha > 0.0 && std::isfinite(alpha), "compute_r0: alpha must be > 0");
    require(gamma > 0.0 && std::isfinite(gamma), "compute_r0: gamma must be > 0");
    require(M >= 0.0 && std::isfinite(M), "compute_r0: M must be >= 0");
    require(beta >= 0.0 && std::isfinite(beta), "compute_r0: beta must be >= 0");
    return M * beta / (gamma * alpha);
}

EquilibriumReport analytic_steady_states(double M, double alpha, double beta, double gamma,
                                         double center) {
    EquilibriumReport rep;
    rep.M = M;
    rep.gamma = gamma;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.r0 = compute_r0(M, beta, gamma, alpha);
    rep.center = center;
    rep.support_lo = center - 0.5 * gamma;
    rep.support_hi = center + 0.5 * gamma;
    rep.disease_free_s = M / gamma;
    rep.endemic = rep.r0 > 1.0;  // strict threshold
    if (rep.endemic) {
        rep.endemic_s = alpha / beta;
        rep.endemic_i = M / gamma - alpha / beta;
    }
    return rep;
}

Field steady_total_profile(const Grid& grid, double M, double gamma, double center) {
    require(grid.dim == 1, "steady_total_profile: 1D grids only");
    require(gamma > 0.0 && std::isfinite(gamma), "steady_total_profile: gamma must be > 0");
    require(M >= 0.0 && std::isfinite(M), "steady_total_profile: M must be >= 0");
    double lo = center - 0.5 * gamma;
    double hi = center + 0.5 * gamma;
    double margin = 5.0 * grid.dx[0];
    require(lo >= grid.lo[0] + margin && hi <= grid.hi[0] - margin,
            "steady_total_profile: support exceeds the domain (needs a 5-cell margin)");
    if (M == 0.0) return Field(grid);
    double value = M / gamma;
    return project_function(grid, [=](double x) { return (x >= lo && x <= hi) ? value : 0.0; });
}

double distance_to_state(const Grid& grid, const State& state, const std::vector<Field>& reference,
                         Norm norm) {
    require(state.fields.size() == reference.size(), "distance_to_state: compartment count mismatch");
    double total = 0.0;
    double meas = grid.cell_measure();
    for (size_t xi = 0; xi < state.fields.size(); ++xi) {
        const auto& a = state.fields[xi];
        const auto& b = reference[xi];
        require(a.grid == grid && b.grid == grid, "distance_to_state: grid mismatch");
        require(a.values.size() == b.values.size(), "distance_to_state: shape mismatch");
        double acc = 0.0;
        for (size_t j = 0; j < a.values.size(); ++j) {
            double d = std::abs(a.values[j] - b.values[j]);
            if (norm == Norm::l1)
                acc += d;
            else if (norm == Norm::l2)
                acc += d * d;
            else
                acc = std::max(acc, d);
        }
        if (norm == Norm::l1)
            total += acc * meas;
        else if (norm == Norm::l2)
            total += std::sqrt(acc * meas);
        else
            total += acc;
    }
    return total;
}

double support_width(const Field& field, double threshold_fraction) {
    require(threshold_fraction > 0.0 && threshold_fraction < 1.0,
            "support_width: threshold fraction must be in (0,1)");
    double mx = 0.0;
    for (double v : field.values) mx = std::max(mx, v);
    if (mx <= 0.0) return 0.0;
    double thr = threshold_fraction * mx;
    const Grid& g = field.grid;
    int first = -1, last = -1;
    for (int i0 = 0; i0 < g.n[0]; ++i0) {
        bool above = false;
        for (int i1 = 0; i1 < g.n[1]; ++i1) above = above || field.values[g.index(i0, i1)] > thr;
        if (above) {
            if (first < 0) first = i0;
            last = i0;
        }
    }
    if (first < 0) return 0.0;
    return (last - first + 1) * g.dx[0];
}

double center_of_mass(const Field& field) {
    const Grid& g = field.grid;
    double m = 0.0, mx = 0.0;
    for (int i1 = 0; i1 < g.n[1]; ++i1)
        for (int i0 = 0; i0 < g.n[0]; ++i0) {
            double v = field.values[g.index(i0, i1)];
            m += v;
            mx += v * g.center(0, i0);
        }
    if (m == 0.0) return 0.0;
    return mx / m;
}

}  // namespace nlepi
