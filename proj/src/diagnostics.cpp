#include "nlepi/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace nlepi {

double total_mass(const Grid& grid, const Field& field) {
    require(field.grid == grid, "total_mass: field grid mismatch");
    double acc = 0.0;
    for (double v : field.values) acc += v;
    return acc * grid.cell_measure();
}

double lp_norm(const Grid& grid, const Field& field, LpNorm p) {
    require(field.grid == grid, "lp_norm: field grid mismatch");
    if (p == LpNorm::linf) {
        double m = 0.0;
        for (double v : field.values) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (double v : field.values) acc += (p == LpNorm::l1) ? std::abs(v) : v * v;
    acc *= grid.cell_measure();
    return p == LpNorm::l1 ? acc : std::sqrt(acc);
}

SnapshotSink DiagnosticsCollector::sink() {
    return [this](const State& s) {
        require(!s.fields.empty(), "diagnostics: empty state");
        const Grid& g = s.fields[0].grid;
        series_.times.push_back(s.time);
        Field n(g);
        std::vector<double> masses, linfs;
        double minv = s.fields[0].values.empty() ? 0.0 : s.fields[0].values[0];
        double total = 0.0;
        for (const auto& f : s.fields) {
            masses.push_back(total_mass(g, f));
            linfs.push_back(lp_norm(g, f, LpNorm::linf));
            total += masses.back();
            for (size_t j = 0; j < f.values.size(); ++j) {
                n.values[j] += f.values[j];
                minv = std::min(minv, f.values[j]);
            }
        }
        series_.total_mass.push_back(total);
        series_.per_compartment_mass.push_back(std::move(masses));
        series_.linf_per_compartment.push_back(std::move(linfs));
        series_.min_value.push_back(minv);
        series_.support_width_n.push_back(
            lp_norm(g, n, LpNorm::linf) > 0.0 ? support_width(n, support_threshold_) : 0.0);
    };
}

namespace {

// Conservative restriction: averages pairs of fine cells onto the coarse
// grid, so masses commute with the restriction.
Field coarsen_by_two(const Grid& coarse, const Field& fine) {
    require(fine.grid.n[0] == 2 * coarse.n[0], "coarsen: grids are not a 2:1 pair");
    Field out(coarse);
    for (int j = 0; j < coarse.n[0]; ++j)
        out.values[j] = 0.5 * (fine.values[2 * j] + fine.values[2 * j + 1]);
    return out;
}

}  // namespace

RefinementResult refinement_order(const ModelSpec& model,
                                  const std::vector<std::function<double(double)>>& init_fns,
                                  double lo, double hi, const SolverConfig& config,
                                  const std::vector<double>& dx_list) {
    require(dx_list.size() >= 3, "refinement_order: need at least 3 widths");
    require(static_cast<int>(init_fns.size()) == model.compartment_count(),
            "refinement_order: one initial profile per compartment");
    for (size_t k = 0; k + 1 < dx_list.size(); ++k) {
        require(dx_list[k] > dx_list[k + 1], "refinement_order: widths must be strictly decreasing");
        double ratio = dx_list[k] / dx_list[k + 1];
        require(std::abs(ratio - 2.0) < 1e-9, "refinement_order: widths must halve");
    }
    for (const auto& e : model.kernel_matrix.entries)
        require(!std::holds_alternative<TabulatedKernel>(e),
                "refinement_order: tabulated kernels are tied to one grid");

    RefinementResult res;
    res.dx = dx_list;
    std::vector<State> finals;
    std::vector<Grid> grids;
    for (double dx : dx_list) {
        int n = static_cast<int>(std::llround((hi - lo) / dx));
        require(n >= 4 && std::abs(n * dx - (hi - lo)) < 1e-9 * (hi - lo),
                "refinement_order: dx does not tile the domain");
        Grid g = build_grid(lo, hi, n);
        State init;
        for (const auto& f : init_fns) init.fields.push_back(project_function(g, f));
        RunResult r = run(model, init, config);
        require(!r.summary.aborted, "refinement_order: member run aborted: " + r.summary.abort_reason);
        finals.push_back(std::move(r.final_state));
        grids.push_back(g);
    }

    bool all_zero = true;
    for (size_t k = 0; k + 1 < finals.size(); ++k) {
        double diff = 0.0;
        for (int xi = 0; xi < model.compartment_count(); ++xi) {
            Field restricted = coarsen_by_two(grids[k], finals[k + 1].fields[xi]);
            for (size_t j = 0; j < restricted.values.size(); ++j)
                diff += std::abs(restricted.values[j] - finals[k].fields[xi].values[j]);
        }
        diff *= grids[k].cell_measure();
        res.l1_diffs.push_back(diff);
        all_zero = all_zero && diff == 0.0;
    }
    res.exact = all_zero;
    if (!all_zero) {
        for (size_t k = 0; k + 1 < res.l1_diffs.size(); ++k) {
            double ratio = res.l1_diffs[k] / res.l1_diffs[k + 1];
            res.orders.push_back(std::log2(ratio));
        }
        double acc = 0.0;
        for (double o : res.orders) acc += o;
        res.fitted_order = res.orders.empty() ? 0.0 : acc / res.orders.size();
    }
    return res;
}

ViscosityResult viscosity_study(const ModelSpec& model, const State& init,
                                const SolverConfig& config, const std::vector<double>& eps_list) {
    require(!eps_list.empty(), "viscosity_study: empty epsilon list");
    for (size_t k = 0; k + 1 < eps_list.size(); ++k)
        require(eps_list[k] > eps_list[k + 1], "viscosity_study: epsilons must be strictly decreasing");
    for (double e : eps_list)
        require(e >= 0.0 && std::isfinite(e), "viscosity_study: epsilons must be >= 0");
    require(!init.fields.empty(), "viscosity_study: empty initial state");

    const Grid grid = init.fields[0].grid;
    ModelSpec reference_model = model;
    reference_model.epsilon = 0.0;
    RunResult ref = run(reference_model, init, config);
    require(!ref.summary.aborted, "viscosity_study: reference run aborted: " + ref.summary.abort_reason);

    ViscosityResult res;
    res.eps = eps_list;
    for (double e : eps_list) {
        ModelSpec m = model;
        m.epsilon = e;
        RunResult r = run(m, init, config);
        require(!r.summary.aborted, "viscosity_study: member run aborted: " + r.summary.abort_reason);
        std::vector<double> row;
        for (int xi = 0; xi < model.compartment_count(); ++xi) {
            Field diff(grid);
            for (size_t j = 0; j < diff.values.size(); ++j)
                diff.values[j] = r.final_state.fields[xi].values[j] - ref.final_state.fields[xi].values[j];
            row.push_back(lp_norm(grid, diff, LpNorm::l2));
        }
        res.distances.push_back(std::move(row));
    }

    res.strictly_decreasing = true;
    for (size_t k = 0; k + 1 < res.distances.size(); ++k)
        for (int xi = 0; xi < model.compartment_count(); ++xi)
            res.strictly_decreasing =
                res.strictly_decreasing && res.distances[k][xi] > res.distances[k + 1][xi];
    return res;
}

}  // namespace nlepi
