#include "nlepi/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "nlepi/csv.hpp"

namespace nlepi {

namespace fs = std::filesystem;

std::string resolve_output_dir(const std::string& directory) {
    fs::path p = directory.empty() ? fs::path(".") : fs::path(directory);
    if (p.is_relative()) {
        if (const char* root = std::getenv(kOutputRootEnv)) p = fs::path(root) / p;
    }
    return p.string();
}

void write_snapshot_csv(const std::string& path, const std::vector<std::string>& compartments,
                        const State& state) {
    std::ofstream out(path);
    require(out.good(), "cannot write snapshot '" + path + "'");
    const Grid& g = state.fields.at(0).grid;
    out << "x";
    if (g.dim == 2) out << ",y";
    for (const auto& c : compartments) out << "," << c;
    out << ",N\n";
    for (int i1 = 0; i1 < g.n[1]; ++i1) {
        for (int i0 = 0; i0 < g.n[0]; ++i0) {
            out << csv::format_double(g.center(0, i0));
            if (g.dim == 2) out << ',' << csv::format_double(g.center(1, i1));
            double total = 0.0;
            for (const auto& f : state.fields) {
                double v = f.values[g.index(i0, i1)];
                total += v;
                out << ',' << csv::format_double(v);
            }
            out << ',' << csv::format_double(total) << '\n';
        }
    }
}

void write_diagnostics_csv(const std::string& path, const std::vector<std::string>& compartments,
                           const DiagnosticSeries& series) {
    std::ofstream out(path);
    require(out.good(), "cannot write diagnostics '" + path + "'");
    out << "t,total_mass";
    for (const auto& c : compartments) out << ",linf_" << c;
    out << ",min_value,support_width_N\n";
    for (size_t k = 0; k < series.size(); ++k) {
        out << csv::format_double(series.times[k]) << ',' << csv::format_double(series.total_mass[k]);
        for (double v : series.linf_per_compartment[k]) out << ',' << csv::format_double(v);
        out << ',' << csv::format_double(series.min_value[k]) << ','
            << csv::format_double(series.support_width_n[k]) << '\n';
    }
}

namespace {

// An SIS model with one shared quadabs kernel is exactly the setting the
// closed-form steady states cover; the summary then carries the report.
bool qualifies_for_report(const RunConfig& cfg) {
    return cfg.kind == "sis" && cfg.kernel_shared &&
           cfg.shared_kernel.kind == KernelConfig::Kind::quadabs;
}

void write_equilibrium_lines(std::ostream& out, const EquilibriumReport& rep) {
    out << "M = " << csv::format_double(rep.M) << "\n";
    out << "gamma = " << csv::format_double(rep.gamma) << "\n";
    out << "r0 = " << csv::format_double(rep.r0) << "\n";
    out << "classification = " << (rep.endemic ? "endemic" : "disease-free") << "\n";
    out << "support = [" << csv::format_double(rep.support_lo) << ", "
        << csv::format_double(rep.support_hi) << "]\n";
    out << "disease_free_S = " << csv::format_double(rep.disease_free_s) << "\n";
    if (rep.endemic) {
        out << "endemic_S = " << csv::format_double(rep.endemic_s) << "\n";
        out << "endemic_I = " << csv::format_double(rep.endemic_i) << "\n";
    }
}

void write_summary(const std::string& path, const RunConfig& cfg, const Grid& grid,
                   const RunSummary& sum, const DiagnosticSeries& series) {
    std::ofstream out(path);
    require(out.good(), "cannot write summary '" + path + "'");
    if (sum.aborted) out << "ABORTED: " << sum.abort_reason << "\n";
    out << "status = " << (sum.aborted ? "aborted" : "ok") << "\n";
    out << "model = " << cfg.kind << "\n";
    out << "alpha = " << csv::format_double(cfg.alpha) << "\n";
    out << "beta = " << csv::format_double(cfg.beta) << "\n";
    out << "epsilon = " << csv::format_double(cfg.epsilon) << "\n";
    out << "dim = " << grid.dim << "\n";
    for (int a = 0; a < grid.dim; ++a) {
        out << "domain_axis" << a << " = [" << csv::format_double(grid.lo[a]) << ", "
            << csv::format_double(grid.hi[a]) << "]\n";
        out << "dx_axis" << a << " = " << csv::format_double(grid.dx[a]) << "\n";
    }
    out << "steps = " << sum.steps << "\n";
    out << "final_time = " << csv::format_double(sum.final_time) << "\n";
    out << "initial_mass = " << csv::format_double(sum.initial_mass) << "\n";
    out << "final_mass = " << csv::format_double(sum.final_mass) << "\n";
    out << "max_rel_mass_drift = " << csv::format_double(sum.max_rel_mass_drift) << "\n";
    out << "min_value = " << csv::format_double(sum.min_value) << "\n";
    out << "max_value = " << csv::format_double(sum.max_value) << "\n";
    out << "max_cfl = " << csv::format_double(sum.max_cfl) << "\n";
    out << "min_support_margin_cells = " << sum.min_support_margin_cells << "\n";
    if (!series.support_width_n.empty())
        out << "support_width_N_final = " << csv::format_double(series.support_width_n.back()) << "\n";
    for (const auto& w : sum.warnings) out << "warning = " << w << "\n";
    if (qualifies_for_report(cfg)) {
        out << "\n# analytic steady states for the recorded mass\n";
        EquilibriumReport rep =
            analytic_steady_states(sum.initial_mass, cfg.alpha, cfg.beta, cfg.shared_kernel.gamma);
        write_equilibrium_lines(out, rep);
    }
}

}  // namespace

int cmd_run(const RunConfig& cfg, std::ostream& log) {
    require(!cfg.directory.empty(), "config: [output] directory is required for 'run'");
    Grid grid = build_grid_from(cfg);
    ModelSpec model = build_model(cfg);
    State init = build_initial_state(cfg, grid);
    SolverConfig sc = build_solver_config(cfg);

    std::string dir = resolve_output_dir(cfg.directory);
    fs::create_directories(dir);

    DiagnosticsCollector collector;
    int snapshot_index = 0;
    auto snapshot_path = [&](int k) {
        std::ostringstream name;
        name << cfg.prefix << "_snapshot_" << std::setfill('0') << std::setw(4) << k << ".csv";
        return (fs::path(dir) / name.str()).string();
    };
    std::vector<SnapshotSink> sinks;
    sinks.push_back(collector.sink());
    sinks.push_back([&](const State& s) {
        write_snapshot_csv(snapshot_path(snapshot_index), cfg.compartments, s);
        ++snapshot_index;
    });

    RunResult res = run(model, init, sc, sinks);

    write_diagnostics_csv((fs::path(dir) / (cfg.prefix + "_diagnostics.csv")).string(),
                          cfg.compartments, collector.series());
    write_summary((fs::path(dir) / (cfg.prefix + "_summary.txt")).string(), cfg, grid, res.summary,
                  collector.series());

    log << "run: " << res.summary.steps << " steps to t = "
        << csv::format_double(res.summary.final_time) << ", " << snapshot_index
        << " snapshots in " << dir << " (" << res.summary.wall_seconds << " s)\n";
    if (res.summary.aborted) {
        log << "run: ABORTED: " << res.summary.abort_reason << "\n";
        return 2;
    }
    return 0;
}

int cmd_study(const RunConfig& cfg, StudyKind kind, std::ostream& log) {
    require(!cfg.directory.empty(), "config: [output] directory is required for 'study'");
    std::string dir = resolve_output_dir(cfg.directory);
    fs::create_directories(dir);

    ModelSpec model = build_model(cfg);
    SolverConfig sc = build_solver_config(cfg);
    if (cfg.study_t_final >= 0.0) sc.t_final = cfg.study_t_final;
    sc.snapshot_every = 0;

    std::ofstream verdict((fs::path(dir) / (cfg.prefix + "_study.txt")).string());
    require(verdict.good(), "cannot write study verdict");

    if (kind == StudyKind::viscosity) {
        require(!cfg.study_eps.empty(), "config: [study] eps list is required for a viscosity study");
        Grid grid = build_grid_from(cfg);
        State init = build_initial_state(cfg, grid);
        ViscosityResult res = viscosity_study(model, init, sc, cfg.study_eps);

        std::ofstream out((fs::path(dir) / (cfg.prefix + "_viscosity.csv")).string());
        out << "eps";
        for (const auto& c : cfg.compartments) out << ",l2_dist_" << c;
        out << "\n";
        for (size_t k = 0; k < res.eps.size(); ++k) {
            out << csv::format_double(res.eps[k]);
            for (double d : res.distances[k]) out << ',' << csv::format_double(d);
            out << '\n';
        }
        verdict << "study = viscosity\n";
        verdict << "monotone_decreasing = " << (res.strictly_decreasing ? "true" : "false") << "\n";
        log << "viscosity study: monotone_decreasing = "
            << (res.strictly_decreasing ? "true" : "false") << "\n";
        return 0;
    }

    require(!cfg.study_dx.empty(), "config: [study] dx list is required for a refinement study");
    require(cfg.dim == 1, "config: refinement studies are 1D");
    std::vector<std::function<double(double)>> init_fns;
    for (const auto& name : cfg.compartments) {
        // Same pointwise profiles that cmd_run projects from.
        ProfileSpec p = cfg.init.at(name);
        init_fns.push_back([p](double x) {
            switch (p.kind) {
                case ProfileSpec::Kind::indicator:
                    return (x >= p.lo[0] && x <= p.hi[0]) ? p.value : 0.0;
                case ProfileSpec::Kind::gaussian: {
                    double z = (x - p.center[0]) / p.width;
                    return p.mass / (p.width * std::sqrt(2.0 * M_PI)) * std::exp(-0.5 * z * z);
                }
                case ProfileSpec::Kind::constant:
                    return p.value;
            }
            return 0.0;
        });
    }
    RefinementResult res = refinement_order(model, init_fns, cfg.lo[0], cfg.hi[0], sc, cfg.study_dx);

    std::ofstream out((fs::path(dir) / (cfg.prefix + "_refinement.csv")).string());
    out << "dx,l1_diff_to_finer,order\n";
    for (size_t k = 0; k < res.dx.size(); ++k) {
        out << csv::format_double(res.dx[k]) << ',';
        if (k < res.l1_diffs.size()) out << csv::format_double(res.l1_diffs[k]);
        out << ',';
        if (k < res.orders.size()) out << csv::format_double(res.orders[k]);
        out << '\n';
    }
    verdict << "study = refinement\n";
    if (res.exact) {
        verdict << "order = exact\n";
        log << "refinement study: differences identically zero (order = exact)\n";
    } else {
        verdict << "order = " << csv::format_double(res.fitted_order) << "\n";
        log << "refinement study: fitted order = " << csv::format_double(res.fitted_order) << "\n";
    }
    return 0;
}

int cmd_equilibria(double M, double alpha, double beta, double gamma, const std::string& format,
                   std::ostream& out) {
    require(format == "text" || format == "csv", "equilibria: format must be text or csv");
    EquilibriumReport rep = analytic_steady_states(M, alpha, beta, gamma);
    if (format == "csv") {
        out << "M,alpha,beta,gamma,r0,classification,disease_free_S,endemic_S,endemic_I,"
               "support_lo,support_hi\n";
        out << csv::format_double(rep.M) << ',' << csv::format_double(rep.alpha) << ','
            << csv::format_double(rep.beta) << ',' << csv::format_double(rep.gamma) << ','
            << csv::format_double(rep.r0) << ',' << (rep.endemic ? "endemic" : "disease-free") << ','
            << csv::format_double(rep.disease_free_s) << ',';
        if (rep.endemic)
            out << csv::format_double(rep.endemic_s) << ',' << csv::format_double(rep.endemic_i);
        else
            out << ',';
        out << ',' << csv::format_double(rep.support_lo) << ',' << csv::format_double(rep.support_hi)
            << '\n';
        return 0;
    }
    write_equilibrium_lines(out, rep);
    out << "alpha = " << csv::format_double(rep.alpha) << "\n";
    out << "beta = " << csv::format_double(rep.beta) << "\n";
    return 0;
}

}  // namespace nlepi
