#include "nlepi/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace nlepi {

namespace {

constexpr double kTiny = 1e-300;
// Hard stability/positivity bound of the convex upwind building block.
constexpr double kCflLimit = 1.0;

void check_state(const ModelSpec& model, const Grid& grid, const State& state) {
    require(static_cast<int>(state.fields.size()) == model.compartment_count(),
            "state does not match the model's compartment list");
    for (const auto& f : state.fields) require(f.grid == grid, "state fields on mismatched grids");
}

double samples_rate(const Grid& grid, const VelocitySamples& v) {
    double rate = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
        double m = 0.0;
        for (double s : v.axis[a]) m = std::max(m, std::abs(s));
        rate += m / grid.dx[a];
    }
    return rate;
}

}  // namespace

double cfl_timestep(const Grid& grid, double max_speed, double epsilon, double cfl) {
    require(std::isfinite(max_speed) && max_speed >= 0.0, "cfl_timestep: bad max_speed");
    require(std::isfinite(epsilon) && epsilon >= 0.0, "cfl_timestep: bad epsilon");
    require(cfl > 0.0 && cfl <= 1.0, "cfl_timestep: cfl must be in (0,1]");
    double dx = grid.dx[0];
    if (grid.dim == 2) dx = std::min(dx, grid.dx[1]);
    return cfl / (max_speed / dx + 2.0 * grid.dim * epsilon / (dx * dx) + kTiny);
}

Field transport_rhs(const Grid& grid, const Field& u, const VelocitySamples& v) {
    require(u.grid == grid, "transport_rhs: field grid mismatch");
    require(v.targets == Targets::interfaces, "transport_rhs: velocities must be at interfaces");
    for (int a = 0; a < grid.dim; ++a)
        require(static_cast<int>(v.axis[a].size()) == grid.interface_count(a),
                "transport_rhs: velocity sample count mismatch");

    Field out(grid);
    const int n0 = grid.n[0];
    if (grid.dim == 1) {
        // F[i] at interface i between cells i-1 and i, ghost cells hold 0.
        std::vector<double> flux(n0 + 1);
        for (int i = 0; i <= n0; ++i) {
            double vel = v.axis[0][i];
            double ul = i > 0 ? u.values[i - 1] : 0.0;
            double ur = i < n0 ? u.values[i] : 0.0;
            flux[i] = std::max(vel, 0.0) * ul + std::min(vel, 0.0) * ur;
        }
        for (int j = 0; j < n0; ++j) out.values[j] = -(flux[j + 1] - flux[j]) / grid.dx[0];
        return out;
    }

    const int n1 = grid.n[1];
    std::vector<double> fx(static_cast<size_t>(n0 + 1) * n1);
    for (int i1 = 0; i1 < n1; ++i1) {
        for (int i0 = 0; i0 <= n0; ++i0) {
            double vel = v.axis[0][static_cast<size_t>(i1) * (n0 + 1) + i0];
            double ul = i0 > 0 ? u.values[grid.index(i0 - 1, i1)] : 0.0;
            double ur = i0 < n0 ? u.values[grid.index(i0, i1)] : 0.0;
            fx[static_cast<size_t>(i1) * (n0 + 1) + i0] =
                std::max(vel, 0.0) * ul + std::min(vel, 0.0) * ur;
        }
    }
    std::vector<double> fy(static_cast<size_t>(n0) * (n1 + 1));
    for (int i1 = 0; i1 <= n1; ++i1) {
        for (int i0 = 0; i0 < n0; ++i0) {
            double vel = v.axis[1][static_cast<size_t>(i1) * n0 + i0];
            double ul = i1 > 0 ? u.values[grid.index(i0, i1 - 1)] : 0.0;
            double ur = i1 < n1 ? u.values[grid.index(i0, i1)] : 0.0;
            fy[static_cast<size_t>(i1) * n0 + i0] = std::max(vel, 0.0) * ul + std::min(vel, 0.0) * ur;
        }
    }
    for (int i1 = 0; i1 < n1; ++i1) {
        for (int i0 = 0; i0 < n0; ++i0) {
            double div = (fx[static_cast<size_t>(i1) * (n0 + 1) + i0 + 1] -
                          fx[static_cast<size_t>(i1) * (n0 + 1) + i0]) /
                             grid.dx[0] +
                         (fy[static_cast<size_t>(i1 + 1) * n0 + i0] -
                          fy[static_cast<size_t>(i1) * n0 + i0]) /
                             grid.dx[1];
            out.values[grid.index(i0, i1)] = -div;
        }
    }
    return out;
}

Field diffusion_rhs(const Grid& grid, const Field& u, double epsilon) {
    require(u.grid == grid, "diffusion_rhs: field grid mismatch");
    require(epsilon >= 0.0 && std::isfinite(epsilon), "diffusion_rhs: bad epsilon");
    Field out(grid);
    if (epsilon == 0.0) return out;
    const int n0 = grid.n[0];
    if (grid.dim == 1) {
        double inv2 = epsilon / (grid.dx[0] * grid.dx[0]);
        for (int j = 0; j < n0; ++j) {
            double l = j > 0 ? u.values[j - 1] : 0.0;
            double r = j < n0 - 1 ? u.values[j + 1] : 0.0;
            out.values[j] = inv2 * (l - 2.0 * u.values[j] + r);
        }
        return out;
    }
    const int n1 = grid.n[1];
    double ix2 = epsilon / (grid.dx[0] * grid.dx[0]);
    double iy2 = epsilon / (grid.dx[1] * grid.dx[1]);
    for (int i1 = 0; i1 < n1; ++i1) {
        for (int i0 = 0; i0 < n0; ++i0) {
            double c = u.values[grid.index(i0, i1)];
            double xl = u.at_or_zero(i0 - 1, i1);
            double xr = u.at_or_zero(i0 + 1, i1);
            double yl = u.at_or_zero(i0, i1 - 1);
            double yr = u.at_or_zero(i0, i1 + 1);
            out.values[grid.index(i0, i1)] = ix2 * (xl - 2.0 * c + xr) + iy2 * (yl - 2.0 * c + yr);
        }
    }
    return out;
}

Stepper::Stepper(ModelSpec model, Grid grid) : model_(std::move(model)), grid_(std::move(grid)) {
    const auto& km = model_.kernel_matrix;
    require(km.count() == model_.compartment_count(), "stepper: kernel matrix arity mismatch");
    shared_ = km.shared;
    if (shared_) {
        if (!is_zero_kernel(km.at(0, 0)))
            plans_.emplace_back(grid_, km.at(0, 0), Targets::interfaces);
        return;
    }
    plan_of_pair_.assign(static_cast<size_t>(km.count()) * km.count(), -1);
    for (int xi = 0; xi < km.count(); ++xi) {
        for (int eta = 0; eta < km.count(); ++eta) {
            if (is_zero_kernel(km.at(xi, eta))) continue;
            plan_of_pair_[static_cast<size_t>(xi) * km.count() + eta] =
                static_cast<int>(plans_.size());
            plans_.emplace_back(grid_, km.at(xi, eta), Targets::interfaces);
        }
    }
}

void Stepper::add_transport_and_velocity(const State& state, Eval& out) const {
    const int nc = model_.compartment_count();
    if (shared_) {
        if (plans_.empty()) return;  // shared zero kernel: no transport
        std::vector<double> total(grid_.cell_count(), 0.0);
        for (const auto& f : state.fields)
            for (size_t j = 0; j < total.size(); ++j) total[j] += f.values[j];
        VelocitySamples v = make_samples(grid_, Targets::interfaces);
        plans_[0].accumulate(total, -1.0, v);
        out.transport_rate = samples_rate(grid_, v);
        for (int xi = 0; xi < nc; ++xi) {
            Field t = transport_rhs(grid_, state.fields[xi], v);
            for (size_t j = 0; j < t.values.size(); ++j) out.rhs[xi].values[j] += t.values[j];
        }
        return;
    }
    for (int xi = 0; xi < nc; ++xi) {
        VelocitySamples v = make_samples(grid_, Targets::interfaces);
        bool any = false;
        for (int eta = 0; eta < nc; ++eta) {
            int p = plan_of_pair_[static_cast<size_t>(xi) * nc + eta];
            if (p < 0) continue;
            plans_[p].accumulate(state.fields[eta].values, -1.0, v);
            any = true;
        }
        if (!any) continue;
        out.transport_rate = std::max(out.transport_rate, samples_rate(grid_, v));
        Field t = transport_rhs(grid_, state.fields[xi], v);
        for (size_t j = 0; j < t.values.size(); ++j) out.rhs[xi].values[j] += t.values[j];
    }
}

Stepper::Eval Stepper::eval_rhs(const State& state) const {
    check_state(model_, grid_, state);
    const int nc = model_.compartment_count();
    Eval out;
    out.rhs.assign(nc, Field(grid_));

    add_transport_and_velocity(state, out);

    if (model_.epsilon > 0.0) {
        for (int xi = 0; xi < nc; ++xi) {
            Field d = diffusion_rhs(grid_, state.fields[xi], model_.epsilon);
            for (size_t j = 0; j < d.values.size(); ++j) out.rhs[xi].values[j] += d.values[j];
        }
    }

    const int cells = grid_.cell_count();
    if (std::holds_alternative<SirReaction>(model_.reaction)) {
        const double a = model_.alpha, b = model_.beta;
        const auto& s = state.fields[0].values;
        const auto& i = state.fields[1].values;
        for (int j = 0; j < cells; ++j) {
            double inc = b * s[j] * i[j];
            double rec = a * i[j];
            out.rhs[0].values[j] += -inc;
            out.rhs[1].values[j] += inc - rec;
            out.rhs[2].values[j] += rec;
        }
    } else if (std::holds_alternative<SisReaction>(model_.reaction)) {
        const double a = model_.alpha, b = model_.beta;
        const auto& s = state.fields[0].values;
        const auto& i = state.fields[1].values;
        for (int j = 0; j < cells; ++j) {
            double inc = b * s[j] * i[j];
            double rec = a * i[j];
            out.rhs[0].values[j] += rec - inc;
            out.rhs[1].values[j] += inc - rec;
        }
    } else {
        const auto& g = std::get<GenericC1Reaction>(model_.reaction).g;
        std::vector<double> u(nc), rates(nc);
        for (int j = 0; j < cells; ++j) {
            for (int xi = 0; xi < nc; ++xi) u[xi] = state.fields[xi].values[j];
            g(u, rates);
            for (int xi = 0; xi < nc; ++xi) out.rhs[xi].values[j] += rates[xi];
        }
    }
    return out;
}

double Stepper::diffusion_rate() const {
    if (model_.epsilon == 0.0) return 0.0;
    double dx = grid_.dx[0];
    if (grid_.dim == 2) dx = std::min(dx, grid_.dx[1]);
    return 2.0 * grid_.dim * model_.epsilon / (dx * dx);
}

double Stepper::reaction_rate_bound(const State& state) const {
    // Largest per-compartment loss coefficient of the explicit reaction
    // step; keeping dt below cfl/lambda keeps the Euler stages nonnegative.
    if (std::holds_alternative<GenericC1Reaction>(model_.reaction)) return 0.0;
    double max_i = 0.0;
    for (double v : state.fields[1].values) max_i = std::max(max_i, v);
    return std::max(model_.beta * max_i, model_.alpha);
}

State Stepper::advance(const State& state, double dt, const Eval& stage1, RkScheme rk) const {
    const int nc = model_.compartment_count();
    auto euler = [&](const State& s, const Eval& e) {
        State out = s;
        out.time = s.time + dt;
        for (int xi = 0; xi < nc; ++xi)
            for (size_t j = 0; j < out.fields[xi].values.size(); ++j)
                out.fields[xi].values[j] = s.fields[xi].values[j] + dt * e.rhs[xi].values[j];
        return out;
    };

    State s1 = euler(state, stage1);
    if (rk == RkScheme::ssp2) {
        Eval e2 = eval_rhs(s1);
        State out = state;
        out.time = state.time + dt;
        for (int xi = 0; xi < nc; ++xi)
            for (size_t j = 0; j < out.fields[xi].values.size(); ++j) {
                double inner = s1.fields[xi].values[j] + dt * e2.rhs[xi].values[j];
                out.fields[xi].values[j] = 0.5 * state.fields[xi].values[j] + 0.5 * inner;
            }
        return out;
    }

    Eval e2 = eval_rhs(s1);
    State s2 = state;
    s2.time = state.time + 0.5 * dt;
    for (int xi = 0; xi < nc; ++xi)
        for (size_t j = 0; j < s2.fields[xi].values.size(); ++j) {
            double inner = s1.fields[xi].values[j] + dt * e2.rhs[xi].values[j];
            s2.fields[xi].values[j] = 0.75 * state.fields[xi].values[j] + 0.25 * inner;
        }
    Eval e3 = eval_rhs(s2);
    State out = state;
    out.time = state.time + dt;
    for (int xi = 0; xi < nc; ++xi)
        for (size_t j = 0; j < out.fields[xi].values.size(); ++j) {
            double inner = s2.fields[xi].values[j] + dt * e3.rhs[xi].values[j];
            out.fields[xi].values[j] =
                (1.0 / 3.0) * state.fields[xi].values[j] + (2.0 / 3.0) * inner;
        }
    return out;
}

std::vector<Field> full_rhs(const ModelSpec& model, const State& state) {
    require(!state.fields.empty(), "full_rhs: empty state");
    Stepper stepper(model, state.fields[0].grid);
    return stepper.eval_rhs(state).rhs;
}

State rk_step(const ModelSpec& model, const State& state, double dt, RkScheme rk, bool strict_cfl) {
    require(dt > 0.0 && std::isfinite(dt), "rk_step: dt must be positive");
    require(!state.fields.empty(), "rk_step: empty state");
    Stepper stepper(model, state.fields[0].grid);
    auto stage1 = stepper.eval_rhs(state);
    double nu = dt * (stage1.transport_rate + stepper.diffusion_rate());
    if (nu > kCflLimit * (1.0 + 1e-12)) {
        if (strict_cfl)
            throw solver_abort("rk_step: CFL violation (effective CFL " + std::to_string(nu) + ")");
    }
    State out = stepper.advance(state, dt, stage1, rk);
    if (!state_finite(out)) throw solver_abort("rk_step: non-finite state after step");
    return out;
}

double min_field_value(const State& state) {
    double m = 0.0;
    bool first = true;
    for (const auto& f : state.fields)
        for (double v : f.values) {
            if (first) {
                m = v;
                first = false;
            } else {
                m = std::min(m, v);
            }
        }
    return m;
}

bool state_finite(const State& state) {
    for (const auto& f : state.fields)
        for (double v : f.values)
            if (!std::isfinite(v)) return false;
    return true;
}

namespace {

double state_mass(const Grid& grid, const State& state) {
    double meas = grid.cell_measure();
    double total = 0.0;
    for (const auto& f : state.fields) {
        double m = 0.0;
        for (double v : f.values) m += v;
        total += m * meas;
    }
    return total;
}

// Distance in cells of supp(N) (strictly positive total density) from the
// domain boundary; cell count when the state is identically zero.
int support_margin(const Grid& grid, const State& state) {
    const int n0 = grid.n[0], n1 = grid.n[1];
    int lo0 = n0, hi0 = -1, lo1 = n1, hi1 = -1;
    for (int i1 = 0; i1 < n1; ++i1) {
        for (int i0 = 0; i0 < n0; ++i0) {
            double total = 0.0;
            for (const auto& f : state.fields) total += f.values[grid.index(i0, i1)];
            if (total > 0.0) {
                lo0 = std::min(lo0, i0);
                hi0 = std::max(hi0, i0);
                lo1 = std::min(lo1, i1);
                hi1 = std::max(hi1, i1);
            }
        }
    }
    if (hi0 < 0) return grid.cell_count();
    int margin = std::min(lo0, n0 - 1 - hi0);
    if (grid.dim == 2) margin = std::min({margin, lo1, n1 - 1 - hi1});
    return margin;
}

}  // namespace

RunResult run(const ModelSpec& model, const State& init, const SolverConfig& config,
              const std::vector<SnapshotSink>& sinks) {
    require(!init.fields.empty(), "run: empty initial state");
    const Grid grid = init.fields[0].grid;
    check_state(model, grid, init);
    require(std::isfinite(config.t_final) && config.t_final >= 0.0, "run: t_final must be >= 0");
    require((config.dt > 0.0) != (config.cfl > 0.0), "run: set exactly one of dt / cfl");
    if (config.cfl > 0.0) require(config.cfl <= 1.0, "run: cfl must be in (0,1]");
    for (const auto& f : init.fields)
        for (double v : f.values) {
            require(std::isfinite(v), "run: non-finite initial state");
            require(v >= 0.0, "run: initial state must be nonnegative");
        }

    auto t0 = std::chrono::steady_clock::now();
    Stepper stepper(model, grid);

    RunResult res;
    res.final_state = init;
    State& state = res.final_state;
    RunSummary& sum = res.summary;
    sum.initial_mass = state_mass(grid, state);
    sum.min_value = min_field_value(state);
    for (const auto& f : state.fields)
        for (double v : f.values) sum.max_value = std::max(sum.max_value, std::abs(v));
    sum.min_support_margin_cells = support_margin(grid, state);

    auto emit = [&](const State& s) {
        for (const auto& sink : sinks) sink(s);
    };
    emit(state);
    long last_emitted = 0;

    const double end_tol = 1e-12 * std::max(1.0, config.t_final);
    while (config.t_final - state.time > end_tol) {
        auto stage1 = stepper.eval_rhs(state);
        double rate = stage1.transport_rate + stepper.diffusion_rate();
        double dt;
        if (config.dt > 0.0) {
            dt = config.dt;
        } else {
            dt = config.cfl / (rate + stepper.reaction_rate_bound(state) + kTiny);
        }
        dt = std::min(dt, config.t_final - state.time);
        if (!(dt > 0.0)) break;

        double nu = dt * rate;
        sum.max_cfl = std::max(sum.max_cfl, nu);
        if (nu > kCflLimit * (1.0 + 1e-12)) {
            if (config.strict_cfl) {
                sum.aborted = true;
                sum.abort_reason = "CFL violation (effective CFL " + std::to_string(nu) + ")";
                break;
            }
            if (sum.warnings.empty())
                sum.warnings.push_back("CFL bound exceeded (effective CFL " + std::to_string(nu) +
                                       "), continuing in permissive mode");
        }

        state = stepper.advance(state, dt, stage1, config.rk);
        ++sum.steps;

        if (!state_finite(state)) {
            emit(state);  // diagnostic snapshot of the broken state
            last_emitted = sum.steps;
            sum.aborted = true;
            sum.abort_reason = "non-finite state at t = " + std::to_string(state.time);
            break;
        }

        sum.min_value = std::min(sum.min_value, min_field_value(state));
        for (const auto& f : state.fields)
            for (double v : f.values) sum.max_value = std::max(sum.max_value, std::abs(v));
        double mass = state_mass(grid, state);
        double drift = std::abs(mass - sum.initial_mass) / std::max(std::abs(sum.initial_mass), kTiny);
        sum.max_rel_mass_drift = std::max(sum.max_rel_mass_drift, drift);
        sum.min_support_margin_cells =
            std::min(sum.min_support_margin_cells, support_margin(grid, state));

        if (config.snapshot_every > 0 && sum.steps % config.snapshot_every == 0) {
            emit(state);
            last_emitted = sum.steps;
        }
    }

    if (last_emitted != sum.steps || sum.steps == 0) {
        if (sum.steps > 0) emit(state);
    }
    sum.final_time = state.time;
    sum.final_mass = state_mass(grid, state);
    sum.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace nlepi
