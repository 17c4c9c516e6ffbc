// Method-of-lines time integrator: positivity-preserving first-order upwind
// transport with convolution velocities evaluated at interfaces, optional
// centered-difference diffusion, explicit pointwise reactions, SSP
// Runge-Kutta stepping under a CFL restriction.
//
// The boundary is zero density outside the domain; interior fluxes
// telescope, so total mass moves only through boundary interfaces (which
// carry zero flux while the support stays inside).
#pragma once

#include <functional>

#include "nlepi/models.hpp"

namespace nlepi {

struct State {
    double time = 0.0;
    std::vector<Field> fields;  // one per compartment, shared grid
};

enum class RkScheme { ssp2, ssp3 };

struct SolverConfig {
    double t_final = 0.0;
    // Exactly one of dt (fixed step) / cfl (fraction in (0,1]) must be set.
    double dt = 0.0;
    double cfl = 0.0;
    RkScheme rk = RkScheme::ssp2;
    int snapshot_every = 0;  // in steps; 0 = initial and final only
    bool strict_cfl = true;  // violation aborts instead of warning
};

struct RunSummary {
    long steps = 0;
    double final_time = 0.0;
    double min_value = 0.0;          // min over compartments/cells/steps
    double max_value = 0.0;          // sup-norm envelope over the run
    double initial_mass = 0.0;       // sum over compartments
    double final_mass = 0.0;
    double max_rel_mass_drift = 0.0;
    int min_support_margin_cells = 0;  // distance of supp(N) to the boundary
    double max_cfl = 0.0;              // largest effective CFL number seen
    double wall_seconds = 0.0;
    bool aborted = false;
    std::string abort_reason;
    std::vector<std::string> warnings;
};

using SnapshotSink = std::function<void(const State&)>;

struct RunResult {
    State final_state;
    RunSummary summary;
};

// dt = cfl / (max_speed/dx + 2*d*epsilon/dx^2 + tiny); dx is the smallest
// cell width, d the dimension, tiny guards division by zero.
double cfl_timestep(const Grid& grid, double max_speed, double epsilon, double cfl);

// Conservative upwind divergence, -(F_{j+1/2} - F_{j-1/2})/dx with
// F = max(v,0)*u_left + min(v,0)*u_right and zero ghost values.
Field transport_rhs(const Grid& grid, const Field& u, const VelocitySamples& v);

// Second-order centered Laplacian times epsilon, zero ghost values.
// epsilon = 0 returns an exact zero field.
Field diffusion_rhs(const Grid& grid, const Field& u, double epsilon);

// Assembled right-hand side for every compartment; evaluation order per
// compartment is transport, diffusion, reaction.
std::vector<Field> full_rhs(const ModelSpec& model, const State& state);

// One SSP step. Throws solver_abort on a strict-mode CFL violation or a
// non-finite post-step state.
State rk_step(const ModelSpec& model, const State& state, double dt,
              RkScheme rk = RkScheme::ssp2, bool strict_cfl = true);

// Steps until t >= t_final, feeding snapshots to the sinks at the
// configured cadence (plus initial and final states). Never throws for
// in-run failures: those set summary.aborted and return the partial state.
RunResult run(const ModelSpec& model, const State& init, const SolverConfig& config,
              const std::vector<SnapshotSink>& sinks = {});

// Holds the per-pair convolution plans for repeated stepping; the free
// functions above are one-shot wrappers around this.
class Stepper {
  public:
    Stepper(ModelSpec model, Grid grid);

    struct Eval {
        std::vector<Field> rhs;
        double transport_rate = 0.0;  // sum over axes of max|v_axis|/dx_axis
    };

    Eval eval_rhs(const State& state) const;
    State advance(const State& state, double dt, const Eval& stage1, RkScheme rk) const;

    double diffusion_rate() const;                        // 2*d*eps/dx_min^2
    double reaction_rate_bound(const State& state) const;  // explicit-step decay bound

    const ModelSpec& model() const { return model_; }
    const Grid& grid() const { return grid_; }

  private:
    ModelSpec model_;
    Grid grid_;
    bool shared_ = false;
    std::vector<ConvolutionPlan> plans_;
    std::vector<int> plan_of_pair_;  // -1 for zero kernels

    void add_transport_and_velocity(const State& state, Eval& out) const;
};

double min_field_value(const State& state);
bool state_finite(const State& state);

}  // namespace nlepi
