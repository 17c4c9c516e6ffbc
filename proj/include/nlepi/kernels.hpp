// Interaction potentials, their gradients, and the discrete convolutions
// that turn compartment densities into drift velocities.
//
// Conventions:
//   * Every kernel W is even, W(-x) = W(x), hence grad W(-x) = -grad W(x).
//   * QuadAbs is W(x) = x^2 - gamma*|x| (1D only), repulsive for |x| < gamma/2
//     and attractive beyond. Its derivative is W'(x) = 2x - gamma*sign(x)
//     with sign(0) = 0.
//   * Gaussian is W(x) = s*A*exp(-|x|^2 / (2 sigma^2)) with s = -1 for the
//     attractive well and s = +1 for the repulsive bump, any dimension.
//   * The velocity of compartment xi is the negated convolved gradient,
//     v_xi = -sum_eta (grad W_{xi,eta} * u_eta).
//
// Discrete convolution: (grad W * u)(p) ~ sum_j grad W(p - x_j) u_j dx^d,
// midpoint quadrature over cells, zero density outside the grid, summation
// in ascending cell index (reproducibility contract). Kernel gradients are
// precomputed into an offset table indexed by the target/cell index
// difference, so the sum is a plain multiply-accumulate.
#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "nlepi/grid.hpp"

namespace nlepi {

struct ZeroKernel {
    bool operator==(const ZeroKernel&) const = default;
};

struct QuadAbsKernel {
    double gamma = 0.0;  // repulsion range, > 0
    bool operator==(const QuadAbsKernel&) const = default;
};

enum class GaussSign { attractive, repulsive };

struct GaussianKernel {
    double amplitude = 0.0;  // A > 0
    double sigma = 0.0;      // width > 0
    GaussSign sign = GaussSign::attractive;
    bool operator==(const GaussianKernel&) const = default;
};

// Precomputed gradient samples on a lattice of offsets. 1D rows hold
// (offset, grad); 2D rows hold (offset_x, offset_y, grad_x, grad_y).
// Offsets outside the table evaluate to zero gradient. Lookups snap to the
// nearest row within half the lattice spacing (derived by the loaders).
struct TabulatedKernel {
    int dim = 1;
    std::vector<std::array<double, 2>> offsets;  // sorted lexicographically
    std::vector<std::array<double, 2>> grads;
    std::array<double, 2> spacing{0.0, 0.0};  // min positive gap per coordinate
    bool operator==(const TabulatedKernel&) const = default;
};

using KernelSpec = std::variant<ZeroKernel, QuadAbsKernel, GaussianKernel, TabulatedKernel>;

bool is_zero_kernel(const KernelSpec& spec);

// Analytic (or tabulated) gradient of W at position x. 1D kernels queried
// with a 2D grid/position throw a dimension-mismatch error.
std::array<double, 2> eval_gradient(const KernelSpec& spec, std::array<double, 2> x, int dim);
double eval_gradient(const KernelSpec& spec, double x);  // 1D shorthand

// One KernelSpec per ordered compartment pair (xi, eta). `shared` records
// that the matrix was built from a single kernel, the precondition for the
// decoupled total-population equation and the equilibrium theory.
struct KernelMatrix {
    std::vector<std::string> compartments;
    std::vector<KernelSpec> entries;  // row-major, entries[xi * count + eta]
    bool shared = false;

    static KernelMatrix uniform(std::vector<std::string> names, KernelSpec spec);
    static KernelMatrix from_entries(std::vector<std::string> names, std::vector<KernelSpec> entries);

    int count() const { return static_cast<int>(compartments.size()); }
    const KernelSpec& at(int xi, int eta) const;
    int index_of(const std::string& name) const;  // -1 if absent
};

enum class Targets { centers, interfaces };

// Per-axis gradient-component samples. axis[a] holds component a of the
// convolved gradient at the axis-a target set: interfaces of axis a for
// Targets::interfaces, cell centers for Targets::centers. In 1D only
// axis[0] is populated.
struct VelocitySamples {
    int dim = 1;
    Targets targets = Targets::interfaces;
    std::array<std::vector<double>, 2> axis;
};

// Reusable offset-table convolution for one kernel on one grid/target set.
// apply() is deterministic: per sample, sources are summed in ascending
// cell index and the cell measure is applied once at the end.
class ConvolutionPlan {
  public:
    ConvolutionPlan(const Grid& grid, const KernelSpec& spec, Targets targets);

    void apply(const std::vector<double>& density, VelocitySamples& out) const;
    void accumulate(const std::vector<double>& density, double weight, VelocitySamples& out) const;

    const Grid& grid() const { return grid_; }
    Targets targets() const { return targets_; }

  private:
    Grid grid_;
    Targets targets_;
    bool zero_ = false;
    // table_[axis] holds the gradient component for that axis, indexed by
    // the (target - cell) index offsets.
    std::array<std::vector<double>, 2> table_;
    std::array<int, 2> tn0_{0, 0};  // offset-range sizes along x
    std::array<int, 2> tn1_{0, 0};  // offset-range sizes along y

    void build_axis(const KernelSpec& spec, int axis);
};

VelocitySamples make_samples(const Grid& grid, Targets targets);

// (grad W * u) sampled at the chosen targets.
VelocitySamples convolve_gradient(const Grid& grid, const Field& density, const KernelSpec& spec,
                                  Targets targets);

// v_xi = -sum_eta (grad W_{xi,eta} * u_eta). For a shared matrix this is
// computed as one convolution against the total density (linearity), so
// every compartment gets the identical sample array.
VelocitySamples velocity_for_compartment(const Grid& grid, const std::vector<Field>& fields,
                                         const KernelMatrix& km, int xi, Targets targets);
VelocitySamples velocity_for_compartment(const Grid& grid, const std::vector<Field>& fields,
                                         const KernelMatrix& km, const std::string& name,
                                         Targets targets);

// CSV exchange for tabulated kernels: 2 numeric columns in 1D
// (offset, grad), 4 in 2D (offset_x, offset_y, grad_x, grad_y). Loading
// validates the even-symmetry of the table (every offset must have its
// negation with negated gradient).
TabulatedKernel load_tabulated_csv(const std::string& path);
void save_tabulated_csv(const TabulatedKernel& tab, const std::string& path);

// Sample an analytic kernel onto the offset lattice a grid convolution
// touches (used to exercise the tabulated path against the analytic one).
TabulatedKernel tabulate_on_grid(const Grid& grid, const KernelSpec& spec, Targets targets);

}  // namespace nlepi
