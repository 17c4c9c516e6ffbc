#include "nlepi/grid.hpp"

#include <cmath>

namespace nlepi {

namespace {

void check_axis(double lo, double hi, int n, int axis) {
    std::string ax = "axis " + std::to_string(axis);
    require(std::isfinite(lo) && std::isfinite(hi), "grid: non-finite bounds on " + ax);
    require(hi > lo, "grid: invalid bounds (hi <= lo) on " + ax);
    require(n >= 4, "grid: too few cells (n < 4) on " + ax);
}

double clamp_projection(double v) {
    if (v < 0.0 && v >= -1e-14) return 0.0;
    return v;
}

}  // namespace

int Grid::interface_count(int axis) const {
    if (dim == 1) return n[0] + 1;
    // On each axis the interfaces form a lattice of (n_axis+1) positions
    // per row/column of cells along the other axis.
    return axis == 0 ? (n[0] + 1) * n[1] : n[0] * (n[1] + 1);
}

Grid build_grid(double lo, double hi, int n) {
    check_axis(lo, hi, n, 0);
    Grid g;
    g.dim = 1;
    g.lo = {lo, 0.0};
    g.hi = {hi, 0.0};
    g.n = {n, 1};
    g.dx = {(hi - lo) / n, 0.0};
    return g;
}

Grid build_grid(std::array<double, 2> lo, std::array<double, 2> hi, std::array<int, 2> n) {
    check_axis(lo[0], hi[0], n[0], 0);
    check_axis(lo[1], hi[1], n[1], 1);
    Grid g;
    g.dim = 2;
    g.lo = lo;
    g.hi = hi;
    g.n = n;
    g.dx = {(hi[0] - lo[0]) / n[0], (hi[1] - lo[1]) / n[1]};
    return g;
}

Field project_function(const Grid& grid, const std::function<double(double)>& f) {
    require(grid.dim == 1, "project_function: 1D sampler on a 2D grid");
    Field out(grid);
    for (int j = 0; j < grid.n[0]; ++j) {
        double v = f(grid.center(0, j));
        require(std::isfinite(v), "project_function: non-finite sample at cell " + std::to_string(j));
        out.values[j] = clamp_projection(v);
    }
    return out;
}

Field project_function(const Grid& grid, const std::function<double(double, double)>& f) {
    require(grid.dim == 2, "project_function: 2D sampler on a 1D grid");
    Field out(grid);
    for (int iy = 0; iy < grid.n[1]; ++iy) {
        for (int ix = 0; ix < grid.n[0]; ++ix) {
            double v = f(grid.center(0, ix), grid.center(1, iy));
            require(std::isfinite(v), "project_function: non-finite sample at cell (" +
                                          std::to_string(ix) + "," + std::to_string(iy) + ")");
            out.values[grid.index(ix, iy)] = clamp_projection(v);
        }
    }
    return out;
}

}  // namespace nlepi
