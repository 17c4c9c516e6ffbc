// Uniform cell-centered finite-volume meshes (1D intervals, 2D rectangles)
// and cell-average fields on them. The boundary condition everywhere in this
// project is zero density outside the domain: stencils read 0 beyond the
// last cell, which is what a ghost layer holding 0 would provide.
#pragma once

#include <array>
#include <functional>
#include <vector>

#include "nlepi/common.hpp"

namespace nlepi {

struct Grid {
    int dim = 1;                      // 1 or 2
    std::array<double, 2> lo{0, 0};   // per-axis lower bound
    std::array<double, 2> hi{0, 0};   // per-axis upper bound
    std::array<int, 2> n{0, 1};       // per-axis cell count (n[1]=1 in 1D)
    std::array<double, 2> dx{0, 0};   // per-axis cell width, (hi-lo)/n

    int cell_count() const { return n[0] * n[1]; }
    double cell_measure() const { return dim == 2 ? dx[0] * dx[1] : dx[0]; }

    // Coordinates are pure arithmetic in the index (no accumulation), so
    // they are reproducible bit-exactly across calls.
    double center(int axis, int k) const { return lo[axis] + (k + 0.5) * dx[axis]; }
    double interface(int axis, int k) const { return lo[axis] + k * dx[axis]; }

    // Row-major cell ordering, x fastest.
    int index(int ix, int iy = 0) const { return iy * n[0] + ix; }

    int interface_count(int axis) const;

    bool operator==(const Grid&) const = default;
};

// Cell-average values over a grid. Entries must stay finite; physical
// states are nonnegative.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), values(g.cell_count(), 0.0) {}

    double at_or_zero(int ix, int iy = 0) const {
        if (ix < 0 || ix >= grid.n[0] || iy < 0 || iy >= grid.n[1]) return 0.0;
        return values[grid.index(ix, iy)];
    }
};

Grid build_grid(double lo, double hi, int n);
Grid build_grid(std::array<double, 2> lo, std::array<double, 2> hi, std::array<int, 2> n);

// Midpoint sampling of a pointwise function into cell averages. Negative
// samples of magnitude <= 1e-14 are clamped to 0 (projection round-off of
// nonnegative data); larger negative values are kept as given.
Field project_function(const Grid& grid, const std::function<double(double)>& f);
Field project_function(const Grid& grid, const std::function<double(double, double)>& f);

}  // namespace nlepi
