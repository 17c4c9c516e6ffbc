#include "nlepi/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "nlepi/csv.hpp"

namespace nlepi {

namespace {

double quadabs_deriv(double gamma, double x) {
    return 2.0 * x - gamma * sgn(x);
}

std::array<double, 2> gaussian_grad(const GaussianKernel& k, std::array<double, 2> x, int dim) {
    double r2 = x[0] * x[0] + (dim == 2 ? x[1] * x[1] : 0.0);
    double s = (k.sign == GaussSign::attractive) ? -1.0 : 1.0;
    double common = -s * k.amplitude / (k.sigma * k.sigma) * std::exp(-r2 / (2.0 * k.sigma * k.sigma));
    return {common * x[0], dim == 2 ? common * x[1] : 0.0};
}

double half_spacing(double spacing) { return spacing > 0.0 ? 0.5 * spacing + 1e-12 : 1e-12; }

// Nearest-row lookup on a sorted offset lattice; offsets beyond the table
// evaluate to zero gradient (compact-support semantics).
std::array<double, 2> tabulated_grad(const TabulatedKernel& t, std::array<double, 2> x, int dim) {
    require(t.dim == dim, "tabulated kernel: dimension mismatch");
    if (t.offsets.empty()) return {0.0, 0.0};
    auto cmp = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    };
    double tol0 = half_spacing(t.spacing[0]);
    if (dim == 1) {
        auto it = std::lower_bound(t.offsets.begin(), t.offsets.end(),
                                   std::array<double, 2>{x[0], -1e300}, cmp);
        size_t best = t.offsets.size();
        double bestd = tol0;
        for (int k = -1; k <= 0; ++k) {
            auto jt = it + k;
            if (jt < t.offsets.begin() || jt >= t.offsets.end()) continue;
            double d = std::abs((*jt)[0] - x[0]);
            if (d <= bestd) {
                bestd = d;
                best = static_cast<size_t>(jt - t.offsets.begin());
            }
        }
        if (best == t.offsets.size()) return {0.0, 0.0};
        return t.grads[best];
    }
    // 2D: scan the x-slab around the target, pick the nearest row.
    double tol1 = half_spacing(t.spacing[1]);
    auto lo = std::lower_bound(t.offsets.begin(), t.offsets.end(),
                               std::array<double, 2>{x[0] - tol0, -1e300}, cmp);
    size_t best = t.offsets.size();
    double bestd2 = tol0 * tol0 + tol1 * tol1;
    for (auto it = lo; it != t.offsets.end() && (*it)[0] <= x[0] + tol0; ++it) {
        double d0 = (*it)[0] - x[0];
        double d1 = (*it)[1] - x[1];
        double d2 = d0 * d0 + d1 * d1;
        if (d2 < bestd2) {
            bestd2 = d2;
            best = static_cast<size_t>(it - t.offsets.begin());
        }
    }
    if (best == t.offsets.size()) return {0.0, 0.0};
    return t.grads[best];
}

void sort_rows(TabulatedKernel& t) {
    std::vector<size_t> order(t.offsets.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return t.offsets[a][0] < t.offsets[b][0] ||
               (t.offsets[a][0] == t.offsets[b][0] && t.offsets[a][1] < t.offsets[b][1]);
    });
    TabulatedKernel s;
    s.dim = t.dim;
    s.offsets.reserve(order.size());
    s.grads.reserve(order.size());
    for (size_t i : order) {
        s.offsets.push_back(t.offsets[i]);
        s.grads.push_back(t.grads[i]);
    }
    for (int coord = 0; coord < t.dim; ++coord) {
        std::vector<double> vals;
        vals.reserve(s.offsets.size());
        for (const auto& o : s.offsets) vals.push_back(o[coord]);
        std::sort(vals.begin(), vals.end());
        double gap = 0.0;
        for (size_t i = 1; i < vals.size(); ++i) {
            double d = vals[i] - vals[i - 1];
            if (d > 0.0 && (gap == 0.0 || d < gap)) gap = d;
        }
        s.spacing[coord] = gap;
    }
    t = std::move(s);
}

void check_even_symmetry(const TabulatedKernel& t) {
    double scale = 0.0;
    for (const auto& g : t.grads) scale = std::max({scale, std::abs(g[0]), std::abs(g[1])});
    double tol = 1e-12 * std::max(1.0, scale);
    for (size_t i = 0; i < t.offsets.size(); ++i) {
        auto g = tabulated_grad(t, {-t.offsets[i][0], -t.offsets[i][1]}, t.dim);
        require(std::abs(g[0] + t.grads[i][0]) <= tol && std::abs(g[1] + t.grads[i][1]) <= tol,
                "tabulated kernel: table is not even-symmetric");
    }
}

void validate_spec(const KernelSpec& spec, int dim) {
    if (const auto* q = std::get_if<QuadAbsKernel>(&spec)) {
        require(q->gamma > 0.0 && std::isfinite(q->gamma), "quadabs kernel: gamma must be > 0");
        require(dim == 1, "quadabs kernel: dimension mismatch (1D only)");
    } else if (const auto* g = std::get_if<GaussianKernel>(&spec)) {
        require(g->amplitude >= 0.0 && std::isfinite(g->amplitude),
                "gaussian kernel: amplitude must be >= 0");
        require(g->sigma > 0.0 && std::isfinite(g->sigma), "gaussian kernel: sigma must be > 0");
    } else if (const auto* t = std::get_if<TabulatedKernel>(&spec)) {
        require(t->dim == dim, "tabulated kernel: dimension mismatch");
    }
}

}  // namespace

bool is_zero_kernel(const KernelSpec& spec) {
    return std::holds_alternative<ZeroKernel>(spec);
}

std::array<double, 2> eval_gradient(const KernelSpec& spec, std::array<double, 2> x, int dim) {
    require(std::isfinite(x[0]) && std::isfinite(x[1]), "eval_gradient: non-finite position");
    validate_spec(spec, dim);
    if (std::holds_alternative<ZeroKernel>(spec)) return {0.0, 0.0};
    if (const auto* q = std::get_if<QuadAbsKernel>(&spec)) return {quadabs_deriv(q->gamma, x[0]), 0.0};
    if (const auto* g = std::get_if<GaussianKernel>(&spec)) return gaussian_grad(*g, x, dim);
    return tabulated_grad(std::get<TabulatedKernel>(spec), x, dim);
}

double eval_gradient(const KernelSpec& spec, double x) {
    return eval_gradient(spec, {x, 0.0}, 1)[0];
}

KernelMatrix KernelMatrix::uniform(std::vector<std::string> names, KernelSpec spec) {
    require(!names.empty(), "kernel matrix: empty compartment list");
    KernelMatrix km;
    km.compartments = std::move(names);
    km.entries.assign(km.compartments.size() * km.compartments.size(), spec);
    km.shared = true;
    return km;
}

KernelMatrix KernelMatrix::from_entries(std::vector<std::string> names,
                                        std::vector<KernelSpec> entries) {
    require(!names.empty(), "kernel matrix: empty compartment list");
    require(entries.size() == names.size() * names.size(),
            "kernel matrix: need one entry per ordered compartment pair");
    KernelMatrix km;
    km.compartments = std::move(names);
    km.entries = std::move(entries);
    km.shared = false;
    return km;
}

const KernelSpec& KernelMatrix::at(int xi, int eta) const {
    require(xi >= 0 && xi < count() && eta >= 0 && eta < count(), "kernel matrix: pair out of range");
    return entries[static_cast<size_t>(xi) * count() + eta];
}

int KernelMatrix::index_of(const std::string& name) const {
    for (int i = 0; i < count(); ++i)
        if (compartments[i] == name) return i;
    return -1;
}

VelocitySamples make_samples(const Grid& grid, Targets targets) {
    VelocitySamples out;
    out.dim = grid.dim;
    out.targets = targets;
    for (int a = 0; a < grid.dim; ++a) {
        int size = (targets == Targets::interfaces) ? grid.interface_count(a) : grid.cell_count();
        out.axis[a].assign(size, 0.0);
    }
    return out;
}

ConvolutionPlan::ConvolutionPlan(const Grid& grid, const KernelSpec& spec, Targets targets)
    : grid_(grid), targets_(targets) {
    validate_spec(spec, grid.dim);
    if (is_zero_kernel(spec)) {
        zero_ = true;
        return;
    }
    for (int a = 0; a < grid.dim; ++a) build_axis(spec, a);
}

void ConvolutionPlan::build_axis(const KernelSpec& spec, int axis) {
    const int n0 = grid_.n[0];
    const int n1 = grid_.n[1];
    const bool iface = (targets_ == Targets::interfaces);
    // Offset ranges of (target index - cell index) per coordinate. Targets
    // on axis `axis` are staggered by half a cell along that axis.
    int b0, c0, b1, c1;
    if (grid_.dim == 1) {
        b0 = iface ? 1 - n0 : -(n0 - 1);
        c0 = iface ? 2 * n0 : 2 * n0 - 1;
        b1 = 0;
        c1 = 1;
    } else {
        bool stag0 = iface && axis == 0;
        bool stag1 = iface && axis == 1;
        b0 = stag0 ? 1 - n0 : -(n0 - 1);
        c0 = stag0 ? 2 * n0 : 2 * n0 - 1;
        b1 = stag1 ? 1 - n1 : -(n1 - 1);
        c1 = stag1 ? 2 * n1 : 2 * n1 - 1;
    }
    tn0_[axis] = c0;
    tn1_[axis] = c1;
    auto& tab = table_[axis];
    tab.assign(static_cast<size_t>(c0) * c1, 0.0);
    const bool stag0 = iface && (grid_.dim == 1 || axis == 0);
    const bool stag1 = iface && grid_.dim == 2 && axis == 1;
    // The x offset range is stored reversed so the apply loop walks the
    // table forward together with the density row.
    for (int d1 = 0; d1 < c1; ++d1) {
        double oy = grid_.dim == 2 ? ((b1 + d1) - (stag1 ? 0.5 : 0.0)) * grid_.dx[1] : 0.0;
        for (int d0 = 0; d0 < c0; ++d0) {
            double ox = ((b0 + (c0 - 1 - d0)) - (stag0 ? 0.5 : 0.0)) * grid_.dx[0];
            tab[static_cast<size_t>(d1) * c0 + d0] = eval_gradient(spec, {ox, oy}, grid_.dim)[axis];
        }
    }
}

void ConvolutionPlan::apply(const std::vector<double>& density, VelocitySamples& out) const {
    out = make_samples(grid_, targets_);
    if (zero_) return;
    accumulate(density, 1.0, out);
}

void ConvolutionPlan::accumulate(const std::vector<double>& density, double weight,
                                 VelocitySamples& out) const {
    require(static_cast<int>(density.size()) == grid_.cell_count(),
            "convolve: density size does not match grid");
    if (zero_) return;
    const int n0 = grid_.n[0];
    const int n1 = grid_.n[1];
    const double meas = grid_.cell_measure() * weight;
    const bool iface = (targets_ == Targets::interfaces);

    if (grid_.dim == 1) {
        const auto& tab = table_[0];
        const int nt = iface ? n0 + 1 : n0;
        const int base = iface ? 1 - n0 : -(n0 - 1);
        const int c0 = tn0_[0];
        for (int i = 0; i < nt; ++i) {
            double acc = 0.0;
            const double* trow = tab.data() + (base + c0 - 1 - i);
            for (int j = 0; j < n0; ++j) acc += trow[j] * density[j];
            out.axis[0][i] += acc * meas;
        }
        return;
    }

    for (int axis = 0; axis < 2; ++axis) {
        const auto& tab = table_[axis];
        const int c0 = tn0_[axis];
        const bool stag0 = iface && axis == 0;
        const bool stag1 = iface && axis == 1;
        const int base0 = stag0 ? 1 - n0 : -(n0 - 1);
        const int base1 = stag1 ? 1 - n1 : -(n1 - 1);
        const int nt0 = stag0 ? n0 + 1 : n0;
        const int nt1 = stag1 ? n1 + 1 : n1;
        auto& samples = out.axis[axis];
        for (int i1 = 0; i1 < nt1; ++i1) {
            for (int i0 = 0; i0 < nt0; ++i0) {
                double acc = 0.0;
                const int k0 = base0 + c0 - 1 - i0;
                for (int j1 = 0; j1 < n1; ++j1) {
                    const double* trow = tab.data() + static_cast<size_t>(i1 - j1 - base1) * c0 + k0;
                    const double* urow = density.data() + static_cast<size_t>(j1) * n0;
                    for (int j0 = 0; j0 < n0; ++j0) acc += trow[j0] * urow[j0];
                }
                samples[static_cast<size_t>(i1) * nt0 + i0] += acc * meas;
            }
        }
    }
}

VelocitySamples convolve_gradient(const Grid& grid, const Field& density, const KernelSpec& spec,
                                  Targets targets) {
    require(density.grid == grid, "convolve_gradient: field grid does not match");
    ConvolutionPlan plan(grid, spec, targets);
    VelocitySamples out;
    plan.apply(density.values, out);
    return out;
}

namespace {

VelocitySamples velocity_impl(const Grid& grid, const std::vector<Field>& fields,
                              const KernelMatrix& km, int xi, Targets targets) {
    require(xi >= 0 && xi < km.count(), "velocity_for_compartment: unknown compartment");
    require(static_cast<int>(fields.size()) == km.count(),
            "velocity_for_compartment: state does not match compartment list");
    for (const auto& f : fields)
        require(f.grid == grid, "velocity_for_compartment: field grid does not match");

    VelocitySamples out = make_samples(grid, targets);
    if (km.shared) {
        if (is_zero_kernel(km.at(0, 0))) return out;
        std::vector<double> total(grid.cell_count(), 0.0);
        for (const auto& f : fields)
            for (size_t j = 0; j < total.size(); ++j) total[j] += f.values[j];
        ConvolutionPlan plan(grid, km.at(0, 0), targets);
        plan.accumulate(total, -1.0, out);
        return out;
    }
    for (int eta = 0; eta < km.count(); ++eta) {
        if (is_zero_kernel(km.at(xi, eta))) continue;
        ConvolutionPlan plan(grid, km.at(xi, eta), targets);
        plan.accumulate(fields[eta].values, -1.0, out);
    }
    return out;
}

}  // namespace

VelocitySamples velocity_for_compartment(const Grid& grid, const std::vector<Field>& fields,
                                         const KernelMatrix& km, int xi, Targets targets) {
    return velocity_impl(grid, fields, km, xi, targets);
}

VelocitySamples velocity_for_compartment(const Grid& grid, const std::vector<Field>& fields,
                                         const KernelMatrix& km, const std::string& name,
                                         Targets targets) {
    int xi = km.index_of(name);
    require(xi >= 0, "velocity_for_compartment: unknown compartment '" + name + "'");
    return velocity_impl(grid, fields, km, xi, targets);
}

TabulatedKernel load_tabulated_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "tabulated kernel: cannot open '" + path + "'");
    TabulatedKernel tab;
    tab.dim = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = csv::split_line(line);
        if (fields.empty()) continue;
        std::vector<double> vals;
        bool numeric = true;
        for (const auto& f : fields) {
            double v;
            if (!csv::try_parse_double(f, v)) {
                numeric = false;
                break;
            }
            vals.push_back(v);
        }
        if (!numeric) {
            // Permit one header row.
            require(tab.offsets.empty() && tab.dim == 0,
                    "tabulated kernel: non-numeric row at line " + std::to_string(lineno));
            continue;
        }
        int dim = vals.size() == 2 ? 1 : (vals.size() == 4 ? 2 : 0);
        require(dim != 0, "tabulated kernel: line " + std::to_string(lineno) +
                              ": expected 2 columns (1D) or 4 columns (2D)");
        if (tab.dim == 0) tab.dim = dim;
        require(tab.dim == dim,
                "tabulated kernel: inconsistent column count at line " + std::to_string(lineno));
        if (dim == 1) {
            tab.offsets.push_back({vals[0], 0.0});
            tab.grads.push_back({vals[1], 0.0});
        } else {
            tab.offsets.push_back({vals[0], vals[1]});
            tab.grads.push_back({vals[2], vals[3]});
        }
    }
    require(!tab.offsets.empty(), "tabulated kernel: no rows in '" + path + "'");
    sort_rows(tab);
    check_even_symmetry(tab);
    return tab;
}

void save_tabulated_csv(const TabulatedKernel& tab, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "tabulated kernel: cannot write '" + path + "'");
    if (tab.dim == 1) {
        out << "offset,grad\n";
        for (size_t i = 0; i < tab.offsets.size(); ++i)
            out << csv::format_double(tab.offsets[i][0]) << ',' << csv::format_double(tab.grads[i][0])
                << '\n';
    } else {
        out << "offset_x,offset_y,grad_x,grad_y\n";
        for (size_t i = 0; i < tab.offsets.size(); ++i)
            out << csv::format_double(tab.offsets[i][0]) << ',' << csv::format_double(tab.offsets[i][1])
                << ',' << csv::format_double(tab.grads[i][0]) << ','
                << csv::format_double(tab.grads[i][1]) << '\n';
    }
}

TabulatedKernel tabulate_on_grid(const Grid& grid, const KernelSpec& spec, Targets targets) {
    validate_spec(spec, grid.dim);
    require(!std::holds_alternative<TabulatedKernel>(spec), "tabulate_on_grid: already tabulated");
    TabulatedKernel tab;
    tab.dim = grid.dim;
    const bool iface = (targets == Targets::interfaces);
    if (grid.dim == 1) {
        int n = grid.n[0];
        int b = iface ? 1 - n : -(n - 1);
        int c = iface ? 2 * n : 2 * n - 1;
        for (int d = 0; d < c; ++d) {
            double ox = ((b + d) - (iface ? 0.5 : 0.0)) * grid.dx[0];
            tab.offsets.push_back({ox, 0.0});
            tab.grads.push_back(eval_gradient(spec, {ox, 0.0}, 1));
        }
    } else {
        // Union of the offset lattices touched by the per-axis target sets.
        auto add_lattice = [&](bool stag0, bool stag1) {
            int n0 = grid.n[0], n1 = grid.n[1];
            int b0 = stag0 ? 1 - n0 : -(n0 - 1), c0 = stag0 ? 2 * n0 : 2 * n0 - 1;
            int b1 = stag1 ? 1 - n1 : -(n1 - 1), c1 = stag1 ? 2 * n1 : 2 * n1 - 1;
            for (int d1 = 0; d1 < c1; ++d1) {
                for (int d0 = 0; d0 < c0; ++d0) {
                    double ox = ((b0 + d0) - (stag0 ? 0.5 : 0.0)) * grid.dx[0];
                    double oy = ((b1 + d1) - (stag1 ? 0.5 : 0.0)) * grid.dx[1];
                    tab.offsets.push_back({ox, oy});
                    tab.grads.push_back(eval_gradient(spec, {ox, oy}, 2));
                }
            }
        };
        if (iface) {
            add_lattice(true, false);
            add_lattice(false, true);
        } else {
            add_lattice(false, false);
        }
    }
    sort_rows(tab);
    return tab;
}

}  // namespace nlepi
