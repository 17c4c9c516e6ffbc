#include "nlepi/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nlepi/csv.hpp"

namespace nlepi {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, Entry>;

std::string where(int line) { return " (line " + std::to_string(line) + ")"; }

double parse_num(const std::string& v, int line, const std::string& field) {
    double out;
    require(csv::try_parse_double(v, out), "config: " + field + ": not a number: '" + v + "'" + where(line));
    return out;
}

int parse_int(const std::string& v, int line, const std::string& field) {
    double d = parse_num(v, line, field);
    require(d == std::floor(d) && std::abs(d) < 1e9, "config: " + field + ": not an integer" + where(line));
    return static_cast<int>(d);
}

bool parse_bool(const std::string& v, int line, const std::string& field) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw validation_error("config: " + field + ": expected true or false" + where(line));
}

std::vector<double> parse_num_list(const std::string& v, int line, const std::string& field) {
    std::vector<double> out;
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) out.push_back(parse_num(tok, line, field));
    require(!out.empty(), "config: " + field + ": empty list" + where(line));
    return out;
}

// name(arg=value, arg=value) or a bare name.
struct Call {
    std::string name;
    std::map<std::string, std::pair<std::string, int>> args;
};

Call parse_call(const std::string& v, int line, const std::string& field) {
    Call c;
    auto open = v.find('(');
    if (open == std::string::npos) {
        c.name = csv::trim(v);
        require(!c.name.empty(), "config: " + field + ": empty value" + where(line));
        return c;
    }
    require(v.back() == ')', "config: " + field + ": missing ')'" + where(line));
    c.name = csv::trim(v.substr(0, open));
    std::string inner = v.substr(open + 1, v.size() - open - 2);
    for (const auto& part : csv::split_line(inner, ',')) {
        if (part.empty()) continue;
        auto eq = part.find('=');
        require(eq != std::string::npos, "config: " + field + ": expected key=value in '" + part + "'" + where(line));
        std::string k = csv::trim(part.substr(0, eq));
        std::string val = csv::trim(part.substr(eq + 1));
        require(!c.args.count(k), "config: " + field + ": duplicate argument '" + k + "'" + where(line));
        c.args[k] = {val, line};
    }
    return c;
}

std::string take_arg(Call& c, const std::string& key, const std::string& field, int line) {
    auto it = c.args.find(key);
    require(it != c.args.end(), "config: " + field + ": missing argument '" + key + "'" + where(line));
    std::string v = it->second.first;
    c.args.erase(it);
    return v;
}

void finish_args(const Call& c, const std::string& field) {
    if (!c.args.empty()) {
        const auto& [k, v] = *c.args.begin();
        throw validation_error("config: " + field + ": unknown argument '" + k + "'" + where(v.second));
    }
}

KernelConfig parse_kernel_value(const std::string& v, int line, const std::string& field) {
    Call c = parse_call(v, line, field);
    KernelConfig kc;
    if (c.name == "zero") {
        kc.kind = KernelConfig::Kind::zero;
    } else if (c.name == "quadabs") {
        kc.kind = KernelConfig::Kind::quadabs;
        kc.gamma = parse_num(take_arg(c, "gamma", field, line), line, field + ".gamma");
    } else if (c.name == "gaussian") {
        kc.kind = KernelConfig::Kind::gaussian;
        kc.amplitude = parse_num(take_arg(c, "amplitude", field, line), line, field + ".amplitude");
        kc.sigma = parse_num(take_arg(c, "sigma", field, line), line, field + ".sigma");
        std::string sign = take_arg(c, "sign", field, line);
        require(sign == "attractive" || sign == "repulsive",
                "config: " + field + ": sign must be attractive or repulsive" + where(line));
        kc.attractive = (sign == "attractive");
    } else if (c.name == "tabulated") {
        kc.kind = KernelConfig::Kind::tabulated;
        kc.file = take_arg(c, "file", field, line);
    } else {
        throw validation_error("config: " + field + ": unknown kernel '" + c.name + "'" + where(line));
    }
    finish_args(c, field);
    return kc;
}

std::array<double, 2> parse_vec(const std::string& v, int line, const std::string& field, int dim) {
    auto list = parse_num_list(v, line, field);
    require(static_cast<int>(list.size()) == dim,
            "config: " + field + ": expected " + std::to_string(dim) + " value(s)" + where(line));
    std::array<double, 2> out{0.0, 0.0};
    for (int i = 0; i < dim; ++i) out[i] = list[i];
    return out;
}

ProfileSpec parse_profile(const std::string& v, int line, const std::string& field, int dim) {
    Call c = parse_call(v, line, field);
    ProfileSpec p;
    if (c.name == "indicator") {
        p.kind = ProfileSpec::Kind::indicator;
        p.lo = parse_vec(take_arg(c, "lo", field, line), line, field + ".lo", dim);
        p.hi = parse_vec(take_arg(c, "hi", field, line), line, field + ".hi", dim);
        p.value = parse_num(take_arg(c, "value", field, line), line, field + ".value");
    } else if (c.name == "gaussian") {
        p.kind = ProfileSpec::Kind::gaussian;
        p.center = parse_vec(take_arg(c, "center", field, line), line, field + ".center", dim);
        p.width = parse_num(take_arg(c, "width", field, line), line, field + ".width");
        p.mass = parse_num(take_arg(c, "mass", field, line), line, field + ".mass");
    } else if (c.name == "constant") {
        p.kind = ProfileSpec::Kind::constant;
        p.value = parse_num(take_arg(c, "value", field, line), line, field + ".value");
    } else {
        throw validation_error("config: " + field + ": unknown profile '" + c.name + "'" + where(line));
    }
    finish_args(c, field);
    return p;
}

Entry* find(Section& s, const std::string& key) {
    auto it = s.find(key);
    if (it == s.end()) return nullptr;
    it->second.used = true;
    return &it->second;
}

Entry& need(Section& s, const std::string& key, const std::string& section) {
    Entry* e = find(s, key);
    require(e != nullptr, "config: [" + section + "] is missing required key '" + key + "'");
    return *e;
}

void finish_section(const Section& s, const std::string& name) {
    for (const auto& [key, e] : s)
        require(e.used, "config: unknown key '" + key + "' in [" + name + "]" + where(e.line));
}

std::vector<std::string> compartments_for(const std::string& kind, Section& model) {
    if (kind == "sir") return {"S", "I", "R"};
    if (kind == "sis") return {"S", "I"};
    Entry& e = need(model, "compartments", "model");
    std::vector<std::string> names;
    std::istringstream in(e.value);
    std::string tok;
    while (in >> tok) names.push_back(tok);
    require(names.size() >= 1, "config: compartments: empty list" + where(e.line));
    for (size_t i = 0; i < names.size(); ++i)
        for (size_t j = i + 1; j < names.size(); ++j)
            require(names[i] != names[j], "config: compartments: duplicate name '" + names[i] + "'" + where(e.line));
    return names;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    std::map<std::string, Section> sections;
    {
        std::istringstream in(text);
        std::string raw;
        int lineno = 0;
        std::string cur;
        while (std::getline(in, raw)) {
            ++lineno;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw = raw.substr(0, hash);
            std::string line = csv::trim(raw);
            if (line.empty()) continue;
            if (line.front() == '[') {
                require(line.back() == ']', "config: malformed section header" + where(lineno));
                cur = csv::trim(line.substr(1, line.size() - 2));
                bool known = cur == "model" || cur == "grid" || cur == "init" || cur == "solver" ||
                             cur == "output" || cur == "study";
                require(known, "config: unknown section [" + cur + "]" + where(lineno));
                require(!sections.count(cur), "config: duplicate section [" + cur + "]" + where(lineno));
                sections[cur];
                continue;
            }
            auto eq = line.find('=');
            require(eq != std::string::npos, "config: expected key = value" + where(lineno));
            require(!cur.empty(), "config: key outside any section" + where(lineno));
            std::string key = csv::trim(line.substr(0, eq));
            std::string value = csv::trim(line.substr(eq + 1));
            require(!key.empty(), "config: empty key" + where(lineno));
            auto [it, inserted] = sections[cur].emplace(key, Entry{value, lineno, false});
            require(inserted, "config: duplicate key '" + key + "' in [" + cur + "]" + where(lineno));
        }
    }

    RunConfig cfg;

    require(sections.count("model"), "config: missing [model] section");
    require(sections.count("grid"), "config: missing [grid] section");
    require(sections.count("solver"), "config: missing [solver] section");
    Section& model = sections["model"];
    Section& grid = sections["grid"];
    Section& solver = sections["solver"];

    // [grid] first: profile parsing needs the dimension.
    if (Entry* e = find(grid, "dim")) cfg.dim = parse_int(e->value, e->line, "dim");
    require(cfg.dim == 1 || cfg.dim == 2, "config: dim must be 1 or 2");
    {
        Entry& lo = need(grid, "lo", "grid");
        Entry& hi = need(grid, "hi", "grid");
        Entry& n = need(grid, "n", "grid");
        cfg.lo = parse_vec(lo.value, lo.line, "lo", cfg.dim);
        cfg.hi = parse_vec(hi.value, hi.line, "hi", cfg.dim);
        auto nl = parse_num_list(n.value, n.line, "n");
        require(static_cast<int>(nl.size()) == cfg.dim, "config: n: expected " + std::to_string(cfg.dim) + " value(s)" + where(n.line));
        for (int i = 0; i < cfg.dim; ++i) {
            require(nl[i] == std::floor(nl[i]), "config: n: not an integer" + where(n.line));
            cfg.n[i] = static_cast<int>(nl[i]);
        }
        if (cfg.dim == 1) cfg.n[1] = 1;
    }
    finish_section(grid, "grid");

    // [model]
    {
        Entry& kind = need(model, "kind", "model");
        require(kind.value == "sir" || kind.value == "sis" || kind.value == "generic",
                "config: kind must be sir, sis, or generic" + where(kind.line));
        cfg.kind = kind.value;
        cfg.compartments = compartments_for(cfg.kind, model);
        if (Entry* e = find(model, "alpha")) {
            cfg.alpha = parse_num(e->value, e->line, "alpha");
            require(cfg.alpha >= 0.0, "config: alpha must be >= 0" + where(e->line));
        }
        if (Entry* e = find(model, "beta")) {
            cfg.beta = parse_num(e->value, e->line, "beta");
            require(cfg.beta >= 0.0, "config: beta must be >= 0" + where(e->line));
        }
        if (Entry* e = find(model, "epsilon")) {
            cfg.epsilon = parse_num(e->value, e->line, "epsilon");
            require(cfg.epsilon >= 0.0, "config: epsilon must be >= 0" + where(e->line));
        }
        if (Entry* e = find(model, "kernel")) {
            cfg.kernel_shared = true;
            cfg.shared_kernel = parse_kernel_value(e->value, e->line, "kernel");
        }
        for (size_t i = 0; i < cfg.compartments.size(); ++i) {
            for (size_t j = 0; j < cfg.compartments.size(); ++j) {
                std::string pair = cfg.compartments[i] + "." + cfg.compartments[j];
                if (Entry* e = find(model, "kernel." + pair)) {
                    require(!cfg.kernel_shared,
                            "config: kernel." + pair + ": per-pair kernels conflict with the shared 'kernel' key" + where(e->line));
                    cfg.pair_kernels[pair] = parse_kernel_value(e->value, e->line, "kernel." + pair);
                }
            }
        }
        if (!cfg.kernel_shared) {
            require(cfg.kind != "sis", "config: sis models take one shared 'kernel' key");
            for (size_t i = 0; i < cfg.compartments.size(); ++i)
                for (size_t j = 0; j < cfg.compartments.size(); ++j) {
                    std::string pair = cfg.compartments[i] + "." + cfg.compartments[j];
                    require(cfg.pair_kernels.count(pair), "config: missing kernel." + pair);
                }
        }
    }
    finish_section(model, "model");

    // [init]
    {
        require(sections.count("init"), "config: missing [init] section");
        Section& init = sections["init"];
        for (const auto& name : cfg.compartments) {
            Entry& e = need(init, name, "init");
            cfg.init[name] = parse_profile(e.value, e.line, "init." + name, cfg.dim);
        }
        finish_section(init, "init");
    }

    // [solver]
    {
        Entry& tf = need(solver, "t_final", "solver");
        cfg.t_final = parse_num(tf.value, tf.line, "t_final");
        require(cfg.t_final >= 0.0, "config: t_final must be >= 0" + where(tf.line));
        Entry* dt = find(solver, "dt");
        Entry* cfl = find(solver, "cfl");
        require((dt != nullptr) != (cfl != nullptr), "config: set exactly one of dt / cfl in [solver]");
        if (dt) {
            cfg.dt = parse_num(dt->value, dt->line, "dt");
            require(cfg.dt > 0.0, "config: dt must be > 0" + where(dt->line));
        }
        if (cfl) {
            cfg.cfl = parse_num(cfl->value, cfl->line, "cfl");
            require(cfg.cfl > 0.0 && cfg.cfl <= 1.0, "config: cfl must be in (0,1]" + where(cfl->line));
        }
        if (Entry* e = find(solver, "rk")) {
            require(e->value == "ssp2" || e->value == "ssp3", "config: rk must be ssp2 or ssp3" + where(e->line));
            cfg.rk = e->value;
        }
        if (Entry* e = find(solver, "snapshot_every")) {
            cfg.snapshot_every = parse_int(e->value, e->line, "snapshot_every");
            require(cfg.snapshot_every >= 0, "config: snapshot_every must be >= 0" + where(e->line));
        }
        if (Entry* e = find(solver, "strict")) cfg.strict_cfl = parse_bool(e->value, e->line, "strict");
        finish_section(solver, "solver");
    }

    // [output]
    if (sections.count("output")) {
        Section& output = sections["output"];
        if (Entry* e = find(output, "directory")) cfg.directory = e->value;
        if (Entry* e = find(output, "prefix")) cfg.prefix = e->value;
        finish_section(output, "output");
    }

    // [study]
    if (sections.count("study")) {
        Section& study = sections["study"];
        if (Entry* e = find(study, "eps")) cfg.study_eps = parse_num_list(e->value, e->line, "study.eps");
        if (Entry* e = find(study, "dx")) cfg.study_dx = parse_num_list(e->value, e->line, "study.dx");
        if (Entry* e = find(study, "t_final")) {
            cfg.study_t_final = parse_num(e->value, e->line, "study.t_final");
            require(cfg.study_t_final >= 0.0, "config: study.t_final must be >= 0" + where(e->line));
        }
        finish_section(study, "study");
    }

    // Cross-checks that do not need building.
    for (int i = 0; i < cfg.dim; ++i) {
        require(cfg.hi[i] > cfg.lo[i], "config: grid: hi must exceed lo");
        require(cfg.n[i] >= 4, "config: grid: n must be >= 4");
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

std::string fmt(double v) { return csv::format_double(v); }

std::string vec_str(const std::array<double, 2>& v, int dim) {
    std::string s = fmt(v[0]);
    if (dim == 2) s += " " + fmt(v[1]);
    return s;
}

std::string kernel_str(const KernelConfig& kc) {
    switch (kc.kind) {
        case KernelConfig::Kind::zero:
            return "zero";
        case KernelConfig::Kind::quadabs:
            return "quadabs(gamma=" + fmt(kc.gamma) + ")";
        case KernelConfig::Kind::gaussian:
            return "gaussian(amplitude=" + fmt(kc.amplitude) + ", sigma=" + fmt(kc.sigma) +
                   ", sign=" + (kc.attractive ? "attractive" : "repulsive") + ")";
        case KernelConfig::Kind::tabulated:
            return "tabulated(file=" + kc.file + ")";
    }
    return "zero";
}

std::string profile_str(const ProfileSpec& p, int dim) {
    switch (p.kind) {
        case ProfileSpec::Kind::indicator:
            return "indicator(lo=" + vec_str(p.lo, dim) + ", hi=" + vec_str(p.hi, dim) +
                   ", value=" + fmt(p.value) + ")";
        case ProfileSpec::Kind::gaussian:
            return "gaussian(center=" + vec_str(p.center, dim) + ", width=" + fmt(p.width) +
                   ", mass=" + fmt(p.mass) + ")";
        case ProfileSpec::Kind::constant:
            return "constant(value=" + fmt(p.value) + ")";
    }
    return "constant(value=0)";
}

}  // namespace

std::string print_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[model]\n";
    out << "kind = " << cfg.kind << "\n";
    if (cfg.kind == "generic") {
        out << "compartments =";
        for (const auto& c : cfg.compartments) out << " " << c;
        out << "\n";
    }
    out << "alpha = " << fmt(cfg.alpha) << "\n";
    out << "beta = " << fmt(cfg.beta) << "\n";
    out << "epsilon = " << fmt(cfg.epsilon) << "\n";
    if (cfg.kernel_shared) {
        out << "kernel = " << kernel_str(cfg.shared_kernel) << "\n";
    } else {
        for (const auto& a : cfg.compartments)
            for (const auto& b : cfg.compartments) {
                std::string pair = a + "." + b;
                out << "kernel." << pair << " = " << kernel_str(cfg.pair_kernels.at(pair)) << "\n";
            }
    }
    out << "\n[grid]\n";
    out << "dim = " << cfg.dim << "\n";
    out << "lo = " << vec_str(cfg.lo, cfg.dim) << "\n";
    out << "hi = " << vec_str(cfg.hi, cfg.dim) << "\n";
    out << "n = " << cfg.n[0];
    if (cfg.dim == 2) out << " " << cfg.n[1];
    out << "\n";
    out << "\n[init]\n";
    for (const auto& name : cfg.compartments)
        out << name << " = " << profile_str(cfg.init.at(name), cfg.dim) << "\n";
    out << "\n[solver]\n";
    out << "t_final = " << fmt(cfg.t_final) << "\n";
    if (cfg.dt > 0.0) out << "dt = " << fmt(cfg.dt) << "\n";
    if (cfg.cfl > 0.0) out << "cfl = " << fmt(cfg.cfl) << "\n";
    out << "rk = " << cfg.rk << "\n";
    out << "snapshot_every = " << cfg.snapshot_every << "\n";
    out << "strict = " << (cfg.strict_cfl ? "true" : "false") << "\n";
    out << "\n[output]\n";
    if (!cfg.directory.empty()) out << "directory = " << cfg.directory << "\n";
    out << "prefix = " << cfg.prefix << "\n";
    if (!cfg.study_eps.empty() || !cfg.study_dx.empty() || cfg.study_t_final >= 0.0) {
        out << "\n[study]\n";
        if (!cfg.study_eps.empty()) {
            out << "eps =";
            for (double e : cfg.study_eps) out << " " << fmt(e);
            out << "\n";
        }
        if (!cfg.study_dx.empty()) {
            out << "dx =";
            for (double d : cfg.study_dx) out << " " << fmt(d);
            out << "\n";
        }
        if (cfg.study_t_final >= 0.0) out << "t_final = " << fmt(cfg.study_t_final) << "\n";
    }
    return out.str();
}

KernelSpec build_kernel(const KernelConfig& kc) {
    switch (kc.kind) {
        case KernelConfig::Kind::zero:
            return ZeroKernel{};
        case KernelConfig::Kind::quadabs:
            require(kc.gamma > 0.0, "config: quadabs kernel needs gamma > 0");
            return QuadAbsKernel{kc.gamma};
        case KernelConfig::Kind::gaussian:
            require(kc.amplitude >= 0.0, "config: gaussian kernel needs amplitude >= 0");
            require(kc.sigma > 0.0, "config: gaussian kernel needs sigma > 0");
            return GaussianKernel{kc.amplitude, kc.sigma,
                                  kc.attractive ? GaussSign::attractive : GaussSign::repulsive};
        case KernelConfig::Kind::tabulated:
            return load_tabulated_csv(kc.file);
    }
    return ZeroKernel{};
}

Grid build_grid_from(const RunConfig& cfg) {
    if (cfg.dim == 1) return build_grid(cfg.lo[0], cfg.hi[0], cfg.n[0]);
    return build_grid(cfg.lo, cfg.hi, cfg.n);
}

ModelSpec build_model(const RunConfig& cfg) {
    if (cfg.dim == 2) {
        auto reject_quadabs = [](const KernelConfig& kc) {
            require(kc.kind != KernelConfig::Kind::quadabs, "config: quadabs kernels are 1D only");
        };
        if (cfg.kernel_shared) reject_quadabs(cfg.shared_kernel);
        for (const auto& [pair, kc] : cfg.pair_kernels) reject_quadabs(kc);
    }
    if (cfg.kind == "sis") {
        require(cfg.kernel_shared, "config: sis models take one shared 'kernel' key");
        return make_sis(cfg.alpha, cfg.beta, build_kernel(cfg.shared_kernel), cfg.epsilon);
    }
    KernelMatrix km;
    if (cfg.kernel_shared) {
        km = KernelMatrix::uniform(cfg.compartments, build_kernel(cfg.shared_kernel));
    } else {
        std::vector<KernelSpec> entries;
        for (const auto& a : cfg.compartments)
            for (const auto& b : cfg.compartments)
                entries.push_back(build_kernel(cfg.pair_kernels.at(a + "." + b)));
        km = KernelMatrix::from_entries(cfg.compartments, std::move(entries));
    }
    if (cfg.kind == "sir") return make_sir(cfg.alpha, cfg.beta, std::move(km), cfg.epsilon);
    // generic: transport-only reaction; programmatic models can pass any
    // C^1 map through make_generic directly.
    GenericC1Reaction none;
    none.g = [](std::span<const double>, std::span<double> rates) {
        for (auto& r : rates) r = 0.0;
    };
    return make_generic(cfg.compartments, std::move(km), std::move(none), cfg.epsilon);
}

namespace {

std::function<double(double)> profile_fn_1d(const ProfileSpec& p) {
    switch (p.kind) {
        case ProfileSpec::Kind::indicator:
            return [p](double x) { return (x >= p.lo[0] && x <= p.hi[0]) ? p.value : 0.0; };
        case ProfileSpec::Kind::gaussian: {
            double norm = p.mass / (p.width * std::sqrt(2.0 * M_PI));
            return [p, norm](double x) {
                double z = (x - p.center[0]) / p.width;
                return norm * std::exp(-0.5 * z * z);
            };
        }
        case ProfileSpec::Kind::constant:
            return [p](double) { return p.value; };
    }
    return [](double) { return 0.0; };
}

std::function<double(double, double)> profile_fn_2d(const ProfileSpec& p) {
    switch (p.kind) {
        case ProfileSpec::Kind::indicator:
            return [p](double x, double y) {
                return (x >= p.lo[0] && x <= p.hi[0] && y >= p.lo[1] && y <= p.hi[1]) ? p.value : 0.0;
            };
        case ProfileSpec::Kind::gaussian: {
            double norm = p.mass / (2.0 * M_PI * p.width * p.width);
            return [p, norm](double x, double y) {
                double zx = (x - p.center[0]) / p.width;
                double zy = (y - p.center[1]) / p.width;
                return norm * std::exp(-0.5 * (zx * zx + zy * zy));
            };
        }
        case ProfileSpec::Kind::constant:
            return [p](double, double) { return p.value; };
    }
    return [](double, double) { return 0.0; };
}

}  // namespace

State build_initial_state(const RunConfig& cfg, const Grid& grid) {
    State s;
    for (const auto& name : cfg.compartments) {
        const ProfileSpec& p = cfg.init.at(name);
        require(p.kind != ProfileSpec::Kind::indicator || p.value >= 0.0,
                "config: init." + name + ": negative density");
        require(p.kind != ProfileSpec::Kind::constant || p.value >= 0.0,
                "config: init." + name + ": negative density");
        require(p.kind != ProfileSpec::Kind::gaussian || (p.mass >= 0.0 && p.width > 0.0),
                "config: init." + name + ": gaussian needs mass >= 0 and width > 0");
        if (grid.dim == 1)
            s.fields.push_back(project_function(grid, profile_fn_1d(p)));
        else
            s.fields.push_back(project_function(grid, profile_fn_2d(p)));
    }
    return s;
}

SolverConfig build_solver_config(const RunConfig& cfg) {
    SolverConfig sc;
    sc.t_final = cfg.t_final;
    sc.dt = cfg.dt;
    sc.cfl = cfg.cfl;
    sc.rk = cfg.rk == "ssp3" ? RkScheme::ssp3 : RkScheme::ssp2;
    sc.snapshot_every = cfg.snapshot_every;
    sc.strict_cfl = cfg.strict_cfl;
    return sc;
}

}  // namespace nlepi
