#include "nlepi/models.hpp"

#include <cmath>

namespace nlepi {

namespace {

void check_rates(double alpha, double beta, double epsilon) {
    require(alpha >= 0.0 && std::isfinite(alpha), "model: negative or non-finite alpha");
    require(beta >= 0.0 && std::isfinite(beta), "model: negative or non-finite beta");
    require(epsilon >= 0.0 && std::isfinite(epsilon), "model: negative or non-finite epsilon");
}

// Finite-difference probe: the local Jacobian of g must be finite at a few
// sample points of the nonnegative orthant.
void probe_generic(const GenericC1Reaction& r, int n) {
    require(static_cast<bool>(r.g), "generic reaction: missing rate function");
    const double h = 1e-6;
    std::vector<double> u(n), up(n), rate0(n), rate1(n);
    const double samples[] = {0.0, 0.5, 1.3};
    for (double s : samples) {
        for (int i = 0; i < n; ++i) u[i] = s + 0.1 * i;
        r.g(u, rate0);
        for (int i = 0; i < n; ++i)
            require(std::isfinite(rate0[i]), "generic reaction: non-finite rate in smoothness probe");
        for (int k = 0; k < n; ++k) {
            up = u;
            up[k] += h;
            r.g(up, rate1);
            for (int i = 0; i < n; ++i) {
                double jac = (rate1[i] - rate0[i]) / h;
                require(std::isfinite(jac),
                        "generic reaction: non-finite Jacobian entry in smoothness probe");
            }
        }
    }
}

}  // namespace

ModelSpec make_sir(double alpha, double beta, KernelMatrix km, double epsilon) {
    check_rates(alpha, beta, epsilon);
    require(km.count() == 3, "make_sir: kernel matrix must have exactly 3 compartments");
    require(km.compartments == std::vector<std::string>({"S", "I", "R"}),
            "make_sir: compartments must be S,I,R");
    ModelSpec m;
    m.compartments = km.compartments;
    m.kernel_matrix = std::move(km);
    m.reaction = SirReaction{};
    m.alpha = alpha;
    m.beta = beta;
    m.epsilon = epsilon;
    return m;
}

ModelSpec make_sis(double alpha, double beta, KernelSpec shared_kernel, double epsilon) {
    check_rates(alpha, beta, epsilon);
    ModelSpec m;
    m.compartments = {"S", "I"};
    m.kernel_matrix = KernelMatrix::uniform(m.compartments, std::move(shared_kernel));
    m.reaction = SisReaction{};
    m.alpha = alpha;
    m.beta = beta;
    m.epsilon = epsilon;
    return m;
}

ModelSpec make_generic(std::vector<std::string> compartments, KernelMatrix km,
                       GenericC1Reaction reaction, double epsilon) {
    require(!compartments.empty(), "make_generic: empty compartment list");
    require(km.compartments == compartments, "make_generic: kernel matrix arity mismatch");
    require(epsilon >= 0.0 && std::isfinite(epsilon), "model: negative or non-finite epsilon");
    probe_generic(reaction, static_cast<int>(compartments.size()));
    ModelSpec m;
    m.compartments = std::move(compartments);
    m.kernel_matrix = std::move(km);
    m.reaction = std::move(reaction);
    return m;
}

void reaction_rates(const ModelSpec& model, std::span<const double> u, std::span<double> rates) {
    const int n = model.compartment_count();
    require(static_cast<int>(u.size()) == n && static_cast<int>(rates.size()) == n,
            "reaction_rates: arity mismatch");
    if (std::holds_alternative<SirReaction>(model.reaction)) {
        double inc = model.beta * u[0] * u[1];
        double rec = model.alpha * u[1];
        rates[0] = -inc;
        rates[1] = inc - rec;
        rates[2] = rec;
    } else if (std::holds_alternative<SisReaction>(model.reaction)) {
        double inc = model.beta * u[0] * u[1];
        double rec = model.alpha * u[1];
        rates[0] = rec - inc;
        rates[1] = inc - rec;
    } else {
        std::get<GenericC1Reaction>(model.reaction).g(u, rates);
    }
}

std::vector<double> reaction_rates(const ModelSpec& model, const std::vector<double>& u) {
    std::vector<double> rates(model.compartment_count());
    reaction_rates(model, u, rates);
    return rates;
}

}  // namespace nlepi
