// Compartment-model descriptors: reaction terms, rate constants, kernel
// matrix, artificial diffusion.
//
// Reactions (mass-action incidence, rates in units of density/time):
//   SIR, compartments (S,I,R):  (-beta*S*I, beta*S*I - alpha*I, alpha*I)
//   SIS, compartments (S,I):    (-beta*S*I + alpha*I, beta*S*I - alpha*I)
//   Generic: any pointwise C^1 map of the compartment values; a finite-
//   difference probe at construction rejects maps with non-finite local
//   Jacobians.
// SIR and SIS rates sum to zero over compartments, and every rate is
// nonnegative on the face of the positive orthant where its compartment
// vanishes; these two facts drive mass conservation and positivity of the
// full transport-reaction system.
#pragma once

#include <functional>
#include <span>
#include <variant>

#include "nlepi/kernels.hpp"

namespace nlepi {

struct SirReaction {};
struct SisReaction {};
struct GenericC1Reaction {
    // rates = g(u); writes one rate per compartment.
    std::function<void(std::span<const double> u, std::span<double> rates)> g;
};

using ReactionKind = std::variant<SirReaction, SisReaction, GenericC1Reaction>;

struct ModelSpec {
    std::vector<std::string> compartments;
    KernelMatrix kernel_matrix;
    ReactionKind reaction;
    double alpha = 0.0;    // recovery rate, 1/time
    double beta = 0.0;     // transmission rate, 1/(density*time)
    double epsilon = 0.0;  // artificial diffusion, length^2/time

    int compartment_count() const { return static_cast<int>(compartments.size()); }
};

// 3-compartment SIR; km must carry exactly the compartments S,I,R.
ModelSpec make_sir(double alpha, double beta, KernelMatrix km, double epsilon);

// 2-compartment SIS with one kernel shared by all four pairs.
ModelSpec make_sis(double alpha, double beta, KernelSpec shared_kernel, double epsilon);

// N-species model with a user reaction (or none). The reaction map is
// probed for C^1 smoothness at a few sample points.
ModelSpec make_generic(std::vector<std::string> compartments, KernelMatrix km,
                       GenericC1Reaction reaction, double epsilon);

// Pointwise reaction rates at one spatial point.
void reaction_rates(const ModelSpec& model, std::span<const double> u, std::span<double> rates);
std::vector<double> reaction_rates(const ModelSpec& model, const std::vector<double>& u);

}  // namespace nlepi
