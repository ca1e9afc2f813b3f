#pragma once

#include "wallflux/spectral.hpp"

namespace wallflux {

// How the first-order admittance correction re-enters the flux computation.
//   exterior_only       — Y1 only corrects the exterior closure quotient.
//   corrected_chain     — transfer factors recomputed from Y_j + Y1_j.
//   gradient_quadrature — per-layer transfer rebuilt from the corrected local
//                         admittance field and the exact conductivity profile
//                         via the identity 1/g = exp(int Y(z)/lambda(z) dz).
enum class RecombinationVariant { exterior_only, corrected_chain, gradient_quadrature };

struct PerturbedLayerSolution {
    cplx A_tilde{0.0, 0.0};
    cplx B_tilde{0.0, 0.0};
    cplx J{0.0, 0.0};
    cplx Y1_at_exterior{0.0, 0.0};
};

// Local bounded amplitudes of the zero-order field in one layer:
//   T0(z) = A~ e^{-q(e-z)} + B~ e^{-qz}.
std::pair<cplx, cplx> bounded_amplitudes(cplx T_inner, cplx T_outer, cplx q, double thickness);

// Closed-form layer source integral J = J_res + J_cap in the bounded basis;
// only e^{-qe}, e^{-2qe}, e^{beta e} and polynomial factors appear. The
// removable pole beta ~ +-2q is series-expanded.
cplx layer_perturbation_integral(cplx A_tilde, cplx B_tilde, const Layer& layer, double omega);

// Y1_j = g_j^2 Y1_{j-1} + J_j / T0_outer^2, with a threshold guard on the
// outer interface amplitude.
cplx propagate_perturbation(cplx Y1_prev, cplx g, cplx T0_outer, cplx J,
                            double tau_noise = 1e-6);

// Exact stationary resistance of an exponentially graded layer,
// (1 - e^{-beta e}) / (beta lambda_0); beta -> 0 limit is e / lambda_0.
double exact_stationary_resistance(const Layer& layer);

// Per-layer stationary resistances using the gradient-exact closed form.
std::vector<double> exact_layer_resistances(const WallAssembly& assembly);

// Zero-order interface state plus the propagated first-order correction at a
// single harmonic, under unit sol-air excitation.
struct PerturbedChain {
    std::vector<cplx> Y;  // zero-order interface admittances, length N+1
    std::vector<cplx> Y1; // first-order corrections, length N+1 (Y1[0] = 0)
    std::vector<cplx> g;  // zero-order transfer factors, length N
    std::vector<cplx> T;  // zero-order interface temperatures, length N+1
};

PerturbedChain perturbed_chain(const WallAssembly& assembly, double omega,
                               double tau_noise = 1e-6);

// Corrected global transfer G and exterior driving-point admittance Y_N + Y1_N
// for the chosen recombination variant.
struct CorrectedTransfer {
    cplx G{1.0, 0.0};
    cplx Y_N{0.0, 0.0};
};

CorrectedTransfer corrected_transfer(const WallAssembly& assembly, double omega,
                                     RecombinationVariant variant,
                                     double tau_noise = 1e-6);

// Relative first-order truncation bound at one harmonic: |int lambda_0 T0'^2
// eps^2/(1+eps) dz| over the gradient layers, normalized by the zero-order
// transmitted quantity |T_surf|^2 |Y_N|.
double truncation_error_bound(const WallAssembly& assembly, double omega);

// First-order-corrected transient simulation.
SimulationResult simulate_perturbed(const WallAssembly& assembly, const std::vector<double>& T_sa,
                                    const std::vector<double>& T_in, double dt,
                                    const SimConfig& config,
                                    RecombinationVariant variant =
                                        RecombinationVariant::gradient_quadrature,
                                    int threads = 1);

// 64-point Gauss-Legendre nodes/weights on [-1, 1] (shared with the oracles).
const std::vector<std::pair<double, double>>& gauss_legendre_64();

} // namespace wallflux
