#pragma once

#include <variant>

#include "wallflux/radiative.hpp"

namespace wallflux {

// [[cosh(qe), sinh(qe)/(lambda q)], [lambda q sinh(qe), cosh(qe)]]
struct TmmMatrix {
    cplx a, b, c, d;
};

struct OverflowReport {
    double max_re_qe = 0.0;
    int layer_index = -1;
};

using TmmLayerResult = std::variant<TmmMatrix, OverflowReport>;
using TmmAdmittanceResult = std::variant<cplx, OverflowReport>;

// Direct hyperbolic evaluation; non-finite entries become an OverflowReport,
// never a silently propagated inf/nan.
TmmLayerResult tmm_layer_matrix(const Layer& layer, double omega);

// Cascades the layer matrices over [T, U] starting from Y_0 = h_int and closes
// with the exterior quotient; finiteness is checked after every step.
TmmAdmittanceResult tmm_admittance(const WallAssembly& assembly, double omega);

// Critical thickness e* = 709 / Re(q) at which the TMM overflows.
double overflow_boundary(double alpha, double period_s);

// Gradient layers replaced by slices_per_layer homogeneous sub-layers with
// midpoint-sampled properties; homogeneous layers pass through unchanged.
WallAssembly sliced_assembly(const WallAssembly& assembly, int slices_per_layer);

struct SlicedOracleResult {
    AdmittanceChain chain;          // over the flattened sub-layer list
    TransferChain transfer;
    std::vector<cplx> interface_T;  // zero-order interface temperatures, unit sol-air
};

SlicedOracleResult sliced_oracle_admittance(const WallAssembly& assembly, double omega,
                                            int slices_per_layer);

// Transient simulation over the sliced assembly (ground truth for the
// perturbation benchmarks).
SimulationResult simulate_sliced(const WallAssembly& assembly, const std::vector<double>& T_sa,
                                 const std::vector<double>& T_in, double dt,
                                 const SimConfig& config, int slices_per_layer,
                                 int threads = 1);

struct IterativeRadiativeResult {
    SimulationResult sim;
    std::vector<double> t_surf; // converged exterior surface, post-warm-up [degC]
    int iterations = 0;
    bool converged = false;
};

// Fixed-point iteration on the exterior surface energy balance with exact T^4
// exchange: each sweep re-runs the frequency-domain pass with the updated
// residual folded into the sol-air temperature, until the surface moves by
// less than tol_K (default 1e-4 K) or max_sweeps is hit.
IterativeRadiativeResult iterative_radiative_oracle(const WallAssembly& assembly,
                                                    const std::vector<double>& T_sa,
                                                    const std::vector<double>& T_sky_C,
                                                    const std::vector<double>& T_in, double dt,
                                                    const SimConfig& sim_config,
                                                    const RadiativeConfig& rad_config,
                                                    double tol_K = 1e-4, int max_sweeps = 20,
                                                    int threads = 1);

// Explicit-scheme stability diagnostic Fo = alpha dt / dx^2 (informative only).
struct FourierNumber {
    double value = 0.0;
    bool stable = false; // Fo <= 0.5
};

FourierNumber fourier_number(const Layer& layer, double dt, double dx);

} // namespace wallflux
