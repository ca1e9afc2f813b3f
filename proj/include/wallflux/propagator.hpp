#pragma once

#include "wallflux/core.hpp"

namespace wallflux {

enum class ChainDirection { outward, inward };

// Interface admittances Y_0..Y_N along one traversal of the assembly.
struct AdmittanceChain {
    ChainDirection direction = ChainDirection::outward;
    double omega = 0.0;
    std::vector<cplx> values; // length = layers + 1
};

// Per-layer transfer factors g_j and their product G(omega).
struct TransferChain {
    double omega = 0.0;
    std::vector<cplx> factors;
    cplx global{1.0, 0.0};
};

struct ChainWithTransfer {
    AdmittanceChain chain;
    TransferChain transfer;
};

// Bounded-exponential admittance update across one layer (omega > 0):
//   Y = Y_c (Y_prev (1+E) + Y_c (1-E)) / (Y_c (1+E) + Y_prev (1-E)),  E = e^{-2qe}.
// Finite for arbitrarily large Re(qe); converges to Y_c in the thick limit.
cplx propagate_layer(cplx Y_prev, const Layer& layer, double omega);

// Steady-state series-resistance update, 1/(1/Y_prev + e/lambda).
double propagate_layer_stationary(double Y_prev, const Layer& layer);

// Mobius/tanh form of the same one-layer update; reference implementation for
// the equivalence checks, not used on the main path.
cplx propagate_layer_tanh(cplx Y_prev, const Layer& layer, double omega);

// Y_0 = h_int, then layer-by-layer outward. omega = 0 dispatches to the
// stationary update.
AdmittanceChain forward_chain(const WallAssembly& assembly, double omega);

// Mirror traversal: starts at h_ext and walks inward over the reversed layers.
AdmittanceChain backward_chain(const WallAssembly& assembly, double omega);

// Bounded transfer factor g_j = T(x_{j-1}) / T(x_j) given the inner-interface
// admittance from the forward chain.
cplx layer_transfer_factor(cplx Y_prev, const Layer& layer, double omega);

// Forward chain and transfer factors in one interior->exterior pass.
ChainWithTransfer global_transfer(const WallAssembly& assembly, double omega);

// State A closure: T_surf = h_ext / (h_ext + Y_N) * T_sa.
cplx state_A_surface(cplx Y_N, double h_ext, cplx T_sa);

// Interior-surface response to indoor excitation with the exterior grounded,
// via assembly mirroring: T_si_B = h_int / (h_int + Ybw_0) * T_in.
cplx state_B_response(const WallAssembly& assembly, double omega, cplx T_in);

// Eq-of-motion closure: T_si = G * state_A_surface + state_B_response;
// omega = 0 goes through the stationary resistance network.
cplx superpose(const WallAssembly& assembly, double omega, cplx T_sa, cplx T_in);

// Per-layer stationary resistances e/lambda (inner-face conductivity); the
// gradient-exact variant lives in the perturbation module.
std::vector<double> layer_resistances(const WallAssembly& assembly);

// Interior surface temperature of the stationary resistance network.
double stationary_interior_temperature(const std::vector<double>& resistances, double h_int,
                                       double h_ext, double T_sa, double T_in);

} // namespace wallflux
