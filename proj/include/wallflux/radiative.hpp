#pragma once

#include <limits>

#include "wallflux/spectral.hpp"

namespace wallflux {

inline constexpr double stefan_boltzmann = 5.670e-8; // [W/(m^2 K^4)]
inline constexpr double celsius_offset = 273.15;

struct RadiativeConfig {
    double emissivity = 0.0;
    double sigma = stefan_boltzmann;
    // Linearization temperature; NaN means "use the horizon-mean air
    // temperature in Kelvin".
    double T_lin_K = std::numeric_limits<double>::quiet_NaN();
    double tau_noise_K = 1e-6;

    void validate() const;
    double resolved_T_lin(const std::vector<double>& T_air_C) const;
};

// h_rad = 4 eps sigma T_lin^3.
double linearized_h_rad(const RadiativeConfig& config);

// DeltaPhi(t) = eps sigma (T_s^4 - T_sky^4) - h_rad (T_s - T_sky), series in K.
std::vector<double> radiative_residual(const std::vector<double>& T_surf0_K,
                                       const std::vector<double>& T_sky_K,
                                       const RadiativeConfig& config);

// Per-harmonic Y1_N = residual / surface, gated by |surface| >= tau_noise.
std::vector<cplx> pseudo_admittance(const std::vector<cplx>& residual_spectrum,
                                    const std::vector<cplx>& surface_spectrum, double tau_noise);

struct RadiativeSimulationResult {
    SimulationResult sim;
    std::vector<double> t_surf0;   // zero-order exterior surface, post-warm-up [degC]
    std::vector<double> residual;  // post-warm-up residual series [W/m^2]
    std::size_t gated_bins = 0;    // bins zeroed by the tau_noise gate
};

// Single-pass (non-iterative) nonlinear-sky correction: zero-order pass, time
// domain residual on the zero-order surface, pseudo-admittance injected into
// the exterior closure of a second frequency-domain pass; the residual's mean
// and trend re-enter as an equivalent sol-air shift through the stationary
// path.
RadiativeSimulationResult simulate_radiative(const WallAssembly& assembly,
                                             const std::vector<double>& T_sa,
                                             const std::vector<double>& T_sky_C,
                                             const std::vector<double>& T_in, double dt,
                                             const SimConfig& sim_config,
                                             const RadiativeConfig& rad_config, int threads = 1);

// Zero-order exterior-surface temperature on the full padded horizon plus the
// matching interior result (shared by the single-pass path and the iterative
// oracle).
struct SurfacePass {
    PreparedForcing forcing;
    std::vector<double> t_surf_padded; // exterior surface [degC], padded horizon
    std::vector<double> t_si_padded;   // interior surface [degC], padded horizon
};

SurfacePass zero_order_surface_pass(const WallAssembly& assembly, const std::vector<double>& T_sa,
                                    const std::vector<double>& T_in, double dt,
                                    const SimConfig& config, int threads);

} // namespace wallflux
