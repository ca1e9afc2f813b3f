#pragma once

#include <functional>

#include "wallflux/core.hpp"
#include "wallflux/propagator.hpp"

namespace wallflux {

struct SimConfig {
    double warmup_duration_s = 0.0;
    bool detrend = true;
    double solar_absorptivity = 0.6;
    double noise_threshold_K = 1e-6;

    void validate() const;
};

struct SimulationResult {
    std::vector<double> t_si;   // interior surface temperature, post-warm-up [degC]
    std::vector<double> phi_in; // heating demand h_int (T_in - T_si) [W/m^2]
    std::vector<double> gain_abs; // |G(omega_k)| per dynamic harmonic (diagnostic)
    double wall_time_ms = 0.0;
};

// Normalized half-spectrum DFT: X_k = (1/M) sum_n x_n e^{-2 pi i k n / M},
// k = 0..M/2. Amplitudes stay in the units of the samples regardless of M.
std::vector<cplx> forward_transform(const std::vector<double>& samples);

// Real reconstruction from the Hermitian half (factor 2 on interior bins,
// 1 on DC and — for even M — the Nyquist bin).
std::vector<double> inverse_transform(const std::vector<cplx>& spectrum, std::size_t M);

struct LinearTrend {
    double intercept = 0.0;
    double slope = 0.0; // per sample
};

// Least-squares line removal; returns the residual and the removed trend.
LinearTrend detrend_linear(std::vector<double>& samples);

// Prepends warm-up history by periodic replication of the earliest day.
std::vector<double> pad_history(const std::vector<double>& samples, std::size_t warm_n,
                                std::size_t samples_per_day);

// Advisory fundamental-mode estimate (sum R)(sum C)/pi^2; never load-bearing.
double dominant_time_constant(const WallAssembly& assembly);

// T_sa = T_air + a_s G / h_ext.
double sol_air(double T_air_C, double G_solar, double h_ext, double solar_absorptivity);

// Forcing series after padding, detrending and transforming; shared by every
// frequency-domain pass.
struct PreparedForcing {
    std::size_t M = 0;      // padded length
    std::size_t warm_n = 0; // number of warm-up samples to crop
    double dt = 0.0;
    std::vector<double> Tsa_padded, Tin_padded;
    std::vector<cplx> Ssa, Sin; // spectra of the detrended padded series
    LinearTrend trend_sa, trend_in;

    double omega(std::size_t k) const;
};

PreparedForcing prepare_forcing(const std::vector<double>& T_sa, const std::vector<double>& T_in,
                                double dt, const SimConfig& config);

// One output series of a frequency-domain pass. `H_sa`/`H_in` map the two
// boundary spectra to the output per dynamic bin; `H_sa_smooth`/`H_in_smooth`
// are the same responses as smooth functions of omega, probed near zero for
// the first-order (group-delay) trend term; `stationary` maps instantaneous
// trend values through the resistance network.
struct HarmonicResponse {
    std::function<cplx(std::size_t k, double omega)> H_sa;
    std::function<cplx(std::size_t k, double omega)> H_in;
    std::function<cplx(double omega)> H_sa_smooth;
    std::function<cplx(double omega)> H_in_smooth;
    std::function<double(double T_sa, double T_in)> stationary;
};

// Full padded-horizon reconstruction: dynamic bins + stationary trend +
// group-delay correction. Throws NumericalError on any non-finite harmonic.
std::vector<double> reconstruct_series(const PreparedForcing& forcing,
                                       const HarmonicResponse& response, int threads);

// Zero-order LTI simulation of the assembly.
SimulationResult simulate(const WallAssembly& assembly, const std::vector<double>& T_sa,
                          const std::vector<double>& T_in, double dt, const SimConfig& config,
                          int threads = 1);

// Zero-order harmonic response of an assembly (used by simulate and by the
// correction modules): fills a HarmonicResponse for the interior surface or
// for the exterior surface.
HarmonicResponse interior_response(const WallAssembly& assembly,
                                   const std::vector<double>& resistances);
HarmonicResponse exterior_surface_response(const WallAssembly& assembly,
                                           const std::vector<double>& resistances);

// Chunked parallel map over [0, n); threads <= 1 runs inline.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

// Resolves a --threads request: 0 means WALLFLUX_THREADS or hardware count.
int resolve_threads(int requested);

} // namespace wallflux
