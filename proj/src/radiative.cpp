#include "wallflux/radiative.hpp"

#include <chrono>
#include <cmath>

namespace wallflux {

void RadiativeConfig::validate() const {
    if (!(emissivity >= 0.0 && emissivity <= 1.0))
        throw ValidationError("radiative: emissivity must be in [0, 1]");
    if (!std::isnan(T_lin_K) && !(T_lin_K > 0.0))
        throw ValidationError("radiative: linearization temperature must be > 0 K");
    if (!(sigma > 0.0)) throw ValidationError("radiative: sigma must be > 0");
    if (!(tau_noise_K > 0.0)) throw ValidationError("radiative: tau_noise must be > 0");
}

double RadiativeConfig::resolved_T_lin(const std::vector<double>& T_air_C) const {
    if (!std::isnan(T_lin_K)) return T_lin_K;
    double mean = 0.0;
    for (double v : T_air_C) mean += v;
    mean /= static_cast<double>(T_air_C.size());
    return mean + celsius_offset;
}

double linearized_h_rad(const RadiativeConfig& config) {
    const double T = std::isnan(config.T_lin_K) ? 0.0 : config.T_lin_K;
    return 4.0 * config.emissivity * config.sigma * T * T * T;
}

std::vector<double> radiative_residual(const std::vector<double>& T_surf0_K,
                                       const std::vector<double>& T_sky_K,
                                       const RadiativeConfig& config) {
    if (T_surf0_K.size() != T_sky_K.size())
        throw ValidationError("radiative_residual: series lengths differ");
    const double es = config.emissivity * config.sigma;
    const double h_rad = linearized_h_rad(config);
    std::vector<double> out(T_surf0_K.size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const double Ts = T_surf0_K[n], Tk = T_sky_K[n];
        out[n] = es * (Ts * Ts * Ts * Ts - Tk * Tk * Tk * Tk) - h_rad * (Ts - Tk);
    }
    return out;
}

std::vector<cplx> pseudo_admittance(const std::vector<cplx>& residual_spectrum,
                                    const std::vector<cplx>& surface_spectrum,
                                    double tau_noise) {
    if (residual_spectrum.size() != surface_spectrum.size())
        throw ValidationError("pseudo_admittance: spectra lengths differ");
    std::vector<cplx> out(residual_spectrum.size(), cplx{0.0, 0.0});
    for (std::size_t k = 0; k < out.size(); ++k)
        if (std::abs(surface_spectrum[k]) >= tau_noise)
            out[k] = residual_spectrum[k] / surface_spectrum[k];
    return out;
}

SurfacePass zero_order_surface_pass(const WallAssembly& assembly, const std::vector<double>& T_sa,
                                    const std::vector<double>& T_in, double dt,
                                    const SimConfig& config, int threads) {
    SurfacePass out;
    out.forcing = prepare_forcing(T_sa, T_in, dt, config);
    const std::vector<double> Rs = layer_resistances(assembly);
    out.t_surf_padded =
        reconstruct_series(out.forcing, exterior_surface_response(assembly, Rs), threads);
    out.t_si_padded = reconstruct_series(out.forcing, interior_response(assembly, Rs), threads);
    return out;
}

RadiativeSimulationResult simulate_radiative(const WallAssembly& assembly,
                                             const std::vector<double>& T_sa,
                                             const std::vector<double>& T_sky_C,
                                             const std::vector<double>& T_in, double dt,
                                             const SimConfig& sim_config,
                                             const RadiativeConfig& rad_config, int threads) {
    assembly.validate();
    RadiativeConfig rc = rad_config;
    if (std::isnan(rc.T_lin_K)) rc.T_lin_K = rc.resolved_T_lin(T_sa);
    rc.validate();
    if (T_sky_C.size() != T_sa.size())
        throw ValidationError("simulate_radiative: sky series length differs from forcing");
    const auto t0 = std::chrono::steady_clock::now();

    // Pass 1: zero-order surface and the nonlinear residual it implies.
    const SurfacePass zp = zero_order_surface_pass(assembly, T_sa, T_in, dt, sim_config, threads);
    const PreparedForcing& forcing = zp.forcing;
    const std::size_t warm_n = forcing.warm_n;
    const std::size_t active = forcing.M - warm_n;
    std::vector<double> surf_K(active), sky_K(active);
    for (std::size_t n = 0; n < active; ++n) {
        surf_K[n] = zp.t_surf_padded[warm_n + n] + celsius_offset;
        sky_K[n] = T_sky_C[n] + celsius_offset;
    }
    const std::vector<double> residual = radiative_residual(surf_K, sky_K, rc);

    // Spectra of the padded residual and zero-order surface series.
    const std::size_t day = static_cast<std::size_t>(std::llround(86400.0 / dt));
    std::vector<double> surf_active(zp.t_surf_padded.begin() +
                                        static_cast<std::ptrdiff_t>(warm_n),
                                    zp.t_surf_padded.end());
    std::vector<double> res_p = pad_history(residual, warm_n, day);
    std::vector<double> surf_p = pad_history(surf_active, warm_n, day);
    LinearTrend trend_res, trend_surf;
    if (sim_config.detrend) {
        trend_res = detrend_linear(res_p);
        trend_surf = detrend_linear(surf_p);
    }
    const std::vector<cplx> Rsp = forward_transform(res_p);
    const std::vector<cplx> Ssp = forward_transform(surf_p);
    const std::vector<cplx> Y1 = pseudo_admittance(Rsp, Ssp, rc.tau_noise_K);
    std::size_t gated = 0;
    for (std::size_t k = 1; k < Y1.size(); ++k)
        if (Y1[k] == cplx{0.0, 0.0}) ++gated;

    // Pass 2: corrected closure with the pseudo-admittance at the exterior
    // boundary; dynamic bins only — the residual's mean and trend re-enter
    // below as an equivalent sol-air shift.
    const std::size_t K = forcing.M / 2;
    std::vector<cplx> out_spec(K + 1, cplx{0.0, 0.0});
    parallel_for(K, threads, [&](std::size_t i) {
        const std::size_t k = i + 1;
        const double om = forcing.omega(k);
        const ChainWithTransfer fw = global_transfer(assembly, om);
        const cplx YN = fw.chain.values.back();
        const cplx TsA =
            assembly.h_ext / (assembly.h_ext + YN + Y1[k]) * forcing.Ssa[k];
        cplx Yb = cplx{assembly.h_ext, 0.0} + Y1[k];
        for (auto it = assembly.layers.rbegin(); it != assembly.layers.rend(); ++it)
            Yb = propagate_layer(Yb, *it, om);
        const cplx v = fw.transfer.global * TsA +
                       assembly.h_int / (assembly.h_int + Yb) * forcing.Sin[k];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericalError("simulate_radiative: non-finite response at omega = " +
                                 std::to_string(om));
        out_spec[k] = v;
    });
    std::vector<double> t_si_full = inverse_transform(out_spec, forcing.M);

    // Stationary trend path with group-delay terms; the residual's stationary
    // part is exactly equivalent to a sol-air shift of -residual/h_ext.
    const std::vector<double> Rs = layer_resistances(assembly);
    const HarmonicResponse zero = interior_response(assembly, Rs);
    const double H0_sa = zero.stationary(1.0, 0.0) - zero.stationary(0.0, 0.0);
    const double H0_in = zero.stationary(0.0, 1.0) - zero.stationary(0.0, 0.0);
    const double om1 = 1e-8;
    auto gd = [om1](const std::function<cplx(double)>& H, double H0) {
        auto D = [&](double om) { return (H(om) - H0) / (cplx{0.0, 1.0} * om); };
        return (2.0 * D(om1 / 2.0) - D(om1)).real();
    };
    const double D_sa = gd(zero.H_sa_smooth, H0_sa);
    const double D_in = gd(zero.H_in_smooth, H0_in);
    const double b_sa =
        (forcing.trend_sa.slope - trend_res.slope / assembly.h_ext) / dt;
    const double b_in = forcing.trend_in.slope / dt;
    for (std::size_t n = 0; n < forcing.M; ++n) {
        const double nd = static_cast<double>(n);
        const double r_stat = trend_res.intercept + trend_res.slope * nd + Rsp[0].real();
        const double tr_sa = forcing.trend_sa.intercept + forcing.trend_sa.slope * nd +
                             forcing.Ssa[0].real() - r_stat / assembly.h_ext;
        const double tr_in =
            forcing.trend_in.intercept + forcing.trend_in.slope * nd + forcing.Sin[0].real();
        t_si_full[n] += zero.stationary(tr_sa, tr_in) + b_sa * D_sa + b_in * D_in;
    }

    RadiativeSimulationResult result;
    result.t_surf0 = surf_active;
    result.residual = residual;
    result.gated_bins = gated;
    result.sim.t_si.assign(t_si_full.begin() + static_cast<std::ptrdiff_t>(warm_n),
                           t_si_full.end());
    result.sim.phi_in.resize(active);
    for (std::size_t n = 0; n < active; ++n)
        result.sim.phi_in[n] =
            assembly.h_int * (forcing.Tin_padded[warm_n + n] - result.sim.t_si[n]);
    result.sim.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace wallflux
