#include "wallflux/reference.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace wallflux {

namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

} // namespace

TmmLayerResult tmm_layer_matrix(const Layer& layer, double omega) {
    const cplx q = wave_vector(omega, layer);
    const cplx qe = q * layer.thickness_m;
    const cplx ch = std::cosh(qe);
    const cplx sh = std::sinh(qe);
    const cplx lq = layer.conductivity * q;
    TmmMatrix m{ch, omega == 0.0 ? cplx{layer.thickness_m / layer.conductivity, 0.0} : sh / lq,
                lq * sh, ch};
    if (!finite(m.a) || !finite(m.b) || !finite(m.c) || !finite(m.d))
        return OverflowReport{qe.real(), -1};
    return m;
}

TmmAdmittanceResult tmm_admittance(const WallAssembly& assembly, double omega) {
    // State vector [T, U] at the interior surface with U/T = h_int.
    cplx T{1.0, 0.0};
    cplx U{assembly.h_int, 0.0};
    for (std::size_t j = 0; j < assembly.layers.size(); ++j) {
        const Layer& layer = assembly.layers[j];
        const TmmLayerResult lr = tmm_layer_matrix(layer, omega);
        if (std::holds_alternative<OverflowReport>(lr)) {
            OverflowReport rep = std::get<OverflowReport>(lr);
            rep.layer_index = static_cast<int>(j);
            return rep;
        }
        const TmmMatrix& m = std::get<TmmMatrix>(lr);
        const cplx T2 = m.a * T + m.b * U;
        const cplx U2 = m.c * T + m.d * U;
        T = T2;
        U = U2;
        if (!finite(T) || !finite(U)) {
            const cplx qe = wave_vector(omega, layer) * layer.thickness_m;
            return OverflowReport{qe.real(), static_cast<int>(j)};
        }
    }
    const cplx Y = U / T;
    if (!finite(Y)) return OverflowReport{0.0, static_cast<int>(assembly.layers.size()) - 1};
    return Y;
}

double overflow_boundary(double alpha, double period_s) {
    if (!(alpha > 0.0) || !(period_s > 0.0))
        throw ValidationError("overflow_boundary: alpha and period must be > 0");
    const double omega = 2.0 * std::numbers::pi / period_s;
    return 709.0 / std::sqrt(omega / (2.0 * alpha));
}

WallAssembly sliced_assembly(const WallAssembly& assembly, int slices_per_layer) {
    if (slices_per_layer < 1) throw ValidationError("sliced_assembly: need at least 1 slice");
    WallAssembly flat;
    flat.h_int = assembly.h_int;
    flat.h_ext = assembly.h_ext;
    for (const Layer& layer : assembly.layers) {
        if (!layer.gradient) {
            flat.layers.push_back(layer);
            continue;
        }
        const double beta = layer.beta();
        const double d1 = layer.d1();
        const double dz = layer.thickness_m / slices_per_layer;
        for (int s = 0; s < slices_per_layer; ++s) {
            const double z = (s + 0.5) * dz;
            Layer sub;
            sub.thickness_m = dz;
            sub.conductivity = layer.conductivity * std::exp(beta * z);
            sub.density = 1.0;
            sub.specific_heat = layer.gradient->vol_heat_capacity_interior + d1 * z;
            flat.layers.push_back(sub);
        }
    }
    return flat;
}

SlicedOracleResult sliced_oracle_admittance(const WallAssembly& assembly, double omega,
                                            int slices_per_layer) {
    const WallAssembly flat = sliced_assembly(assembly, slices_per_layer);
    SlicedOracleResult out;
    const ChainWithTransfer fw = global_transfer(flat, omega);
    out.chain = fw.chain;
    out.transfer = fw.transfer;
    const std::size_t N = flat.layers.size();
    out.interface_T.assign(N + 1, cplx{0.0, 0.0});
    out.interface_T[N] = state_A_surface(out.chain.values[N], flat.h_ext, cplx{1.0, 0.0});
    for (std::size_t j = N; j > 0; --j)
        out.interface_T[j - 1] = out.transfer.factors[j - 1] * out.interface_T[j];
    return out;
}

SimulationResult simulate_sliced(const WallAssembly& assembly, const std::vector<double>& T_sa,
                                 const std::vector<double>& T_in, double dt,
                                 const SimConfig& config, int slices_per_layer, int threads) {
    const WallAssembly flat = sliced_assembly(assembly, slices_per_layer);
    return simulate(flat, T_sa, T_in, dt, config, threads);
}

IterativeRadiativeResult iterative_radiative_oracle(const WallAssembly& assembly,
                                                    const std::vector<double>& T_sa,
                                                    const std::vector<double>& T_sky_C,
                                                    const std::vector<double>& T_in, double dt,
                                                    const SimConfig& sim_config,
                                                    const RadiativeConfig& rad_config,
                                                    double tol_K, int max_sweeps, int threads) {
    assembly.validate();
    RadiativeConfig rc = rad_config;
    if (std::isnan(rc.T_lin_K)) rc.T_lin_K = rc.resolved_T_lin(T_sa);
    rc.validate();
    if (T_sky_C.size() != T_sa.size())
        throw ValidationError("iterative_radiative_oracle: sky series length differs");

    auto run = [&](const std::vector<double>& forcing_sa) {
        return zero_order_surface_pass(assembly, forcing_sa, T_in, dt, sim_config, threads);
    };
    auto residual_of = [&](const std::vector<double>& surf_C) {
        std::vector<double> surf_K(surf_C.size()), sky_K(surf_C.size());
        for (std::size_t n = 0; n < surf_C.size(); ++n) {
            surf_K[n] = surf_C[n] + celsius_offset;
            sky_K[n] = T_sky_C[n] + celsius_offset;
        }
        return radiative_residual(surf_K, sky_K, rc);
    };

    SurfacePass pass = run(T_sa);
    const std::size_t warm_n = pass.forcing.warm_n;
    std::vector<double> surf(pass.t_surf_padded.begin() + static_cast<std::ptrdiff_t>(warm_n),
                             pass.t_surf_padded.end());
    std::vector<double> res = residual_of(surf);

    IterativeRadiativeResult out;
    for (out.iterations = 0; out.iterations < max_sweeps; ++out.iterations) {
        std::vector<double> shifted(T_sa.size());
        for (std::size_t n = 0; n < T_sa.size(); ++n)
            shifted[n] = T_sa[n] - res[n] / assembly.h_ext;
        pass = run(shifted);
        std::vector<double> surf_new(
            pass.t_surf_padded.begin() + static_cast<std::ptrdiff_t>(warm_n),
            pass.t_surf_padded.end());
        double change = 0.0;
        for (std::size_t n = 0; n < surf.size(); ++n)
            change = std::max(change, std::abs(surf_new[n] - surf[n]));
        surf = std::move(surf_new);
        res = residual_of(surf);
        if (change < tol_K) {
            out.converged = true;
            ++out.iterations;
            break;
        }
    }
    out.t_surf = surf;
    out.sim.t_si.assign(pass.t_si_padded.begin() + static_cast<std::ptrdiff_t>(warm_n),
                        pass.t_si_padded.end());
    out.sim.phi_in.resize(out.sim.t_si.size());
    for (std::size_t n = 0; n < out.sim.t_si.size(); ++n)
        out.sim.phi_in[n] =
            assembly.h_int * (pass.forcing.Tin_padded[warm_n + n] - out.sim.t_si[n]);
    return out;
}

FourierNumber fourier_number(const Layer& layer, double dt, double dx) {
    if (!(dt > 0.0) || !(dx > 0.0))
        throw ValidationError("fourier_number: dt and dx must be > 0");
    FourierNumber fo;
    fo.value = layer.diffusivity() * dt / (dx * dx);
    fo.stable = fo.value <= 0.5;
    return fo;
}

} // namespace wallflux
