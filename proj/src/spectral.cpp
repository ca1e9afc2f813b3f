#include "wallflux/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

namespace wallflux {

void SimConfig::validate() const {
    if (!(warmup_duration_s >= 0.0)) throw ValidationError("sim: warmup_duration_s must be >= 0");
    if (!(solar_absorptivity >= 0.0 && solar_absorptivity <= 1.0))
        throw ValidationError("sim: solar_absorptivity must be in [0, 1]");
    if (!(noise_threshold_K > 0.0)) throw ValidationError("sim: noise_threshold_K must be > 0");
}

std::vector<cplx> forward_transform(const std::vector<double>& samples) {
    const std::size_t M = samples.size();
    if (M < 2) throw ValidationError("forward_transform: need at least 2 samples");
    const std::size_t K = M / 2;
    std::vector<cplx> spectrum(K + 1);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(M);
    for (std::size_t k = 0; k <= K; ++k) {
        const cplx w = std::polar(1.0, step * static_cast<double>(k));
        cplx rot{1.0, 0.0};
        cplx acc{0.0, 0.0};
        for (std::size_t n = 0; n < M; ++n) {
            acc += samples[n] * rot;
            rot *= w;
        }
        spectrum[k] = acc / static_cast<double>(M);
    }
    return spectrum;
}

std::vector<double> inverse_transform(const std::vector<cplx>& spectrum, std::size_t M) {
    const std::size_t K = M / 2;
    if (spectrum.size() != K + 1)
        throw ValidationError("inverse_transform: spectrum length does not match M");
    std::vector<double> out(M, spectrum[0].real());
    const double step = 2.0 * std::numbers::pi / static_cast<double>(M);
    for (std::size_t k = 1; k <= K; ++k) {
        const double c = (M % 2 == 0 && k == K) ? 1.0 : 2.0;
        const cplx w = std::polar(1.0, step * static_cast<double>(k));
        cplx rot{1.0, 0.0};
        for (std::size_t n = 0; n < M; ++n) {
            out[n] += c * (spectrum[k] * rot).real();
            rot *= w;
        }
    }
    return out;
}

LinearTrend detrend_linear(std::vector<double>& samples) {
    const std::size_t M = samples.size();
    if (M < 2) throw ValidationError("detrend_linear: need at least 2 samples");
    // Closed-form least squares against [1, n].
    double sum_y = 0.0, sum_ny = 0.0;
    for (std::size_t n = 0; n < M; ++n) {
        sum_y += samples[n];
        sum_ny += static_cast<double>(n) * samples[n];
    }
    const double Md = static_cast<double>(M);
    const double sum_n = Md * (Md - 1.0) / 2.0;
    const double sum_nn = (Md - 1.0) * Md * (2.0 * Md - 1.0) / 6.0;
    const double det = Md * sum_nn - sum_n * sum_n;
    LinearTrend trend;
    trend.slope = (Md * sum_ny - sum_n * sum_y) / det;
    trend.intercept = (sum_y - trend.slope * sum_n) / Md;
    for (std::size_t n = 0; n < M; ++n)
        samples[n] -= trend.intercept + trend.slope * static_cast<double>(n);
    return trend;
}

std::vector<double> pad_history(const std::vector<double>& samples, std::size_t warm_n,
                                std::size_t samples_per_day) {
    if (warm_n == 0) return samples;
    const std::size_t day = std::min<std::size_t>(std::max<std::size_t>(samples_per_day, 1),
                                                  samples.size());
    // Tile the earliest day, keep the trailing warm_n samples so the padded
    // block ends exactly where the real record begins.
    const std::size_t reps = (warm_n + day - 1) / day;
    std::vector<double> tiled;
    tiled.reserve(reps * day);
    for (std::size_t r = 0; r < reps; ++r)
        tiled.insert(tiled.end(), samples.begin(), samples.begin() + day);
    std::vector<double> out(tiled.end() - warm_n, tiled.end());
    out.insert(out.end(), samples.begin(), samples.end());
    return out;
}

double dominant_time_constant(const WallAssembly& assembly) {
    double R = 0.0, C = 0.0;
    for (const Layer& layer : assembly.layers) {
        R += layer.thickness_m / layer.conductivity;
        double cap = layer.vol_heat_capacity();
        if (layer.gradient)
            cap = 0.5 * (layer.gradient->vol_heat_capacity_interior +
                         layer.gradient->vol_heat_capacity_exterior);
        C += cap * layer.thickness_m;
    }
    return R * C / (std::numbers::pi * std::numbers::pi);
}

double sol_air(double T_air_C, double G_solar, double h_ext, double solar_absorptivity) {
    return T_air_C + solar_absorptivity * G_solar / h_ext;
}

double PreparedForcing::omega(std::size_t k) const {
    return 2.0 * std::numbers::pi * static_cast<double>(k) / (static_cast<double>(M) * dt);
}

PreparedForcing prepare_forcing(const std::vector<double>& T_sa, const std::vector<double>& T_in,
                                double dt, const SimConfig& config) {
    config.validate();
    if (T_sa.size() != T_in.size())
        throw ValidationError("prepare_forcing: boundary series lengths differ");
    if (!(dt > 0.0)) throw ValidationError("prepare_forcing: dt must be > 0");
    PreparedForcing f;
    f.dt = dt;
    f.warm_n = static_cast<std::size_t>(std::llround(config.warmup_duration_s / dt));
    const std::size_t day = static_cast<std::size_t>(std::llround(86400.0 / dt));
    f.Tsa_padded = pad_history(T_sa, f.warm_n, day);
    f.Tin_padded = pad_history(T_in, f.warm_n, day);
    f.M = f.Tsa_padded.size();
    std::vector<double> rs = f.Tsa_padded, ri = f.Tin_padded;
    if (config.detrend) {
        f.trend_sa = detrend_linear(rs);
        f.trend_in = detrend_linear(ri);
    }
    f.Ssa = forward_transform(rs);
    f.Sin = forward_transform(ri);
    return f;
}

std::vector<double> reconstruct_series(const PreparedForcing& forcing,
                                       const HarmonicResponse& response, int threads) {
    const std::size_t K = forcing.M / 2;
    std::vector<cplx> out_spec(K + 1, cplx{0.0, 0.0});
    parallel_for(K, threads, [&](std::size_t i) {
        const std::size_t k = i + 1;
        const double om = forcing.omega(k);
        const cplx v = response.H_sa(k, om) * forcing.Ssa[k] +
                       response.H_in(k, om) * forcing.Sin[k];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericalError("reconstruct_series: non-finite response at omega = " +
                                 std::to_string(om));
        out_spec[k] = v;
    });
    std::vector<double> series = inverse_transform(out_spec, forcing.M);

    // Stationary trend path plus the first-order (group-delay) term: the
    // response to a + b t is H(0)(a + b t) + b Re(H'(0)/i), with the
    // derivative extrapolated from two near-zero probes.
    const double H0_sa = response.stationary(1.0, 0.0) - response.stationary(0.0, 0.0);
    const double H0_in = response.stationary(0.0, 1.0) - response.stationary(0.0, 0.0);
    const double om1 = 1e-8;
    auto gd = [om1](const std::function<cplx(double)>& H, double H0) {
        auto D = [&](double om) { return (H(om) - H0) / (cplx{0.0, 1.0} * om); };
        return (2.0 * D(om1 / 2.0) - D(om1)).real();
    };
    const double D_sa = gd(response.H_sa_smooth, H0_sa);
    const double D_in = gd(response.H_in_smooth, H0_in);
    const double b_sa = forcing.trend_sa.slope / forcing.dt; // K per second
    const double b_in = forcing.trend_in.slope / forcing.dt;
    for (std::size_t n = 0; n < forcing.M; ++n) {
        const double tr_sa = forcing.trend_sa.intercept +
                             forcing.trend_sa.slope * static_cast<double>(n) +
                             forcing.Ssa[0].real();
        const double tr_in = forcing.trend_in.intercept +
                             forcing.trend_in.slope * static_cast<double>(n) +
                             forcing.Sin[0].real();
        series[n] += response.stationary(tr_sa, tr_in) + b_sa * D_sa + b_in * D_in;
    }
    return series;
}

HarmonicResponse interior_response(const WallAssembly& assembly,
                                   const std::vector<double>& resistances) {
    HarmonicResponse r;
    auto H_sa = [&assembly](double om) {
        const ChainWithTransfer fw = global_transfer(assembly, om);
        return fw.transfer.global * assembly.h_ext / (assembly.h_ext + fw.chain.values.back());
    };
    auto H_in = [&assembly](double om) {
        const AdmittanceChain bw = backward_chain(assembly, om);
        return assembly.h_int / (assembly.h_int + bw.values.back());
    };
    r.H_sa = [H_sa](std::size_t, double om) { return H_sa(om); };
    r.H_in = [H_in](std::size_t, double om) { return H_in(om); };
    r.H_sa_smooth = H_sa;
    r.H_in_smooth = H_in;
    r.stationary = [&assembly, resistances](double T_sa, double T_in) {
        return stationary_interior_temperature(resistances, assembly.h_int, assembly.h_ext, T_sa,
                                               T_in);
    };
    return r;
}

HarmonicResponse exterior_surface_response(const WallAssembly& assembly,
                                           const std::vector<double>& resistances) {
    WallAssembly mirror = assembly;
    std::reverse(mirror.layers.begin(), mirror.layers.end());
    std::swap(mirror.h_int, mirror.h_ext);
    HarmonicResponse r;
    auto H_sa = [&assembly](double om) {
        const AdmittanceChain fw = forward_chain(assembly, om);
        return cplx{assembly.h_ext, 0.0} / (assembly.h_ext + fw.values.back());
    };
    auto H_in = [mirror, h_int = assembly.h_int](double om) {
        // Mirrored chain starts at h_ext; its transfer product carries the
        // indoor excitation out to the physical exterior surface.
        const ChainWithTransfer bw = global_transfer(mirror, om);
        return bw.transfer.global * h_int / (h_int + bw.chain.values.back());
    };
    r.H_sa = [H_sa](std::size_t, double om) { return H_sa(om); };
    r.H_in = [H_in](std::size_t, double om) { return H_in(om); };
    r.H_sa_smooth = H_sa;
    r.H_in_smooth = H_in;
    r.stationary = [&assembly, resistances](double T_sa, double T_in) {
        double R_tot = 1.0 / assembly.h_int + 1.0 / assembly.h_ext;
        for (double rr : resistances) R_tot += rr;
        const double phi = (T_in - T_sa) / R_tot;
        return T_sa + phi / assembly.h_ext;
    };
    return r;
}

SimulationResult simulate(const WallAssembly& assembly, const std::vector<double>& T_sa,
                          const std::vector<double>& T_in, double dt, const SimConfig& config,
                          int threads) {
    assembly.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const PreparedForcing forcing = prepare_forcing(T_sa, T_in, dt, config);
    const std::vector<double> Rs = layer_resistances(assembly);
    const HarmonicResponse response = interior_response(assembly, Rs);
    const std::vector<double> t_si_full = reconstruct_series(forcing, response, threads);

    SimulationResult result;
    result.t_si.assign(t_si_full.begin() + static_cast<std::ptrdiff_t>(forcing.warm_n),
                       t_si_full.end());
    result.phi_in.resize(result.t_si.size());
    for (std::size_t n = 0; n < result.t_si.size(); ++n)
        result.phi_in[n] =
            assembly.h_int * (forcing.Tin_padded[forcing.warm_n + n] - result.t_si[n]);
    const std::size_t K = forcing.M / 2;
    result.gain_abs.resize(K);
    parallel_for(K, threads, [&](std::size_t i) {
        const ChainWithTransfer fw = global_transfer(assembly, forcing.omega(i + 1));
        result.gain_abs[i] = std::abs(fw.transfer.global);
    });
    result.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t nt = std::min<std::size_t>(std::max(threads, 1), n);
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nt);
    const std::size_t chunk = (n + nt - 1) / nt;
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            try {
                const std::size_t lo = t * chunk;
                const std::size_t hi = std::min(n, lo + chunk);
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("WALLFLUX_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

} // namespace wallflux
