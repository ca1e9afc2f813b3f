#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>

#include "wallflux/io.hpp"
#include "wallflux/perturbation.hpp"
#include "wallflux/reference.hpp"

namespace wf = wallflux;

namespace {

constexpr double diurnal_omega = 2.0 * std::numbers::pi / 86400.0;

struct SimulateArgs {
    std::string config_path, weather_path, out_path = "-";
    std::string format = "csv";
    bool perturbed = false;
    bool radiative = false;
    int threads = 0;
};

int run_simulate(const SimulateArgs& args) {
    const wf::WallConfig cfg = wf::load_config(args.config_path);
    const wf::Weather weather = wf::load_weather(args.weather_path);
    const int threads = wf::resolve_threads(args.threads);
    const std::vector<double> T_sa =
        weather.sol_air_series(cfg.assembly.h_ext, cfg.sim.solar_absorptivity);
    const std::vector<double> T_in = weather.setpoint();

    const wf::SimulationResult base =
        wf::simulate(cfg.assembly, T_sa, T_in, weather.dt, cfg.sim, threads);

    std::vector<double> corrected;
    if (args.perturbed) {
        corrected = wf::simulate_perturbed(cfg.assembly, T_sa, T_in, weather.dt, cfg.sim,
                                           wf::RecombinationVariant::gradient_quadrature, threads)
                        .phi_in;
    } else if (args.radiative) {
        if (!weather.T_sky_C)
            throw wf::ValidationError(args.weather_path +
                                      ": --radiative requires a T_sky_C column");
        wf::RadiativeConfig rc = cfg.radiative.value_or(wf::RadiativeConfig{});
        if (std::isnan(rc.T_lin_K)) rc.T_lin_K = rc.resolved_T_lin(weather.T_air_C);
        corrected = wf::simulate_radiative(cfg.assembly, T_sa, *weather.T_sky_C, T_in,
                                           weather.dt, cfg.sim, rc, threads)
                        .sim.phi_in;
    }

    const std::size_t warm_n =
        static_cast<std::size_t>(std::llround(cfg.sim.warmup_duration_s / weather.dt));
    (void)warm_n; // outputs already exclude warm-up
    std::vector<wf::OutputRow> rows(base.t_si.size());
    for (std::size_t n = 0; n < rows.size(); ++n) {
        rows[n] = {weather.time_s[n], T_sa[n], base.t_si[n], base.phi_in[n], std::nullopt};
        if (!corrected.empty()) rows[n].phi_in_corrected_Wm2 = corrected[n];
    }
    if (args.format == "json")
        wf::write_result_json(args.out_path == "-" ? "/dev/stdout" : args.out_path, rows);
    else
        wf::write_result_csv(args.out_path == "-" ? "/dev/stdout" : args.out_path, rows);
    return 0;
}

struct BenchmarkArgs {
    std::string config_path, weather_path, out_path = "-";
    std::vector<int> ms_list{2, 5, 10, 59, 200, 1000, 10000};
    bool no_timing = false;
    int threads = 0;
};

int run_benchmark(const BenchmarkArgs& args) {
    const wf::WallConfig cfg = wf::load_config(args.config_path);
    const double om = diurnal_omega;
    const int asymptote_ms = 10000;
    const wf::cplx Y_ref =
        wf::sliced_oracle_admittance(cfg.assembly, om, asymptote_ms).chain.values.back();

    auto time_eval = [&](auto&& fn, int reps) {
        const auto t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r) fn();
        const auto t1 = std::chrono::steady_clock::now();
        return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
    };

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (args.out_path != "-") {
        file.open(args.out_path);
        if (!file) throw wf::ValidationError(args.out_path + ": cannot open output file");
        os = &file;
    }
    *os << "method,M_s,relative_error_vs_asymptote";
    if (!args.no_timing) *os << ",wall_time_ms";
    *os << "\n";

    const wf::PerturbedChain riccati = wf::perturbed_chain(cfg.assembly, om);
    const double err_riccati =
        std::abs(riccati.Y.back() + riccati.Y1.back() - Y_ref) / std::abs(Y_ref);
    *os << "riccati,1," << wf::format_g9(err_riccati);
    if (!args.no_timing) {
        const double ms =
            time_eval([&] { (void)wf::perturbed_chain(cfg.assembly, om); }, 2000);
        *os << ',' << wf::format_g9(ms);
    }
    *os << "\n";

    for (int ms_count : args.ms_list) {
        const wf::cplx Y =
            wf::sliced_oracle_admittance(cfg.assembly, om, ms_count).chain.values.back();
        const double err = std::abs(Y - Y_ref) / std::abs(Y_ref);
        *os << "sliced," << ms_count << ',' << wf::format_g9(err);
        if (!args.no_timing) {
            const int reps = std::max(1, 2000 / std::max(ms_count, 1));
            const double t = time_eval(
                [&] { (void)wf::sliced_oracle_admittance(cfg.assembly, om, ms_count); }, reps);
            *os << ',' << wf::format_g9(t);
        }
        *os << "\n";
    }
    return 0;
}

struct PhaseSpaceArgs {
    double alpha_min = 1e-7, alpha_max = 1.5e-5;
    int alpha_count = 25;
    std::vector<double> periods;
    std::string out_path = "-";
};

int run_phase_space(const PhaseSpaceArgs& args) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (args.out_path != "-") {
        file.open(args.out_path);
        if (!file) throw wf::ValidationError(args.out_path + ": cannot open output file");
        os = &file;
    }
    *os << "alpha_m2s,period_s,critical_thickness_m\n";
    for (int i = 0; i < args.alpha_count; ++i) {
        const double f = args.alpha_count == 1
                             ? 0.0
                             : static_cast<double>(i) / (args.alpha_count - 1);
        const double alpha = args.alpha_min * std::pow(args.alpha_max / args.alpha_min, f);
        for (double period : args.periods)
            *os << wf::format_g9(alpha) << ',' << wf::format_g9(period) << ','
                << wf::format_g9(wf::overflow_boundary(alpha, period)) << "\n";
    }
    return 0;
}

struct AliasingArgs {
    std::string config_path, weather_path, out_path = "-";
    std::vector<double> padding_days{0, 1, 2, 3, 4};
    double reference_days = 20.0;
    int threads = 0;
};

int run_aliasing(const AliasingArgs& args) {
    const wf::WallConfig cfg = wf::load_config(args.config_path);
    const wf::Weather weather = wf::load_weather(args.weather_path);
    const int threads = wf::resolve_threads(args.threads);
    const std::vector<double> T_sa =
        weather.sol_air_series(cfg.assembly.h_ext, cfg.sim.solar_absorptivity);
    const std::vector<double> T_in = weather.setpoint();
    const std::size_t day = static_cast<std::size_t>(std::llround(86400.0 / weather.dt));

    auto first_day = [&](double padding_days_v) {
        wf::SimConfig sc = cfg.sim;
        sc.warmup_duration_s = padding_days_v * 86400.0;
        const wf::SimulationResult r =
            wf::simulate(cfg.assembly, T_sa, T_in, weather.dt, sc, threads);
        return std::vector<double>(r.t_si.begin(),
                                   r.t_si.begin() + static_cast<std::ptrdiff_t>(
                                                        std::min(day, r.t_si.size())));
    };
    const std::vector<double> ref = first_day(args.reference_days);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (args.out_path != "-") {
        file.open(args.out_path);
        if (!file) throw wf::ValidationError(args.out_path + ": cannot open output file");
        os = &file;
    }
    *os << "padding_days,first_day_max_error_C\n";
    for (double pd : args.padding_days) {
        const std::vector<double> s = first_day(pd);
        double err = 0.0;
        for (std::size_t n = 0; n < s.size(); ++n) err = std::max(err, std::abs(s[n] - ref[n]));
        *os << wf::format_g9(pd) << ',' << wf::format_g9(err) << "\n";
    }
    return 0;
}

int run_validate(const std::string& config_path, double dt) {
    const wf::WallConfig cfg = wf::load_config(config_path); // throws on schema/physics issues
    const double tau_dom = wf::dominant_time_constant(cfg.assembly);
    std::cout << "config OK: " << cfg.assembly.layers.size() << " layer(s)\n";
    for (std::size_t j = 0; j < cfg.assembly.layers.size(); ++j) {
        const wf::Layer& layer = cfg.assembly.layers[j];
        const double dx = layer.thickness_m / 10.0;
        const wf::FourierNumber fo = wf::fourier_number(layer, dt, dx);
        std::cout << "layer " << j << ": Fo(dt=" << wf::format_g9(dt)
                  << " s, dx=e/10) = " << wf::format_g9(fo.value) << " -> "
                  << (fo.stable ? "explicit-stable" : "explicit-unstable") << "\n";
    }
    std::cout << "tau_dom advisory = " << wf::format_g9(tau_dom)
              << " s; suggested warm-up = " << wf::format_g9(5.0 * tau_dom) << " s\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wallflux — frequency-domain multilayer wall conduction solver"};
    app.require_subcommand(1);

    SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "Run a transient simulation");
    sim->add_option("config", sim_args.config_path, "wall config JSON")->required();
    sim->add_option("weather", sim_args.weather_path, "weather CSV")->required();
    sim->add_flag("--perturbed", sim_args.perturbed, "add first-order gradient correction");
    sim->add_flag("--radiative", sim_args.radiative, "add nonlinear sky correction");
    sim->add_option("--out", sim_args.out_path, "output path ('-' for stdout)");
    sim->add_option("--format", sim_args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sim->add_option("--threads", sim_args.threads, "harmonic worker threads (0 = auto)");

    BenchmarkArgs bench_args;
    CLI::App* bench = app.add_subcommand("benchmark", "Sliced-vs-recursive accuracy/timing table");
    bench->add_option("config", bench_args.config_path, "wall config JSON")->required();
    bench->add_option("weather", bench_args.weather_path, "weather CSV (unused columns ignored)");
    bench->add_option("--ms-list", bench_args.ms_list, "slice counts")->delimiter(',');
    bench->add_flag("--no-timing", bench_args.no_timing, "omit timing column (golden tests)");
    bench->add_option("--out", bench_args.out_path, "output path ('-' for stdout)");
    bench->add_option("--threads", bench_args.threads, "worker threads (0 = auto)");

    PhaseSpaceArgs ps_args;
    CLI::App* ps = app.add_subcommand("phase-space", "Overflow boundary grid");
    ps->add_option("--alpha-min", ps_args.alpha_min, "lowest diffusivity [m^2/s]");
    ps->add_option("--alpha-max", ps_args.alpha_max, "highest diffusivity [m^2/s]");
    ps->add_option("--alpha-count", ps_args.alpha_count, "log-spaced diffusivity samples");
    ps->add_option("--periods", ps_args.periods, "periods [s]")->delimiter(',');
    ps->add_option("--out", ps_args.out_path, "output path ('-' for stdout)");

    AliasingArgs al_args;
    CLI::App* al = app.add_subcommand("aliasing", "Warm-up padding error sweep");
    al->add_option("config", al_args.config_path, "wall config JSON")->required();
    al->add_option("weather", al_args.weather_path, "weather CSV")->required();
    al->add_option("--padding-days", al_args.padding_days, "padding durations [days]")
        ->delimiter(',');
    al->add_option("--reference-days", al_args.reference_days, "reference padding [days]");
    al->add_option("--out", al_args.out_path, "output path ('-' for stdout)");
    al->add_option("--threads", al_args.threads, "worker threads (0 = auto)");

    std::string val_config;
    double val_dt = 3600.0;
    CLI::App* val = app.add_subcommand("validate", "Schema and physics sanity check");
    val->add_option("config", val_config, "wall config JSON")->required();
    val->add_option("--dt", val_dt, "time step for the Fo diagnostic [s]");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run_simulate(sim_args);
        if (bench->parsed()) return run_benchmark(bench_args);
        if (ps->parsed()) return run_phase_space(ps_args);
        if (al->parsed()) return run_aliasing(al_args);
        if (val->parsed()) return run_validate(val_config, val_dt);
    } catch (const wf::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const wf::NumericalError& e) {
        std::cerr << "numerical defect: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
