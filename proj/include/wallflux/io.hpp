#pragma once

#include <optional>

#include "wallflux/radiative.hpp"

namespace wallflux {

struct WallConfig {
    WallAssembly assembly;
    std::optional<RadiativeConfig> radiative;
    SimConfig sim;
};

// Strict schema: unknown keys are rejected with a path-precise message.
WallConfig load_config(const std::string& path);

struct Weather {
    std::vector<double> time_s;
    std::vector<double> T_air_C;
    std::vector<double> G_solar_Wm2;
    std::optional<std::vector<double>> T_sky_C;
    std::optional<std::vector<double>> T_set_C;
    double dt = 0.0;

    std::size_t size() const { return time_s.size(); }
    // Setpoint series: T_set_C column if present, else constant 20 degC.
    std::vector<double> setpoint() const;
    // T_sa per row.
    std::vector<double> sol_air_series(double h_ext, double solar_absorptivity) const;
};

// Requires uniform ascending time (1e-6 relative), no missing fields.
Weather load_weather(const std::string& path);

struct OutputRow {
    double time_s, T_sa_C, T_si_C, phi_in_Wm2;
    std::optional<double> phi_in_corrected_Wm2;
};

// CSV/JSON writers; floats printed with 9 significant digits, dot decimal.
void write_result_csv(const std::string& path, const std::vector<OutputRow>& rows);
void write_result_json(const std::string& path, const std::vector<OutputRow>& rows);

std::string format_g9(double v);

} // namespace wallflux
