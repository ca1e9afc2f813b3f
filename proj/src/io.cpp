#include "wallflux/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wallflux {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ValidationError(path + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ValidationError(where + ": unknown key '" + key + "'");
    }
}

double need_number(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) throw ValidationError(where + ": missing key '" + key + "'");
    if (!obj[key].is_number()) throw ValidationError(where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

double opt_number(const json& obj, const std::string& where, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ValidationError(where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

} // namespace

WallConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path + ": cannot open config file");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(path, std::string("JSON parse error: ") + e.what());
    }
    reject_unknown(root, path, {"assembly", "radiative", "sim"});
    if (!root.contains("assembly")) fail(path, "missing key 'assembly'");

    WallConfig cfg;
    const json& asmj = root["assembly"];
    reject_unknown(asmj, path + ".assembly", {"h_int", "h_ext", "layers"});
    cfg.assembly.h_int = need_number(asmj, path + ".assembly", "h_int");
    cfg.assembly.h_ext = need_number(asmj, path + ".assembly", "h_ext");
    if (!asmj.contains("layers") || !asmj["layers"].is_array())
        fail(path, "assembly.layers: expected an array");
    std::size_t idx = 0;
    for (const json& lj : asmj["layers"]) {
        const std::string where = path + ".assembly.layers[" + std::to_string(idx) + "]";
        reject_unknown(lj, where,
                       {"thickness_m", "conductivity", "density", "specific_heat", "gradient"});
        Layer layer;
        layer.thickness_m = need_number(lj, where, "thickness_m");
        layer.conductivity = need_number(lj, where, "conductivity");
        layer.density = need_number(lj, where, "density");
        layer.specific_heat = need_number(lj, where, "specific_heat");
        if (lj.contains("gradient")) {
            const json& gj = lj["gradient"];
            reject_unknown(gj, where + ".gradient",
                           {"conductivity_exterior", "vol_heat_capacity_interior",
                            "vol_heat_capacity_exterior"});
            GradientSpec g;
            g.conductivity_exterior = need_number(gj, where + ".gradient", "conductivity_exterior");
            g.vol_heat_capacity_interior =
                need_number(gj, where + ".gradient", "vol_heat_capacity_interior");
            g.vol_heat_capacity_exterior =
                need_number(gj, where + ".gradient", "vol_heat_capacity_exterior");
            layer.gradient = g;
        }
        cfg.assembly.layers.push_back(layer);
        ++idx;
    }
    cfg.assembly.validate();

    if (root.contains("radiative")) {
        const json& rj = root["radiative"];
        reject_unknown(rj, path + ".radiative",
                       {"emissivity", "sigma", "linearization_temperature_K", "tau_noise_K"});
        RadiativeConfig rc;
        rc.emissivity = need_number(rj, path + ".radiative", "emissivity");
        rc.sigma = opt_number(rj, path + ".radiative", "sigma", stefan_boltzmann);
        rc.T_lin_K = opt_number(rj, path + ".radiative", "linearization_temperature_K",
                                std::numeric_limits<double>::quiet_NaN());
        rc.tau_noise_K = opt_number(rj, path + ".radiative", "tau_noise_K", 1e-6);
        rc.validate();
        cfg.radiative = rc;
    }

    if (root.contains("sim")) {
        const json& sj = root["sim"];
        reject_unknown(sj, path + ".sim",
                       {"warmup_s", "detrend", "solar_absorptivity", "noise_threshold_K"});
        cfg.sim.warmup_duration_s = opt_number(sj, path + ".sim", "warmup_s", 0.0);
        if (sj.contains("detrend")) {
            if (!sj["detrend"].is_boolean())
                fail(path, "sim.detrend: expected a boolean");
            cfg.sim.detrend = sj["detrend"].get<bool>();
        }
        cfg.sim.solar_absorptivity = opt_number(sj, path + ".sim", "solar_absorptivity", 0.6);
        cfg.sim.noise_threshold_K = opt_number(sj, path + ".sim", "noise_threshold_K", 1e-6);
        cfg.sim.validate();
    }
    return cfg;
}

std::vector<double> Weather::setpoint() const {
    if (T_set_C) return *T_set_C;
    return std::vector<double>(size(), 20.0);
}

std::vector<double> Weather::sol_air_series(double h_ext, double solar_absorptivity) const {
    std::vector<double> out(size());
    for (std::size_t n = 0; n < size(); ++n)
        out[n] = sol_air(T_air_C[n], G_solar_Wm2[n], h_ext, solar_absorptivity);
    return out;
}

Weather load_weather(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path + ": cannot open weather file");
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty file");
    // Header.
    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) cols.push_back(tok);
    }
    auto col_index = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < cols.size(); ++i)
            if (cols[i] == name) return static_cast<int>(i);
        return -1;
    };
    const int i_time = col_index("time_s");
    const int i_air = col_index("T_air_C");
    const int i_sol = col_index("G_solar_Wm2");
    const int i_sky = col_index("T_sky_C");
    const int i_set = col_index("T_set_C");
    if (i_time < 0 || i_air < 0 || i_sol < 0)
        fail(path, "header must contain time_s, T_air_C, G_solar_Wm2");

    Weather w;
    if (i_sky >= 0) w.T_sky_C.emplace();
    if (i_set >= 0) w.T_set_C.emplace();
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            double v = 0.0;
            const char* b = tok.data();
            const auto [p, ec] = std::from_chars(b, b + tok.size(), v);
            if (ec != std::errc{} || p != b + tok.size())
                fail(path, "row " + std::to_string(row) + ": bad number '" + tok + "'");
            vals.push_back(v);
        }
        if (vals.size() != cols.size())
            fail(path, "row " + std::to_string(row) + ": expected " +
                           std::to_string(cols.size()) + " fields, got " +
                           std::to_string(vals.size()));
        w.time_s.push_back(vals[static_cast<std::size_t>(i_time)]);
        w.T_air_C.push_back(vals[static_cast<std::size_t>(i_air)]);
        w.G_solar_Wm2.push_back(vals[static_cast<std::size_t>(i_sol)]);
        if (i_sky >= 0) w.T_sky_C->push_back(vals[static_cast<std::size_t>(i_sky)]);
        if (i_set >= 0) w.T_set_C->push_back(vals[static_cast<std::size_t>(i_set)]);
    }
    if (w.size() < 2) fail(path, "need at least 2 rows");
    w.dt = w.time_s[1] - w.time_s[0];
    if (!(w.dt > 0.0)) fail(path, "row 3: time_s must be strictly ascending");
    for (std::size_t n = 1; n < w.size(); ++n) {
        const double step = w.time_s[n] - w.time_s[n - 1];
        if (std::abs(step - w.dt) > 1e-6 * w.dt)
            fail(path, "row " + std::to_string(n + 2) + ": non-uniform time step");
    }
    return w;
}

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_result_csv(const std::string& path, const std::vector<OutputRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ValidationError(path + ": cannot open output file");
    const bool corrected = !rows.empty() && rows.front().phi_in_corrected_Wm2.has_value();
    out << "time_s,T_sa_C,T_si_C,phi_in_Wm2";
    if (corrected) out << ",phi_in_corrected_Wm2";
    out << "\n";
    for (const OutputRow& r : rows) {
        out << format_g9(r.time_s) << ',' << format_g9(r.T_sa_C) << ',' << format_g9(r.T_si_C)
            << ',' << format_g9(r.phi_in_Wm2);
        if (corrected) out << ',' << format_g9(r.phi_in_corrected_Wm2.value());
        out << "\n";
    }
}

void write_result_json(const std::string& path, const std::vector<OutputRow>& rows) {
    json arr = json::array();
    for (const OutputRow& r : rows) {
        json o{{"time_s", r.time_s},
               {"T_sa_C", r.T_sa_C},
               {"T_si_C", r.T_si_C},
               {"phi_in_Wm2", r.phi_in_Wm2}};
        if (r.phi_in_corrected_Wm2) o["phi_in_corrected_Wm2"] = *r.phi_in_corrected_Wm2;
        arr.push_back(o);
    }
    std::ofstream out(path);
    if (!out) throw ValidationError(path + ": cannot open output file");
    out << arr.dump(2) << "\n";
}

} // namespace wallflux
