#include "wallflux/core.hpp"

#include <cmath>

namespace wallflux {

double Layer::vol_heat_capacity() const {
    if (gradient) return gradient->vol_heat_capacity_interior;
    return density * specific_heat;
}

double Layer::diffusivity() const { return conductivity / vol_heat_capacity(); }

double Layer::beta() const {
    if (!gradient) return 0.0;
    return std::log(gradient->conductivity_exterior / conductivity) / thickness_m;
}

double Layer::d1() const {
    if (!gradient) return 0.0;
    return (gradient->vol_heat_capacity_exterior - gradient->vol_heat_capacity_interior) /
           thickness_m;
}

void Layer::validate(const std::string& where) const {
    auto bad = [&](const std::string& what) {
        throw ValidationError(where + ": " + what);
    };
    if (!(thickness_m > 0.0) || !std::isfinite(thickness_m)) bad("thickness_m must be > 0");
    if (!(conductivity > 0.0) || !std::isfinite(conductivity)) bad("conductivity must be > 0");
    if (!(density > 0.0) || !std::isfinite(density)) bad("density must be > 0");
    if (!(specific_heat > 0.0) || !std::isfinite(specific_heat)) bad("specific_heat must be > 0");
    if (gradient) {
        if (!(gradient->conductivity_exterior > 0.0))
            bad("gradient.conductivity_exterior must be > 0");
        if (!(gradient->vol_heat_capacity_interior > 0.0))
            bad("gradient.vol_heat_capacity_interior must be > 0");
        if (!(gradient->vol_heat_capacity_exterior > 0.0))
            bad("gradient.vol_heat_capacity_exterior must be > 0");
        if (!std::isfinite(beta())) bad("gradient implies non-finite conductivity growth rate");
    }
    if (!std::isfinite(diffusivity()) || !(diffusivity() > 0.0))
        bad("derived diffusivity must be finite and > 0");
}

void WallAssembly::validate() const {
    if (layers.empty()) throw ValidationError("assembly: at least one layer required");
    if (!(h_int > 0.0)) throw ValidationError("assembly: h_int must be > 0");
    if (!(h_ext > 0.0)) throw ValidationError("assembly: h_ext must be > 0");
    for (std::size_t i = 0; i < layers.size(); ++i)
        layers[i].validate("assembly.layers[" + std::to_string(i) + "]");
}

cplx wave_vector(double omega, const Layer& layer) {
    if (!std::isfinite(omega) || omega < 0.0)
        throw ValidationError("wave_vector: omega must be finite and >= 0");
    if (omega == 0.0) return {0.0, 0.0};
    const double s = std::sqrt(omega / (2.0 * layer.diffusivity()));
    return {s, s};
}

cplx characteristic_admittance(double omega, const Layer& layer) {
    return layer.conductivity * wave_vector(omega, layer);
}

double penetration_depth(double omega, const Layer& layer) {
    if (!(omega > 0.0))
        throw ValidationError("penetration_depth: infinite penetration depth at omega = 0");
    return std::sqrt(2.0 * layer.diffusivity() / omega);
}

} // namespace wallflux
