#include "wallflux/propagator.hpp"

#include <cmath>

namespace wallflux {

namespace {

void require_finite(cplx v, double omega, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericalError(std::string(what) + ": non-finite value at omega = " +
                             std::to_string(omega));
}

// e^z - 1 without cancellation for small |z| (no std::expm1 for complex).
cplx expm1c(cplx z) {
    const double ex = std::expm1(z.real());
    const double sy = std::sin(z.imag());
    const double cy_m1 = -2.0 * std::sin(0.5 * z.imag()) * std::sin(0.5 * z.imag());
    return {ex * (cy_m1 + 1.0) + cy_m1, (ex + 1.0) * sy};
}

} // namespace

cplx propagate_layer(cplx Y_prev, const Layer& layer, double omega) {
    if (omega == 0.0) return propagate_layer_stationary(Y_prev.real(), layer);
    const cplx q = wave_vector(omega, layer);
    const cplx Yc = characteristic_admittance(omega, layer);
    const cplx Em1 = expm1c(-2.0 * q * layer.thickness_m); // E - 1
    const cplx one_plus_E = 2.0 + Em1;
    const cplx num = Y_prev * one_plus_E - Yc * Em1;
    const cplx den = Yc * one_plus_E - Y_prev * Em1;
    const cplx out = Yc * num / den;
    require_finite(out, omega, "propagate_layer");
    return out;
}

double propagate_layer_stationary(double Y_prev, const Layer& layer) {
    if (!(Y_prev > 0.0))
        throw ValidationError("propagate_layer_stationary: Y_prev must be > 0");
    return 1.0 / (1.0 / Y_prev + layer.thickness_m / layer.conductivity);
}

cplx propagate_layer_tanh(cplx Y_prev, const Layer& layer, double omega) {
    const cplx q = wave_vector(omega, layer);
    const cplx Yc = characteristic_admittance(omega, layer);
    const cplx th = std::tanh(q * layer.thickness_m);
    return Yc * (Y_prev + Yc * th) / (Yc + Y_prev * th);
}

AdmittanceChain forward_chain(const WallAssembly& assembly, double omega) {
    AdmittanceChain chain;
    chain.direction = ChainDirection::outward;
    chain.omega = omega;
    chain.values.reserve(assembly.layers.size() + 1);
    chain.values.emplace_back(assembly.h_int, 0.0);
    for (const Layer& layer : assembly.layers)
        chain.values.push_back(propagate_layer(chain.values.back(), layer, omega));
    return chain;
}

AdmittanceChain backward_chain(const WallAssembly& assembly, double omega) {
    AdmittanceChain chain;
    chain.direction = ChainDirection::inward;
    chain.omega = omega;
    chain.values.reserve(assembly.layers.size() + 1);
    chain.values.emplace_back(assembly.h_ext, 0.0);
    for (auto it = assembly.layers.rbegin(); it != assembly.layers.rend(); ++it)
        chain.values.push_back(propagate_layer(chain.values.back(), *it, omega));
    return chain;
}

cplx layer_transfer_factor(cplx Y_prev, const Layer& layer, double omega) {
    const cplx q = wave_vector(omega, layer);
    const cplx Yc = characteristic_admittance(omega, layer);
    const cplx F = std::exp(-q * layer.thickness_m);
    const cplx E = F * F;
    const cplx r = Y_prev / Yc;
    const cplx den = (1.0 + r) + E * (1.0 - r);
    if (std::abs(den) < 1e-300)
        throw NumericalError("layer_transfer_factor: degenerate transfer factor");
    const cplx g = 2.0 * F / den;
    require_finite(g, omega, "layer_transfer_factor");
    return g;
}

ChainWithTransfer global_transfer(const WallAssembly& assembly, double omega) {
    ChainWithTransfer out;
    out.chain.direction = ChainDirection::outward;
    out.chain.omega = omega;
    out.transfer.omega = omega;
    cplx Y{assembly.h_int, 0.0};
    out.chain.values.push_back(Y);
    cplx G{1.0, 0.0};
    for (const Layer& layer : assembly.layers) {
        const cplx g = layer_transfer_factor(Y, layer, omega);
        out.transfer.factors.push_back(g);
        G *= g;
        Y = propagate_layer(Y, layer, omega);
        out.chain.values.push_back(Y);
    }
    out.transfer.global = G;
    return out;
}

cplx state_A_surface(cplx Y_N, double h_ext, cplx T_sa) {
    return h_ext / (h_ext + Y_N) * T_sa;
}

cplx state_B_response(const WallAssembly& assembly, double omega, cplx T_in) {
    const AdmittanceChain bw = backward_chain(assembly, omega);
    return assembly.h_int / (assembly.h_int + bw.values.back()) * T_in;
}

cplx superpose(const WallAssembly& assembly, double omega, cplx T_sa, cplx T_in) {
    if (omega == 0.0) {
        const double T = stationary_interior_temperature(
            layer_resistances(assembly), assembly.h_int, assembly.h_ext, T_sa.real(),
            T_in.real());
        return {T, 0.0};
    }
    const ChainWithTransfer fw = global_transfer(assembly, omega);
    const cplx T_surf = state_A_surface(fw.chain.values.back(), assembly.h_ext, T_sa);
    return fw.transfer.global * T_surf + state_B_response(assembly, omega, T_in);
}

std::vector<double> layer_resistances(const WallAssembly& assembly) {
    std::vector<double> out;
    out.reserve(assembly.layers.size());
    for (const Layer& layer : assembly.layers)
        out.push_back(layer.thickness_m / layer.conductivity);
    return out;
}

double stationary_interior_temperature(const std::vector<double>& resistances, double h_int,
                                       double h_ext, double T_sa, double T_in) {
    double R_tot = 1.0 / h_int + 1.0 / h_ext;
    for (double r : resistances) R_tot += r;
    const double phi = (T_in - T_sa) / R_tot; // flux out of the room
    return T_in - phi / h_int;
}

} // namespace wallflux
