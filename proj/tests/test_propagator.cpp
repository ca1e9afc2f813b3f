#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wallflux/propagator.hpp"

using namespace wallflux;

namespace {

constexpr double om_day = 2.0 * std::numbers::pi / 86400.0;

Layer concrete(double e = 0.20) { return {e, 1.75, 2400.0, 880.0, std::nullopt}; }
Layer eps(double e = 0.15) { return {e, 0.035, 20.0, 1450.0, std::nullopt}; }

// lambda = 1, alpha as requested; thickness chosen so Re(qe) = target at om_day.
Layer layer_with_re_qe(double target, double omega = om_day) {
    Layer l{0.0, 1.0, 1.0, 1.0e6, std::nullopt}; // alpha = 1e-6
    const double re_q = std::sqrt(omega / (2.0 * l.diffusivity()));
    l.thickness_m = target / re_q;
    return l;
}

WallAssembly composite() { return {{concrete(0.20), eps(0.15)}, 7.7, 25.0}; }

} // namespace

TEST_CASE("zero-thickness layer is the identity") {
    Layer l = concrete(0.0);
    const cplx Y0{3.0, 1.0};
    CHECK(std::abs(propagate_layer(Y0, l, om_day) - Y0) < 1e-14);
    CHECK(propagate_layer_stationary(4.0, l) == doctest::Approx(4.0));
}

TEST_CASE("thick-slab limit recovers the characteristic admittance") {
    Layer l = layer_with_re_qe(400.0);
    const cplx Yc = characteristic_admittance(om_day, l);
    const cplx Y = propagate_layer(cplx{7.7, 0.0}, l, om_day);
    CHECK(std::abs(Y - Yc) / std::abs(Yc) < 1e-12);
}

TEST_CASE("boundedness for extreme arguments") {
    // E = e^{-2qe} underflows to exactly 0 well before Re(qe) = 1e4; the
    // update must stay finite and pinned at Y_c the whole way.
    for (double re_qe : {50.0, 709.0, 710.0, 2000.0, 1e4}) {
        Layer l = layer_with_re_qe(re_qe);
        const cplx Y = propagate_layer(cplx{7.7, 0.0}, l, om_day);
        REQUIRE(std::isfinite(Y.real()));
        REQUIRE(std::isfinite(Y.imag()));
        CHECK(std::abs(Y - characteristic_admittance(om_day, l)) < 1e-9);
    }
}

TEST_CASE("tanh form agrees in the moderate-argument regime") {
    for (double re_qe : {1e-6, 1e-3, 0.1, 1.0, 5.0, 20.0}) {
        Layer l = layer_with_re_qe(re_qe);
        for (cplx Y0 : {cplx{7.7, 0.0}, cplx{2.0, 5.0}, cplx{0.3, -0.2}}) {
            const cplx a = propagate_layer(Y0, l, om_day);
            const cplx b = propagate_layer_tanh(Y0, l, om_day);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("small-omega continuity with the stationary update") {
    const WallAssembly w = composite();
    const AdmittanceChain tiny = forward_chain(w, 1e-12);
    const AdmittanceChain stat = forward_chain(w, 0.0);
    REQUIRE(tiny.values.size() == stat.values.size());
    for (std::size_t j = 0; j < stat.values.size(); ++j)
        CHECK(std::abs(tiny.values[j] - stat.values[j]) < 1e-6);
}

TEST_CASE("stationary chain reproduces the series U-value") {
    const WallAssembly w = composite();
    const AdmittanceChain chain = forward_chain(w, 0.0);
    const double Y_N = chain.values.back().real();
    // Surface-to-surface chain closed with the exterior film.
    const double U = 1.0 / (1.0 / w.h_ext + 1.0 / Y_N);
    CHECK(U == doctest::Approx(0.21882459929521428).epsilon(1e-12));
    // Explicit resistance sum as a cross-check.
    double R = 1.0 / w.h_int + 1.0 / w.h_ext;
    for (double r : layer_resistances(w)) R += r;
    CHECK(U == doctest::Approx(1.0 / R).epsilon(1e-12));
}

TEST_CASE("forward and backward chains are mirror images") {
    WallAssembly w = composite();
    WallAssembly mirrored{{w.layers.rbegin(), w.layers.rend()}, w.h_ext, w.h_int};
    const AdmittanceChain bw = backward_chain(w, om_day);
    const AdmittanceChain fw_m = forward_chain(mirrored, om_day);
    REQUIRE(bw.values.size() == fw_m.values.size());
    for (std::size_t j = 0; j < bw.values.size(); ++j)
        CHECK(std::abs(bw.values[j] - fw_m.values[j]) < 1e-12);
    CHECK(bw.direction == ChainDirection::inward);
}

TEST_CASE("matched-impedance transfer factor is the one-way attenuation") {
    Layer l = layer_with_re_qe(2.0);
    const cplx q = wave_vector(om_day, l);
    const cplx Yc = characteristic_admittance(om_day, l);
    const cplx g = layer_transfer_factor(Yc, l, om_day);
    CHECK(std::abs(g - std::exp(-q * l.thickness_m)) < 1e-14);
}

TEST_CASE("passivity of the transfer chain") {
    for (double period : {3600.0, 86400.0, 604800.0}) {
        const double om = 2.0 * std::numbers::pi / period;
        const ChainWithTransfer ct = global_transfer(composite(), om);
        double prod = 1.0;
        for (const cplx& g : ct.transfer.factors) {
            CHECK(std::abs(g) <= 1.0 + 1e-12);
            prod *= std::abs(g);
        }
        CHECK(std::abs(ct.transfer.global) <= 1.0 + 1e-12);
        CHECK(std::abs(ct.transfer.global) == doctest::Approx(prod).epsilon(1e-12));
    }
}

TEST_CASE("attenuation grows with frequency") {
    double prev = 1.0;
    for (double period : {604800.0, 86400.0, 3600.0, 60.0}) {
        const double om = 2.0 * std::numbers::pi / period;
        const double gain = std::abs(global_transfer(composite(), om).transfer.global);
        CHECK(gain < prev);
        prev = gain;
    }
}

TEST_CASE("state closures and superposition") {
    const WallAssembly w = composite();
    const ChainWithTransfer ct = global_transfer(w, om_day);
    const cplx Y_N = ct.chain.values.back();
    const cplx Tsa{1.0, 0.0};

    const cplx Ts = state_A_surface(Y_N, w.h_ext, Tsa);
    CHECK(std::abs(Ts - w.h_ext / (w.h_ext + Y_N) * Tsa) < 1e-14);

    // Indoor excitation with the outside grounded.
    const cplx Tb = state_B_response(w, om_day, cplx{1.0, 0.0});
    CHECK(std::abs(Tb) < 1.0); // the surface cannot exceed the indoor drive
    CHECK(std::abs(Tb) > 0.0);

    const cplx both = superpose(w, om_day, Tsa, cplx{0.5, 0.0});
    const cplx split = ct.transfer.global * Ts + state_B_response(w, om_day, cplx{0.5, 0.0});
    CHECK(std::abs(both - split) < 1e-12);
}

TEST_CASE("stationary superposition matches the resistance network") {
    const WallAssembly w = composite();
    const double T_sa = -5.0, T_in = 20.0;
    const double t_net =
        stationary_interior_temperature(layer_resistances(w), w.h_int, w.h_ext, T_sa, T_in);
    const cplx t_sup = superpose(w, 0.0, cplx{T_sa, 0.0}, cplx{T_in, 0.0});
    CHECK(t_sup.imag() == 0.0);
    CHECK(t_sup.real() == doctest::Approx(t_net).epsilon(1e-12));
    // Flux through the interior film equals the network flux.
    const double phi = w.h_int * (T_in - t_net);
    double R = 1.0 / w.h_int + 1.0 / w.h_ext;
    for (double r : layer_resistances(w)) R += r;
    CHECK(phi == doctest::Approx((T_in - T_sa) / R).epsilon(1e-12));
}

TEST_CASE("transfer factors agree with the per-layer evaluation") {
    const WallAssembly w = composite();
    const ChainWithTransfer ct = global_transfer(w, om_day);
    for (std::size_t j = 0; j < w.layers.size(); ++j) {
        const cplx g = layer_transfer_factor(ct.chain.values[j], w.layers[j], om_day);
        CHECK(std::abs(g - ct.transfer.factors[j]) < 1e-14);
    }
}
