#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wallflux/perturbation.hpp"
#include "wallflux/reference.hpp"

using namespace wallflux;

namespace {

constexpr double om_day = 2.0 * std::numbers::pi / 86400.0;

Layer concrete(double e = 0.20) { return {e, 1.75, 2400.0, 880.0, std::nullopt}; }
Layer eps_layer() { return {0.15, 0.035, 20.0, 1450.0, std::nullopt}; }

WallAssembly composite() { return {{concrete(), eps_layer()}, 7.7, 25.0}; }

Layer aac_layer() {
    Layer l{0.20, 0.12, 490.0, 1000.0, std::nullopt};
    l.gradient = GradientSpec{0.20, 0.49e6, 1.03e6};
    return l;
}

WallAssembly aac_wall() { return {{aac_layer()}, 7.7, 10.0}; }

WallAssembly ground_slab() {
    // 15 m of soil-like material, alpha = 1e-6 m^2/s.
    return {{{15.0, 2.0, 2000.0, 1000.0, std::nullopt}}, 7.7, 25.0};
}

} // namespace

TEST_CASE("hyperbolic layer matrix basics") {
    // Zero thickness: identity, det = 1.
    const auto r0 = tmm_layer_matrix(concrete(0.0), om_day);
    REQUIRE(std::holds_alternative<TmmMatrix>(r0));
    const TmmMatrix& I = std::get<TmmMatrix>(r0);
    CHECK(std::abs(I.a - 1.0) < 1e-14);
    CHECK(std::abs(I.b) < 1e-14);
    CHECK(std::abs(I.c) < 1e-14);
    CHECK(std::abs(I.d - 1.0) < 1e-14);

    // Moderate argument: unimodular.
    const auto r1 = tmm_layer_matrix(concrete(0.20), om_day);
    REQUIRE(std::holds_alternative<TmmMatrix>(r1));
    const TmmMatrix& M = std::get<TmmMatrix>(r1);
    CHECK(std::abs(M.a * M.d - M.b * M.c - 1.0) < 1e-12);
}

TEST_CASE("hyperbolic evaluation overflows past the exponential ceiling") {
    // Thickness tuned so Re(qe) crosses the double-precision exp limit.
    Layer l{0.0, 2.0, 2000.0, 1000.0, std::nullopt};
    const double re_q = std::sqrt(om_day / (2.0 * l.diffusivity()));
    l.thickness_m = 710.0 / re_q;
    const auto r = tmm_layer_matrix(l, om_day);
    REQUIRE(std::holds_alternative<OverflowReport>(r));
    const OverflowReport& rep = std::get<OverflowReport>(r);
    CHECK(rep.max_re_qe > 709.0);

    l.thickness_m = 5.0 / re_q;
    CHECK(std::holds_alternative<TmmMatrix>(tmm_layer_matrix(l, om_day)));
}

TEST_CASE("TMM and bounded chain agree where both are finite") {
    for (double period : {3600.0, 86400.0, 604800.0}) {
        const double om = 2.0 * std::numbers::pi / period;
        const auto r = tmm_admittance(composite(), om);
        REQUIRE(std::holds_alternative<cplx>(r));
        const cplx Y_tmm = std::get<cplx>(r);
        const cplx Y_ric = forward_chain(composite(), om).values.back();
        CHECK(std::abs(Y_tmm - Y_ric) <= 1e-9 * std::abs(Y_ric));
    }
}

TEST_CASE("deep-slab dichotomy: TMM overflows, bounded chain stays put") {
    const WallAssembly slab = ground_slab();
    const double om_fast = 2.0 * std::numbers::pi * 1e-3;
    const auto r = tmm_admittance(slab, om_fast);
    REQUIRE(std::holds_alternative<OverflowReport>(r));
    CHECK(std::get<OverflowReport>(r).layer_index == 0);
    const cplx Y = forward_chain(slab, om_fast).values.back();
    CHECK(std::isfinite(Y.real()));
    CHECK(std::abs(Y - characteristic_admittance(om_fast, slab.layers[0])) <
          1e-9 * std::abs(Y));
}

TEST_CASE("overflow boundary values") {
    CHECK(overflow_boundary(1.0e-7, 10.0) == doctest::Approx(0.400010415).epsilon(1e-6));
    CHECK(overflow_boundary(1.5e-5, 3600.0) == doctest::Approx(92.9540205).epsilon(1e-6));
    // Quadrupling alpha doubles the boundary.
    CHECK(overflow_boundary(4.0e-7, 10.0) ==
          doctest::Approx(2.0 * overflow_boundary(1.0e-7, 10.0)).epsilon(1e-12));
}

TEST_CASE("slicing a homogeneous assembly changes nothing") {
    const WallAssembly w = composite();
    const WallAssembly s = sliced_assembly(w, 16);
    REQUIRE(s.layers.size() == w.layers.size());
    const cplx Y0 = forward_chain(w, om_day).values.back();
    const cplx Ys = sliced_oracle_admittance(w, om_day, 16).chain.values.back();
    CHECK(std::abs(Y0 - Ys) < 1e-12 * std::abs(Y0));
}

TEST_CASE("slice count validation") {
    CHECK_THROWS_AS((void)sliced_assembly(aac_wall(), 0), ValidationError);
    CHECK_THROWS_AS((void)sliced_assembly(aac_wall(), -3), ValidationError);
}

TEST_CASE("sliced oracle converges monotonically on the graded wall") {
    const cplx Y_ref = sliced_oracle_admittance(aac_wall(), om_day, 10000).chain.values.back();
    double prev = 1e9;
    for (int ms : {8, 16, 32, 64, 128}) {
        const cplx Y = sliced_oracle_admittance(aac_wall(), om_day, ms).chain.values.back();
        const double err = std::abs(Y - Y_ref) / std::abs(Y_ref);
        CHECK(err < prev);
        prev = err;
    }
    // Self-consistency of the ground truth.
    const cplx Y_finer = sliced_oracle_admittance(aac_wall(), om_day, 20000).chain.values.back();
    CHECK(std::abs(Y_finer - Y_ref) / std::abs(Y_ref) < 1e-6);
}

TEST_CASE("oracle interface field is consistent with the bounded basis") {
    // A layer with a flat gradient spec slices into 8 identical sub-layers;
    // the sampled interface temperatures must lie on the analytic
    // two-exponential field through the endpoints.
    Layer l0 = concrete(0.20);
    l0.gradient =
        GradientSpec{l0.conductivity, l0.vol_heat_capacity(), l0.vol_heat_capacity()};
    WallAssembly w{{l0}, 7.7, 25.0};
    const int ms = 8;
    const SlicedOracleResult r = sliced_oracle_admittance(w, om_day, ms);
    REQUIRE(r.interface_T.size() == static_cast<std::size_t>(ms) + 1);
    const Layer& l = w.layers[0];
    const cplx q = wave_vector(om_day, l);
    const auto [At, Bt] =
        bounded_amplitudes(r.interface_T.front(), r.interface_T.back(), q, l.thickness_m);
    for (int j = 0; j <= ms; ++j) {
        const double z = l.thickness_m * static_cast<double>(j) / ms;
        const cplx T = At * std::exp(-q * (l.thickness_m - z)) + Bt * std::exp(-q * z);
        CHECK(std::abs(T - r.interface_T[static_cast<std::size_t>(j)]) < 1e-8);
    }
}

TEST_CASE("sliced transient simulation matches the plain path when homogeneous") {
    const WallAssembly w = composite();
    const std::size_t n = 96 * 4;
    std::vector<double> T_sa(n), T_in(n, 20.0);
    for (std::size_t i = 0; i < n; ++i)
        T_sa[i] = -2.0 + 6.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / 96.0);
    SimConfig cfg;
    cfg.warmup_duration_s = 86400.0;
    const SimulationResult a = simulate(w, T_sa, T_in, 900.0, cfg);
    const SimulationResult b = simulate_sliced(w, T_sa, T_in, 900.0, cfg, 4);
    REQUIRE(a.t_si.size() == b.t_si.size());
    for (std::size_t i = 0; i < a.t_si.size(); ++i)
        CHECK(std::abs(a.t_si[i] - b.t_si[i]) < 1e-10);
}

TEST_CASE("iterative oracle with zero emissivity converges immediately") {
    const WallAssembly w = composite();
    const std::size_t n = 96 * 4;
    std::vector<double> T_sa(n), T_sky(n), T_in(n, 20.0);
    for (std::size_t i = 0; i < n; ++i) {
        T_sa[i] = -2.0 + 6.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / 96.0);
        T_sky[i] = T_sa[i] - 15.0;
    }
    SimConfig cfg;
    cfg.warmup_duration_s = 86400.0;
    RadiativeConfig rc;
    rc.emissivity = 0.0;
    rc.T_lin_K = 271.15;
    const IterativeRadiativeResult r =
        iterative_radiative_oracle(w, T_sa, T_sky, T_in, 900.0, cfg, rc);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    const SimulationResult base = simulate(w, T_sa, T_in, 900.0, cfg);
    REQUIRE(r.sim.t_si.size() == base.t_si.size());
    for (std::size_t i = 0; i < base.t_si.size(); ++i)
        CHECK(std::abs(r.sim.t_si[i] - base.t_si[i]) < 1e-10);
}

TEST_CASE("Fourier number diagnostic") {
    const Layer l = concrete(); // alpha = 8.2864e-7
    const FourierNumber fo = fourier_number(l, 900.0, 0.02);
    CHECK(fo.value == doctest::Approx(l.diffusivity() * 900.0 / (0.02 * 0.02)).epsilon(1e-12));
    CHECK(fo.stable == (fo.value <= 0.5));
    const FourierNumber coarse = fourier_number(l, 3600.0, 0.1);
    CHECK(coarse.stable);
}
