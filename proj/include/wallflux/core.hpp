#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wallflux {

using cplx = std::complex<double>;

// Input/schema problems: reported to the user, CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite results on a primary path: a defect, CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Continuous property deviation across a layer, described by its exterior-face
// endpoints. Conductivity grows exponentially (lambda_0 e^{beta z}), volumetric
// heat capacity linearly ((rho c_p)_0 + d1 z), z measured inner -> outer face.
struct GradientSpec {
    double conductivity_exterior = 0.0;      // lambda at z = e  [W/(m K)]
    double vol_heat_capacity_interior = 0.0; // (rho c_p) at z = 0  [J/(m^3 K)]
    double vol_heat_capacity_exterior = 0.0; // (rho c_p) at z = e  [J/(m^3 K)]
};

struct Layer {
    double thickness_m = 0.0;
    double conductivity = 0.0;   // lambda at the inner face  [W/(m K)]
    double density = 0.0;        // [kg/m^3]
    double specific_heat = 0.0;  // [J/(kg K)]
    std::optional<GradientSpec> gradient;

    // Volumetric heat capacity at the inner face.
    double vol_heat_capacity() const;
    double diffusivity() const; // alpha = lambda / (rho c_p), inner-face values
    // Exponential conductivity growth rate; 0 for homogeneous layers.
    double beta() const;
    // Linear capacity gradient slope; 0 for homogeneous layers.
    double d1() const;

    void validate(const std::string& where) const;
};

struct WallAssembly {
    std::vector<Layer> layers; // index 0 = innermost
    double h_int = 0.0;        // interior film coefficient  [W/(m^2 K)]
    double h_ext = 0.0;        // exterior film coefficient  [W/(m^2 K)]

    void validate() const;
};

// Complex thermal wave vector q = (1+i) sqrt(omega / (2 alpha)); q(0) = 0.
cplx wave_vector(double omega, const Layer& layer);

// Characteristic admittance of the semi-infinite medium, Y_c = lambda q.
cplx characteristic_admittance(double omega, const Layer& layer);

// 1/Re(q) = sqrt(2 alpha / omega); rejects omega = 0.
double penetration_depth(double omega, const Layer& layer);

} // namespace wallflux
