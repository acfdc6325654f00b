#pragma once

#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "koiter/geometry.hpp"

namespace koiter {

using cd = std::complex<double>;
using Vec3c = Eigen::Vector3cd;
using Mat3c = Eigen::Matrix3cd;

// Frozen boundary point on the clamped edge, x2 = y2 pointing inward.
struct LayerPoint {
    double b11 = 1.0;
    double b12 = 0.0;
    double b22 = 1.0;

    double discriminant() const { return b11 * b22 - b12 * b12; }
};

// Tangential Fourier convention of this module: d1 -> -i xi1.
Mat3c gamma0_hat(double xi1, const LayerPoint& b);
Mat3c gamma1_tilde();

struct RootPair {
    cd plus;
    cd minus;
};

RootPair rigidity_roots(const LayerPoint& b, double xi1);
Vec3c layer_eigenvector(cd lambda, double xi1, const LayerPoint& b);

struct GeneralizedEigen {
    Vec3c v;
    cd tau;
    Vec3c u0;
};

// The Jordan partner of w: (gamma0 + lambda gamma1) v + gamma1 w = A^{-1} tau u0
// with u0 spanning Ker(conj(gamma0)^T - lambda gamma1^T). Throws StructureError
// when no chain exists (bilinear pairing u0^T A^{-1} u0 vanishes).
GeneralizedEigen generalized_eigenvector(cd lambda, const Vec3c& w, const Eigen::Matrix3d& At, double xi1,
                                         const LayerPoint& b);

// Second independent decaying solution at lambda: either (y2 w + v) e^{lambda y2}
// (jordan) or v e^{lambda y2} when the double root is semisimple.
struct LayerPartner {
    Vec3c v;
    Vec3c strain; // (gamma0 + lambda gamma1) v + [jordan] gamma1 w
    bool jordan = true;
    cd tau;
    Vec3c u0;
};

LayerPartner layer_partner(cd lambda, const Vec3c& w, const Eigen::Matrix3d& At, double xi1, const LayerPoint& b);

struct LayerMode {
    cd lambda;
    Vec3c w;
    std::optional<LayerPartner> partner;
    double xi1 = 0.0;
    LayerPoint point;
    std::string system = "rigidity";
};

struct LayerModes {
    LayerMode plus;
    LayerMode minus;
};

// Both rigidity modes; the partner is attached to the decaying one.
LayerModes layer_modes(const LayerPoint& b, const Eigen::Matrix3d& At, double xi1);

struct DecayingProfile {
    cd C;
    cd lambda_plus, lambda_minus;
    Vec3c w_plus, w_minus;

    Vec3c operator()(double y2) const;
};

DecayingProfile decaying_profile(cd w3_trace_hat, double xi1, const LayerPoint& b);

struct MatchingConstants {
    cd C1, C2, C3, C4;
    cd alpha, beta;
};

MatchingConstants matching_constants(const LayerModes& modes, cd w3_trace_hat);

// C1 w+ e^{l+ y} + C2 w- e^{l- y} + C4 (y w- + v-) e^{l- y}; components 1, 2 vanish at 0.
Vec3c modified_profile(const LayerModes& modes, const MatchingConstants& c, double y2);
// Difference between the modified and the unmodified profile.
Vec3c modification(const LayerModes& modes, const MatchingConstants& c, double y2);
// The same correction with alpha = -1, beta = 1, per unit trace.
Vec3c renormalized_modification(const LayerModes& modes, double y2);

// Half-space rigidity in Fourier form: det of [w+ w-] restricted to components 1, 2.
cd cauchy_rigidity_determinant(const LayerPoint& b, double xi1);

double frequency_cutoff(double xi1, double eps);
// Compactly supported low-frequency profile (0, 0, (1 - y2/width)_+^2).
Vec3c low_frequency_profile(double y2, double width);
// Blend of the low-frequency profile and the modification per unit trace.
Vec3c layer_symbol(const LayerModes& modes, double eps, double y2, double width);

struct LayerEnergy {
    double a = 0.0;          // membrane energy of the modification over y2 in (0, inf)
    double w3_trace = 0.0;   // |w3 trace|^2
    double tangential = 0.0; // |tangential trace cancelled at y2 = 0|^2
};

LayerEnergy membrane_layer_energy(const LayerPoint& b, const Eigen::Matrix3d& At, double xi1, cd w3_trace_hat);

// theta with a = theta |w3|^2 / |xi1|; see README for the exponent.
double layer_energy_coefficient(const LayerPoint& b, const Eigen::Matrix3d& At);

// Bending energy of the single decaying mode e^{lambda- y2} in u3 with unit trace.
double bending_layer_energy(const LayerPoint& b, const Eigen::Matrix3d& Bt, double xi1);
// zeta with energy = zeta |xi1|^3.
double bending_symbol_coefficient(const LayerPoint& b, const Eigen::Matrix3d& Bt);

struct EnergySymbol {
    enum class Kind { P, Q };
    Kind kind = Kind::P;
    double coefficient = 1.0;
    double order = 0.5;

    double value(double xi1) const;
};

EnergySymbol p_symbol(double theta);
EnergySymbol q_symbol(double zeta);

struct SublayerCheck {
    double delta = 0.0;
    double root_magnitude = 0.0;
};

SublayerCheck sublayer_scaling_check(double eps);

} // namespace koiter
