#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "koiter/boundary_layer.hpp"
#include "koiter/geometry.hpp"

namespace testsupport {

using cd = std::complex<double>;
using koiter::LayerPoint;
using koiter::Vec3c;

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611u);
    return g;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

// b11 > 0 and b11 b22 - b12^2 bounded away from 0.
inline koiter::LayerPoint random_elliptic_b() {
    for (;;) {
        double b11 = uniform(0.3, 3.0), b22 = uniform(0.3, 3.0), b12 = uniform(-1.5, 1.5);
        if (b11 * b22 - b12 * b12 > 0.1 * b11 * b22) return {b11, b12, b22};
    }
}

inline koiter::LayerPoint random_hyperbolic_b() {
    for (;;) {
        double b11 = uniform(-2.0, 2.0), b22 = uniform(-2.0, 2.0), b12 = uniform(-3.0, 3.0);
        if (b11 * b22 - b12 * b12 < -0.1) return {b11, b12, b22};
    }
}

// Symmetric positive definite Voigt matrix with condition number below ~50.
inline Eigen::Matrix3d random_spd() {
    Eigen::Matrix3d G;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) G(i, j) = uniform(-1.0, 1.0);
    return G * G.transpose() + 0.3 * Eigen::Matrix3d::Identity();
}

inline Eigen::Vector2d random_direction() {
    double t = uniform(0.0, 2.0 * M_PI);
    return {std::cos(t), std::sin(t)};
}

inline double rel_err(cd a, cd b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline const cd I(0.0, 1.0);

// Polynomial in y2 with vector coefficients, times e^{lambda y2}.
using Poly = std::vector<Vec3c>;

inline Poly derivative(const Poly& p, cd lambda) {
    Poly out(p.size(), Vec3c::Zero());
    for (std::size_t d = 0; d < p.size(); ++d) {
        out[d] += lambda * p[d];
        if (d > 0) out[d - 1] += static_cast<double>(d) * p[d];
    }
    return out;
}

// (gamma11, gamma22, 2 gamma12) for d1 -> -i xi1, written out component by component.
inline Poly strain(const Poly& u, cd lambda, double xi1, const LayerPoint& b) {
    Poly du = derivative(u, lambda), out(u.size());
    for (std::size_t d = 0; d < u.size(); ++d) {
        const Vec3c& x = u[d];
        out[d] = Vec3c(-I * xi1 * x(0) - b.b11 * x(2), du[d](1) - b.b22 * x(2),
                       du[d](0) - I * xi1 * x(1) - 2.0 * b.b12 * x(2));
    }
    return out;
}

// Formal adjoint of the strain operator applied to the stress field.
inline Poly equilibrium(const Poly& T, cd lambda, double xi1, const LayerPoint& b) {
    Poly dT = derivative(T, lambda), out(T.size());
    for (std::size_t d = 0; d < T.size(); ++d) {
        const Vec3c& t = T[d];
        out[d] = Vec3c(I * xi1 * t(0) - dT[d](2), -dT[d](1) + I * xi1 * t(2),
                       -b.b11 * t(0) - b.b22 * t(1) - 2.0 * b.b12 * t(2));
    }
    return out;
}

inline double fourth_order_residual(const Poly& u, cd lambda, double xi1, const LayerPoint& b, const Eigen::Matrix3d& A) {
    Poly T = strain(u, lambda, xi1, b);
    for (auto& t : T) t = A.cast<cd>() * t;
    double r = 0.0;
    for (const auto& c : equilibrium(T, lambda, xi1, b)) r = std::max(r, c.norm());
    return r;
}

// Least-squares slope in log-log coordinates.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

} // namespace testsupport
