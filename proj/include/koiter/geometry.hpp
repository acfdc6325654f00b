#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace koiter {

using Mat2 = std::array<std::array<double, 2>, 2>;

// Surface data at one chart point. Indices are zero-based: b_mixed[a][l] is
// b^l_a and christoffel[l][a][b] is Gamma^l_ab.
struct MetricData {
    Mat2 a_cov{};
    Mat2 b_cov{};
    Mat2 b_mixed{};
    std::array<Mat2, 2> christoffel{};

    Mat2 a_contra() const;
    double b11() const { return b_cov[0][0]; }
    double b12() const { return b_cov[0][1]; }
    double b22() const { return b_cov[1][1]; }
    bool surface_elliptic() const;
    // Throws InvariantError on asymmetric or indefinite forms.
    void validate() const;
};

// Constant-coefficient point: a = I, Gamma = 0, b as given.
MetricData frozen_point(double b11, double b12, double b22);

// Fourth-order tensor with A^{abcd} stored at ((a*2+b)*2+c)*2+d.
struct Tensor4 {
    std::array<double, 16> c{};
    double& operator()(int a, int b, int l, int m) { return c[((a * 2 + b) * 2 + l) * 2 + m]; }
    double operator()(int a, int b, int l, int m) const { return c[((a * 2 + b) * 2 + l) * 2 + m]; }

    // Layout acting on (e11, e22, 2 e12).
    Eigen::Matrix3d voigt() const;
    static Tensor4 from_voigt(const Eigen::Matrix3d& v);
    static Tensor4 identity();
    bool has_symmetries(double tol = 1e-12) const;
    bool positive_definite() const;
};

struct ElasticityTensor {
    Tensor4 A;
    Tensor4 B;

    static ElasticityTensor identity();
    void validate() const;
};

struct Grid {
    std::size_t nx = 0;
    std::size_t ny = 0;
    double h = 1.0;
    double x0 = 0.0;
    double y0 = 0.0;

    std::size_t size() const { return nx * ny; }
    std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
    double y1(std::size_t i) const { return x0 + static_cast<double>(i) * h; }
    double y2(std::size_t j) const { return y0 + static_cast<double>(j) * h; }
    bool operator==(const Grid& o) const = default;
};

struct MetricField {
    Grid grid;
    std::vector<MetricData> points;
    // db_mixed[p][a][l][b] = d_a b^l_b at point p
    std::vector<std::array<Mat2, 2>> db_mixed;
};

MetricField frozen_chart(const Grid& g, double b11, double b12, double b22);
// Monge patch (y1, y2, -sqrt(R^2 - r^2)) of the sphere of radius R.
MetricField sphere_cap_chart(const Grid& g, double R);
MetricData sphere_cap_point(double y1, double y2, double R);

struct DisplacementField {
    Grid grid;
    std::array<std::vector<double>, 3> u;

    explicit DisplacementField(const Grid& g);
};

struct SymTensorField {
    Grid grid;
    std::vector<double> t11, t12, t22;

    explicit SymTensorField(const Grid& g);
    double at(int a, int b, std::size_t p) const;
};

// Finite differences along y1 (dir 0) or y2 (dir 1).
std::vector<double> diff1(const std::vector<double>& f, const Grid& g, int dir);
std::vector<double> diff2(const std::vector<double>& f, const Grid& g, int dir);

SymTensorField strain_tensor(const DisplacementField& u, const MetricField& m);
SymTensorField curvature_change_tensor(const DisplacementField& u, const MetricField& m);

struct EnergyValues {
    double a = 0.0;
    double b = 0.0;
};

EnergyValues energy_forms(const DisplacementField& u, const DisplacementField& v,
                          const MetricField& m, const ElasticityTensor& E);

} // namespace koiter
