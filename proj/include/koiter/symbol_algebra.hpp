#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "koiter/geometry.hpp"

namespace koiter {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct Vec2c {
    cd x1;
    cd x2;
};

using SymbolGen = std::function<CMatrix(const MetricData&, const Vec2c&)>;

// Douglis-Nirenberg system. Entry (k,j) of the symbol is homogeneous of
// degree s[k] + t[j]. Derivatives map to i*xi.
struct DNSystem {
    std::string name;
    int n_unknowns = 0;
    int n_equations = 0;
    std::vector<int> t;
    std::vector<int> s;
    SymbolGen symbol;

    int total_order() const;
    int m() const { return total_order() / 2; }
};

struct BoundaryConditionSet {
    std::string name;
    std::vector<int> r;
    SymbolGen symbol;
};

// rigidity, membrane_tension, membrane, membrane_mixed (six unknowns
// T11, T22, T12, u1, u2, u3) or koiter.
DNSystem builtin_system(const std::string& name, const MetricData& m, const ElasticityTensor& E, double eps);

// u1, u2, u3, membrane_dirichlet (u1, u2), traction (T22, T12 rows on x2 = 0),
// koiter_clamped (u1, u2, u3, d2 u3).
BoundaryConditionSet builtin_bc(const std::string& name, const ElasticityTensor& E);

// Symbol of (gamma11, gamma22, 2 gamma12) acting on (u1, u2, u3).
CMatrix rigidity_symbol(const MetricData& m, const Vec2c& xi);

cd principal_determinant(const DNSystem& sys, const MetricData& m, const Vec2c& xi);

struct EllipticityReport {
    bool elliptic = false;
    double min_abs_det = 0.0;
    double argmin_angle = 0.0;
    double max_abs_det = 0.0;
};

EllipticityReport ellipticity_check(const DNSystem& sys, const MetricData& m, int n_angles);

// Roots of a polynomial given by ascending coefficients.
std::vector<cd> polynomial_roots(const std::vector<cd>& coeffs);

// Ascending coefficients in xi2 of D(xi1, xi2).
std::vector<cd> characteristic_polynomial(const DNSystem& sys, const MetricData& m, double xi1);

struct RootCluster {
    cd root;
    int multiplicity = 1;
};

std::vector<cd> characteristic_roots(const DNSystem& sys, const MetricData& m, double xi1);
std::vector<RootCluster> cluster_roots(const std::vector<cd>& roots, double scale);

// One decaying solution family p(x2) exp(i rho x2); coeffs(j, d) multiplies x2^d
// in unknown j.
struct DecayingTerm {
    cd root;
    CMatrix coeffs;
};

struct SLReport {
    std::string point_id;
    double xi1 = 0.0;
    int m = 0;
    std::vector<cd> decaying_roots;
    CMatrix sl_matrix;
    cd sl_determinant;
    double tolerance = 0.0;
    bool satisfied = false;
    std::vector<DecayingTerm> witness;

    std::string csv_row() const;
    static std::string csv_header();
};

SLReport sl_check(const DNSystem& sys, const BoundaryConditionSet& bc, const MetricData& m, double xi1,
                  const std::string& point_id = "x0");

// Value of a witness family (or any DecayingTerm list) at x2.
CVector evaluate_terms(const std::vector<DecayingTerm>& terms, double x2);

} // namespace koiter
