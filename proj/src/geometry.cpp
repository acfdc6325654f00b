#include "koiter/geometry.hpp"

#include <cmath>
#include <string>

#include "koiter/error.hpp"

namespace koiter {

namespace {

constexpr int voigt_a[3] = {0, 1, 0};
constexpr int voigt_b[3] = {0, 1, 1};

bool symmetric(const Mat2& m, double tol) {
    return std::abs(m[0][1] - m[1][0]) <= tol * (1.0 + std::abs(m[0][1]));
}

Mat2 inverse(const Mat2& m) {
    double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

void check_same_grid(const DisplacementField& u, const MetricField& m) {
    if (!(u.grid == m.grid) || m.points.size() != m.grid.size() || m.db_mixed.size() != m.grid.size())
        throw DimensionError("displacement and metric grids differ");
    for (const auto& c : u.u)
        if (c.size() != u.grid.size()) throw DimensionError("displacement component has wrong size");
    if (u.grid.nx < 4 || u.grid.ny < 4) throw DimensionError("grid needs at least 4 points per direction");
    if (!(u.grid.h > 0.0)) throw DimensionError("grid spacing must be positive");
}

void check_metric(const MetricField& m) {
    for (const auto& p : m.points) p.validate();
}

// d_a b^l_b from the sampled b_mixed by the same stencils used for u.
std::vector<std::array<Mat2, 2>> sampled_db(const Grid& g, const std::vector<MetricData>& pts) {
    std::vector<std::array<Mat2, 2>> out(g.size());
    if (g.nx < 4 || g.ny < 4) return out;
    std::vector<double> f(g.size());
    for (int b = 0; b < 2; ++b)
        for (int l = 0; l < 2; ++l) {
            for (std::size_t p = 0; p < g.size(); ++p) f[p] = pts[p].b_mixed[b][l];
            for (int a = 0; a < 2; ++a) {
                auto d = diff1(f, g, a);
                for (std::size_t p = 0; p < g.size(); ++p) out[p][a][l][b] = d[p];
            }
        }
    return out;
}

double contract(const Tensor4& T, const SymTensorField& x, const SymTensorField& y, std::size_t p) {
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) s += T(i, j, k, l) * x.at(k, l, p) * y.at(i, j, p);
    return s;
}

} // namespace

Mat2 MetricData::a_contra() const { return inverse(a_cov); }

bool MetricData::surface_elliptic() const {
    return b_cov[0][0] > 0.0 && b_cov[0][0] * b_cov[1][1] - b_cov[0][1] * b_cov[1][0] > 0.0;
}

void MetricData::validate() const {
    if (!symmetric(a_cov, 1e-12)) throw InvariantError("first fundamental form is not symmetric");
    if (!symmetric(b_cov, 1e-12)) throw InvariantError("second fundamental form is not symmetric");
    if (!(a_cov[0][0] > 0.0 && a_cov[0][0] * a_cov[1][1] - a_cov[0][1] * a_cov[1][0] > 0.0))
        throw InvariantError("first fundamental form is not positive definite");
    for (int l = 0; l < 2; ++l)
        if (!symmetric(christoffel[l], 1e-12))
            throw InvariantError("Christoffel symbols are not symmetric in the lower indices");
}

MetricData frozen_point(double b11, double b12, double b22) {
    MetricData m;
    m.a_cov = {{{1.0, 0.0}, {0.0, 1.0}}};
    m.b_cov = {{{b11, b12}, {b12, b22}}};
    m.b_mixed = m.b_cov;
    return m;
}

Eigen::Matrix3d Tensor4::voigt() const {
    Eigen::Matrix3d v;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v(i, j) = (*this)(voigt_a[i], voigt_b[i], voigt_a[j], voigt_b[j]);
    return v;
}

Tensor4 Tensor4::from_voigt(const Eigen::Matrix3d& v) {
    Tensor4 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int a = voigt_a[i], b = voigt_b[i], l = voigt_a[j], m = voigt_b[j];
            t(a, b, l, m) = t(b, a, l, m) = t(a, b, m, l) = t(b, a, m, l) = v(i, j);
        }
    return t;
}

Tensor4 Tensor4::identity() {
    Tensor4 t;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int l = 0; l < 2; ++l)
                for (int m = 0; m < 2; ++m)
                    t(a, b, l, m) = 0.5 * ((a == l && b == m ? 1.0 : 0.0) + (a == m && b == l ? 1.0 : 0.0));
    return t;
}

bool Tensor4::has_symmetries(double tol) const {
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int l = 0; l < 2; ++l)
                for (int m = 0; m < 2; ++m) {
                    double x = (*this)(a, b, l, m);
                    double scale = tol * (1.0 + std::abs(x));
                    if (std::abs(x - (*this)(l, m, a, b)) > scale || std::abs(x - (*this)(m, l, a, b)) > scale)
                        return false;
                }
    return true;
}

bool Tensor4::positive_definite() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(voigt());
    return es.eigenvalues().minCoeff() > 0.0;
}

ElasticityTensor ElasticityTensor::identity() { return {Tensor4::identity(), Tensor4::identity()}; }

void ElasticityTensor::validate() const {
    if (!A.has_symmetries() || !B.has_symmetries()) throw InvariantError("elasticity tensor lacks its symmetries");
    if (!A.positive_definite()) throw InvariantError("membrane tensor A is not positive definite");
    if (!B.positive_definite()) throw InvariantError("bending tensor B is not positive definite");
}

MetricField frozen_chart(const Grid& g, double b11, double b12, double b22) {
    MetricField m;
    m.grid = g;
    m.points.assign(g.size(), frozen_point(b11, b12, b22));
    m.db_mixed.assign(g.size(), {});
    return m;
}

MetricData sphere_cap_point(double y1, double y2, double R) {
    double r2 = y1 * y1 + y2 * y2;
    if (!(R > 0.0) || r2 >= R * R) throw DomainError("point outside the sphere-cap chart");
    double g = std::sqrt(R * R - r2);
    double y[2] = {y1, y2};
    double W2 = R * R / (g * g);
    MetricData m;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double d = a == b ? 1.0 : 0.0;
            m.a_cov[a][b] = d + y[a] * y[b] / (g * g);
            m.b_cov[a][b] = m.a_cov[a][b] / R;
            m.b_mixed[a][b] = d / R;
        }
    for (int l = 0; l < 2; ++l)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                double fab = (a == b ? 1.0 / g : 0.0) + y[a] * y[b] / (g * g * g);
                m.christoffel[l][a][b] = (y[l] / g) * fab / W2;
            }
    return m;
}

MetricField sphere_cap_chart(const Grid& g, double R) {
    MetricField m;
    m.grid = g;
    m.points.resize(g.size());
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) m.points[g.index(i, j)] = sphere_cap_point(g.y1(i), g.y2(j), R);
    m.db_mixed = sampled_db(g, m.points);
    return m;
}

DisplacementField::DisplacementField(const Grid& g) : grid(g) {
    for (auto& c : u) c.assign(g.size(), 0.0);
}

SymTensorField::SymTensorField(const Grid& g)
    : grid(g), t11(g.size(), 0.0), t12(g.size(), 0.0), t22(g.size(), 0.0) {}

double SymTensorField::at(int a, int b, std::size_t p) const {
    if (a == 0 && b == 0) return t11[p];
    if (a == 1 && b == 1) return t22[p];
    return t12[p];
}

std::vector<double> diff1(const std::vector<double>& f, const Grid& g, int dir) {
    if (f.size() != g.size()) throw DimensionError("field size does not match grid");
    std::size_t n = dir == 0 ? g.nx : g.ny;
    if (n < 3) throw DimensionError("need at least 3 points for a first difference");
    std::vector<double> d(f.size());
    auto at = [&](std::size_t i, std::size_t j, std::size_t k) {
        return dir == 0 ? f[g.index(k, j)] : f[g.index(i, k)];
    };
    std::size_t other = dir == 0 ? g.ny : g.nx;
    for (std::size_t o = 0; o < other; ++o)
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t i = dir == 0 ? k : o, j = dir == 0 ? o : k;
            double v;
            if (k == 0)
                v = (-3.0 * at(i, j, 0) + 4.0 * at(i, j, 1) - at(i, j, 2)) / (2.0 * g.h);
            else if (k == n - 1)
                v = (3.0 * at(i, j, n - 1) - 4.0 * at(i, j, n - 2) + at(i, j, n - 3)) / (2.0 * g.h);
            else
                v = (at(i, j, k + 1) - at(i, j, k - 1)) / (2.0 * g.h);
            d[g.index(i, j)] = v;
        }
    return d;
}

std::vector<double> diff2(const std::vector<double>& f, const Grid& g, int dir) {
    if (f.size() != g.size()) throw DimensionError("field size does not match grid");
    std::size_t n = dir == 0 ? g.nx : g.ny;
    if (n < 4) throw DimensionError("need at least 4 points for a second difference");
    std::vector<double> d(f.size());
    auto at = [&](std::size_t i, std::size_t j, std::size_t k) {
        return dir == 0 ? f[g.index(k, j)] : f[g.index(i, k)];
    };
    double h2 = g.h * g.h;
    std::size_t other = dir == 0 ? g.ny : g.nx;
    for (std::size_t o = 0; o < other; ++o)
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t i = dir == 0 ? k : o, j = dir == 0 ? o : k;
            double v;
            if (k == 0)
                v = (2.0 * at(i, j, 0) - 5.0 * at(i, j, 1) + 4.0 * at(i, j, 2) - at(i, j, 3)) / h2;
            else if (k == n - 1)
                v = (2.0 * at(i, j, n - 1) - 5.0 * at(i, j, n - 2) + 4.0 * at(i, j, n - 3) - at(i, j, n - 4)) / h2;
            else
                v = (at(i, j, k + 1) - 2.0 * at(i, j, k) + at(i, j, k - 1)) / h2;
            d[g.index(i, j)] = v;
        }
    return d;
}

SymTensorField strain_tensor(const DisplacementField& u, const MetricField& m) {
    check_same_grid(u, m);
    check_metric(m);
    const Grid& g = u.grid;
    // du[a][b] = d_b u_a
    std::array<std::array<std::vector<double>, 2>, 2> du;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) du[a][b] = diff1(u.u[a], g, b);

    SymTensorField out(g);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const MetricData& md = m.points[p];
        double gam[2][2];
        for (int a = 0; a < 2; ++a)
            for (int b = a; b < 2; ++b) {
                double v = 0.5 * (du[a][b][p] + du[b][a][p]) - md.b_cov[a][b] * u.u[2][p];
                for (int l = 0; l < 2; ++l) v -= md.christoffel[l][a][b] * u.u[l][p];
                gam[a][b] = v;
            }
        out.t11[p] = gam[0][0];
        out.t12[p] = gam[0][1];
        out.t22[p] = gam[1][1];
    }
    return out;
}

SymTensorField curvature_change_tensor(const DisplacementField& u, const MetricField& m) {
    check_same_grid(u, m);
    check_metric(m);
    const Grid& g = u.grid;
    std::array<std::array<std::vector<double>, 2>, 2> du;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) du[a][b] = diff1(u.u[a], g, b);
    std::array<std::vector<double>, 2> d3 = {diff1(u.u[2], g, 0), diff1(u.u[2], g, 1)};
    std::vector<double> d3_11 = diff2(u.u[2], g, 0);
    std::vector<double> d3_22 = diff2(u.u[2], g, 1);
    std::vector<double> d3_12 = diff1(d3[1], g, 0);

    SymTensorField out(g);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const MetricData& md = m.points[p];
        const auto& G = md.christoffel;
        const auto& bm = md.b_mixed; // bm[b][l] = b^l_b
        const auto& db = m.db_mixed[p];
        double ucov[2] = {u.u[0][p], u.u[1][p]};
        double u3 = u.u[2][p];
        // u_l|a = d_a u_l - Gamma^n_la u_n
        double ud[2][2];
        for (int l = 0; l < 2; ++l)
            for (int a = 0; a < 2; ++a) {
                ud[l][a] = du[l][a][p];
                for (int n = 0; n < 2; ++n) ud[l][a] -= G[n][l][a] * ucov[n];
            }
        auto rho = [&](int a, int b) {
            double hess = a == 0 && b == 0 ? d3_11[p] : (a == 1 && b == 1 ? d3_22[p] : d3_12[p]);
            double v = hess;
            for (int l = 0; l < 2; ++l) v -= G[l][a][b] * d3[l][p];
            for (int l = 0; l < 2; ++l) {
                // b^l_b|a = d_a b^l_b + Gamma^l_an b^n_b - Gamma^n_ba b^l_n
                double cov = db[a][l][b];
                for (int n = 0; n < 2; ++n) cov += G[l][a][n] * bm[b][n] - G[n][b][a] * bm[n][l];
                v += cov * ucov[l];
                v += bm[b][l] * ud[l][a] + bm[a][l] * ud[l][b];
                v -= bm[a][l] * md.b_cov[l][b] * u3;
            }
            return v;
        };
        out.t11[p] = rho(0, 0);
        out.t22[p] = rho(1, 1);
        // equal on smooth surfaces by the Codazzi relations; averaged for the discrete fields
        out.t12[p] = 0.5 * (rho(0, 1) + rho(1, 0));
    }
    return out;
}

EnergyValues energy_forms(const DisplacementField& u, const DisplacementField& v,
                          const MetricField& m, const ElasticityTensor& E) {
    E.validate();
    if (!(u.grid == v.grid)) throw DimensionError("displacement grids differ");
    SymTensorField gu = strain_tensor(u, m), gv = strain_tensor(v, m);
    SymTensorField ru = curvature_change_tensor(u, m), rv = curvature_change_tensor(v, m);
    const Grid& g = u.grid;
    EnergyValues e;
    for (std::size_t p = 0; p < g.size(); ++p) {
        const Mat2& a = m.points[p].a_cov;
        double w = g.h * g.h * std::sqrt(a[0][0] * a[1][1] - a[0][1] * a[1][0]);
        // symmetrized so that a(u,v) and a(v,u) agree bit for bit
        e.a += w * 0.5 * (contract(E.A, gu, gv, p) + contract(E.A, gv, gu, p));
        e.b += w * 0.5 * (contract(E.B, ru, rv, p) + contract(E.B, rv, ru, p));
    }
    return e;
}

} // namespace koiter
