#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "koiter/error.hpp"
#include "koiter/geometry.hpp"
#include "support.hpp"

using namespace koiter;
using testsupport::uniform;

namespace {

Grid small_grid(std::size_t n = 8, double h = 0.1) { return {n, n, h, -0.35, -0.35}; }

DisplacementField sample(const Grid& g, const std::function<std::array<double, 3>(double, double)>& f) {
    DisplacementField u(g);
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            auto v = f(g.y1(i), g.y2(j));
            for (int c = 0; c < 3; ++c) u.u[c][g.index(i, j)] = v[c];
        }
    return u;
}

DisplacementField random_field(const Grid& g) {
    DisplacementField u(g);
    for (auto& c : u.u)
        for (auto& x : c) x = uniform(-1.0, 1.0);
    return u;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

TEST_CASE("zero displacement gives zero strain, curvature change and energy") {
    Grid g = small_grid();
    auto m = frozen_chart(g, 1.3, 0.2, 0.7);
    DisplacementField u(g);
    auto gam = strain_tensor(u, m);
    auto rho = curvature_change_tensor(u, m);
    CHECK(max_abs(gam.t11) == 0.0);
    CHECK(max_abs(gam.t12) == 0.0);
    CHECK(max_abs(gam.t22) == 0.0);
    CHECK(max_abs(rho.t11) == 0.0);
    CHECK(max_abs(rho.t22) == 0.0);
    auto e = energy_forms(u, u, m, ElasticityTensor::identity());
    CHECK(e.a == 0.0);
    CHECK(e.b == 0.0);
}

TEST_CASE("strain of a tangential stretch on a flat frame") {
    Grid g = small_grid();
    auto m = frozen_chart(g, 1.0, 0.0, 0.0);
    auto u = sample(g, [](double y1, double) { return std::array<double, 3>{y1, 0.0, 0.0}; });
    auto gam = strain_tensor(u, m);
    for (std::size_t p = 0; p < g.size(); ++p) {
        CHECK(gam.t11[p] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(gam.t12[p]) < 1e-12);
        CHECK(std::abs(gam.t22[p]) < 1e-12);
    }
}

TEST_CASE("normal translation: strain is -b") {
    Grid g = small_grid();
    auto m = frozen_chart(g, 1.0, 0.0, 1.0);
    auto u = sample(g, [](double, double) { return std::array<double, 3>{0.0, 0.0, 1.0}; });
    auto gam = strain_tensor(u, m);
    for (std::size_t p = 0; p < g.size(); ++p) {
        CHECK(gam.t11[p] == doctest::Approx(-1.0));
        CHECK(gam.t22[p] == doctest::Approx(-1.0));
        CHECK(std::abs(gam.t12[p]) < 1e-14);
    }
}

TEST_CASE("curvature change of a parabolic normal displacement on a plane") {
    Grid g = small_grid();
    auto m = frozen_chart(g, 0.0, 0.0, 0.0);
    auto u = sample(g, [](double y1, double) { return std::array<double, 3>{0.0, 0.0, 0.5 * y1 * y1}; });
    auto rho = curvature_change_tensor(u, m);
    for (std::size_t p = 0; p < g.size(); ++p) {
        CHECK(rho.t11[p] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(rho.t12[p]) < 1e-10);
        CHECK(std::abs(rho.t22[p]) < 1e-10);
    }
}

TEST_CASE("curvature change of a normal translation on the unit-curvature frame") {
    Grid g = small_grid();
    auto m = frozen_chart(g, 1.0, 0.0, 1.0);
    auto u = sample(g, [](double, double) { return std::array<double, 3>{0.0, 0.0, 1.0}; });
    auto rho = curvature_change_tensor(u, m);
    for (std::size_t p = 0; p < g.size(); ++p) {
        CHECK(rho.t11[p] == doctest::Approx(-1.0));
        CHECK(rho.t22[p] == doctest::Approx(-1.0));
        CHECK(std::abs(rho.t12[p]) < 1e-12);
    }
}

TEST_CASE("hand-expanded curvature change on a frozen frame") {
    // With Gamma = 0 the tensor reduces to d_ab u3 + b_b^l d_a u_l + b_a^l d_b u_l - b_a^l b_lb u3.
    const double b11 = 0.8, b12 = 0.3, b22 = 1.4;
    Grid g = small_grid(10, 0.05);
    auto m = frozen_chart(g, b11, b12, b22);
    auto u = sample(g, [](double y1, double y2) {
        return std::array<double, 3>{0.3 * y1 + 0.2 * y2, -0.1 * y1 + 0.5 * y2, 0.7 * y1 * y2 + 0.4 * y2 * y2 + 1.0};
    });
    auto rho = curvature_change_tensor(u, m);
    double B[2][2] = {{b11, b12}, {b12, b22}};
    double du[2][2] = {{0.3, 0.2}, {-0.1, 0.5}}; // du[l][a] = d_a u_l
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            double y1 = g.y1(i), y2 = g.y2(j);
            double u3 = 0.7 * y1 * y2 + 0.4 * y2 * y2 + 1.0;
            double H[2][2] = {{0.0, 0.7}, {0.7, 0.8}};
            auto oracle = [&](int a, int b) {
                double v = H[a][b];
                for (int l = 0; l < 2; ++l) v += B[b][l] * du[l][a] + B[a][l] * du[l][b] - B[a][l] * B[l][b] * u3;
                return v;
            };
            std::size_t p = g.index(i, j);
            CHECK(rho.t11[p] == doctest::Approx(oracle(0, 0)).epsilon(1e-10));
            CHECK(rho.t12[p] == doctest::Approx(oracle(0, 1)).epsilon(1e-10));
            CHECK(rho.t22[p] == doctest::Approx(oracle(1, 1)).epsilon(1e-10));
        }
}

TEST_CASE("strain and curvature change are linear in u") {
    Grid g = small_grid();
    auto m = sphere_cap_chart(g, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        auto u = random_field(g), v = random_field(g);
        double al = uniform(-2.0, 2.0), be = uniform(-2.0, 2.0);
        DisplacementField w(g);
        for (int c = 0; c < 3; ++c)
            for (std::size_t p = 0; p < g.size(); ++p) w.u[c][p] = al * u.u[c][p] + be * v.u[c][p];
        auto gu = strain_tensor(u, m), gv = strain_tensor(v, m), gw = strain_tensor(w, m);
        auto ru = curvature_change_tensor(u, m), rv = curvature_change_tensor(v, m),
             rw = curvature_change_tensor(w, m);
        double err = 0.0;
        for (std::size_t p = 0; p < g.size(); ++p) {
            err = std::max(err, std::abs(gw.t11[p] - al * gu.t11[p] - be * gv.t11[p]));
            err = std::max(err, std::abs(gw.t12[p] - al * gu.t12[p] - be * gv.t12[p]));
            err = std::max(err, std::abs(rw.t22[p] - al * ru.t22[p] - be * rv.t22[p]));
            err = std::max(err, std::abs(rw.t12[p] - al * ru.t12[p] - be * rv.t12[p]) * g.h * g.h);
        }
        CHECK(err < 1e-11);
    }
}

TEST_CASE("energy forms are symmetric and nonnegative on random fields") {
    Grid g = small_grid(6);
    auto m = sphere_cap_chart(g, 1.5);
    for (int trial = 0; trial < 100; ++trial) {
        ElasticityTensor E{Tensor4::from_voigt(testsupport::random_spd()), Tensor4::from_voigt(testsupport::random_spd())};
        auto u = random_field(g), v = random_field(g);
        auto uv = energy_forms(u, v, m, E), vu = energy_forms(v, u, m, E), uu = energy_forms(u, u, m, E);
        CHECK(uv.a == vu.a);
        CHECK(uv.b == vu.b);
        CHECK(uu.a >= 0.0);
        CHECK(uu.b >= 0.0);
    }
}

TEST_CASE("identity membrane tensor gives the sum of squared strains") {
    Grid g = small_grid();
    auto m = frozen_chart(g, 1.1, -0.2, 0.6);
    for (int trial = 0; trial < 5; ++trial) {
        auto u = random_field(g);
        auto gam = strain_tensor(u, m);
        double oracle = 0.0;
        for (std::size_t p = 0; p < g.size(); ++p)
            oracle += g.h * g.h * (gam.t11[p] * gam.t11[p] + 2.0 * gam.t12[p] * gam.t12[p] + gam.t22[p] * gam.t22[p]);
        auto e = energy_forms(u, u, m, ElasticityTensor::identity());
        CHECK(e.a == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("finite differences are second order on polynomial fields") {
    auto interior_error = [](double h, int order) {
        auto n = static_cast<std::size_t>(std::lround(0.32 / h)) + 1;
        Grid g{n, 4, h, 0.2, 0.1};
        std::vector<double> f(g.size()), exact(g.size());
        for (std::size_t j = 0; j < g.ny; ++j)
            for (std::size_t i = 0; i < g.nx; ++i) {
                double x = g.y1(i), y = g.y2(j);
                f[g.index(i, j)] = x * x * x * x + y;
                exact[g.index(i, j)] = order == 1 ? 4.0 * x * x * x : 12.0 * x * x;
            }
        auto d = order == 1 ? diff1(f, g, 0) : diff2(f, g, 0);
        double e = 0.0;
        for (std::size_t j = 0; j < g.ny; ++j)
            for (std::size_t i = 1; i + 1 < g.nx; ++i) e = std::max(e, std::abs(d[g.index(i, j)] - exact[g.index(i, j)]));
        return e;
    };
    for (int order : {1, 2}) {
        double r = interior_error(0.02, order) / interior_error(0.01, order);
        CHECK(r > 3.0);
        CHECK(r < 5.0);
    }
}

TEST_CASE("one-sided stencils are exact for quadratics") {
    Grid g{5, 4, 0.3, 0.0, 0.0};
    std::vector<double> f(g.size());
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            double y = g.y2(j);
            f[g.index(i, j)] = 2.0 * y * y - y + 3.0;
        }
    auto d1 = diff1(f, g, 1), d2 = diff2(f, g, 1);
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            CHECK(d1[g.index(i, j)] == doctest::Approx(4.0 * g.y2(j) - 1.0).epsilon(1e-12));
            CHECK(d2[g.index(i, j)] == doctest::Approx(4.0).epsilon(1e-12));
        }
}

TEST_CASE("sphere-cap Christoffel symbols match the metric-derivative formula") {
    const double R = 2.5, h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        double y1 = uniform(-1.2, 1.2), y2 = uniform(-1.2, 1.2);
        MetricData md = sphere_cap_point(y1, y2, R);
        md.validate();
        // d_c a_ab by central differences
        double da[2][2][2];
        for (int c = 0; c < 2; ++c) {
            double s1 = c == 0 ? h : 0.0, s2 = c == 1 ? h : 0.0;
            auto p = sphere_cap_point(y1 + s1, y2 + s2, R), q = sphere_cap_point(y1 - s1, y2 - s2, R);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) da[c][a][b] = (p.a_cov[a][b] - q.a_cov[a][b]) / (2.0 * h);
        }
        Mat2 ai = md.a_contra();
        for (int l = 0; l < 2; ++l)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    double g = 0.0;
                    for (int k = 0; k < 2; ++k) g += 0.5 * ai[l][k] * (da[a][k][b] + da[b][k][a] - da[k][a][b]);
                    CHECK(md.christoffel[l][a][b] == doctest::Approx(g).epsilon(1e-7));
                }
        // Umbilic surface: b^l_a = delta / R
        for (int a = 0; a < 2; ++a)
            for (int l = 0; l < 2; ++l) {
                double mixed = 0.0;
                for (int s = 0; s < 2; ++s) mixed += ai[l][s] * md.b_cov[a][s];
                CHECK(mixed == doctest::Approx(md.b_mixed[a][l]).epsilon(1e-12));
                CHECK(md.b_mixed[a][l] == doctest::Approx(a == l ? 1.0 / R : 0.0));
            }
        CHECK(md.surface_elliptic());
    }
}

TEST_CASE("surface ellipticity flag") {
    CHECK(frozen_point(1.0, 0.0, 1.0).surface_elliptic());
    CHECK(frozen_point(2.0, 1.0, 1.0).surface_elliptic());
    CHECK_FALSE(frozen_point(1.0, 2.0, 1.0).surface_elliptic());
    CHECK_FALSE(frozen_point(-1.0, 0.0, -1.0).surface_elliptic());
    CHECK_FALSE(frozen_point(1.0, 0.0, 0.0).surface_elliptic());
}

TEST_CASE("elasticity tensors: voigt layout, symmetries, positivity") {
    Eigen::Matrix3d id = Tensor4::identity().voigt();
    CHECK((id - Eigen::Vector3d(1.0, 1.0, 0.5).asDiagonal().toDenseMatrix()).norm() < 1e-15);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::Matrix3d V = testsupport::random_spd();
        Tensor4 T = Tensor4::from_voigt(V);
        CHECK(T.has_symmetries());
        CHECK(T.positive_definite());
        CHECK((T.voigt() - V).norm() < 1e-14);
    }
    Eigen::Matrix3d bad = Eigen::Matrix3d::Identity();
    bad(2, 2) = -1.0;
    ElasticityTensor E{Tensor4::from_voigt(bad), Tensor4::identity()};
    CHECK_THROWS_AS(E.validate(), InvariantError);
    Tensor4 asym = Tensor4::identity();
    asym(0, 0, 1, 1) = 0.3;
    CHECK_FALSE(asym.has_symmetries());
}

TEST_CASE("error reporting") {
    Grid g = small_grid();
    auto m = frozen_chart(g, 1.0, 0.0, 1.0);
    DisplacementField other(small_grid(9));
    CHECK_THROWS_AS(strain_tensor(other, m), DimensionError);

    Grid tiny{3, 3, 0.1, 0.0, 0.0};
    CHECK_THROWS_AS(strain_tensor(DisplacementField(tiny), frozen_chart(tiny, 1.0, 0.0, 1.0)), DimensionError);

    auto skew = m;
    skew.points[3].b_cov[0][1] = 0.5;
    CHECK_THROWS_AS(strain_tensor(DisplacementField(g), skew), InvariantError);

    Eigen::Matrix3d bad = Eigen::Matrix3d::Identity();
    bad(0, 0) = -2.0;
    ElasticityTensor E{Tensor4::identity(), Tensor4::from_voigt(bad)};
    DisplacementField u(g);
    CHECK_THROWS_AS(energy_forms(u, u, m, E), InvariantError);

    CHECK_THROWS_AS(sphere_cap_point(2.0, 0.0, 1.0), DomainError);
}
