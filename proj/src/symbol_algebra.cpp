#include "koiter/symbol_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "koiter/csv.hpp"
#include "koiter/error.hpp"

namespace koiter {

namespace {

const cd I(0.0, 1.0);

Vec2c neg(const Vec2c& xi) { return {-xi.x1, -xi.x2}; }

CMatrix to_complex(const Eigen::Matrix3d& m) { return m.cast<cd>(); }

// Tangential part of the strain symbol, the u3 column dropped.
CMatrix tangential_strain_symbol(const MetricData& m, const Vec2c& xi) {
    CMatrix g = rigidity_symbol(m, xi);
    g.col(2).setZero();
    return g;
}

// Principal symbol of (rho11, rho22, 2 rho12) for indices t = (1,1,2).
CMatrix curvature_symbol(const MetricData& m, const Vec2c& xi) {
    const auto& bm = m.b_mixed; // bm[b][l] = b^l_b
    CMatrix k(3, 3);
    for (int l = 0; l < 2; ++l) {
        k(0, l) = 2.0 * I * xi.x1 * bm[0][l];
        k(1, l) = 2.0 * I * xi.x2 * bm[1][l];
        k(2, l) = 2.0 * I * (xi.x1 * bm[1][l] + xi.x2 * bm[0][l]);
    }
    k(0, 2) = -xi.x1 * xi.x1;
    k(1, 2) = -xi.x2 * xi.x2;
    k(2, 2) = -2.0 * xi.x1 * xi.x2;
    return k;
}

void require_surface_elliptic(const MetricData& m, const std::string& name) {
    if (!m.surface_elliptic())
        throw DomainError("system '" + name + "' requires an elliptic surface point (b11 > 0, b11 b22 - b12^2 > 0)");
}

// Taylor coefficients T_n of f(z0 + z) for n < count, from samples on a circle.
std::vector<CMatrix> taylor_coefficients(const std::function<CMatrix(cd)>& f, cd z0, double radius, int n_samples,
                                         int count) {
    std::vector<CMatrix> samples;
    samples.reserve(n_samples);
    for (int j = 0; j < n_samples; ++j)
        samples.push_back(f(z0 + radius * std::polar(1.0, 2.0 * std::numbers::pi * j / n_samples)));
    std::vector<CMatrix> out;
    for (int n = 0; n < count; ++n) {
        CMatrix acc = CMatrix::Zero(samples[0].rows(), samples[0].cols());
        for (int j = 0; j < n_samples; ++j) acc += samples[j] * std::polar(1.0, -2.0 * std::numbers::pi * j * n / n_samples);
        out.push_back(acc / (static_cast<double>(n_samples) * std::pow(radius, n)));
    }
    return out;
}

double factorial_ratio(int d, int n) {
    double r = 1.0;
    for (int k = d - n + 1; k <= d; ++k) r *= k;
    return r;
}

// Parlett-Reinsch diagonal balancing, radix 2.
void balance(Eigen::MatrixXcd& A) {
    const double radix = 2.0;
    const Eigen::Index n = A.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(A(j, i));
                r += std::abs(A(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix, f = 1.0, s = c + r;
            while (c < g) {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                A.row(i) /= f;
                A.col(i) *= f;
            }
        }
    }
}

} // namespace

int DNSystem::total_order() const {
    return std::accumulate(s.begin(), s.end(), 0) + std::accumulate(t.begin(), t.end(), 0);
}

CMatrix rigidity_symbol(const MetricData& m, const Vec2c& xi) {
    CMatrix r(3, 3);
    r << I * xi.x1, 0.0, -m.b_cov[0][0],
         0.0, I * xi.x2, -m.b_cov[1][1],
         I * xi.x2, I * xi.x1, -2.0 * m.b_cov[0][1];
    return r;
}

DNSystem builtin_system(const std::string& name, const MetricData& m, const ElasticityTensor& E, double eps) {
    m.validate();
    DNSystem sys;
    sys.name = name;
    if (name == "rigidity") {
        sys.n_unknowns = sys.n_equations = 3;
        sys.t = {1, 1, 0};
        sys.s = {0, 0, 0};
        sys.symbol = [](const MetricData& p, const Vec2c& xi) { return rigidity_symbol(p, xi); };
        return sys;
    }
    if (name != "membrane_tension" && name != "membrane" && name != "membrane_mixed" && name != "koiter")
        throw ValidationError("unknown system '" + name + "'");
    require_surface_elliptic(m, name);
    E.validate();
    const Eigen::Matrix3d At = E.A.voigt();
    if (name == "membrane_tension") {
        sys.n_unknowns = sys.n_equations = 3;
        sys.t = {0, 0, 0};
        sys.s = {1, 1, 0};
        sys.symbol = [](const MetricData& p, const Vec2c& xi) {
            CMatrix r = rigidity_symbol(p, neg(xi));
            return CMatrix(r.transpose());
        };
    } else if (name == "membrane") {
        sys.n_unknowns = sys.n_equations = 3;
        sys.t = {1, 1, 0};
        sys.s = {1, 1, 0};
        sys.symbol = [Ac = to_complex(At)](const MetricData& p, const Vec2c& xi) {
            return CMatrix(rigidity_symbol(p, neg(xi)).transpose() * Ac * rigidity_symbol(p, xi));
        };
    } else if (name == "membrane_mixed") {
        sys.n_unknowns = sys.n_equations = 6;
        sys.t = {0, 0, 0, 1, 1, 0};
        sys.s = {1, 1, 0, 0, 0, 0};
        sys.symbol = [C = to_complex(At.inverse())](const MetricData& p, const Vec2c& xi) {
            CMatrix L = CMatrix::Zero(6, 6);
            L.block(0, 0, 3, 3) = rigidity_symbol(p, neg(xi)).transpose();
            L.block(3, 0, 3, 3) = -C;
            L.block(3, 3, 3, 3) = rigidity_symbol(p, xi);
            return L;
        };
    } else {
        if (eps < 0.0) throw ValidationError("koiter system needs eps >= 0");
        sys.n_unknowns = sys.n_equations = 3;
        sys.t = {1, 1, 2};
        sys.s = {1, 1, 2};
        double e2 = eps * eps;
        sys.symbol = [Ac = to_complex(At), Bc = to_complex(E.B.voigt()), e2](const MetricData& p, const Vec2c& xi) {
            CMatrix mem = tangential_strain_symbol(p, neg(xi)).transpose() * Ac * tangential_strain_symbol(p, xi);
            CMatrix ben = curvature_symbol(p, neg(xi)).transpose() * Bc * curvature_symbol(p, xi);
            return CMatrix(mem + e2 * ben);
        };
    }
    return sys;
}

BoundaryConditionSet builtin_bc(const std::string& name, const ElasticityTensor& E) {
    BoundaryConditionSet bc;
    bc.name = name;
    auto rows = [](std::vector<int> picks) {
        return [picks](const MetricData&, const Vec2c&) {
            CMatrix b = CMatrix::Zero(static_cast<Eigen::Index>(picks.size()), 3);
            for (std::size_t k = 0; k < picks.size(); ++k) b(static_cast<Eigen::Index>(k), picks[k]) = 1.0;
            return b;
        };
    };
    if (name == "u1") {
        bc.r = {-1};
        bc.symbol = rows({0});
    } else if (name == "u2") {
        bc.r = {-1};
        bc.symbol = rows({1});
    } else if (name == "u3") {
        bc.r = {0};
        bc.symbol = rows({2});
    } else if (name == "membrane_dirichlet") {
        bc.r = {-1, -1};
        bc.symbol = rows({0, 1});
    } else if (name == "traction") {
        // T^{2b} n = 0 on x2 = 0: the T22 and T12 rows of A R(xi)
        bc.r = {0, 0};
        bc.symbol = [Ac = to_complex(E.A.voigt())](const MetricData& p, const Vec2c& xi) {
            CMatrix T = Ac * rigidity_symbol(p, xi);
            CMatrix b(2, 3);
            b.row(0) = T.row(1);
            b.row(1) = T.row(2);
            return b;
        };
    } else if (name == "koiter_clamped") {
        bc.r = {-1, -1, -2, -1};
        bc.symbol = [](const MetricData&, const Vec2c& xi) {
            CMatrix b = CMatrix::Zero(4, 3);
            b(0, 0) = 1.0;
            b(1, 1) = 1.0;
            b(2, 2) = 1.0;
            b(3, 2) = I * xi.x2;
            return b;
        };
    } else {
        throw ValidationError("unknown boundary condition set '" + name + "'");
    }
    return bc;
}

cd principal_determinant(const DNSystem& sys, const MetricData& m, const Vec2c& xi) {
    CMatrix L = sys.symbol(m, xi);
    if (L.rows() != sys.n_equations || L.cols() != sys.n_unknowns)
        throw DimensionError("symbol generator returned a matrix of the wrong shape");
    return L.fullPivLu().determinant();
}

EllipticityReport ellipticity_check(const DNSystem& sys, const MetricData& m, int n_angles) {
    if (n_angles < 8) throw DomainError("ellipticity_check needs at least 8 angles");
    auto absdet = [&](double th) {
        return std::abs(principal_determinant(sys, m, {cd(std::cos(th), 0.0), cd(std::sin(th), 0.0)}));
    };
    const double step = 2.0 * std::numbers::pi / n_angles;
    std::vector<double> vals(n_angles);
    for (int j = 0; j < n_angles; ++j) vals[j] = absdet(j * step);

    EllipticityReport rep;
    rep.max_abs_det = *std::max_element(vals.begin(), vals.end());
    rep.min_abs_det = vals[0];
    rep.argmin_angle = 0.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int j = 0; j < n_angles; ++j) {
        double prev = vals[(j + n_angles - 1) % n_angles], next = vals[(j + 1) % n_angles];
        if (vals[j] > prev || vals[j] > next) continue;
        double lo = (j - 1) * step, hi = (j + 1) * step;
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        double fc = absdet(c), fd = absdet(d);
        for (int it = 0; it < 80; ++it) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - gr * (hi - lo);
                fc = absdet(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + gr * (hi - lo);
                fd = absdet(d);
            }
        }
        double th = 0.5 * (lo + hi), f = absdet(th);
        if (vals[j] < f) {
            th = j * step;
            f = vals[j];
        }
        if (f < rep.min_abs_det) {
            rep.min_abs_det = f;
            rep.argmin_angle = std::fmod(th + 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
        }
    }
    rep.elliptic = rep.min_abs_det > 1e-10 * rep.max_abs_det;
    return rep;
}

std::vector<cd> polynomial_roots(const std::vector<cd>& coeffs) {
    std::size_t n = coeffs.size();
    while (n > 0 && coeffs[n - 1] == cd(0.0)) --n;
    if (n <= 1) return {};
    const std::size_t deg = n - 1;
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(deg, deg);
    for (std::size_t i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < deg; ++i) C(i, deg - 1) = -coeffs[i] / coeffs[deg];
    balance(C);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<cd> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
    return roots;
}

std::vector<cd> characteristic_polynomial(const DNSystem& sys, const MetricData& m, double xi1) {
    if (xi1 == 0.0) throw DomainError("characteristic roots need xi1 != 0");
    const int deg = sys.total_order();
    const int n = deg + 1;
    const double R = std::abs(xi1);
    std::vector<cd> samples(n);
    for (int j = 0; j < n; ++j)
        samples[j] = principal_determinant(sys, m, {cd(xi1, 0.0), R * std::polar(1.0, 2.0 * std::numbers::pi * j / n)});
    std::vector<cd> c(n);
    for (int k = 0; k < n; ++k) {
        cd acc = 0.0;
        for (int j = 0; j < n; ++j) acc += samples[j] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / n);
        c[k] = acc / (static_cast<double>(n) * std::pow(R, k));
    }
    double big = 0.0;
    for (int k = 0; k < n; ++k) big = std::max(big, std::abs(c[k]) * std::pow(R, k));
    if (std::abs(c[deg]) * std::pow(R, deg) <= 1e-12 * big)
        throw EllipticityError("characteristic polynomial loses degree: the normal direction is characteristic");
    return c;
}

std::vector<RootCluster> cluster_roots(const std::vector<cd>& roots, double scale) {
    const double tol = 2e-3 * scale;
    std::vector<int> label(roots.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (label[i] >= 0) continue;
        label[i] = next;
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
            std::size_t a = stack.back();
            stack.pop_back();
            for (std::size_t b = 0; b < roots.size(); ++b)
                if (label[b] < 0 && std::abs(roots[a] - roots[b]) < tol) {
                    label[b] = next;
                    stack.push_back(b);
                }
        }
        ++next;
    }
    std::vector<RootCluster> out(next, RootCluster{cd(0.0), 0});
    for (std::size_t i = 0; i < roots.size(); ++i) {
        out[label[i]].root += roots[i];
        out[label[i]].multiplicity += 1;
    }
    for (auto& c : out) c.root /= static_cast<double>(c.multiplicity);
    std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.root.imag() != b.root.imag()) return a.root.imag() > b.root.imag();
        return a.root.real() < b.root.real();
    });
    return out;
}

std::vector<cd> characteristic_roots(const DNSystem& sys, const MetricData& m, double xi1) {
    auto raw = polynomial_roots(characteristic_polynomial(sys, m, xi1));
    auto clusters = cluster_roots(raw, std::abs(xi1));
    std::vector<cd> out;
    int up = 0, down = 0;
    for (const auto& c : clusters) {
        if (std::abs(c.root.imag()) < 1e-9 * std::max(std::abs(xi1), std::abs(c.root))) {
            std::ostringstream os;
            os << "real characteristic root xi2 = " << c.root.real() << " at xi1 = " << xi1;
            throw EllipticityError(os.str());
        }
        (c.root.imag() > 0 ? up : down) += c.multiplicity;
        for (int k = 0; k < c.multiplicity; ++k) out.push_back(c.root);
    }
    if (up != sys.m() || down != sys.m())
        throw EllipticityError("root counts above and below the real axis are not both m");
    return out;
}

SLReport sl_check(const DNSystem& sys, const BoundaryConditionSet& bc, const MetricData& m, double xi1,
                  const std::string& point_id) {
    const int mm = sys.m();
    const int n = sys.n_unknowns;
    if (static_cast<int>(bc.r.size()) != mm)
        throw DimensionError("boundary condition count " + std::to_string(bc.r.size()) + " differs from m = " +
                             std::to_string(mm));
    {
        CMatrix probe = bc.symbol(m, {cd(xi1, 0.0), cd(1.0, 0.0)});
        if (probe.rows() != mm || probe.cols() != n)
            throw DimensionError("boundary symbol has the wrong shape");
    }
    auto roots = characteristic_roots(sys, m, xi1);
    auto clusters = cluster_roots(roots, std::abs(xi1));

    SLReport rep;
    rep.point_id = point_id;
    rep.xi1 = xi1;
    rep.m = mm;
    std::vector<DecayingTerm> basis;
    std::vector<CVector> columns;
    const double radius = std::abs(xi1);
    const int n_samples = sys.total_order() + 1;
    for (const auto& cl : clusters) {
        if (cl.root.imag() <= 0.0) continue;
        for (int k = 0; k < cl.multiplicity; ++k) rep.decaying_roots.push_back(cl.root);
        const int deg = std::min(cl.multiplicity, 2);
        auto Lsym = [&](cd z) { return sys.symbol(m, {cd(xi1, 0.0), z}); };
        auto T = taylor_coefficients(Lsym, cl.root, radius, n_samples, deg);
        // L(rho + N) on polynomials of degree < deg, N = -i d/dx2
        CMatrix op = CMatrix::Zero(sys.n_equations * deg, n * deg);
        for (int nn = 0; nn < deg; ++nn)
            for (int d = nn; d < deg; ++d) {
                cd w = std::pow(-I, nn) * factorial_ratio(d, nn);
                for (int k = 0; k < sys.n_equations; ++k)
                    for (int j = 0; j < n; ++j) op(k * deg + (d - nn), j * deg + d) += T[nn](k, j) * w;
            }
        Eigen::JacobiSVD<CMatrix> svd(op, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        double smax = sv.size() ? sv(0) : 0.0;
        int kdim = 0;
        for (Eigen::Index i = 0; i < op.cols(); ++i) {
            double s = i < sv.size() ? sv(i) : 0.0;
            if (s <= 1e-7 * smax) ++kdim;
        }
        if (kdim != cl.multiplicity) {
            std::ostringstream os;
            os << "root xi2 = " << cl.root << " of multiplicity " << cl.multiplicity << " has " << kdim
               << " solutions of degree < 2 in x2: Jordan chains longer than 2 are not supported";
            throw StructureError(os.str());
        }
        auto Bsym = [&](cd z) { return bc.symbol(m, {cd(xi1, 0.0), z}); };
        auto Bt = taylor_coefficients(Bsym, cl.root, radius, n_samples, deg);
        for (Eigen::Index c = op.cols() - kdim; c < op.cols(); ++c) {
            CVector v = svd.matrixV().col(c);
            DecayingTerm term{cl.root, CMatrix(n, deg)};
            for (int j = 0; j < n; ++j)
                for (int d = 0; d < deg; ++d) term.coeffs(j, d) = v(j * deg + d);
            CVector col = CVector::Zero(mm);
            for (int nn = 0; nn < deg; ++nn) {
                cd w = std::pow(-I, nn) * factorial_ratio(nn, nn);
                col += w * (Bt[nn] * term.coeffs.col(nn));
            }
            basis.push_back(term);
            columns.push_back(col);
        }
    }
    if (static_cast<int>(columns.size()) != mm)
        throw StructureError("decaying solution space has dimension " + std::to_string(columns.size()) +
                             " instead of m = " + std::to_string(mm));
    rep.sl_matrix = CMatrix(mm, mm);
    for (int c = 0; c < mm; ++c) rep.sl_matrix.col(c) = columns[c];
    rep.sl_determinant = rep.sl_matrix.fullPivLu().determinant();
    rep.tolerance = 1e-8 * std::pow(rep.sl_matrix.cwiseAbs().maxCoeff(), mm);
    rep.satisfied = std::abs(rep.sl_determinant) > rep.tolerance;
    if (!rep.satisfied) {
        Eigen::JacobiSVD<CMatrix> svd(rep.sl_matrix, Eigen::ComputeFullV);
        CVector z = svd.matrixV().col(mm - 1);
        for (int c = 0; c < mm; ++c) {
            if (std::abs(z(c)) < 1e-14) continue;
            DecayingTerm t = basis[c];
            t.coeffs *= z(c);
            auto same = std::find_if(rep.witness.begin(), rep.witness.end(),
                                     [&](const DecayingTerm& w) { return w.root == t.root; });
            if (same != rep.witness.end())
                same->coeffs += t.coeffs;
            else
                rep.witness.push_back(t);
        }
    }
    return rep;
}

CVector evaluate_terms(const std::vector<DecayingTerm>& terms, double x2) {
    if (terms.empty()) return CVector();
    CVector out = CVector::Zero(terms[0].coeffs.rows());
    for (const auto& t : terms) {
        cd e = std::exp(I * t.root * x2);
        cd p = 1.0;
        for (Eigen::Index d = 0; d < t.coeffs.cols(); ++d) {
            out += t.coeffs.col(d) * (p * e);
            p *= x2;
        }
    }
    return out;
}

std::string SLReport::csv_header() { return "point_id,xi1,m,abs_det,satisfied"; }

std::string SLReport::csv_row() const {
    return point_id + "," + format_number(xi1) + "," + std::to_string(m) + "," +
           format_number(std::abs(sl_determinant)) + "," + format_bool(satisfied);
}

} // namespace koiter
