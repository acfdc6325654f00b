#include "koiter/boundary_layer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "koiter/error.hpp"
#include "koiter/symbol_algebra.hpp"

namespace koiter {

namespace {

const cd I(0.0, 1.0);

void require_elliptic(const LayerPoint& b) {
    if (!(b.b11 > 0.0) || !(b.discriminant() > 0.0)) {
        std::ostringstream os;
        os << "boundary point b = (" << b.b11 << ", " << b.b12 << ", " << b.b22 << ") is not elliptic";
        throw DomainError(os.str());
    }
}

void require_frequency(double xi1) {
    if (xi1 == 0.0 || !std::isfinite(xi1)) throw DomainError("layer modes need a finite xi1 != 0");
}

double trace_factor(const LayerPoint& b, double xi1) {
    return b.b11 * b.b22 / (2.0 * std::abs(xi1) * std::sqrt(b.discriminant()));
}

Vec3c min_norm_solve(const Mat3c& M, const Vec3c& rhs) {
    Eigen::JacobiSVD<Mat3c> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-10);
    return svd.solve(rhs);
}

// Kernel vector of K with a deterministic phase: largest entry real positive.
Vec3c unit_kernel_vector(const Mat3c& K) {
    Eigen::JacobiSVD<Mat3c> svd(K, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int kdim = 0;
    for (int i = 0; i < 3; ++i)
        if (sv(i) <= 1e-10 * sv(0)) ++kdim;
    if (kdim != 1)
        throw StructureError("adjoint kernel has dimension " + std::to_string(kdim) + " instead of 1");
    Vec3c u = svd.matrixV().col(2);
    Eigen::Index k;
    u.cwiseAbs().maxCoeff(&k);
    u *= std::abs(u(k)) / u(k);
    return u;
}

Vec3c partner_value(const LayerMode& mode, double y2) {
    const LayerPartner& p = *mode.partner;
    Vec3c poly = p.v;
    if (p.jordan) poly += y2 * mode.w;
    return poly * std::exp(mode.lambda * y2);
}

} // namespace

Mat3c gamma0_hat(double xi1, const LayerPoint& b) {
    Mat3c g;
    g << -I * xi1, 0.0, -b.b11,
         0.0, 0.0, -b.b22,
         0.0, -I * xi1, -2.0 * b.b12;
    return g;
}

Mat3c gamma1_tilde() {
    Mat3c g;
    g << 0.0, 0.0, 0.0,
         0.0, 1.0, 0.0,
         1.0, 0.0, 0.0;
    return g;
}

RootPair rigidity_roots(const LayerPoint& b, double xi1) {
    require_elliptic(b);
    require_frequency(xi1);
    cd shift = -I * xi1 * b.b12 / b.b11;
    double spread = std::abs(xi1) * std::sqrt(b.discriminant()) / b.b11;
    return {shift + spread, shift - spread};
}

Vec3c layer_eigenvector(cd lambda, double xi1, const LayerPoint& b) {
    if (b.b22 == 0.0) throw DomainError("layer eigenvector needs b22 != 0");
    require_frequency(xi1);
    return Vec3c(I * lambda * b.b11 / (xi1 * b.b22), 1.0, lambda / b.b22);
}

GeneralizedEigen generalized_eigenvector(cd lambda, const Vec3c& w, const Eigen::Matrix3d& At, double xi1,
                                         const LayerPoint& b) {
    Eigen::LLT<Eigen::Matrix3d> llt(At);
    if (llt.info() != Eigen::Success) throw InvariantError("membrane matrix is not positive definite");
    const Mat3c g0 = gamma0_hat(xi1, b), g1 = gamma1_tilde();
    const Mat3c M = g0 + lambda * g1;
    const Mat3c K = g0.conjugate().transpose() - lambda * g1.transpose();
    const Mat3c Ainv = At.inverse().cast<cd>();
    Vec3c u0 = unit_kernel_vector(K);
    // Range(M) is annihilated by u0 under the bilinear pairing, since Ker M^T = Ker K.
    cd denom = u0.transpose() * Ainv * u0;
    cd num = u0.transpose() * g1 * w;
    if (std::abs(denom) <= 1e-12 * Ainv.norm()) {
        std::ostringstream os;
        os << "double root lambda = " << lambda << " is semisimple (u0^T A^-1 u0 = 0): no generalized eigenvector";
        throw StructureError(os.str());
    }
    GeneralizedEigen ge;
    ge.u0 = u0;
    ge.tau = num / denom;
    Vec3c rhs = ge.tau * (Ainv * u0) - g1 * w;
    ge.v = min_norm_solve(M, rhs);
    if ((M * ge.v - rhs).norm() > 1e-9 * (1.0 + rhs.norm()))
        throw StructureError("generalized eigenvector system is inconsistent");
    return ge;
}

LayerPartner layer_partner(cd lambda, const Vec3c& w, const Eigen::Matrix3d& At, double xi1, const LayerPoint& b) {
    const Mat3c M = gamma0_hat(xi1, b) + lambda * gamma1_tilde();
    LayerPartner p;
    try {
        GeneralizedEigen ge = generalized_eigenvector(lambda, w, At, xi1, b);
        p.v = ge.v;
        p.tau = ge.tau;
        p.u0 = ge.u0;
        p.jordan = true;
        p.strain = M * p.v + gamma1_tilde() * w;
        return p;
    } catch (const StructureError&) {
    }
    const Mat3c K = gamma0_hat(xi1, b).conjugate().transpose() - lambda * gamma1_tilde().transpose();
    p.u0 = unit_kernel_vector(K);
    Vec3c rhs = At.inverse().cast<cd>() * p.u0;
    p.v = min_norm_solve(M, rhs);
    if ((M * p.v - rhs).norm() > 1e-9 * (1.0 + rhs.norm()))
        throw StructureError("no second decaying solution at lambda");
    p.tau = 1.0;
    p.jordan = false;
    p.strain = M * p.v;
    return p;
}

LayerModes layer_modes(const LayerPoint& b, const Eigen::Matrix3d& At, double xi1) {
    RootPair r = rigidity_roots(b, xi1);
    LayerModes modes;
    modes.plus = {r.plus, layer_eigenvector(r.plus, xi1, b), std::nullopt, xi1, b, "rigidity"};
    modes.minus = {r.minus, layer_eigenvector(r.minus, xi1, b), std::nullopt, xi1, b, "rigidity"};
    modes.plus.partner = layer_partner(r.plus, modes.plus.w, At, xi1, b);
    modes.minus.partner = layer_partner(r.minus, modes.minus.w, At, xi1, b);
    return modes;
}

Vec3c DecayingProfile::operator()(double y2) const {
    return C * (w_plus * std::exp(lambda_plus * y2) - w_minus * std::exp(lambda_minus * y2));
}

DecayingProfile decaying_profile(cd w3_trace_hat, double xi1, const LayerPoint& b) {
    RootPair r = rigidity_roots(b, xi1);
    DecayingProfile p;
    p.C = trace_factor(b, xi1) * w3_trace_hat;
    p.lambda_plus = r.plus;
    p.lambda_minus = r.minus;
    p.w_plus = layer_eigenvector(r.plus, xi1, b);
    p.w_minus = layer_eigenvector(r.minus, xi1, b);
    return p;
}

MatchingConstants matching_constants(const LayerModes& modes, cd w3_trace_hat) {
    const LayerMode& mm = modes.minus;
    if (!mm.partner) throw StructureError("decaying mode has no partner");
    const Vec3c& wp = modes.plus.w;
    const Vec3c& wm = mm.w;
    const Vec3c& vm = mm.partner->v;
    Eigen::Matrix2cd S;
    S << wm(0), vm(0), wm(1), vm(1);
    Eigen::Vector2cd rhs(-wp(0), -wp(1));
    cd det = S.determinant();
    if (std::abs(det) <= 1e-12 * S.cwiseAbs().maxCoeff() * S.cwiseAbs().maxCoeff()) {
        std::ostringstream os;
        os << "matching system is singular at xi1 = " << mm.xi1 << ", b = (" << mm.point.b11 << ", "
           << mm.point.b12 << ", " << mm.point.b22 << ")";
        throw DegenerateModeError(os.str());
    }
    Eigen::Vector2cd ab = S.partialPivLu().solve(rhs);
    MatchingConstants c;
    c.alpha = ab(0);
    c.beta = ab(1);
    c.C1 = trace_factor(mm.point, mm.xi1) * w3_trace_hat;
    c.C2 = c.alpha * c.C1;
    c.C3 = 0.0;
    c.C4 = c.beta * c.C1;
    return c;
}

Vec3c modified_profile(const LayerModes& modes, const MatchingConstants& c, double y2) {
    return c.C1 * modes.plus.w * std::exp(modes.plus.lambda * y2) +
           c.C2 * modes.minus.w * std::exp(modes.minus.lambda * y2) + c.C4 * partner_value(modes.minus, y2);
}

Vec3c modification(const LayerModes& modes, const MatchingConstants& c, double y2) {
    return (c.C1 + c.C2) * modes.minus.w * std::exp(modes.minus.lambda * y2) + c.C4 * partner_value(modes.minus, y2);
}

Vec3c renormalized_modification(const LayerModes& modes, double y2) {
    return trace_factor(modes.minus.point, modes.minus.xi1) * partner_value(modes.minus, y2);
}

cd cauchy_rigidity_determinant(const LayerPoint& b, double xi1) {
    RootPair r = rigidity_roots(b, xi1);
    Vec3c wp = layer_eigenvector(r.plus, xi1, b), wm = layer_eigenvector(r.minus, xi1, b);
    return wp(0) * wm(1) - wm(0) * wp(1);
}

double frequency_cutoff(double xi1, double eps) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw DomainError("frequency cutoff needs 0 < eps < 1");
    double z = std::abs(xi1) / std::sqrt(std::log(1.0 / eps));
    double t = std::clamp((z - 0.5) / 0.5, 0.0, 1.0);
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

Vec3c low_frequency_profile(double y2, double width) {
    if (!(width > 0.0)) throw DomainError("profile width must be positive");
    double s = std::max(0.0, 1.0 - y2 / width);
    return Vec3c(0.0, 0.0, s * s);
}

Vec3c layer_symbol(const LayerModes& modes, double eps, double y2, double width) {
    double H = frequency_cutoff(modes.minus.xi1, eps);
    Vec3c out = (1.0 - H) * low_frequency_profile(y2, width);
    if (H > 0.0) out += H * modification(modes, matching_constants(modes, 1.0), y2);
    return out;
}

LayerEnergy membrane_layer_energy(const LayerPoint& b, const Eigen::Matrix3d& At, double xi1, cd w3_trace_hat) {
    LayerModes modes = layer_modes(b, At, xi1);
    MatchingConstants c = matching_constants(modes, w3_trace_hat);
    const Vec3c& g = modes.minus.partner->strain;
    double density = (g.adjoint() * At.cast<cd>() * g)(0, 0).real();
    LayerEnergy e;
    e.a = std::norm(c.C4) * density / (2.0 * std::abs(modes.minus.lambda.real()));
    e.w3_trace = std::norm(w3_trace_hat);
    Vec3c jump = c.C1 * (modes.plus.w - modes.minus.w);
    e.tangential = std::norm(jump(0)) + std::norm(jump(1));
    return e;
}

double layer_energy_coefficient(const LayerPoint& b, const Eigen::Matrix3d& At) {
    double theta = membrane_layer_energy(b, At, 1.0, 1.0).a;
    if (!(theta > 0.0)) throw InvariantError("layer energy coefficient is not positive");
    return theta;
}

double bending_layer_energy(const LayerPoint& b, const Eigen::Matrix3d& Bt, double xi1) {
    cd lm = rigidity_roots(b, xi1).minus;
    Vec3c h(-xi1 * xi1, lm * lm, -2.0 * I * xi1 * lm);
    double density = (h.adjoint() * Bt.cast<cd>() * h)(0, 0).real();
    return density / (2.0 * std::abs(lm.real()));
}

double bending_symbol_coefficient(const LayerPoint& b, const Eigen::Matrix3d& Bt) {
    double zeta = bending_layer_energy(b, Bt, 1.0);
    if (!(zeta > 0.0)) throw InvariantError("bending coefficient is not positive");
    return zeta;
}

double EnergySymbol::value(double xi1) const {
    if (kind == Kind::P) return coefficient * std::pow(1.0 + xi1 * xi1, 0.25);
    return std::sqrt(coefficient * std::pow(std::abs(xi1), 3));
}

EnergySymbol p_symbol(double theta) {
    if (!(theta > 0.0)) throw InvariantError("theta must be positive");
    return {EnergySymbol::Kind::P, theta, 0.5};
}

EnergySymbol q_symbol(double zeta) {
    if (!(zeta > 0.0)) throw InvariantError("zeta must be positive");
    return {EnergySymbol::Kind::Q, zeta, 1.5};
}

SublayerCheck sublayer_scaling_check(double eps) {
    if (!(eps > 0.0)) throw DomainError("sublayer check needs eps > 0");
    SublayerCheck s;
    s.delta = std::sqrt(eps);
    auto roots = polynomial_roots({cd(-1.0), 0.0, 0.0, 0.0, cd(eps * eps)});
    auto it = std::min_element(roots.begin(), roots.end(),
                               [](cd a, cd b) { return std::abs(a.real()) < std::abs(b.real()); });
    s.root_magnitude = std::abs(*it);
    return s;
}

} // namespace koiter
