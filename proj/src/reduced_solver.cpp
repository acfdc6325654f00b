#include "koiter/reduced_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "koiter/error.hpp"

namespace koiter {

SpectralField::SpectralField(int N) : N_(N), c_(static_cast<std::size_t>(2 * N + 1), cd(0.0)) {
    if (N < 0) throw DomainError("mode cutoff must be non-negative");
}

SpectralField SpectralField::from_function(int N, const std::function<cd(int)>& f) {
    SpectralField F(N);
    for (int k = -N; k <= N; ++k) F[k] = f(k);
    return F;
}

double SpectralField::hs_norm(double s) const {
    // scaled by the largest term; truncated eps = 0 solutions get close to overflow
    std::vector<double> t(c_.size());
    double m = 0.0;
    for (int k = -N_; k <= N_; ++k) {
        t[k + N_] = std::pow(1.0 + double(k) * k, 0.5 * s) * std::abs((*this)[k]);
        m = std::max(m, t[k + N_]);
    }
    if (m == 0.0 || !std::isfinite(m)) return m;
    double acc = 0.0;
    for (double x : t) acc += (x / m) * (x / m);
    return m * std::sqrt(acc);
}

bool SpectralField::is_real(double tol) const {
    for (int k = 0; k <= N_; ++k)
        if (std::abs((*this)[-k] - std::conj((*this)[k])) > tol) return false;
    return true;
}

int SpectralField::support_radius() const {
    for (int k = N_; k >= 0; --k)
        if ((*this)[k] != cd(0.0) || (*this)[-k] != cd(0.0)) return k;
    return -1;
}

SpectralField SpectralField::truncated(int M) const {
    if (M > N_) throw ResolutionError("cannot truncate to more modes than stored");
    SpectralField out(M);
    for (int k = -M; k <= M; ++k) out[k] = (*this)[k];
    return out;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    if (a.N() != b.N()) throw DimensionError("spectral fields have different cutoffs");
    SpectralField out(a.N());
    for (int k = -a.N(); k <= a.N(); ++k) out[k] = a[k] + b[k];
    return out;
}

SpectralField operator*(cd alpha, const SpectralField& a) {
    SpectralField out(a.N());
    for (int k = -a.N(); k <= a.N(); ++k) out[k] = alpha * a[k];
    return out;
}

ReducedOperator ReducedOperator::with_epsilon(double e) const {
    if (e < 0.0) throw DomainError("eps must be non-negative");
    ReducedOperator op = *this;
    op.eps = e;
    return op;
}

ReducedOperator ReducedOperator::with_kernel(const std::set<int>& K) const {
    ReducedOperator op = *this;
    op.s = [base = s, K](double k) {
        double r = std::round(k);
        if (r == k && K.count(static_cast<int>(r))) return 0.0;
        return base(k);
    };
    return op;
}

ReducedOperator build_default_operator(double theta, double zeta, double d, int N, double eps) {
    if (!(d > 0.0)) throw InvariantError("transmission decay rate d must be positive for a smoothing operator");
    if (!(theta > 0.0) || !(zeta > 0.0)) throw InvariantError("theta and zeta must be positive");
    if (N < 1) throw ValidationError("mode cutoff N must be at least 1");
    if (eps < 0.0) throw DomainError("eps must be non-negative");
    ReducedOperator op;
    op.s = [theta, d](double k) { return theta * std::sqrt(1.0 + k * k) * std::exp(-2.0 * d * std::abs(k)); };
    op.q = [zeta](double k) { return zeta * std::max(std::pow(std::abs(k), 3), q_floor); };
    op.eps = eps;
    op.N = N;
    // sup of sqrt(1+k^2) e^{-d k}: k = 0 or the larger root of d k^2 - k + d = 0
    double sup = 1.0;
    if (d < 0.5) {
        double k = (1.0 + std::sqrt(1.0 - 4.0 * d * d)) / (2.0 * d);
        sup = std::max(sup, std::sqrt(1.0 + k * k) * std::exp(-d * k));
    }
    op.smoothing = {theta * sup, d};
    op.order = {zeta * q_floor, zeta};
    return op;
}

ReducedOperator build_default_operator(const EnergySymbol& P, const EnergySymbol& Q, double d, int N, double eps) {
    if (P.kind != EnergySymbol::Kind::P || Q.kind != EnergySymbol::Kind::Q)
        throw ValidationError("expected a (P, Q) energy symbol pair");
    return build_default_operator(P.coefficient, Q.coefficient, d, N, eps);
}

void check_invariants(const ReducedOperator& op) {
    for (int k = -op.N; k <= op.N; ++k) {
        double s = op.s(k), q = op.q(k);
        if (s < 0.0 || s > op.smoothing.A_s * std::exp(-op.smoothing.c * std::abs(k)) * (1.0 + 1e-12))
            throw InvariantError("smoothing bound violated at k = " + std::to_string(k));
        double r = q / std::pow(1.0 + double(k) * k, 1.5);
        if (r < op.order.q_lo * (1.0 - 1e-12) || r > op.order.q_hi * (1.0 + 1e-12))
            throw InvariantError("order-3 bound violated at k = " + std::to_string(k));
    }
}

SpectralField solve(const ReducedOperator& op, const SpectralField& F) {
    SpectralField v(F.N());
    std::vector<int> bad;
    for (int k = -F.N(); k <= F.N(); ++k) {
        double den = op.denominator(k);
        if (den == 0.0) {
            bad.push_back(k);
            continue;
        }
        v[k] = F[k] / den;
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os << "zero symbol on modes";
        for (int k : bad) os << ' ' << k;
        throw KernelModeError(os.str());
    }
    return v;
}

double coercivity_constant(const ReducedOperator& op) {
    double c = INFINITY;
    for (int k = -op.N; k <= op.N; ++k) c = std::min(c, op.denominator(k) / std::pow(1.0 + double(k) * k, 1.5));
    return c;
}

SpectralField apply_operator(const ReducedOperator& op, const SpectralField& v) {
    SpectralField out(v.N());
    for (int k = -v.N(); k <= v.N(); ++k) out[k] = op.denominator(k) * v[k];
    return out;
}

double frequency_window(const ReducedOperator& op) {
    if (!(op.eps > 0.0)) throw ResolutionError("eps = 0 has no crossover frequency");
    const double e2 = op.eps * op.eps;
    auto g = [&](double k) -> double {
        double s = op.s(k);
        if (s <= 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(s) - std::log(e2 * op.q(k));
    };
    const double step = 1.0 / 16.0;
    double a = 0.0, ga = g(a);
    if (ga <= 0.0) return 0.0;
    for (int j = 1; j * step <= op.N; ++j) {
        double b = j * step, gb = g(b);
        if (gb <= 0.0) {
            if (gb == 0.0) return b;
            if (!std::isfinite(gb)) return b;
            std::uintmax_t iters = 200;
            auto r = boost::math::tools::toms748_solve(g, a, b, ga, gb,
                                                       boost::math::tools::eps_tolerance<double>(52), iters);
            return 0.5 * (r.first + r.second);
        }
        a = b;
        ga = gb;
    }
    throw ResolutionError("no crossover below N = " + std::to_string(op.N) + "; increase N");
}

int argmax_mode(const SpectralField& v) {
    int best = 0;
    double bv = -1.0;
    for (int k = 0; k <= v.N(); ++k) {
        double m = std::max(std::abs(v[k]), std::abs(v[-k]));
        if (m > bv) {
            bv = m;
            best = k;
        }
    }
    return best;
}

double va_distance(const ReducedOperator& op, const SpectralField& v, const SpectralField& v0) {
    if (v.N() != v0.N()) throw DimensionError("spectral fields have different cutoffs");
    double acc = 0.0;
    for (int k = -v.N(); k <= v.N(); ++k)
        acc += std::pow(1.0 + double(k) * k, -1.5) * std::norm(op.s(k) * v[k] - op.s(k) * v0[k]);
    return std::sqrt(acc);
}

std::vector<VaRow> va_norm_convergence(const ReducedOperator& op, const std::vector<double>& eps_list,
                                       const SpectralField& F) {
    for (int k = -F.N(); k <= F.N(); ++k)
        if (!(op.s(k) > 0.0))
            throw KernelModeError("s vanishes at k = " + std::to_string(k) + "; use noninhibited_rescale");
    std::vector<VaRow> rows;
    for (double e : eps_list) {
        if (!(e > 0.0)) throw DomainError("eps entries must be positive");
        ReducedOperator oe = op.with_epsilon(e);
        SpectralField v = solve(oe, F);
        double bend = 0.0;
        for (int k = -F.N(); k <= F.N(); ++k)
            bend += std::pow(1.0 + double(k) * k, -1.5) * std::norm(e * e * oe.q(k) * v[k]);
        // s (v - v0) = -eps^2 q v exactly, so the distance equals the bending residual; the subtraction
        // loses digits once eps^2 q << s, so use the identity
        rows.push_back({e, std::sqrt(bend), std::sqrt(bend)});
    }
    return rows;
}

double sensitivity_probe(const ReducedOperator& op, int k_probe, double eta) {
    if (eta == 0.0) throw DomainError("perturbation amplitude must be nonzero");
    if (std::abs(k_probe) > op.N) throw ResolutionError("probe mode exceeds N");
    SpectralField dF(op.N);
    dF[k_probe] = eta;
    SpectralField dv = solve(op, dF);
    return dv.l2_norm() / dF.l2_norm();
}

std::vector<GrowthRow> truncated_norm_table(const ReducedOperator& op, const SpectralField& F, double r,
                                            const std::vector<int>& Ns) {
    ReducedOperator o0 = op.with_epsilon(0.0);
    auto norm_at = [&](int N) { return solve(o0, F.truncated(N)).hs_norm(-r); };
    std::vector<GrowthRow> rows;
    for (int N : Ns) {
        if (N < 1) throw DomainError("truncation must be at least 1");
        GrowthRow row;
        row.N = N;
        row.norm = norm_at(N);
        row.log_norm_over_N = std::log(row.norm) / N;
        row.local_slope = std::log(row.norm) - std::log(norm_at(N - 1));
        rows.push_back(row);
    }
    return rows;
}

std::vector<GrowthRow> no_distribution_limit_probe(const ReducedOperator& op, const SpectralField& F, double r,
                                                   const std::vector<int>& Ns) {
    if (F.support_radius() < F.N())
        throw DomainError("load is band-limited: the eps = 0 problem has a genuine solution");
    return truncated_norm_table(op, F, r, Ns);
}

std::vector<RescaleRow> noninhibited_rescale(const ReducedOperator& op, const std::set<int>& K,
                                             const SpectralField& F, const std::vector<double>& eps_list) {
    if (K.empty()) throw ValidationError("kernel set is empty; use va_norm_convergence");
    for (int k : K)
        if (std::abs(k) > F.N()) throw ResolutionError("kernel mode beyond the load cutoff");
    ReducedOperator oK = op.with_kernel(K);
    for (int k = -F.N(); k <= F.N(); ++k)
        if (!K.count(k) && !(oK.s(k) > 0.0))
            throw KernelModeError("s vanishes off the kernel set at k = " + std::to_string(k));
    std::vector<RescaleRow> rows;
    for (double e : eps_list) {
        if (!(e > 0.0)) throw DomainError("eps entries must be positive");
        ReducedOperator oe = oK.with_epsilon(e);
        SpectralField w = (e * e) * solve(oe, F);
        RescaleRow row{e, w, 0.0, 0.0, -INFINITY};
        for (int k = -F.N(); k <= F.N(); ++k) {
            if (K.count(k)) {
                row.kernel_error = std::max(row.kernel_error, std::abs(w[k] - F[k] / oe.q(k)));
            } else {
                row.off_kernel_max = std::max(row.off_kernel_max, std::abs(w[k]));
                row.off_kernel_excess = std::max(row.off_kernel_excess, std::abs(w[k]) - e * e * std::abs(F[k]) / oe.s(k));
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

SpectralField apply_variable_symbol(const std::function<cd(double, int)>& sigma, const SpectralField& theta,
                                    int n_quad) {
    const int N = theta.N();
    if (n_quad < 2 * N + 1)
        throw ResolutionError("n_quad = " + std::to_string(n_quad) + " aliases modes up to N = " + std::to_string(N));
    std::vector<cd> f(static_cast<std::size_t>(n_quad));
    for (int j = 0; j < n_quad; ++j) {
        double x = 2.0 * std::numbers::pi * j / n_quad;
        cd acc = 0.0;
        for (int k = -N; k <= N; ++k) acc += sigma(x, k) * theta[k] * std::polar(1.0, k * x);
        f[static_cast<std::size_t>(j)] = acc;
    }
    SpectralField out(N);
    for (int m = -N; m <= N; ++m) {
        cd acc = 0.0;
        for (int j = 0; j < n_quad; ++j)
            acc += f[static_cast<std::size_t>(j)] * std::polar(1.0, -m * 2.0 * std::numbers::pi * j / n_quad);
        out[m] = acc / static_cast<double>(n_quad);
    }
    return out;
}

} // namespace koiter
