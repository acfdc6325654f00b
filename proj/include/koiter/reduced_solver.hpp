#pragma once

#include <complex>
#include <functional>
#include <set>
#include <vector>

#include "koiter/boundary_layer.hpp"

namespace koiter {

using cd = std::complex<double>;

// Fourier coefficients on the circle for k = -N..N.
class SpectralField {
public:
    explicit SpectralField(int N = 0);
    static SpectralField from_function(int N, const std::function<cd(int)>& f);

    int N() const { return N_; }
    cd& operator[](int k) { return c_[static_cast<std::size_t>(k + N_)]; }
    cd operator[](int k) const { return c_[static_cast<std::size_t>(k + N_)]; }
    const std::vector<cd>& coeffs() const { return c_; }

    // sqrt(sum (1+k^2)^s |c_k|^2)
    double hs_norm(double s) const;
    double l2_norm() const { return hs_norm(0.0); }
    bool is_real(double tol = 0.0) const;
    // Largest |k| with a nonzero coefficient, -1 for the zero field.
    int support_radius() const;
    SpectralField truncated(int M) const;

private:
    int N_;
    std::vector<cd> c_;
};

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator*(cd alpha, const SpectralField& a);

struct SmoothingBound {
    double A_s = 0.0;
    double c = 0.0;
};

struct OrderBound {
    double q_lo = 0.0;
    double q_hi = 0.0;
};

struct ReducedOperator {
    std::function<double(double)> s;
    std::function<double(double)> q;
    double eps = 0.0;
    int N = 128;
    SmoothingBound smoothing;
    OrderBound order;

    double denominator(int k) const { return s(k) + eps * eps * q(k); }
    ReducedOperator with_epsilon(double e) const;
    // s set to zero on the listed modes.
    ReducedOperator with_kernel(const std::set<int>& K) const;
};

constexpr double q_floor = 1e-2;

ReducedOperator build_default_operator(double theta, double zeta, double d, int N, double eps = 0.0);
ReducedOperator build_default_operator(const EnergySymbol& P, const EnergySymbol& Q, double d, int N,
                                       double eps = 0.0);

// Throws InvariantError if the declared smoothing or order bounds fail on |k| <= N.
void check_invariants(const ReducedOperator& op);

SpectralField solve(const ReducedOperator& op, const SpectralField& F);
double coercivity_constant(const ReducedOperator& op);
SpectralField apply_operator(const ReducedOperator& op, const SpectralField& v);

double frequency_window(const ReducedOperator& op);
// Mode k >= 0 with the largest |v_k|, ties to the smaller k.
int argmax_mode(const SpectralField& v);

struct VaRow {
    double eps = 0.0;
    double va_distance = 0.0;
    double bending_residual = 0.0;
};

std::vector<VaRow> va_norm_convergence(const ReducedOperator& op, const std::vector<double>& eps_list,
                                       const SpectralField& F);
double va_distance(const ReducedOperator& op, const SpectralField& v, const SpectralField& v0);

double sensitivity_probe(const ReducedOperator& op, int k_probe, double eta);

struct GrowthRow {
    int N = 0;
    double norm = 0.0;
    double log_norm_over_N = 0.0;
    double local_slope = 0.0; // log(norm(N)) - log(norm(N-1))
};

// Norms of the truncated eps = 0 solution in H^{-r}; no refusal.
std::vector<GrowthRow> truncated_norm_table(const ReducedOperator& op, const SpectralField& F, double r,
                                            const std::vector<int>& Ns);
// Same table; refuses band-limited loads, for which an actual solution exists.
std::vector<GrowthRow> no_distribution_limit_probe(const ReducedOperator& op, const SpectralField& F, double r,
                                                   const std::vector<int>& Ns);

struct RescaleRow {
    double eps = 0.0;
    SpectralField w;
    double kernel_error = 0.0;     // max over K of |w_k - F_k/q_k|
    double off_kernel_max = 0.0;   // max over k not in K of |w_k|
    double off_kernel_excess = 0.0; // max over k not in K of |w_k| - eps^2 |F_k| / s_k, <= 0 expected
};

std::vector<RescaleRow> noninhibited_rescale(const ReducedOperator& op, const std::set<int>& K,
                                             const SpectralField& F, const std::vector<double>& eps_list);

// Quadrature of (2 pi)^-1 sum_k e^{ikx} sigma(x, k) theta_k on n_quad points.
SpectralField apply_variable_symbol(const std::function<cd(double, int)>& sigma, const SpectralField& theta,
                                    int n_quad);

} // namespace koiter
