#include "koiter/commands.hpp"

#include <cmath>

#include "koiter/boundary_layer.hpp"
#include "koiter/csv.hpp"
#include "koiter/error.hpp"
#include "koiter/reduced_solver.hpp"
#include "koiter/symbol_algebra.hpp"

namespace koiter {

namespace {

LayerPoint layer_point(const MetricData& m) { return {m.b11(), m.b12(), m.b22()}; }

double model_theta(const ExperimentConfig& c, const MetricData& m, const ElasticityTensor& E) {
    if (c.theta) return *c.theta;
    return layer_energy_coefficient(layer_point(m), E.A.voigt());
}

double model_zeta(const ExperimentConfig& c, const MetricData& m, const ElasticityTensor& E) {
    if (c.zeta) return *c.zeta;
    return bending_symbol_coefficient(layer_point(m), E.B.voigt());
}

SpectralField make_load(const ExperimentConfig& c) {
    if (c.load == "decay")
        return SpectralField::from_function(c.N, [](int k) { return cd(std::pow(1.0 + double(k) * k, -2.0)); });
    if (c.load == "mode")
        return SpectralField::from_function(c.N, [&](int k) { return cd(k == c.k_probe ? 1.0 : 0.0); });
    return SpectralField::from_function(c.N, [](int) { return cd(1.0); });
}

ReducedOperator make_operator(const ExperimentConfig& c) {
    MetricData m = config_point(c);
    ElasticityTensor E = config_elasticity(c);
    double theta = model_theta(c, m, E), zeta = model_zeta(c, m, E);
    auto op = build_default_operator(theta, zeta, c.d.value_or(1.0), c.N);
    check_invariants(op);
    return op;
}

// Koiter symbols depend on eps; the other systems get one row only.
std::vector<double> system_eps(const ExperimentConfig& c) {
    if (c.system == "koiter") return c.epsilon_list;
    return {0.0};
}

std::string cmd_ellipticity(const ExperimentConfig& c) {
    MetricData m = config_point(c);
    ElasticityTensor E = config_elasticity(c);
    CsvTable t({"system", "epsilon", "b11", "b12", "b22", "elliptic", "min_abs_det", "argmin_angle"});
    for (double eps : system_eps(c)) {
        auto sys = builtin_system(c.system, m, E, eps);
        auto r = ellipticity_check(sys, m, c.n_angles);
        t.add_row({c.system, format_number(eps), format_number(m.b11()), format_number(m.b12()),
                   format_number(m.b22()), format_bool(r.elliptic), format_number(r.min_abs_det),
                   format_number(r.argmin_angle)});
    }
    return t.str();
}

std::string cmd_sl(const ExperimentConfig& c) {
    MetricData m = config_point(c);
    ElasticityTensor E = config_elasticity(c);
    auto bc = builtin_bc(c.bc, E);
    std::string out = "# schema=1\n" + SLReport::csv_header() + "\n";
    for (double eps : system_eps(c)) {
        auto sys = builtin_system(c.system, m, E, eps);
        for (double xi1 : c.xi1_list) out += sl_check(sys, bc, m, xi1).csv_row() + "\n";
    }
    return out;
}

std::string cmd_layer_modes(const ExperimentConfig& c) {
    MetricData m = config_point(c);
    ElasticityTensor E = config_elasticity(c);
    LayerPoint p = layer_point(m);
    double theta = model_theta(c, m, E), zeta = model_zeta(c, m, E);
    CsvTable t({"xi1", "re_lambda_plus", "im_lambda_plus", "re_lambda_minus", "im_lambda_minus", "theta", "zeta"});
    for (double xi1 : c.xi1_list) {
        auto r = rigidity_roots(p, xi1);
        t.add_row({format_number(xi1), format_number(r.plus.real()), format_number(r.plus.imag()),
                   format_number(r.minus.real()), format_number(r.minus.imag()), format_number(theta),
                   format_number(zeta)});
    }
    return t.str();
}

std::string cmd_solve(const ExperimentConfig& c) {
    auto op = make_operator(c);
    auto F = make_load(c);
    CsvTable t({"epsilon", "k", "re_v", "im_v"});
    for (double eps : c.epsilon_list) {
        auto v = solve(op.with_epsilon(eps), F);
        for (int k = -c.N; k <= c.N; ++k)
            t.add_row({format_number(eps), std::to_string(k), format_number(v[k].real()), format_number(v[k].imag())});
    }
    return t.str();
}

std::string cmd_sweep(const ExperimentConfig& c) {
    auto op = make_operator(c);
    auto F = make_load(c);
    auto va = va_norm_convergence(op, c.epsilon_list, F);
    CsvTable t({"epsilon", "k_star", "argmax_k", "max_abs_v", "va_distance", "coercivity", "amplification"});
    for (std::size_t i = 0; i < c.epsilon_list.size(); ++i) {
        double eps = c.epsilon_list[i];
        auto o = op.with_epsilon(eps);
        auto v = solve(o, F);
        int kmax = argmax_mode(v);
        t.add_row({format_number(eps), format_number(frequency_window(o)), std::to_string(kmax),
                   format_number(std::abs(v[kmax])), format_number(va[i].va_distance),
                   format_number(coercivity_constant(o)), format_number(sensitivity_probe(o, c.k_probe, c.eta))});
    }
    return t.str();
}

std::string cmd_sensitivity(const ExperimentConfig& c) {
    auto op = make_operator(c);
    CsvTable t({"epsilon", "k_probe", "eta", "amplification", "inv_s", "inv_eps2q"});
    std::vector<double> eps_list{0.0};
    eps_list.insert(eps_list.end(), c.epsilon_list.begin(), c.epsilon_list.end());
    double k = c.k_probe;
    for (double eps : eps_list) {
        auto o = op.with_epsilon(eps);
        double inv_eps2q = eps > 0.0 ? 1.0 / (eps * eps * o.q(k)) : INFINITY;
        t.add_row({format_number(eps), std::to_string(c.k_probe), format_number(c.eta),
                   format_number(sensitivity_probe(o, c.k_probe, c.eta)), format_number(1.0 / o.s(k)),
                   format_number(inv_eps2q)});
    }
    return t.str();
}

std::string cmd_rescale(const ExperimentConfig& c) {
    auto op = make_operator(c);
    std::set<int> K(c.kernel_modes.begin(), c.kernel_modes.end());
    auto rows = noninhibited_rescale(op, K, make_load(c), c.epsilon_list);
    CsvTable t({"epsilon", "kernel_error", "off_kernel_max", "off_kernel_excess"});
    for (const auto& r : rows)
        t.add_row({format_number(r.eps), format_number(r.kernel_error), format_number(r.off_kernel_max),
                   format_number(r.off_kernel_excess)});
    return t.str();
}

} // namespace

std::string run_command(const ExperimentConfig& c) {
    if (c.command == "check-ellipticity") return cmd_ellipticity(c);
    if (c.command == "check-sl") return cmd_sl(c);
    if (c.command == "layer-modes") return cmd_layer_modes(c);
    if (c.command == "solve-reduced") return cmd_solve(c);
    if (c.command == "sweep-epsilon") return cmd_sweep(c);
    if (c.command == "sensitivity") return cmd_sensitivity(c);
    if (c.command == "rescale-demo") return cmd_rescale(c);
    throw ValidationError("unknown command '" + c.command + "'");
}

int run(const ExperimentConfig& c, std::string& csv, std::string& message) {
    try {
        validate(c);
    } catch (const ValidationError& e) {
        message = e.what();
        return 2;
    }
    try {
        csv = run_command(c);
    } catch (const ValidationError& e) {
        message = e.what();
        return 2;
    } catch (const Error& e) {
        message = e.what();
        return 3;
    }
    return 0;
}

} // namespace koiter
