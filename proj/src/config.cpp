#include "koiter/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "koiter/csv.hpp"
#include "koiter/error.hpp"

namespace koiter {

const std::vector<std::string> known_commands = {"check-ellipticity", "check-sl",  "layer-modes",
                                                 "solve-reduced",     "sweep-epsilon", "sensitivity",
                                                 "rescale-demo"};

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

double to_double(const std::string& key, const std::string& t) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
        throw ValidationError("key '" + key + "': '" + t + "' is not a number");
    return v;
}

int to_int(const std::string& key, const std::string& t) {
    int v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
        throw ValidationError("key '" + key + "': '" + t + "' is not an integer");
    return v;
}

template <std::size_t K>
std::array<double, K> to_array(const std::string& key, const std::string& v) {
    auto t = tokens(v);
    if (t.size() != K) throw ValidationError("key '" + key + "' needs " + std::to_string(K) + " numbers");
    std::array<double, K> out{};
    for (std::size_t i = 0; i < K; ++i) out[i] = to_double(key, t[i]);
    return out;
}

std::string one_token(const std::string& key, const std::string& v) {
    auto t = tokens(v);
    if (t.size() != 1) throw ValidationError("key '" + key + "' needs exactly one value");
    return t[0];
}

template <class Seq>
std::string join_numbers(const Seq& xs) {
    std::string out;
    for (auto x : xs) {
        if (!out.empty()) out += ' ';
        if constexpr (std::is_integral_v<decltype(x)>)
            out += std::to_string(x);
        else
            out += format_number(x);
    }
    return out;
}

Eigen::Matrix3d voigt_from(const std::array<double, 6>& a) {
    Eigen::Matrix3d m;
    m << a[0], a[1], a[2], a[1], a[3], a[4], a[2], a[4], a[5];
    return m;
}

bool needs_eps(const std::string& cmd) {
    return cmd == "solve-reduced" || cmd == "sweep-epsilon" || cmd == "sensitivity" || cmd == "rescale-demo";
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    std::set<std::string> seen;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) throw ValidationError("duplicate key '" + key + "'");
        if (key == "command") c.command = one_token(key, val);
        else if (key == "chart") c.chart = one_token(key, val);
        else if (key == "chart_radius") c.chart_radius = to_double(key, one_token(key, val));
        else if (key == "chart_point") c.chart_point = to_array<2>(key, val);
        else if (key == "b_coeffs") c.b_coeffs = to_array<3>(key, val);
        else if (key == "elasticity") c.elasticity = one_token(key, val);
        else if (key == "A_voigt") c.A_voigt = to_array<6>(key, val);
        else if (key == "B_voigt") c.B_voigt = to_array<6>(key, val);
        else if (key == "system") c.system = one_token(key, val);
        else if (key == "bc") c.bc = one_token(key, val);
        else if (key == "xi1_list" || key == "epsilon_list") {
            std::vector<double> xs;
            for (const auto& t : tokens(val)) xs.push_back(to_double(key, t));
            (key == "xi1_list" ? c.xi1_list : c.epsilon_list) = xs;
        } else if (key == "N") c.N = to_int(key, one_token(key, val));
        else if (key == "d") c.d = to_double(key, one_token(key, val));
        else if (key == "theta") c.theta = to_double(key, one_token(key, val));
        else if (key == "zeta") c.zeta = to_double(key, one_token(key, val));
        else if (key == "k_probe") c.k_probe = to_int(key, one_token(key, val));
        else if (key == "eta") c.eta = to_double(key, one_token(key, val));
        else if (key == "kernel_modes") {
            c.kernel_modes.clear();
            for (const auto& t : tokens(val)) c.kernel_modes.push_back(to_int(key, t));
        } else if (key == "load") c.load = one_token(key, val);
        else if (key == "n_angles") c.n_angles = to_int(key, one_token(key, val));
        else if (key == "output_path") c.output_path = val;
        else throw ValidationError("unknown key '" + key + "'");
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize(const ExperimentConfig& c) {
    std::string out;
    auto put = [&](const std::string& k, const std::string& v) {
        out += v.empty() ? k + " =\n" : k + " = " + v + "\n";
    };
    if (!c.command.empty()) put("command", c.command);
    put("chart", c.chart);
    put("chart_radius", format_number(c.chart_radius));
    put("chart_point", join_numbers(c.chart_point));
    put("b_coeffs", join_numbers(c.b_coeffs));
    put("elasticity", c.elasticity);
    if (c.A_voigt) put("A_voigt", join_numbers(*c.A_voigt));
    if (c.B_voigt) put("B_voigt", join_numbers(*c.B_voigt));
    put("system", c.system);
    put("bc", c.bc);
    put("xi1_list", join_numbers(c.xi1_list));
    put("epsilon_list", join_numbers(c.epsilon_list));
    put("N", std::to_string(c.N));
    if (c.d) put("d", format_number(*c.d));
    if (c.theta) put("theta", format_number(*c.theta));
    if (c.zeta) put("zeta", format_number(*c.zeta));
    put("k_probe", std::to_string(c.k_probe));
    put("eta", format_number(c.eta));
    put("kernel_modes", join_numbers(c.kernel_modes));
    put("load", c.load);
    put("n_angles", std::to_string(c.n_angles));
    if (!c.output_path.empty()) put("output_path", c.output_path);
    return out;
}

MetricData config_point(const ExperimentConfig& c) {
    if (c.chart == "frozen") return frozen_point(c.b_coeffs[0], c.b_coeffs[1], c.b_coeffs[2]);
    if (c.chart == "sphere-cap") return sphere_cap_point(c.chart_point[0], c.chart_point[1], c.chart_radius);
    throw ValidationError("unknown chart '" + c.chart + "'");
}

ElasticityTensor config_elasticity(const ExperimentConfig& c) {
    if (c.elasticity == "identity") return ElasticityTensor::identity();
    if (c.elasticity == "explicit") {
        if (!c.A_voigt || !c.B_voigt) throw ValidationError("explicit elasticity needs A_voigt and B_voigt");
        ElasticityTensor E{Tensor4::from_voigt(voigt_from(*c.A_voigt)), Tensor4::from_voigt(voigt_from(*c.B_voigt))};
        if (!E.A.positive_definite() || !E.B.positive_definite())
            throw ValidationError("elasticity tensors must be positive definite");
        return E;
    }
    throw ValidationError("unknown elasticity '" + c.elasticity + "'");
}

void validate(const ExperimentConfig& c) {
    if (std::find(known_commands.begin(), known_commands.end(), c.command) == known_commands.end())
        throw ValidationError("unknown command '" + c.command + "'");
    if (c.N < 8) throw ValidationError("N must be at least 8");
    for (double e : c.epsilon_list)
        if (!(e > 0.0 && e < 1.0)) throw ValidationError("epsilon_list entries must lie in (0, 1)");
    bool koiter_sys = c.system == "koiter";
    if ((needs_eps(c.command) || koiter_sys) && c.epsilon_list.empty())
        throw ValidationError("epsilon_list is empty");
    for (double x : c.xi1_list)
        if (x == 0.0 || !std::isfinite(x)) throw ValidationError("xi1_list entries must be nonzero");
    if ((c.command == "check-sl" || c.command == "layer-modes") && c.xi1_list.empty())
        throw ValidationError("xi1_list is empty");
    if (c.n_angles < 8) throw ValidationError("n_angles must be at least 8");
    if (c.d && !(*c.d > 0.0)) throw ValidationError("d must be positive");
    if (c.theta && !(*c.theta > 0.0)) throw ValidationError("theta must be positive");
    if (c.zeta && !(*c.zeta > 0.0)) throw ValidationError("zeta must be positive");
    if (std::abs(c.k_probe) > c.N) throw ValidationError("k_probe exceeds N");
    if (c.eta == 0.0) throw ValidationError("eta must be nonzero");
    if (c.load != "flat" && c.load != "decay" && c.load != "mode")
        throw ValidationError("load must be flat, decay or mode");
    if (c.command == "rescale-demo") {
        if (c.kernel_modes.empty()) throw ValidationError("kernel_modes is empty");
        for (int k : c.kernel_modes)
            if (std::abs(k) > c.N) throw ValidationError("kernel mode exceeds N");
    }
    static const std::set<std::string> systems = {"rigidity", "membrane_tension", "membrane", "membrane_mixed",
                                                  "koiter"};
    static const std::set<std::string> bcs = {"u1", "u2", "u3", "membrane_dirichlet", "traction", "koiter_clamped"};
    if (!systems.count(c.system)) throw ValidationError("unknown system '" + c.system + "'");
    if (!bcs.count(c.bc)) throw ValidationError("unknown bc '" + c.bc + "'");
    MetricData p;
    try {
        p = config_point(c);
        p.validate();
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(e.what());
    }
    config_elasticity(c);
    bool membrane_family = ((c.command == "check-sl" || c.command == "check-ellipticity") && c.system != "rigidity") ||
                           c.command == "layer-modes" ||
                           (needs_eps(c.command) && (!c.theta || !c.zeta));
    if (membrane_family && !p.surface_elliptic())
        throw ValidationError("b_coeffs must be elliptic (b11 > 0, b11 b22 - b12^2 > 0) for this command");
}

} // namespace koiter
