#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "koiter/geometry.hpp"

namespace koiter {

// Flat "key = value" experiment description. Lists are space separated.
struct ExperimentConfig {
    std::string command;
    std::string chart = "frozen";
    double chart_radius = 1.0;
    std::array<double, 2> chart_point{0.0, 0.0};
    std::array<double, 3> b_coeffs{1.0, 0.0, 1.0};
    std::string elasticity = "identity";
    std::optional<std::array<double, 6>> A_voigt; // a11 a12 a13 a22 a23 a33
    std::optional<std::array<double, 6>> B_voigt;
    std::string system = "membrane";
    std::string bc = "membrane_dirichlet";
    std::vector<double> xi1_list{1.0};
    std::vector<double> epsilon_list{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9};
    int N = 128;
    std::optional<double> d;
    std::optional<double> theta;
    std::optional<double> zeta;
    int k_probe = 10;
    double eta = 1e-6;
    std::vector<int> kernel_modes{3};
    std::string load = "flat"; // flat | decay | mode
    int n_angles = 720;
    std::string output_path;

    bool operator==(const ExperimentConfig&) const = default;
};

extern const std::vector<std::string> known_commands;

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize(const ExperimentConfig& c);
// Throws ValidationError.
void validate(const ExperimentConfig& c);

MetricData config_point(const ExperimentConfig& c);
ElasticityTensor config_elasticity(const ExperimentConfig& c);

} // namespace koiter
