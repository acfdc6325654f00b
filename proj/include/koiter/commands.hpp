#pragma once

#include <string>

#include "koiter/config.hpp"

namespace koiter {

// Runs a validated config and returns the CSV text. Library errors propagate.
std::string run_command(const ExperimentConfig& c);

// Full pipeline with exit codes: 0 ok, 2 validation error, 3 numerical failure.
int run(const ExperimentConfig& c, std::string& csv, std::string& message);

} // namespace koiter
