#pragma once

#include <string>
#include <vector>

#include "pmech/config.hpp"
#include "pmech/report.hpp"

namespace pmech::verify {

// Runs the module verification suites (all of them, or the one named by
// cfg.suite). Tolerances can be overridden per case id via [tolerances].
std::vector<Report> run_verification(const RunConfig& cfg);

std::vector<std::string> suite_names();

// Short description of each numbered acceptance criterion (1-based).
const std::vector<std::string>& criterion_titles();

}  // namespace pmech::verify
