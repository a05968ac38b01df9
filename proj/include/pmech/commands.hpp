#pragma once

#include "pmech/config.hpp"

namespace pmech {

// Batch commands; each writes its artifacts under cfg.output_dir and returns
// the process exit code (0 pass, 1 verification failure, 2 config error).
int cmd_verify(const RunConfig& cfg);
int cmd_oscillator(const RunConfig& cfg);
int cmd_classical_limit(const RunConfig& cfg);
int cmd_cantrans(const RunConfig& cfg);
int cmd_kepler(const RunConfig& cfg);

int run_command(const RunConfig& cfg);

}  // namespace pmech
