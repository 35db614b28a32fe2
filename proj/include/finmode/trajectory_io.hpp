#pragma once

#include <ostream>

#include "finmode/dynamics.hpp"

namespace finmode {

// One compact JSON object per snapshot: {"t": ..., "real_valued": ..., "zero_mode": ..., "modes": [...]}.
void write_trajectory_jsonl(std::ostream& os, const Trajectory& trajectory);
// Header t,energy,helicity,realness_drift,active_modes.
void write_diagnostics_csv(std::ostream& os, const Trajectory& trajectory);

}  // namespace finmode
