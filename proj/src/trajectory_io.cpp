#include "finmode/trajectory_io.hpp"

#include <cstdio>

#include "finmode/field_io.hpp"

namespace finmode {

void write_trajectory_jsonl(std::ostream& os, const Trajectory& trajectory) {
  for (std::size_t k = 0; k < trajectory.snapshots.size(); ++k) {
    nlohmann::json line = {{"t", trajectory.times[k]}};
    line.update(field_to_json(trajectory.snapshots[k]));
    os << line.dump() << '\n';
  }
}

void write_diagnostics_csv(std::ostream& os, const Trajectory& trajectory) {
  os << "t,energy,helicity,realness_drift,active_modes\n";
  char buf[160];
  for (const auto& d : trajectory.diagnostics) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%zu\n", d.t, d.energy, d.helicity, d.realness_drift,
                  d.active_modes);
    os << buf;
  }
}

}  // namespace finmode
