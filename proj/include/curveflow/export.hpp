#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "curveflow/scenario.hpp"
#include "curveflow/verify.hpp"

namespace curveflow {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitChecksFailed = 3;

// Rows "frame,vertex,x,y,z" with 17 significant digits.
void write_frames_csv(std::ostream& os, const std::vector<DiscreteCurve>& frames);
std::vector<DiscreteCurve> read_frames_csv(std::istream& is);

// One closed polyline object per frame.
void write_frames_obj(std::ostream& os, const std::vector<DiscreteCurve>& frames);

void write_diagnostics_csv(std::ostream& os, const std::vector<FlowDiagnostics>& diagnostics);

std::string reports_json(const std::vector<CheckReport>& reports);
std::string reports_table(const std::vector<CheckReport>& reports);

// Scenario echo, run status, final drifts (relative, null when the start is zero,
// and absolute) and any check reports.
std::string summary_json(const Scenario& s, const SimulationResult& result, const std::vector<CheckReport>& reports);

// Gradient, form, closedness, invariance and Hamiltonian-identity checks for
// the scenario's (H, w) pair. The refinement checks need a built-in family and
// are skipped for curves read from files.
std::vector<CheckReport> verify_scenario(const Scenario& s);

// Runs (or only verifies) a validated scenario and writes the requested files
// into out_dir. Returns kExitOk, kExitNumerical on a numerical abort (partial
// outputs kept) or kExitChecksFailed when verification fails.
// The check reports are also copied to `reports` when given.
int run_scenario(const Scenario& s, const std::string& out_dir, bool verify_only = false,
                 std::vector<CheckReport>* reports = nullptr);

}  // namespace curveflow
