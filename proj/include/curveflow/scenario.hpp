#pragma once

#include <string>

#include "curveflow/flow.hpp"

namespace curveflow {

// Sectioned key-value text:
//
//   [curve]        family = circle | trefoil | torus_knot, n, r, p, q, R, rho, file
//   [weight]       type = identity | length | curvature, C, p
//   [hamiltonian]  type = length | flux_translation | flux_rotation | squared_curvature
//                         | total_torsion | squared_scale | length_times_k,
//                  axis = "x y z", power (H = l^power for type = length)
//   [run]          dt, steps, output_every, resample_every, seed,
//                  outputs = comma-separated subset of frames_csv, frames_obj,
//                            diagnostics_csv, summary_json
//
// '#' starts a comment. A relative curve file is resolved against `base_dir`.
// Throws ParseError (with line) for syntax and unknown keys, ConfigError for
// semantic violations, InvarianceError / UnsupportedVariantError for pairings
// hgrad does not support.
Scenario parse_scenario(const std::string& text, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

// Checks dt > 0, steps >= 0, output_every >= 1 and the (H, w) pairing.
void validate_scenario(const Scenario& s);

// Canonical text form; parse_scenario(format_scenario(s)) reproduces s.
std::string format_scenario(const Scenario& s);

std::string output_name(OutputKind k);

}  // namespace curveflow
