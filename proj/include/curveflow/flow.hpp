#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>

#include "curveflow/momentum.hpp"

namespace curveflow {

using VectorField = std::function<TangentField(const DiscreteCurve&)>;

// Classic four-stage RK4. `step` only labels errors.
DiscreteCurve rk4_step(const VectorField& field, const DiscreteCurve& c, double dt, long step = 0);

enum class OutputKind { FramesCsv, FramesObj, DiagnosticsCsv, SummaryJson };

struct Scenario {
    CurveFamily family = Trefoil{};
    std::size_t n = 256;
    std::optional<DiscreteCurve> initial;  // overrides family/n when set
    std::string curve_file;                // source of `initial`, echoed in summaries
    WeightSpec weight = Identity{};
    HamiltonianSpec hamiltonian = Length{};
    double length_power = 1.0;  // Length Hamiltonians read from text use f(l) = l^power
    double dt = 1e-3;
    long steps = 1000;
    long output_every = 10;
    long resample_every = 0;  // 0 disables resampling
    std::uint64_t seed = 42;
    std::set<OutputKind> outputs{OutputKind::DiagnosticsCsv, OutputKind::SummaryJson};
};

DiscreteCurve initial_curve(const Scenario& s);

struct FlowDiagnostics {
    long step = 0;
    double time = 0.0;
    double hamiltonian_value = 0.0;
    double length = 0.0;
    MomentumRecord momenta;
    double max_speed = 0.0;
    double min_edge = 0.0;
    bool resampled = false;  // a resampling happened since the previous record
};

struct SimulationResult {
    std::vector<DiscreteCurve> frames;  // one per diagnostics record
    std::vector<FlowDiagnostics> diagnostics;
    bool completed = true;
    long failed_step = -1;
    std::string error;
};

SimulationResult simulate(const Scenario& s);

// Plain RK4 integration of an arbitrary field, recording every `every` steps
// (frame 0 included). Throws on blow-up.
std::vector<DiscreteCurve> integrate(const VectorField& field, const DiscreteCurve& c0, double dt, long steps,
                                     long every);

}  // namespace curveflow
