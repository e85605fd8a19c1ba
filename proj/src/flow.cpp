#include "curveflow/flow.hpp"

#include <algorithm>
#include <cmath>

namespace curveflow {

namespace {

void check_finite(const TangentField& k, long step, const char* stage) {
    for (const auto& v : k)
        if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
            throw NumericalBlowupError(step, "non-finite velocity in RK4 stage " + std::string(stage) + " at step " +
                                                 std::to_string(step));
}

DiscreteCurve stage_curve(const DiscreteCurve& c, const TangentField& k, double h, long step) {
    std::vector<Vec3> v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = c[i] + h * k[i];
    try {
        return DiscreteCurve(std::move(v));
    } catch (const DegenerateCurveError& e) {
        throw EdgeCollapseError(step, "edge collapse at step " + std::to_string(step) + ": " + e.what());
    }
}

}  // namespace

DiscreteCurve rk4_step(const VectorField& field, const DiscreteCurve& c, double dt, long step) {
    if (!(dt > 0.0) && !(dt < 0.0)) throw ArgumentError("dt must be nonzero");
    const auto k1 = field(c);
    check_finite(k1, step, "1");
    const auto k2 = field(stage_curve(c, k1, 0.5 * dt, step));
    check_finite(k2, step, "2");
    const auto k3 = field(stage_curve(c, k2, 0.5 * dt, step));
    check_finite(k3, step, "3");
    const auto k4 = field(stage_curve(c, k3, dt, step));
    check_finite(k4, step, "4");
    std::vector<Vec3> v(c.size());
    const double h = dt / 6.0;
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = c[i] + h * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    for (const auto& p : v)
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            throw NumericalBlowupError(step, "non-finite vertex after step " + std::to_string(step));
    // An edge vector that changes by more than its own length in one step is no
    // longer resolved by the polygon. Rigid translations never trigger this.
    const std::size_t n = c.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const Vec3 before = c[j] - c[i];
        const Vec3 after = v[j] - v[i];
        if (norm(after - before) > norm(before))
            throw NumericalBlowupError(step, "unresolved deformation at step " + std::to_string(step) + ": edge " +
                                                 std::to_string(i) + " changed by more than its length");
    }
    try {
        return DiscreteCurve(std::move(v));
    } catch (const DegenerateCurveError& e) {
        throw EdgeCollapseError(step, "edge collapse at step " + std::to_string(step) + ": " + e.what());
    }
}

DiscreteCurve initial_curve(const Scenario& s) { return s.initial ? *s.initial : make_curve(s.family, s.n); }

SimulationResult simulate(const Scenario& s) {
    if (!(s.dt > 0.0)) throw ConfigError("dt must be positive");
    if (s.steps < 0) throw ConfigError("steps must be nonnegative");
    if (s.output_every < 1) throw ConfigError("output_every must be at least 1");
    require_supported(s.hamiltonian, s.weight);

    const VectorField field = [&](const DiscreteCurve& c) { return hgrad(s.hamiltonian, s.weight, c); };
    SimulationResult result;
    DiscreteCurve c = initial_curve(s);
    bool resampled = false;

    auto record = [&](long step) {
        FlowDiagnostics d;
        d.step = step;
        d.time = static_cast<double>(step) * s.dt;
        d.momenta = momentum_record(s.weight, s.hamiltonian, c);
        d.hamiltonian_value = d.momenta.hamiltonian_value;
        d.length = d.momenta.length;
        const auto v = field(c);
        for (const auto& x : v) d.max_speed = std::max(d.max_speed, norm(x));
        d.min_edge = min_edge(c);
        d.resampled = resampled;
        resampled = false;
        result.diagnostics.push_back(d);
        result.frames.push_back(c);
    };

    try {
        record(0);
        for (long step = 1; step <= s.steps; ++step) {
            c = rk4_step(field, c, s.dt, step);
            if (s.resample_every > 0 && step % s.resample_every == 0) {
                c = resample_uniform(c);
                resampled = true;
            }
            if (step % s.output_every == 0) record(step);
        }
    } catch (const NumericalBlowupError& e) {
        result.completed = false;
        result.failed_step = e.step;
        result.error = e.what();
    } catch (const EdgeCollapseError& e) {
        result.completed = false;
        result.failed_step = e.step;
        result.error = e.what();
    }
    return result;
}

std::vector<DiscreteCurve> integrate(const VectorField& field, const DiscreteCurve& c0, double dt, long steps,
                                     long every) {
    std::vector<DiscreteCurve> frames{c0};
    DiscreteCurve c = c0;
    for (long step = 1; step <= steps; ++step) {
        c = rk4_step(field, c, dt, step);
        if (every > 0 && step % every == 0) frames.push_back(c);
    }
    if (every <= 0) frames.push_back(c);
    return frames;
}

}  // namespace curveflow
