#include "curveflow/export.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace curveflow {

namespace {

using nlohmann::json;

std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream os(p);
    if (!os) throw Error("cannot write " + p.string());
    return os;
}

// Relative change, or null when the starting value is zero to roundoff.
json rel_drift(double change, double start) {
    if (!(start > 1e-10)) return nullptr;
    return change / start;
}

json report_json(const CheckReport& r) {
    return json{{"name", r.name},
                {"residual", r.residual},
                {"tolerance", r.tolerance},
                {"refinement_orders", r.refinement_orders},
                {"min_order", r.min_order},
                {"passed", r.passed},
                {"must_fail", r.must_fail},
                {"ok", report_ok(r)},
                {"seed", r.seed},
                {"detail", r.detail}};
}

}  // namespace

void write_frames_csv(std::ostream& os, const std::vector<DiscreteCurve>& frames) {
    os << "frame,vertex,x,y,z\n";
    for (std::size_t f = 0; f < frames.size(); ++f)
        for (std::size_t i = 0; i < frames[f].size(); ++i) {
            const auto& p = frames[f][i];
            os << f << ',' << i << ',' << g17(p.x) << ',' << g17(p.y) << ',' << g17(p.z) << '\n';
        }
}

std::vector<DiscreteCurve> read_frames_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("frame,vertex,x,y,z", 0) != 0)
        throw ParseError(1, "missing frames CSV header");
    std::vector<std::vector<Vec3>> pts;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::size_t f = 0, i = 0;
        Vec3 p;
        char c1, c2, c3, c4;
        if (!(ls >> f >> c1 >> i >> c2 >> p.x >> c3 >> p.y >> c4 >> p.z) || c1 != ',' || c2 != ',' || c3 != ',' ||
            c4 != ',')
            throw ParseError(lineno, "malformed frames CSV row");
        if (f >= pts.size()) pts.resize(f + 1);
        if (i != pts[f].size()) throw ParseError(lineno, "vertices out of order");
        pts[f].push_back(p);
    }
    std::vector<DiscreteCurve> frames;
    for (auto& v : pts) frames.emplace_back(std::move(v));
    return frames;
}

void write_frames_obj(std::ostream& os, const std::vector<DiscreteCurve>& frames) {
    std::size_t base = 1;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const auto& c = frames[f];
        os << "o frame_" << f << '\n';
        for (std::size_t i = 0; i < c.size(); ++i) os << "v " << g17(c[i].x) << ' ' << g17(c[i].y) << ' ' << g17(c[i].z) << '\n';
        os << 'l';
        for (std::size_t i = 0; i < c.size(); ++i) os << ' ' << base + i;
        os << ' ' << base << '\n';
        base += c.size();
    }
}

void write_diagnostics_csv(std::ostream& os, const std::vector<FlowDiagnostics>& diagnostics) {
    os << "step,time,hamiltonian,length,angular_x,angular_y,angular_z,linear_x,linear_y,linear_z,"
          "repar_residual,max_speed,min_edge,resampled\n";
    for (const auto& d : diagnostics) {
        const auto& m = d.momenta;
        os << d.step << ',' << g17(d.time) << ',' << g17(d.hamiltonian_value) << ',' << g17(d.length) << ','
           << g17(m.angular.x) << ',' << g17(m.angular.y) << ',' << g17(m.angular.z) << ',' << g17(m.linear.x) << ','
           << g17(m.linear.y) << ',' << g17(m.linear.z) << ',' << g17(m.repar_residual) << ',' << g17(d.max_speed)
           << ',' << g17(d.min_edge) << ',' << (d.resampled ? 1 : 0) << '\n';
    }
}

std::string reports_json(const std::vector<CheckReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    return arr.dump(2);
}

std::string reports_table(const std::vector<CheckReport>& reports) {
    std::ostringstream os;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-6s %-58s %-11s %-11s %s\n", "status", "check", "residual", "tolerance",
                  "detail");
    os << buf;
    for (const auto& r : reports) {
        const char* status = report_ok(r) ? (r.must_fail ? "ok(-)" : "ok") : "FAIL";
        std::snprintf(buf, sizeof buf, "%-6s %-58s %-11.3e %-11.3e %s\n", status, r.name.c_str(), r.residual,
                      r.tolerance, r.detail.c_str());
        os << buf;
    }
    return os.str();
}

std::string summary_json(const Scenario& s, const SimulationResult& result, const std::vector<CheckReport>& reports) {
    json j;
    j["scenario"] = {
        {"text", format_scenario(s)},
        {"curve", s.initial ? "file:" + s.curve_file : family_name(s.family)},
        {"n", initial_curve(s).size()},
        {"weight", weight_name(s.weight)},
        {"hamiltonian", hamiltonian_name(s.hamiltonian)},
        {"dt", s.dt},
        {"steps", s.steps},
        {"output_every", s.output_every},
        {"resample_every", s.resample_every},
        {"seed", s.seed},
    };
    j["completed"] = result.completed;
    if (!result.completed) {
        j["failed_step"] = result.failed_step;
        j["error"] = result.error;
    }
    j["records"] = result.diagnostics.size();
    if (!result.diagnostics.empty()) {
        const auto& a = result.diagnostics.front();
        const auto& b = result.diagnostics.back();
        long resamplings = 0;
        for (const auto& d : result.diagnostics) resamplings += d.resampled ? 1 : 0;
        j["final"] = {{"step", b.step}, {"time", b.time}, {"hamiltonian", b.hamiltonian_value}, {"length", b.length}};
        const double dh = std::abs(b.hamiltonian_value - a.hamiltonian_value), dl = std::abs(b.length - a.length);
        const double dj = norm(b.momenta.angular - a.momenta.angular), dp = norm(b.momenta.linear - a.momenta.linear);
        j["drift"] = {
            {"hamiltonian", rel_drift(dh, std::abs(a.hamiltonian_value))},
            {"length", rel_drift(dl, a.length)},
            {"angular_momentum", rel_drift(dj, norm(a.momenta.angular))},
            {"linear_momentum", rel_drift(dp, norm(a.momenta.linear))},
        };
        j["drift_absolute"] = {{"hamiltonian", dh}, {"length", dl}, {"angular_momentum", dj}, {"linear_momentum", dp}};
        j["resampling_records"] = resamplings;
    }
    if (!reports.empty()) {
        json arr = json::array();
        for (const auto& r : reports) arr.push_back(report_json(r));
        j["checks"] = arr;
    }
    return j.dump(2);
}

std::vector<CheckReport> verify_scenario(const Scenario& s) {
    std::vector<CheckReport> out;
    const auto c = initial_curve(s);
    out.push_back(check_gradient(s.hamiltonian, c, 20, kDefaultEps, s.seed));
    out.push_back(check_form_consistency(s.weight, c, 5, kDefaultEps, s.seed));
    out.push_back(check_closedness(s.weight, c, 5, kDefaultEps, s.seed));
    if (const auto* lw = std::get_if<LengthWeighted>(&s.weight))
        out.push_back(check_comparison_closedness(*lw, c, 5, kDefaultEps, s.seed));
    if (!s.initial) {
        for (auto& r : check_invariances(s.weight, s.family, s.n, s.seed)) out.push_back(std::move(r));
        out.push_back(check_hamiltonian_identity(s.hamiltonian, s.weight, s.family, 5, {128, 256, 512}, s.seed));
    }
    return out;
}

int run_scenario(const Scenario& s, const std::string& out_dir, bool verify_only,
                 std::vector<CheckReport>* reports_out) {
    namespace fs = std::filesystem;
    validate_scenario(s);
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    if (verify_only) {
        const auto reports = verify_scenario(s);
        open_out(dir / "reports.json") << reports_json(reports) << '\n';
        if (s.outputs.count(OutputKind::SummaryJson)) {
            SimulationResult none;
            none.completed = true;
            open_out(dir / "summary.json") << summary_json(s, none, reports) << '\n';
        }
        bool ok = true;
        for (const auto& r : reports) ok = ok && report_ok(r);
        if (reports_out) *reports_out = reports;
        return ok ? kExitOk : kExitChecksFailed;
    }

    const auto result = simulate(s);
    if (s.outputs.count(OutputKind::FramesCsv)) {
        auto os = open_out(dir / "frames.csv");
        write_frames_csv(os, result.frames);
    }
    if (s.outputs.count(OutputKind::FramesObj)) {
        auto os = open_out(dir / "frames.obj");
        write_frames_obj(os, result.frames);
    }
    if (s.outputs.count(OutputKind::DiagnosticsCsv)) {
        auto os = open_out(dir / "diagnostics.csv");
        write_diagnostics_csv(os, result.diagnostics);
    }
    if (s.outputs.count(OutputKind::SummaryJson)) open_out(dir / "summary.json") << summary_json(s, result, {}) << '\n';
    return result.completed ? kExitOk : kExitNumerical;
}

}  // namespace curveflow
