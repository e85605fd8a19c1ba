#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curveflow/export.hpp"
#include "doctest.h"

using namespace curveflow;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(# trefoil under a decaying length weight
[curve]
family = trefoil
n = 256

[weight]
type = length
C = 10
p = -2

[hamiltonian]
type = flux_rotation
axis = 0 0 1

[run]
dt = 1e-3
steps = 1000
)";

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("curveflow_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char ch : s) n += ch == '\n';
    return n;
}

int run_cli(const std::string& args) {
    const int status = std::system((std::string(CURVEFLOW_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Scenario small(const WeightSpec& w, const HamiltonianSpec& H, double dt, long steps, long every) {
    Scenario s;
    s.family = Trefoil{};
    s.n = 96;
    s.weight = w;
    s.hamiltonian = H;
    s.dt = dt;
    s.steps = steps;
    s.output_every = every;
    s.outputs = {OutputKind::FramesCsv, OutputKind::FramesObj, OutputKind::DiagnosticsCsv, OutputKind::SummaryJson};
    return s;
}

}  // namespace

TEST_CASE("the minimal scenario is accepted") {
    const auto s = parse_scenario(kMinimal);
    CHECK(std::holds_alternative<Trefoil>(s.family));
    CHECK(s.n == 256);
    const auto& w = std::get<LengthWeighted>(s.weight);
    CHECK(w.C == 10.0);
    CHECK(w.p == -2.0);
    CHECK(std::get<FluxRotation>(s.hamiltonian).v == e_z);
    CHECK(s.dt == 1e-3);
    CHECK(s.steps == 1000);
}

TEST_CASE("invalid scenarios are rejected") {
    std::string text = kMinimal;
    auto with = [&](const std::string& from, const std::string& to) {
        std::string t = text;
        t.replace(t.find(from), from.size(), to);
        return t;
    };
    try {
        parse_scenario(with("p = -2\n\n[hamiltonian]\ntype = flux_rotation\naxis = 0 0 1",
                            "p = -3\n\n[hamiltonian]\ntype = squared_scale"));
        FAIL("expected rejection");
    } catch (const InvarianceError& e) {
        CHECK(std::string(e.what()).find("scale-invariant weight") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_scenario(with("dt = 1e-3", "dt = 0")), ConfigError);
    try {
        parse_scenario(with("n = 256", "n = 256\nradius = 3"));
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 5);
        CHECK(std::string(e.what()).find("radius") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_scenario(with("axis = 0 0 1", "axis = 0 0 2")), ParseError);
    CHECK_THROWS_AS(parse_scenario(with("family = trefoil", "family = figure_eight")), ParseError);
    CHECK_THROWS_AS(parse_scenario(with("steps = 1000", "steps = many")), ParseError);
}

TEST_CASE("format and parse round trip") {
    for (const auto& s : {parse_scenario(kMinimal), small(Identity{}, TotalTorsion{}, 1e-4, 10, 2),
                          small(LengthWeighted{0.5, -3}, LengthTimesK{}, 2e-4, 3, 1)}) {
        const auto text = format_scenario(s);
        CHECK(format_scenario(parse_scenario(text)) == text);
    }
}

TEST_CASE("frames, diagnostics and summary outputs") {
    const auto dir = fresh_dir("outputs");
    const auto s = small(LengthWeighted{1, 1}, SquaredScale{}, 1e-4, 25, 10);
    REQUIRE(run_scenario(s, dir.string()) == kExitOk);

    std::ifstream fcsv(dir / "frames.csv");
    const auto frames = read_frames_csv(fcsv);
    REQUIRE(frames.size() == 3);
    const auto c0 = make_curve(Trefoil{}, 96);
    for (std::size_t i = 0; i < c0.size(); ++i) CHECK(frames[0][i] == c0[i]);

    CHECK(count_lines(slurp(dir / "diagnostics.csv")) == 1 + 25 / 10 + 1);
    const auto obj = slurp(dir / "frames.obj");
    CHECK(obj.find("o frame_2") != std::string::npos);
    // Each polyline closes on its first vertex.
    CHECK(obj.find(" 96 1\n") != std::string::npos);
    const auto summary = slurp(dir / "summary.json");
    CHECK(summary.find("\"completed\": true") != std::string::npos);
    CHECK(summary.find("\"drift\"") != std::string::npos);
}

TEST_CASE("a zero-step scenario emits only frame 0") {
    const auto dir = fresh_dir("zero");
    REQUIRE(run_scenario(small(Identity{}, Length{}, 1e-3, 0, 1), dir.string()) == kExitOk);
    std::ifstream fcsv(dir / "frames.csv");
    CHECK(read_frames_csv(fcsv).size() == 1);
    CHECK(count_lines(slurp(dir / "diagnostics.csv")) == 2);
}

TEST_CASE("a huge time step exits 2 and keeps the partial diagnostics") {
    const auto dir = fresh_dir("blowup");
    const auto s = small(Identity{}, SquaredCurvature{}, 10.0, 100, 1);
    REQUIRE(run_scenario(s, dir.string()) == kExitNumerical);
    const auto summary = slurp(dir / "summary.json");
    CHECK(summary.find("\"completed\": false") != std::string::npos);
    CHECK(summary.find("failed_step") != std::string::npos);
    // Records exist for every step before the failing one.
    const auto r = simulate(s);
    CHECK(count_lines(slurp(dir / "diagnostics.csv")) == 1 + static_cast<std::size_t>(r.failed_step));
}

TEST_CASE("identical scenarios give byte-identical outputs") {
    const auto a = fresh_dir("det_a"), b = fresh_dir("det_b");
    const auto s = small(LengthWeighted{1, 1}, FluxTranslation{e_x}, 1e-4, 20, 5);
    REQUIRE(run_scenario(s, a.string()) == kExitOk);
    REQUIRE(run_scenario(s, b.string()) == kExitOk);
    for (const char* f : {"frames.csv", "frames.obj", "diagnostics.csv", "summary.json"}) CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("C acts as a time scale") {
    // Hamiltonian fields scale like 1/C, so (10 C, 10 dt) retraces (C, dt).
    const auto a = simulate(small(LengthWeighted{1, 1}, SquaredScale{}, 1e-4, 50, 10));
    const auto b = simulate(small(LengthWeighted{10, 1}, SquaredScale{}, 1e-3, 50, 10));
    REQUIRE(a.frames.size() == b.frames.size());
    for (std::size_t f = 0; f < a.frames.size(); ++f) {
        double e = 0;
        for (std::size_t i = 0; i < a.frames[f].size(); ++i) e = std::max(e, norm(a.frames[f][i] - b.frames[f][i]));
        CHECK(e <= 1e-9 * diameter(a.frames[f]));
    }
}

TEST_CASE("command line subcommands and exit codes") {
    const auto dir = fresh_dir("cli");
    const std::string scn = (dir / "s.scn").string();
    {
        auto s = small(Identity{}, Length{}, 1e-3, 5, 5);
        std::ofstream(scn) << format_scenario(s);
    }
    CHECK(run_cli("curves --family torus_knot --p 2 --q 3 --n 90 --out " + (dir / "k.curve").string()) == 0);
    CHECK(fs::exists(dir / "k.curve"));
    CHECK(run_cli("inspect " + (dir / "k.curve").string()) == 0);
    CHECK(run_cli("inspect " + (dir / "missing.curve").string()) == 1);
    CHECK(run_cli("run --scenario " + scn + " --out " + (dir / "run").string()) == 0);
    CHECK(fs::exists(dir / "run" / "summary.json"));
    CHECK(run_cli("verify --scenario " + scn + " --out " + (dir / "ver").string()) == 0);
    CHECK(fs::exists(dir / "ver" / "reports.json"));
    CHECK(run_cli("run --scenario " + (dir / "nope.scn").string()) == 1);
    CHECK(run_cli("frobnicate") == 1);
    {
        std::ofstream(scn) << format_scenario(small(Identity{}, SquaredCurvature{}, 10.0, 100, 1));
    }
    CHECK(run_cli("run --scenario " + scn + " --out " + (dir / "blow").string()) == 2);
}

TEST_CASE("the shipped scenarios parse") {
    std::size_t count = 0;
    for (const auto& e : fs::directory_iterator(CURVEFLOW_SCENARIO_DIR)) {
        if (e.path().extension() != ".scn") continue;
        CAPTURE(e.path().string());
        CHECK_NOTHROW(load_scenario(e.path().string()));
        ++count;
    }
    CHECK(count >= 5);
}
