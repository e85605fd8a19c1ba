#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "curveflow/export.hpp"

namespace fs = std::filesystem;
using namespace curveflow;

namespace {

std::mutex log_mutex;

void log_line(const std::string& s) {
    std::lock_guard<std::mutex> lock(log_mutex);
    std::cerr << s << '\n';
}

// One scenario file into one output directory; never throws.
int run_one(const fs::path& path, const fs::path& out, bool verify_only, std::optional<std::uint64_t> seed,
            bool print_table) {
    try {
        Scenario s = load_scenario(path.string());
        if (seed) s.seed = *seed;
        std::vector<CheckReport> reports;
        const int code = run_scenario(s, out.string(), verify_only, &reports);
        if (verify_only && print_table) std::cout << reports_table(reports);
        if (code == kExitNumerical) log_line(path.string() + ": numerical abort, partial output in " + out.string());
        if (code == kExitChecksFailed) log_line(path.string() + ": verification failed");
        return code;
    } catch (const NumericalBlowupError& e) {
        log_line(path.string() + ": " + e.what());
        return kExitNumerical;
    } catch (const EdgeCollapseError& e) {
        log_line(path.string() + ": " + e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        log_line(path.string() + ": " + e.what());
        return kExitConfig;
    }
}

unsigned thread_cap() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CURVEFLOW_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<unsigned>(v);
    }
    return n;
}

// A directory of *.scn files runs in parallel, each into out/<stem>.
int run_path(const fs::path& scenario, const fs::path& out, bool verify_only, std::optional<std::uint64_t> seed) {
    if (!fs::is_directory(scenario)) return run_one(scenario, out, verify_only, seed, true);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(scenario))
        if (e.is_regular_file() && e.path().extension() == ".scn") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        log_line(scenario.string() + ": no .scn files");
        return kExitConfig;
    }
    std::vector<int> codes(files.size(), 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < files.size();)
            codes[i] = run_one(files[i], out / files[i].stem(), verify_only, seed, false);
    };
    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(thread_cap(), static_cast<unsigned>(files.size()));
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < files.size(); ++i) std::cout << files[i].filename().string() << ": " << codes[i] << '\n';
    return *std::max_element(codes.begin(), codes.end());
}

CurveFamily family_from(const std::string& name, double r, int p, int q, double R, double rho) {
    if (name == "circle") return Circle{r};
    if (name == "trefoil") return Trefoil{};
    if (name == "torus_knot") return TorusKnot{p, q, R, rho};
    throw ConfigError("unknown curve family '" + name + "'");
}

int inspect(const std::string& path) {
    const auto c = load_curve(path);
    const auto m = measures(c);
    const auto k2 = curvature_sq(c);
    std::printf("vertices        %zu\n", c.size());
    std::printf("length          %.17g\n", m.total_length);
    std::printf("diameter        %.17g\n", diameter(c));
    std::printf("min_edge        %.17g\n", min_edge(c));
    std::printf("max_curvature   %.17g\n", std::sqrt(*std::max_element(k2.begin(), k2.end())));
    const std::vector<HamiltonianSpec> hs{Length{},       FluxTranslation{}, FluxRotation{},  SquaredCurvature{},
                                          TotalTorsion{}, SquaredScale{},    LengthTimesK{}};
    for (const auto& H : hs) std::printf("H %-18s %.17g\n", hamiltonian_name(H).c_str(), h_value(H, c));
    const auto mr = momentum_record(Identity{}, Length{}, c);
    std::printf("linear_momentum  %.17g %.17g %.17g\n", mr.linear.x, mr.linear.y, mr.linear.z);
    std::printf("angular_momentum %.17g %.17g %.17g\n", mr.angular.x, mr.angular.y, mr.angular.z);
    std::printf("repar_residual   %.3e\n", mr.repar_residual);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamiltonian flows of closed space curves"};
    app.require_subcommand(1);

    std::string scenario, out = "out";
    bool verify_only = false;
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "Run a scenario file or a directory of *.scn files");
    run->add_option("--scenario", scenario, "Scenario file or directory")->required();
    run->add_option("--out", out, "Output directory");
    run->add_flag("--verify-only", verify_only, "Run the verification checks instead of the flow");
    run->add_option("--seed", seed, "Override the scenario seed");

    auto* verify = app.add_subcommand("verify", "Run the verification checks for a scenario");
    verify->add_option("--scenario", scenario, "Scenario file or directory")->required();
    verify->add_option("--out", out, "Output directory");
    verify->add_option("--seed", seed, "Override the scenario seed");

    std::string family = "trefoil";
    std::size_t n = 256;
    double r = 1.0, R = 2.0, rho = 1.0;
    int p = 2, q = 3;
    std::string curve_out;
    auto* curves = app.add_subcommand("curves", "Write a built-in initial curve");
    curves->add_option("--family", family, "circle, trefoil or torus_knot");
    curves->add_option("--n", n, "Vertex count");
    curves->add_option("--r", r, "Circle radius");
    curves->add_option("--p", p, "Torus knot p");
    curves->add_option("--q", q, "Torus knot q");
    curves->add_option("--R", R, "Torus knot major radius");
    curves->add_option("--rho", rho, "Torus knot minor radius");
    curves->add_option("--out", curve_out, "Output file (default: stdout)");

    std::string inspect_path;
    auto* insp = app.add_subcommand("inspect", "Print diagnostics of a curve file");
    insp->add_option("file", inspect_path, "Curve file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return run_path(scenario, out, verify_only, seed);
        if (*verify) return run_path(scenario, out, true, seed);
        if (*curves) {
            const auto c = make_curve(family_from(family, r, p, q, R, rho), n);
            if (curve_out.empty())
                write_curve(std::cout, c);
            else
                save_curve(curve_out, c);
            return kExitOk;
        }
        if (*insp) return inspect(inspect_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}
