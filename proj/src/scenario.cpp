#include "curveflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace curveflow {

namespace {

struct Entry {
    std::string value;
    int line;
};
using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::map<std::string, std::vector<std::string>>& allowed_keys() {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"curve", {"family", "n", "r", "p", "q", "R", "rho", "file"}},
        {"weight", {"type", "C", "p"}},
        {"hamiltonian", {"type", "axis", "power"}},
        {"run", {"dt", "steps", "output_every", "resample_every", "seed", "outputs"}},
    };
    return keys;
}

std::map<std::string, Section> tokenize(const std::string& text) {
    std::map<std::string, Section> sections;
    std::istringstream is(text);
    std::string raw, current;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ParseError(line, "unterminated section header '" + s + "'");
            current = trim(s.substr(1, s.size() - 2));
            if (!allowed_keys().count(current)) throw ParseError(line, "unknown section [" + current + "]");
            if (sections.count(current)) throw ParseError(line, "duplicate section [" + current + "]");
            sections[current];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected 'key = value', got '" + s + "'");
        if (current.empty()) throw ParseError(line, "key outside of any section");
        const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
        const auto& ok = allowed_keys().at(current);
        if (std::find(ok.begin(), ok.end(), key) == ok.end())
            throw ParseError(line, "unknown key '" + key + "' in [" + current + "]");
        if (value.empty()) throw ParseError(line, "empty value for '" + key + "'");
        auto& sec = sections[current];
        if (sec.count(key)) throw ParseError(line, "duplicate key '" + key + "' in [" + current + "]");
        sec[key] = {value, line};
    }
    return sections;
}

double to_real(const Entry& e, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0' || !std::isfinite(v))
        throw ParseError(e.line, "'" + key + "' expects a real number, got '" + e.value + "'");
    return v;
}

long to_integer(const Entry& e, const std::string& key) {
    char* end = nullptr;
    const long v = std::strtol(e.value.c_str(), &end, 10);
    if (end == e.value.c_str() || *end != '\0')
        throw ParseError(e.line, "'" + key + "' expects an integer, got '" + e.value + "'");
    return v;
}

class Reader {
public:
    Reader(const std::map<std::string, Section>& all, const std::string& name) : name_(name) {
        if (auto it = all.find(name); it != all.end()) sec_ = &it->second;
    }
    bool has(const std::string& k) const { return sec_ && sec_->count(k); }
    const Entry& entry(const std::string& k) const { return sec_->at(k); }
    std::string text(const std::string& k, const std::string& def) const { return has(k) ? entry(k).value : def; }
    double real(const std::string& k, double def) const { return has(k) ? to_real(entry(k), k) : def; }
    long integer(const std::string& k, long def) const { return has(k) ? to_integer(entry(k), k) : def; }
    int line_of(const std::string& k) const { return has(k) ? entry(k).line : 0; }

    // Rejects keys that are valid for the section but not for the chosen type.
    void only(const std::vector<std::string>& keys, const std::string& context) const {
        if (!sec_) return;
        for (const auto& [k, e] : *sec_)
            if (std::find(keys.begin(), keys.end(), k) == keys.end())
                throw ParseError(e.line, "key '" + k + "' does not apply to " + context);
    }

private:
    std::string name_;
    const Section* sec_ = nullptr;
};

Vec3 to_vec3(const Entry& e) {
    std::istringstream is(e.value);
    Vec3 v;
    std::string extra;
    if (!(is >> v.x >> v.y >> v.z) || (is >> extra))
        throw ParseError(e.line, "'axis' expects three decimals, got '" + e.value + "'");
    return v;
}

void parse_curve(const Reader& r, Scenario& s, const std::string& base_dir) {
    const long n = r.integer("n", static_cast<long>(s.n));
    if (n < static_cast<long>(kMinVertices))
        throw ParseError(r.line_of("n"), "n must be at least " + std::to_string(kMinVertices));
    s.n = static_cast<std::size_t>(n);
    if (r.has("file")) {
        r.only({"file"}, "a curve read from a file");
        std::filesystem::path p = r.text("file", "");
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        s.curve_file = r.text("file", "");
        s.initial = load_curve(p.string());
        s.n = s.initial->size();
        return;
    }
    const std::string family = r.text("family", "trefoil");
    if (family == "circle") {
        r.only({"family", "n", "r"}, "family circle");
        s.family = Circle{r.real("r", 1.0)};
    } else if (family == "trefoil") {
        r.only({"family", "n"}, "family trefoil");
        s.family = Trefoil{};
    } else if (family == "torus_knot") {
        r.only({"family", "n", "p", "q", "R", "rho"}, "family torus_knot");
        s.family = TorusKnot{static_cast<int>(r.integer("p", 2)), static_cast<int>(r.integer("q", 3)),
                             r.real("R", 2.0), r.real("rho", 1.0)};
    } else {
        throw ParseError(r.line_of("family"), "unknown curve family '" + family + "'");
    }
    make_curve(s.family, s.n);  // validates family parameters
}

void parse_weight(const Reader& r, Scenario& s) {
    const std::string type = r.text("type", "identity");
    if (type == "identity") {
        r.only({"type"}, "weight identity");
        s.weight = Identity{};
    } else if (type == "length") {
        const double C = r.real("C", 1.0);
        if (!(C > 0.0)) throw ParseError(r.line_of("C"), "C must be positive");
        s.weight = LengthWeighted{C, r.real("p", 0.0)};
    } else if (type == "curvature") {
        r.only({"type"}, "weight curvature");
        s.weight = CurvatureWeighted{};
    } else {
        throw ParseError(r.line_of("type"), "unknown weight type '" + type + "'");
    }
}

void parse_hamiltonian(const Reader& r, Scenario& s) {
    const std::string type = r.text("type", "length");
    const bool flux = type == "flux_translation" || type == "flux_rotation";
    if (type == "length")
        r.only({"type", "power"}, "hamiltonian length");
    else if (flux)
        r.only({"type", "axis"}, "hamiltonian " + type);
    else
        r.only({"type"}, "hamiltonian " + type);
    const Vec3 axis = r.has("axis") ? to_vec3(r.entry("axis")) : e_z;
    if (type == "length") {
        const double a = r.real("power", 1.0);
        s.length_power = a;
        if (a == 1.0)
            s.hamiltonian = Length{};
        else
            s.hamiltonian = Length{[a](double l) { return std::pow(l, a); },
                                   [a](double l) { return a * std::pow(l, a - 1.0); }};
    } else if (type == "flux_translation") {
        s.hamiltonian = FluxTranslation{axis};
    } else if (type == "flux_rotation") {
        if (std::abs(norm(axis) - 1.0) > 1e-9)
            throw ParseError(r.line_of("axis"), "flux_rotation axis must be a unit vector");
        s.hamiltonian = FluxRotation{axis / norm(axis)};
    } else if (type == "squared_curvature") {
        s.hamiltonian = SquaredCurvature{};
    } else if (type == "total_torsion") {
        s.hamiltonian = TotalTorsion{};
    } else if (type == "squared_scale") {
        s.hamiltonian = SquaredScale{};
    } else if (type == "length_times_k") {
        s.hamiltonian = LengthTimesK{};
    } else {
        throw ParseError(r.line_of("type"), "unknown hamiltonian type '" + type + "'");
    }
}

void parse_run(const Reader& r, Scenario& s) {
    s.dt = r.real("dt", s.dt);
    s.steps = r.integer("steps", s.steps);
    s.output_every = r.integer("output_every", s.output_every);
    s.resample_every = r.integer("resample_every", s.resample_every);
    s.seed = static_cast<std::uint64_t>(r.integer("seed", static_cast<long>(s.seed)));
    if (r.has("outputs")) {
        s.outputs.clear();
        std::istringstream is(r.text("outputs", ""));
        std::string item;
        while (std::getline(is, item, ',')) {
            item = trim(item);
            if (item == "frames_csv")
                s.outputs.insert(OutputKind::FramesCsv);
            else if (item == "frames_obj")
                s.outputs.insert(OutputKind::FramesObj);
            else if (item == "diagnostics_csv")
                s.outputs.insert(OutputKind::DiagnosticsCsv);
            else if (item == "summary_json")
                s.outputs.insert(OutputKind::SummaryJson);
            else
                throw ParseError(r.line_of("outputs"), "unknown output '" + item + "'");
        }
    }
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string output_name(OutputKind k) {
    switch (k) {
        case OutputKind::FramesCsv: return "frames_csv";
        case OutputKind::FramesObj: return "frames_obj";
        case OutputKind::DiagnosticsCsv: return "diagnostics_csv";
        case OutputKind::SummaryJson: return "summary_json";
    }
    return "";
}

void validate_scenario(const Scenario& s) {
    if (!(s.dt > 0.0)) throw ConfigError("invariant dt > 0 violated (dt = " + fmt(s.dt) + ")");
    if (s.steps < 0) throw ConfigError("invariant steps >= 0 violated (steps = " + std::to_string(s.steps) + ")");
    if (s.output_every < 1)
        throw ConfigError("invariant output_every >= 1 violated (output_every = " + std::to_string(s.output_every) +
                          ")");
    if (s.resample_every < 0) throw ConfigError("invariant resample_every >= 0 violated");
    require_supported(s.hamiltonian, s.weight);
}

Scenario parse_scenario(const std::string& text, const std::string& base_dir) {
    const auto sections = tokenize(text);
    Scenario s;
    parse_curve(Reader(sections, "curve"), s, base_dir);
    parse_weight(Reader(sections, "weight"), s);
    parse_hamiltonian(Reader(sections, "hamiltonian"), s);
    parse_run(Reader(sections, "run"), s);
    validate_scenario(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), std::filesystem::path(path).parent_path().string());
}

std::string format_scenario(const Scenario& s) {
    std::ostringstream os;
    os << "[curve]\n";
    if (s.initial && !s.curve_file.empty()) {
        os << "file = " << s.curve_file << "\n";
    } else if (const auto* c = std::get_if<Circle>(&s.family)) {
        os << "family = circle\nn = " << s.n << "\nr = " << fmt(c->r) << "\n";
    } else if (std::holds_alternative<Trefoil>(s.family)) {
        os << "family = trefoil\nn = " << s.n << "\n";
    } else {
        const auto& k = std::get<TorusKnot>(s.family);
        os << "family = torus_knot\nn = " << s.n << "\np = " << k.p << "\nq = " << k.q << "\nR = " << fmt(k.R)
           << "\nrho = " << fmt(k.rho) << "\n";
    }
    os << "\n[weight]\n";
    if (const auto* lw = std::get_if<LengthWeighted>(&s.weight))
        os << "type = length\nC = " << fmt(lw->C) << "\np = " << fmt(lw->p) << "\n";
    else if (std::holds_alternative<CurvatureWeighted>(s.weight))
        os << "type = curvature\n";
    else
        os << "type = identity\n";
    os << "\n[hamiltonian]\ntype = " << hamiltonian_name(s.hamiltonian) << "\n";
    if (const auto* f = std::get_if<FluxTranslation>(&s.hamiltonian))
        os << "axis = " << fmt(f->v.x) << " " << fmt(f->v.y) << " " << fmt(f->v.z) << "\n";
    if (const auto* f = std::get_if<FluxRotation>(&s.hamiltonian))
        os << "axis = " << fmt(f->v.x) << " " << fmt(f->v.y) << " " << fmt(f->v.z) << "\n";
    if (std::holds_alternative<Length>(s.hamiltonian) && s.length_power != 1.0)
        os << "power = " << fmt(s.length_power) << "\n";
    os << "\n[run]\ndt = " << fmt(s.dt) << "\nsteps = " << s.steps << "\noutput_every = " << s.output_every
       << "\nresample_every = " << s.resample_every << "\nseed = " << s.seed << "\noutputs = ";
    bool first = true;
    for (auto k : s.outputs) {
        os << (first ? "" : ", ") << output_name(k);
        first = false;
    }
    os << "\n";
    return os.str();
}

}  // namespace curveflow
