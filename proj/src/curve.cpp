#include "curveflow/curve.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "discrete.hpp"

namespace curveflow {

namespace {

void require_same_size(const DiscreteCurve& c, const TangentField& h) {
    if (h.size() != c.size())
        throw ArgumentError("field has " + std::to_string(h.size()) + " vectors, curve has " +
                            std::to_string(c.size()) + " vertices");
}

}  // namespace

DiscreteCurve::DiscreteCurve(std::vector<Vec3> vertices) : v_(std::move(vertices)) {
    const std::size_t n = v_.size();
    if (n < kMinVertices)
        throw ConfigError("curve needs at least 8 vertices, got " + std::to_string(n));
    double total = 0.0, shortest = std::numeric_limits<double>::infinity();
    std::size_t where = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double l = norm(v_[(i + 1) % n] - v_[i]);
        if (!std::isfinite(l)) throw DegenerateCurveError("non-finite vertex coordinates");
        total += l;
        if (l < shortest) {
            shortest = l;
            where = i;
        }
    }
    const double eps_edge = 1e-9 * total / static_cast<double>(n);
    if (!(shortest > eps_edge))
        throw DegenerateCurveError("edge " + std::to_string(where) + " has length " + std::to_string(shortest) +
                                   " below the immersion guard");
}

DiscreteCurve make_curve(const CurveFamily& family, std::size_t n) {
    if (n < kMinVertices) throw ConfigError("curve needs at least 8 vertices, got " + std::to_string(n));
    std::vector<Vec3> v(n);
    const double two_pi = 2.0 * std::numbers::pi;
    auto theta = [&](std::size_t i) { return two_pi * static_cast<double>(i) / static_cast<double>(n); };
    if (const auto* c = std::get_if<Circle>(&family)) {
        if (!(c->r > 0.0)) throw ConfigError("circle radius must be positive");
        for (std::size_t i = 0; i < n; ++i) v[i] = {c->r * std::cos(theta(i)), c->r * std::sin(theta(i)), 0.0};
    } else if (std::holds_alternative<Trefoil>(family)) {
        for (std::size_t i = 0; i < n; ++i) {
            const double t = theta(i);
            const double r = 2.0 + std::cos(2.0 * t);
            v[i] = {r * std::cos(3.0 * t), r * std::sin(3.0 * t), std::sin(4.0 * t)};
        }
    } else {
        const auto& k = std::get<TorusKnot>(family);
        if (!(k.R > 0.0 && k.rho > 0.0 && k.rho < k.R))
            throw ConfigError("torus knot needs 0 < rho < R");
        if (k.p < 1 || k.q < 1 || std::gcd(k.p, k.q) != 1)
            throw ConfigError("torus knot needs coprime positive p, q");
        for (std::size_t i = 0; i < n; ++i) {
            const double t = theta(i);
            const double r = k.R + k.rho * std::cos(k.q * t);
            v[i] = {r * std::cos(k.p * t), r * std::sin(k.p * t), k.rho * std::sin(k.q * t)};
        }
    }
    return DiscreteCurve(std::move(v));
}

std::string family_name(const CurveFamily& family) {
    if (const auto* c = std::get_if<Circle>(&family)) return "circle(r=" + std::to_string(c->r) + ")";
    if (std::holds_alternative<Trefoil>(family)) return "trefoil";
    const auto& k = std::get<TorusKnot>(family);
    return "torus_knot(" + std::to_string(k.p) + "," + std::to_string(k.q) + ")";
}

ArclengthMeasure measures(const DiscreteCurve& c) {
    const std::size_t n = c.size();
    ArclengthMeasure m;
    m.edge_lengths.resize(n);
    m.vertex_weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.edge_lengths[i] = norm(c.at(static_cast<long>(i) + 1) - c[i]);
        if (!(m.edge_lengths[i] > 0.0)) throw DegenerateCurveError("zero-length edge " + std::to_string(i));
        m.total_length += m.edge_lengths[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        m.vertex_weights[i] = 0.5 * (m.edge_lengths[(i + n - 1) % n] + m.edge_lengths[i]);
    return m;
}

TangentField arclength_derivative(const DiscreteCurve& c, const TangentField& f, int order) {
    require_same_size(c, f);
    if (order < 1 || order > 4) throw ArgumentError("derivative order must be in 1..4");
    const detail::Geometry g(c, 0);
    TangentField out = f;
    for (int k = 0; k < order; ++k) out = detail::D(g, out);
    return out;
}

std::vector<double> arclength_derivative(const DiscreteCurve& c, const std::vector<double>& f) {
    if (f.size() != c.size()) throw ArgumentError("scalar field size mismatch");
    return detail::D(detail::Geometry(c, 0), f);
}

std::vector<double> curvature_sq(const DiscreteCurve& c) { return detail::Geometry(c, 2).k2; }

std::vector<double> torsion(const DiscreteCurve& c) {
    const detail::Geometry g(c, 3);
    const double mean_k2 = std::accumulate(g.k2.begin(), g.k2.end(), 0.0) / static_cast<double>(g.n);
    const double floor = 1e-8 * mean_k2;
    std::vector<double> tau(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i)
        if (g.k2[i] >= floor && g.k2[i] > 0.0) tau[i] = det(g.T[i], g.K[i], g.J[i]) / g.k2[i];
    return tau;
}

double l2_inner(const DiscreteCurve& c, const TangentField& h, const TangentField& k) {
    require_same_size(c, h);
    require_same_size(c, k);
    const auto m = measures(c);
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) acc += dot(h[i], k[i]) * m.vertex_weights[i];
    return acc;
}

double l2_norm(const DiscreteCurve& c, const TangentField& h) { return std::sqrt(l2_inner(c, h, h)); }

TangentField vertical_projection(const DiscreteCurve& c, const TangentField& h) {
    require_same_size(c, h);
    const detail::Geometry g(c, 1);
    TangentField out(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out[i] = dot(g.T[i], h[i]) * g.T[i];
    return out;
}

TangentField tangent_cross(const DiscreteCurve& c, const TangentField& h) {
    require_same_size(c, h);
    const detail::Geometry g(c, 1);
    TangentField out(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out[i] = cross(g.T[i], h[i]);
    return out;
}

TangentField constant_field(std::size_t n, const Vec3& v) { return TangentField(n, v); }

TangentField positions(const DiscreteCurve& c) { return c.vertices(); }

DiscreteCurve displaced(const DiscreteCurve& c, const TangentField& h, double eps) {
    require_same_size(c, h);
    std::vector<Vec3> v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = c[i] + eps * h[i];
    return DiscreteCurve(std::move(v));
}

DiscreteCurve transformed(const DiscreteCurve& c, const Mat3& r, const Vec3& shift) {
    std::vector<Vec3> v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = r * c[i] + shift;
    return DiscreteCurve(std::move(v));
}

DiscreteCurve scaled(const DiscreteCurve& c, double a) {
    std::vector<Vec3> v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = a * c[i];
    return DiscreteCurve(std::move(v));
}

TangentField cyclic_shift(const TangentField& h, long k) {
    const long n = static_cast<long>(h.size());
    TangentField out(h.size());
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = h[static_cast<std::size_t>(((i + k) % n + n) % n)];
    return out;
}

DiscreteCurve cyclic_shift(const DiscreteCurve& c, long k) { return DiscreteCurve(cyclic_shift(c.vertices(), k)); }

double diameter(const DiscreteCurve& c) {
    double d = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) d = std::max(d, norm(c[i] - c[j]));
    return d;
}

double min_edge(const DiscreteCurve& c) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.size(); ++i) m = std::min(m, norm(c.at(static_cast<long>(i) + 1) - c[i]));
    return m;
}

namespace {

double point_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double t = std::clamp(dot(p - a, ab) / norm2(ab), 0.0, 1.0);
    return norm(p - (a + t * ab));
}

double directed_hausdorff(const DiscreteCurve& a, const DiscreteCurve& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j)
            best = std::min(best, point_segment(a[i], b[j], b.at(static_cast<long>(j) + 1)));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

double hausdorff(const DiscreteCurve& a, const DiscreteCurve& b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

DiscreteCurve resample_uniform(const DiscreteCurve& c) {
    const auto m = measures(c);
    const std::size_t n = c.size();
    std::vector<Vec3> v(n);
    std::size_t edge = 0;
    double start = 0.0;  // arclength at the start of `edge`
    for (std::size_t k = 0; k < n; ++k) {
        const double target = m.total_length * static_cast<double>(k) / static_cast<double>(n);
        while (edge + 1 < n && start + m.edge_lengths[edge] <= target) start += m.edge_lengths[edge++];
        const double t = std::clamp((target - start) / m.edge_lengths[edge], 0.0, 1.0);
        v[k] = c[edge] + t * (c.at(static_cast<long>(edge) + 1) - c[edge]);
    }
    return DiscreteCurve(std::move(v));
}

void write_curve(std::ostream& os, const DiscreteCurve& c) {
    char buf[128];
    os << "N " << c.size() << '\n';
    for (const auto& p : c.vertices()) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
        os << buf;
    }
}

DiscreteCurve read_curve(std::istream& is) {
    std::string tag;
    long n = 0;
    if (!(is >> tag >> n) || tag != "N" || n <= 0) throw ConfigError("curve file must start with 'N <count>'");
    std::vector<Vec3> v(static_cast<std::size_t>(n));
    for (auto& p : v)
        if (!(is >> p.x >> p.y >> p.z)) throw ConfigError("curve file ended before " + std::to_string(n) + " vertices");
    return DiscreteCurve(std::move(v));
}

void save_curve(const std::string& path, const DiscreteCurve& c) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    write_curve(os, c);
}

DiscreteCurve load_curve(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read " + path);
    return read_curve(is);
}

}  // namespace curveflow
