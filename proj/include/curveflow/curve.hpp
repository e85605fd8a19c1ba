#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "curveflow/errors.hpp"
#include "curveflow/vec3.hpp"

namespace curveflow {

// Per-vertex vectors attached to a curve (tangent vectors h, k, X, ...).
using TangentField = std::vector<Vec3>;

inline constexpr std::size_t kMinVertices = 8;

// Closed polygon; indices wrap modulo N.
class DiscreteCurve {
public:
    // Throws ConfigError for N < 8 and DegenerateCurveError when an edge is
    // shorter than 1e-9 times the mean edge length.
    explicit DiscreteCurve(std::vector<Vec3> vertices);

    std::size_t size() const { return v_.size(); }
    const Vec3& operator[](std::size_t i) const { return v_[i]; }
    const std::vector<Vec3>& vertices() const { return v_; }

    // Vertex i with cyclic wrap for any integer i.
    const Vec3& at(long i) const {
        const long n = static_cast<long>(v_.size());
        return v_[static_cast<std::size_t>(((i % n) + n) % n)];
    }

private:
    std::vector<Vec3> v_;
};

struct ArclengthMeasure {
    std::vector<double> edge_lengths;    // l_i = |c_{i+1} - c_i|
    std::vector<double> vertex_weights;  // w_i = (l_{i-1} + l_i) / 2
    double total_length = 0.0;
};

struct Circle {
    double r = 1.0;
};
struct Trefoil {};
struct TorusKnot {
    int p = 2, q = 3;
    double R = 2.0, rho = 1.0;
};
using CurveFamily = std::variant<Circle, Trefoil, TorusKnot>;

DiscreteCurve make_curve(const CurveFamily& family, std::size_t n);
std::string family_name(const CurveFamily& family);

ArclengthMeasure measures(const DiscreteCurve& c);

// Centered arclength derivative iterated `order` times (1..4).
TangentField arclength_derivative(const DiscreteCurve& c, const TangentField& f, int order);
std::vector<double> arclength_derivative(const DiscreteCurve& c, const std::vector<double>& f);

std::vector<double> curvature_sq(const DiscreteCurve& c);
std::vector<double> torsion(const DiscreteCurve& c);

double l2_inner(const DiscreteCurve& c, const TangentField& h, const TangentField& k);
double l2_norm(const DiscreteCurve& c, const TangentField& h);
TangentField vertical_projection(const DiscreteCurve& c, const TangentField& h);
TangentField tangent_cross(const DiscreteCurve& c, const TangentField& h);

// Pointwise helpers used throughout.
TangentField constant_field(std::size_t n, const Vec3& v);
TangentField positions(const DiscreteCurve& c);
DiscreteCurve displaced(const DiscreteCurve& c, const TangentField& h, double eps);
DiscreteCurve transformed(const DiscreteCurve& c, const Mat3& r, const Vec3& shift = {});
DiscreteCurve scaled(const DiscreteCurve& c, double a);
DiscreteCurve cyclic_shift(const DiscreteCurve& c, long k);
TangentField cyclic_shift(const TangentField& h, long k);
double diameter(const DiscreteCurve& c);
double min_edge(const DiscreteCurve& c);

// Symmetric Hausdorff distance between the vertex sets of two curves.
double hausdorff(const DiscreteCurve& a, const DiscreteCurve& b);

// Uniform-arclength resampling with the same vertex count, starting at vertex 0.
DiscreteCurve resample_uniform(const DiscreteCurve& c);

// Curve file: header "N <count>" followed by N lines "x y z".
void write_curve(std::ostream& os, const DiscreteCurve& c);
DiscreteCurve read_curve(std::istream& is);
void save_curve(const std::string& path, const DiscreteCurve& c);
DiscreteCurve load_curve(const std::string& path);

}  // namespace curveflow
