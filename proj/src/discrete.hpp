#pragma once

// Cached discrete geometry of a curve plus the reverse- and forward-mode
// derivative machinery shared by the forms and Hamiltonians.

#include <vector>

#include "curveflow/curve.hpp"

namespace curveflow::detail {

struct Geometry {
    std::size_t n = 0;
    std::vector<Vec3> x;     // vertices
    std::vector<Vec3> u;     // unit edge vectors e_i / l_i
    std::vector<double> l;   // edge lengths
    std::vector<double> s;   // l_{i-1} + l_i, the centered-difference denominator
    std::vector<double> w;   // vertex weights s_i / 2
    double L = 0.0;
    TangentField T, K, J, Q;  // D c, D^2 c, D^3 c, D^4 c (only up to `order`)
    std::vector<double> k2;   // |K|^2

    explicit Geometry(const DiscreteCurve& c, int order = 4);

    std::size_t next(std::size_t i) const { return i + 1 == n ? 0 : i + 1; }
    std::size_t prev(std::size_t i) const { return i == 0 ? n - 1 : i - 1; }
};

TangentField D(const Geometry& g, const TangentField& f);
std::vector<double> D(const Geometry& g, const std::vector<double>& f);

// Reverse-mode accumulation of dF/dc for a scalar F built from D and the
// edge lengths.
class Backprop {
public:
    explicit Backprop(const Geometry& g);

    // out = D(in); adds the contribution of out_bar to in_bar and to the
    // length adjoints.
    void through_D(const TangentField& out, const TangentField& out_bar, TangentField& in_bar);
    void add_weight_bar(std::size_t i, double wbar);
    void add_length_bar(std::size_t i, double lbar) { lbar_[i] += lbar; }
    TangentField& position_bar() { return cbar_; }

    // L2 gradient: dF/dc_i divided by w_i.
    TangentField gradient();

private:
    const Geometry& g_;
    TangentField cbar_;
    std::vector<double> lbar_;
};

// Directional derivatives of the cached geometry along h.
struct Linearization {
    std::vector<double> dl, ds;
    TangentField dT, dK;
    std::vector<double> dk2;
    double dL = 0.0;
};

Linearization linearize(const Geometry& g, const TangentField& h);

}  // namespace curveflow::detail

namespace curveflow::detail {

// Exact L2 gradient of the discrete total length: (u_{i-1} - u_i) / w_i.
TangentField length_gradient(const Geometry& g);

// a_i = w_i c_i x (D_s c)_i = c_i x (c_{i+1} - c_{i-1}) / 2.
TangentField liouville_density(const Geometry& g);

}  // namespace curveflow::detail
