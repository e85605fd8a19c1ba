#include "curveflow/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "discrete.hpp"

namespace curveflow {

namespace {

struct Weighted {
    detail::Geometry g;
    std::vector<double> weight;
    TangentField a;  // weight_i w_i c_i x T_i
};

Weighted prepare(const WeightSpec& w, const DiscreteCurve& c) {
    Weighted out{detail::Geometry(c, 1), weight_values(w, c), {}};
    out.a = detail::liouville_density(out.g);
    for (std::size_t i = 0; i < c.size(); ++i) out.a[i] *= out.weight[i];
    return out;
}

}  // namespace

Vec3 angular_momentum(const WeightSpec& w, const DiscreteCurve& c) {
    const auto p = prepare(w, c);
    Vec3 J;
    for (int m = 0; m < 3; ++m) {
        Vec3 e;
        e[m] = 1.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) acc += dot(p.a[i], cross(e, c[i]));
        J[m] = acc;
    }
    return J;
}

Vec3 linear_momentum(const WeightSpec& w, const DiscreteCurve& c) {
    const auto p = prepare(w, c);
    Vec3 J;
    for (const auto& v : p.a) J += v;
    return J;
}

double repar_residual(const WeightSpec& w, const DiscreteCurve& c) {
    const auto p = prepare(w, c);
    const std::size_t n = c.size();
    double worst = 0.0;
    for (int mode = 0; mode < 3; ++mode) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
            const double a = mode == 0 ? 1.0 : (mode == 1 ? std::cos(t) : std::sin(t));
            const Vec3 h = a * p.g.T[i];
            num += dot(p.a[i], h);
            den += norm(p.a[i]) * norm(h);
        }
        if (den > 0.0) worst = std::max(worst, std::abs(num) / den);
    }
    return worst;
}

MomentumRecord momentum_record(const WeightSpec& w, const HamiltonianSpec& H, const DiscreteCurve& c) {
    MomentumRecord r;
    r.angular = angular_momentum(w, c);
    r.linear = linear_momentum(w, c);
    r.repar_residual = repar_residual(w, c);
    r.hamiltonian_value = h_value(H, c);
    r.length = measures(c).total_length;
    return r;
}

}  // namespace curveflow
