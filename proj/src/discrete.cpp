#include "discrete.hpp"

namespace curveflow::detail {

Geometry::Geometry(const DiscreteCurve& c, int order) : n(c.size()), x(c.vertices()) {
    u.resize(n);
    l.resize(n);
    s.resize(n);
    w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 e = x[next(i)] - x[i];
        l[i] = norm(e);
        u[i] = e / l[i];
    }
    L = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = l[prev(i)] + l[i];
        w[i] = 0.5 * s[i];
        L += l[i];
    }
    if (order >= 1) T = D(*this, x);
    if (order >= 2) {
        K = D(*this, T);
        k2.resize(n);
        for (std::size_t i = 0; i < n; ++i) k2[i] = norm2(K[i]);
    }
    if (order >= 3) J = D(*this, K);
    if (order >= 4) Q = D(*this, J);
}

TangentField D(const Geometry& g, const TangentField& f) {
    TangentField out(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out[i] = (f[g.next(i)] - f[g.prev(i)]) / g.s[i];
    return out;
}

std::vector<double> D(const Geometry& g, const std::vector<double>& f) {
    std::vector<double> out(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out[i] = (f[g.next(i)] - f[g.prev(i)]) / g.s[i];
    return out;
}

Backprop::Backprop(const Geometry& g) : g_(g), cbar_(g.n), lbar_(g.n, 0.0) {}

void Backprop::through_D(const TangentField& out, const TangentField& out_bar, TangentField& in_bar) {
    for (std::size_t i = 0; i < g_.n; ++i) {
        const Vec3 b = out_bar[i] / g_.s[i];
        in_bar[g_.next(i)] += b;
        in_bar[g_.prev(i)] -= b;
        const double sbar = -dot(b, out[i]);
        lbar_[g_.prev(i)] += sbar;
        lbar_[i] += sbar;
    }
}

void Backprop::add_weight_bar(std::size_t i, double wbar) {
    lbar_[g_.prev(i)] += 0.5 * wbar;
    lbar_[i] += 0.5 * wbar;
}

TangentField Backprop::gradient() {
    TangentField cb = cbar_;
    for (std::size_t i = 0; i < g_.n; ++i) {
        const Vec3 t = lbar_[i] * g_.u[i];
        cb[g_.next(i)] += t;
        cb[i] -= t;
    }
    for (std::size_t i = 0; i < g_.n; ++i) cb[i] = cb[i] / g_.w[i];
    return cb;
}

Linearization linearize(const Geometry& g, const TangentField& h) {
    Linearization lin;
    const std::size_t n = g.n;
    lin.dl.resize(n);
    lin.ds.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        lin.dl[i] = dot(g.u[i], h[g.next(i)] - h[i]);
        lin.dL += lin.dl[i];
    }
    for (std::size_t i = 0; i < n; ++i) lin.ds[i] = lin.dl[g.prev(i)] + lin.dl[i];

    // out = D(f) with variation df: d(out)_i = (df_{i+1} - df_{i-1} - out_i ds_i) / s_i.
    auto dD = [&](const TangentField& out, const TangentField& df) {
        TangentField r(n);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = (df[g.next(i)] - df[g.prev(i)] - lin.ds[i] * out[i]) / g.s[i];
        return r;
    };
    lin.dT = dD(g.T, h);
    if (!g.K.empty()) {
        lin.dK = dD(g.K, lin.dT);
        lin.dk2.resize(n);
        for (std::size_t i = 0; i < n; ++i) lin.dk2[i] = 2.0 * dot(g.K[i], lin.dK[i]);
    }
    return lin;
}

}  // namespace curveflow::detail

namespace curveflow::detail {

TangentField length_gradient(const Geometry& g) {
    TangentField out(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out[i] = (g.u[g.prev(i)] - g.u[i]) / g.w[i];
    return out;
}

TangentField liouville_density(const Geometry& g) {
    TangentField a(g.n);
    for (std::size_t i = 0; i < g.n; ++i) a[i] = 0.5 * cross(g.x[i], g.x[g.next(i)] - g.x[g.prev(i)]);
    return a;
}

}  // namespace curveflow::detail
