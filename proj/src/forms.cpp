#include "curveflow/forms.hpp"

#include <cmath>

#include "discrete.hpp"

namespace curveflow {

using detail::Geometry;

double LengthWeighted::phi(double l) const { return C * std::pow(l, p); }
double LengthWeighted::dphi(double l) const { return p == 0.0 ? 0.0 : C * p * std::pow(l, p - 1.0); }

namespace {

template <class... F>
struct overloaded : F... {
    using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

void check_sizes(const DiscreteCurve& c, const TangentField& h) {
    if (h.size() != c.size()) throw ArgumentError("field size does not match curve");
}

void validate(const WeightSpec& w) {
    if (const auto* lw = std::get_if<LengthWeighted>(&w)) {
        if (!(lw->C > 0.0) || !std::isfinite(lw->p)) throw WeightError("LengthWeighted needs C > 0 and finite p");
    }
    if (const auto* cc = std::get_if<ConformalCustom>(&w)) {
        if (!cc->lambda || !cc->gradient) throw WeightError("ConformalCustom needs lambda and gradient evaluators");
    }
}

double conformal_lambda(const ConformalCustom& cc, const DiscreteCurve& c) {
    const double v = cc.lambda(c);
    if (!(v > 0.0) || !std::isfinite(v)) throw WeightError("conformal factor must be positive, got " + std::to_string(v));
    return v;
}

// sum <a_i, h_i> with a the Liouville density: Theta^id(h).
double theta_id(const Geometry& g, const TangentField& a, const TangentField& h) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) acc += dot(a[i], h[i]);
    return acc;
}

// Exact -dTheta^id written with edge differences only:
//   sum det(d_i, h_i, k_i) + 1/2 sum [det(e_i, h_{i+1}, k_i) + det(e_i, h_i, k_{i+1})].
// Evaluated as (B(h,k) - B(k,h)) / 2 so antisymmetry holds bit for bit.
double omega_id_exact(const Geometry& g, const TangentField& h, const TangentField& k) {
    auto B = [&](const TangentField& a, const TangentField& b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < g.n; ++i) {
            const std::size_t j = g.next(i);
            const Vec3 e = g.x[j] - g.x[i];
            const Vec3 d = g.x[j] - g.x[g.prev(i)];
            acc += det(d, a[i], b[i]) + det(e, a[j], b[i]);
        }
        return acc;
    };
    return 0.5 * (B(h, k) - B(k, h));
}

double omega_mw_geom(const Geometry& g, const TangentField& h, const TangentField& k) {
    double acc = 0.0;
    // Antisymmetrised so that omega(h, h) = 0 and omega(h, k) = -omega(k, h) hold bit for bit.
    for (std::size_t i = 0; i < g.n; ++i) acc += 0.5 * (det(g.T[i], h[i], k[i]) - det(g.T[i], k[i], h[i])) * g.w[i];
    return acc;
}

double l2(const Geometry& g, const TangentField& h, const TangentField& k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) acc += dot(h[i], k[i]) * g.w[i];
    return acc;
}

// D_h Theta^{1+kappa^2}(k) for constant k, exact for the discrete sums.
double curvature_theta_derivative(const Geometry& g, const TangentField& a, const TangentField& h,
                                  const TangentField& k) {
    const auto lin = detail::linearize(g, h);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const std::size_t j = g.next(i), m = g.prev(i);
        const Vec3 da = 0.5 * (cross(h[i], g.x[j] - g.x[m]) + cross(g.x[i], h[j] - h[m]));
        acc += lin.dk2[i] * dot(a[i], k[i]) + (1.0 + g.k2[i]) * dot(da, k[i]);
    }
    return acc;
}

}  // namespace

std::string weight_name(const WeightSpec& w) {
    return std::visit(overloaded{
                          [](const Identity&) { return std::string("identity"); },
                          [](const LengthWeighted& lw) {
                              char buf[96];
                              std::snprintf(buf, sizeof buf, "length(C=%g,p=%g)", lw.C, lw.p);
                              return std::string(buf);
                          },
                          [](const ConformalCustom&) { return std::string("conformal"); },
                          [](const CurvatureWeighted&) { return std::string("curvature"); },
                      },
                      w);
}

double lambda_value(const WeightSpec& w, const DiscreteCurve& c) {
    validate(w);
    return std::visit(overloaded{
                          [](const Identity&) { return 1.0; },
                          [&](const LengthWeighted& lw) { return lw.phi(measures(c).total_length); },
                          [&](const ConformalCustom& cc) { return conformal_lambda(cc, c); },
                          [](const CurvatureWeighted&) -> double {
                              throw UnsupportedVariantError("curvature weight is not a scalar factor");
                          },
                      },
                      w);
}

std::vector<double> weight_values(const WeightSpec& w, const DiscreteCurve& c) {
    if (std::holds_alternative<CurvatureWeighted>(w)) {
        auto k2 = curvature_sq(c);
        for (auto& v : k2) v += 1.0;
        return k2;
    }
    return std::vector<double>(c.size(), lambda_value(w, c));
}

double theta(const WeightSpec& w, const DiscreteCurve& c, const TangentField& h) {
    check_sizes(c, h);
    validate(w);
    const Geometry g(c, std::holds_alternative<CurvatureWeighted>(w) ? 2 : 1);
    const auto a = detail::liouville_density(g);
    if (std::holds_alternative<CurvatureWeighted>(w)) {
        double acc = 0.0;
        for (std::size_t i = 0; i < g.n; ++i) acc += (1.0 + g.k2[i]) * dot(a[i], h[i]);
        return acc;
    }
    return lambda_value(w, c) * theta_id(g, a, h);
}

double omega_mw(const DiscreteCurve& c, const TangentField& h, const TangentField& k) {
    check_sizes(c, h);
    check_sizes(c, k);
    return omega_mw_geom(Geometry(c, 1), h, k);
}

double dlambda(const WeightSpec& w, const DiscreteCurve& c, const TangentField& h) {
    check_sizes(c, h);
    validate(w);
    return std::visit(overloaded{
                          [](const Identity&) { return 0.0; },
                          [&](const LengthWeighted& lw) {
                              const Geometry g(c, 0);
                              double dl = 0.0;
                              for (std::size_t i = 0; i < g.n; ++i) dl += dot(g.u[i], h[g.next(i)] - h[i]);
                              return lw.dphi(g.L) * dl;
                          },
                          [&](const ConformalCustom& cc) { return l2_inner(c, cc.gradient(c), h); },
                          [](const CurvatureWeighted&) -> double {
                              throw UnsupportedVariantError("curvature weight is not a scalar factor");
                          },
                      },
                      w);
}

double omega(const WeightSpec& w, const DiscreteCurve& c, const TangentField& h, const TangentField& k) {
    check_sizes(c, h);
    check_sizes(c, k);
    validate(w);
    if (std::holds_alternative<CurvatureWeighted>(w)) {
        const Geometry g(c, 2);
        const auto a = detail::liouville_density(g);
        return curvature_theta_derivative(g, a, k, h) - curvature_theta_derivative(g, a, h, k);
    }
    const Geometry g(c, 1);
    const double base = omega_id_exact(g, h, k);
    if (std::holds_alternative<Identity>(w)) return base;
    const double lam = lambda_value(w, c);
    if (const auto* lw = std::get_if<LengthWeighted>(&w); lw && lw->p == 0.0) return lam * base;
    const auto a = detail::liouville_density(g);
    const double th = theta_id(g, a, h), tk = theta_id(g, a, k);
    const double dh = dlambda(w, c, h), dk = dlambda(w, c, k);
    return lam * base + (th * dk - tk * dh);
}

double omega_closed_form(const WeightSpec& w, const DiscreteCurve& c, const TangentField& h,
                         const TangentField& k) {
    check_sizes(c, h);
    check_sizes(c, k);
    validate(w);
    const Geometry g(c, 2);
    const double mw = omega_mw_geom(g, h, k);
    if (std::holds_alternative<Identity>(w)) return kIdentityOverMW * mw;
    const auto a = detail::liouville_density(g);
    if (const auto* lw = std::get_if<LengthWeighted>(&w)) {
        const double dphi = lw->dphi(g.L);
        return lw->phi(g.L) * kIdentityOverMW * mw +
               dphi * (l2(g, h, g.K) * theta_id(g, a, k) - l2(g, k, g.K) * theta_id(g, a, h));
    }
    if (const auto* cc = std::get_if<ConformalCustom>(&w)) {
        const auto grad = cc->gradient(c);
        return conformal_lambda(*cc, c) * kIdentityOverMW * mw + theta_id(g, a, h) * l2(g, grad, k) -
               theta_id(g, a, k) * l2(g, grad, h);
    }
    // Six-term curvature-weighted expression.
    const auto dk2 = detail::D(g, g.k2);
    const auto Dh = detail::D(g, h), Dk = detail::D(g, k);
    const auto D2h = detail::D(g, Dh), D2k = detail::D(g, Dk);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const Vec3 hk = cross(h[i], k[i]);
        const Vec3 cT = cross(g.x[i], g.T[i]);
        const double vh = -4.0 * g.k2[i] * dot(Dh[i], g.T[i]) + 2.0 * dot(D2h[i], g.K[i]);  // D_h kappa^2
        const double vk = -4.0 * g.k2[i] * dot(Dk[i], g.T[i]) + 2.0 * dot(D2k[i], g.K[i]);
        acc += (3.0 * (1.0 + g.k2[i]) * dot(g.T[i], hk) + dk2[i] * dot(g.x[i], hk) - vh * dot(cT, k[i]) +
                vk * dot(cT, h[i])) *
               g.w[i];
    }
    return acc;
}

double comparison_form(const LengthWeighted& w, const DiscreteCurve& c, const TangentField& h,
                       const TangentField& k) {
    check_sizes(c, h);
    check_sizes(c, k);
    const Geometry g(c, 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) acc += dot(cross(g.T[i], h[i]), k[i]) * g.w[i];
    return w.phi(g.L) * acc;
}

double scale_defect(const WeightSpec& w, const DiscreteCurve& c) {
    validate(w);
    return std::visit(overloaded{
                          [](const Identity&) { return 3.0; },
                          [&](const LengthWeighted& lw) {
                              const double l = measures(c).total_length;
                              return lw.C * (3.0 + lw.p) * std::pow(l, lw.p);
                          },
                          [&](const ConformalCustom& cc) {
                              return 3.0 * conformal_lambda(cc, c) + l2_inner(c, cc.gradient(c), positions(c));
                          },
                          [](const CurvatureWeighted&) -> double {
                              throw UnsupportedVariantError("scale defect is undefined for the curvature weight");
                          },
                      },
                      w);
}

TangentField grad_lambda(const WeightSpec& w, const DiscreteCurve& c) {
    validate(w);
    return std::visit(overloaded{
                          [&](const Identity&) { return TangentField(c.size()); },
                          [&](const LengthWeighted& lw) {
                              if (lw.p == 0.0) return TangentField(c.size());
                              const Geometry g(c, 0);
                              auto out = detail::length_gradient(g);
                              const double s = lw.dphi(g.L);
                              for (auto& v : out) v *= s;
                              return out;
                          },
                          [&](const ConformalCustom& cc) {
                              auto out = cc.gradient(c);
                              check_sizes(c, out);
                              return out;
                          },
                          [](const CurvatureWeighted&) -> TangentField {
                              throw UnsupportedVariantError("curvature weight has no scalar gradient");
                          },
                      },
                      w);
}

}  // namespace curveflow
