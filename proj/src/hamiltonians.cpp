#include "curveflow/hamiltonians.hpp"

#include <cmath>
#include <numeric>

#include "discrete.hpp"

namespace curveflow {

using detail::Backprop;
using detail::Geometry;

namespace {

template <class... F>
struct overloaded : F... {
    using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

double f_of(const Length& H, double l) { return H.f ? H.f(l) : l; }
double df_of(const Length& H, double l) { return H.df ? H.df(l) : 1.0; }

void validate(const HamiltonianSpec& H) {
    if (const auto* len = std::get_if<Length>(&H)) {
        if (static_cast<bool>(len->f) != static_cast<bool>(len->df))
            throw ConfigError("Length Hamiltonian needs f and f' together");
    }
    if (const auto* rot = std::get_if<FluxRotation>(&H)) {
        if (std::abs(norm(rot->v) - 1.0) > 1e-12) throw ConfigError("FluxRotation axis must be a unit vector");
    }
}

double torsion_floor(const Geometry& g) {
    return 1e-8 * std::accumulate(g.k2.begin(), g.k2.end(), 0.0) / static_cast<double>(g.n);
}

double l2(const Geometry& g, const TangentField& h, const TangentField& k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) acc += dot(h[i], k[i]) * g.w[i];
    return acc;
}

double value(const HamiltonianSpec& H, const Geometry& g) {
    const std::size_t n = g.n;
    return std::visit(
        overloaded{
            [&](const Length& len) { return f_of(len, g.L); },
            [&](const FluxTranslation& f) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += dot(g.x[i], cross(g.T[i], f.v)) * g.w[i];
                return 0.5 * acc;
            },
            [&](const FluxRotation& f) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    acc += dot(g.x[i], cross(g.T[i], cross(f.v, g.x[i]))) * g.w[i];
                return acc / 3.0;
            },
            [&](const SquaredCurvature&) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += g.k2[i] * g.w[i];
                return 0.5 * acc;
            },
            [&](const TotalTorsion&) {
                const double floor = torsion_floor(g);
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    if (g.k2[i] >= floor && g.k2[i] > 0.0) acc += det(g.T[i], g.K[i], g.J[i]) / g.k2[i] * g.w[i];
                return acc;
            },
            [&](const SquaredScale&) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += norm2(g.x[i]) * g.w[i];
                return 0.5 * acc;
            },
            [&](const LengthTimesK&) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += g.k2[i] * g.w[i];
                return g.L * acc;
            },
        },
        H);
}

int order_needed(const HamiltonianSpec& H) {
    if (std::holds_alternative<TotalTorsion>(H)) return 3;
    if (std::holds_alternative<SquaredCurvature>(H) || std::holds_alternative<LengthTimesK>(H)) return 2;
    return 1;
}

// Reverse-mode gradient of scale * sum kappa_i^2 w_i into bp.
void backprop_curvature_energy(const Geometry& g, Backprop& bp, double scale, TangentField& Tbar) {
    TangentField Kbar(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        Kbar[i] = 2.0 * scale * g.w[i] * g.K[i];
        bp.add_weight_bar(i, scale * g.k2[i]);
    }
    bp.through_D(g.K, Kbar, Tbar);
}

TangentField gradient(const HamiltonianSpec& H, const Geometry& g) {
    const std::size_t n = g.n;
    Backprop bp(g);
    TangentField& cbar = bp.position_bar();
    TangentField Tbar(n);
    std::visit(overloaded{
                   [&](const Length& len) {
                       const double s = df_of(len, g.L);
                       for (std::size_t i = 0; i < n; ++i) bp.add_length_bar(i, s);
                   },
                   [&](const FluxTranslation& f) {
                       for (std::size_t i = 0; i < n; ++i) {
                           cbar[i] += 0.5 * g.w[i] * cross(g.T[i], f.v);
                           Tbar[i] += 0.5 * g.w[i] * cross(f.v, g.x[i]);
                           bp.add_weight_bar(i, 0.5 * dot(g.x[i], cross(g.T[i], f.v)));
                       }
                   },
                   [&](const FluxRotation& f) {
                       // <c, T x (v x c)> = <T,c><v,c> - <T,v>|c|^2
                       for (std::size_t i = 0; i < n; ++i) {
                           const Vec3& c = g.x[i];
                           const Vec3& t = g.T[i];
                           const double s = dot(t, c) * dot(f.v, c) - dot(t, f.v) * norm2(c);
                           const double k = g.w[i] / 3.0;
                           Tbar[i] += k * (dot(f.v, c) * c - norm2(c) * f.v);
                           cbar[i] += k * (dot(f.v, c) * t + dot(t, c) * f.v - 2.0 * dot(t, f.v) * c);
                           bp.add_weight_bar(i, s / 3.0);
                       }
                   },
                   [&](const SquaredCurvature&) { backprop_curvature_energy(g, bp, 0.5, Tbar); },
                   [&](const TotalTorsion&) {
                       const double floor = torsion_floor(g);
                       TangentField Jbar(n), Kbar(n);
                       for (std::size_t i = 0; i < n; ++i) {
                           if (!(g.k2[i] >= floor && g.k2[i] > 0.0)) continue;
                           const double num = det(g.T[i], g.K[i], g.J[i]);
                           const double a = g.w[i] / g.k2[i];
                           Jbar[i] += a * cross(g.T[i], g.K[i]);
                           Tbar[i] += a * cross(g.K[i], g.J[i]);
                           Kbar[i] += a * cross(g.J[i], g.T[i]) - (2.0 * a * num / g.k2[i]) * g.K[i];
                           bp.add_weight_bar(i, num / g.k2[i]);
                       }
                       bp.through_D(g.J, Jbar, Kbar);
                       bp.through_D(g.K, Kbar, Tbar);
                   },
                   [&](const SquaredScale&) {
                       for (std::size_t i = 0; i < n; ++i) {
                           cbar[i] += g.w[i] * g.x[i];
                           bp.add_weight_bar(i, 0.5 * norm2(g.x[i]));
                       }
                   },
                   [&](const LengthTimesK&) {
                       double S = 0.0;
                       for (std::size_t i = 0; i < n; ++i) S += g.k2[i] * g.w[i];
                       for (std::size_t i = 0; i < n; ++i) bp.add_length_bar(i, S);
                       backprop_curvature_energy(g, bp, g.L, Tbar);
                   },
               },
               H);
    bp.through_D(g.T, Tbar, cbar);
    return bp.gradient();
}

TangentField mw_field(const Geometry& g, const TangentField& grad) {
    TangentField out(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out[i] = -cross(g.T[i], grad[i]);
    return out;
}

bool is_case_b(const WeightSpec& w, const DiscreteCurve& c) {
    if (const auto* lw = std::get_if<LengthWeighted>(&w)) return lw->p == -3.0;
    if (std::holds_alternative<ConformalCustom>(w))
        return std::abs(scale_defect(w, c)) <= 1e-10 * lambda_value(w, c);
    return false;
}

}  // namespace

std::string hamiltonian_name(const HamiltonianSpec& H) {
    return std::visit(overloaded{
                          [](const Length&) { return std::string("length"); },
                          [](const FluxTranslation&) { return std::string("flux_translation"); },
                          [](const FluxRotation&) { return std::string("flux_rotation"); },
                          [](const SquaredCurvature&) { return std::string("squared_curvature"); },
                          [](const TotalTorsion&) { return std::string("total_torsion"); },
                          [](const SquaredScale&) { return std::string("squared_scale"); },
                          [](const LengthTimesK&) { return std::string("length_times_k"); },
                      },
                      H);
}

double h_value(const HamiltonianSpec& H, const DiscreteCurve& c) {
    validate(H);
    return value(H, Geometry(c, order_needed(H)));
}

TangentField h_grad_l2(const HamiltonianSpec& H, const DiscreteCurve& c) {
    validate(H);
    return gradient(H, Geometry(c, order_needed(H)));
}

TangentField h_grad_formula(const HamiltonianSpec& H, const DiscreteCurve& c) {
    validate(H);
    const Geometry g(c, 3);
    const std::size_t n = g.n;
    auto bending = [&] {  // D_s(D_s^3 c + 3/2 kappa^2 D_s c)
        TangentField inner(n);
        for (std::size_t i = 0; i < n; ++i) inner[i] = g.J[i] + 1.5 * g.k2[i] * g.T[i];
        return detail::D(g, inner);
    };
    TangentField out(n);
    std::visit(overloaded{
                   [&](const Length& len) {
                       const double s = df_of(len, g.L);
                       for (std::size_t i = 0; i < n; ++i) out[i] = -s * g.K[i];
                   },
                   [&](const FluxTranslation& f) {
                       for (std::size_t i = 0; i < n; ++i) out[i] = cross(g.T[i], f.v);
                   },
                   [&](const FluxRotation& f) {
                       for (std::size_t i = 0; i < n; ++i) out[i] = cross(g.T[i], cross(f.v, g.x[i]));
                   },
                   [&](const SquaredCurvature&) { out = bending(); },
                   [&](const TotalTorsion&) {
                       for (std::size_t i = 0; i < n; ++i) out[i] = -cross(g.T[i], g.J[i]);
                   },
                   [&](const SquaredScale&) {
                       for (std::size_t i = 0; i < n; ++i)
                           out[i] = g.x[i] - dot(g.T[i], g.x[i]) * g.T[i] - 0.5 * norm2(g.x[i]) * g.K[i];
                   },
                   [&](const LengthTimesK&) {
                       double S = 0.0;
                       for (std::size_t i = 0; i < n; ++i) S += g.k2[i] * g.w[i];
                       const auto b = bending();
                       for (std::size_t i = 0; i < n; ++i) out[i] = -S * g.K[i] + 2.0 * g.L * b[i];
                   },
               },
               H);
    return out;
}

TangentField hgrad_mw(const HamiltonianSpec& H, const DiscreteCurve& c) {
    validate(H);
    const Geometry g(c, order_needed(H));
    return mw_field(g, gradient(H, g));
}

void require_supported(const HamiltonianSpec& H, const WeightSpec& w) {
    validate(H);
    if (std::holds_alternative<CurvatureWeighted>(w))
        throw UnsupportedVariantError("Hamiltonian fields for the curvature weight are not available");
    if (const auto* lw = std::get_if<LengthWeighted>(&w); lw && lw->p == -3.0 &&
                                                        !std::holds_alternative<LengthTimesK>(H))
        throw InvarianceError("the scale-invariant weight (p = -3) needs a Hamiltonian invariant under scaling and the binormal flow; " +
                              hamiltonian_name(H) + " is not (only length_times_k qualifies)");
}

TangentField hgrad(const HamiltonianSpec& H, const WeightSpec& w, const DiscreteCurve& c) {
    require_supported(H, w);
    const Geometry g(c, std::max(order_needed(H), 2));
    const std::size_t n = g.n;
    const TangentField grad = gradient(H, g);
    const TangentField m = mw_field(g, grad);
    const double lam = lambda_value(w, c);
    const double f = 1.0 / (3.0 * lam);

    if (is_case_b(w, c)) {
        if (!std::holds_alternative<LengthTimesK>(H))
            throw InvarianceError("the scale-invariant weight needs a Hamiltonian invariant under scaling and the binormal flow; " +
                                  hamiltonian_name(H) + " is not");
        TangentField v(n), b(n), u(n);
        const TangentField A = std::holds_alternative<ConformalCustom>(w) ? grad_lambda(w, c) : TangentField{};
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = f * m[i];
            v[i] = g.x[i] - dot(g.T[i], g.x[i]) * g.T[i];
            b[i] = A.empty() ? cross(g.T[i], g.K[i]) : cross(g.T[i], A[i]);
        }
        const double g11 = l2(g, v, v), g12 = l2(g, v, b), g22 = l2(g, b, b);
        const double r1 = l2(g, u, v), r2 = l2(g, u, b);
        const double d = g11 * g22 - g12 * g12;
        const double rows = std::hypot(g11, g12) * std::hypot(g12, g22);
        if (!(std::abs(d) >= 1e-12 * rows))
            throw DegenerateSpanError("scale-invariant projection: (1-pr)c and the binormal direction are linearly dependent");
        const double a = (r1 * g22 - r2 * g12) / d;
        const double bb = (g11 * r2 - g12 * r1) / d;
        TangentField out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = u[i] - a * v[i] - bb * b[i];
        return out;
    }

    TangentField out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = f * m[i];
    if (std::holds_alternative<Identity>(w)) return out;
    if (const auto* lw = std::get_if<LengthWeighted>(&w); lw && lw->p == 0.0) return out;

    // X = (1/3 lambda) { m + (1/(3 lambda + d lambda(c))) [ <A, m> T x (T x c) + <c, grad> T x A ] }
    const TangentField A = grad_lambda(w, c);
    const double defect = scale_defect(w, c);
    const double k1 = l2(g, A, m) / defect;
    const double k2 = l2(g, g.x, grad) / defect;
    for (std::size_t i = 0; i < n; ++i)
        out[i] += f * (k1 * cross(g.T[i], cross(g.T[i], g.x[i])) + k2 * cross(g.T[i], A[i]));
    return out;
}

std::optional<TangentField> closed_form_hgrad(const HamiltonianSpec& H, const LengthWeighted& w,
                                              const DiscreteCurve& c) {
    validate(H);
    if (std::holds_alternative<LengthTimesK>(H)) return std::nullopt;
    const Geometry g(c, 4);
    const std::size_t n = g.n;
    const double phi = w.phi(g.L), dphi = w.dphi(g.L);
    const double f = 1.0 / (3.0 * phi);
    const double corr = dphi / (3.0 * phi + dphi * g.L);
    TangentField binormal(n), out(n);
    for (std::size_t i = 0; i < n; ++i) binormal[i] = cross(g.T[i], g.K[i]);

    if (const auto* len = std::get_if<Length>(&H)) {
        // Constant multiple of the Marsden-Weinstein field of the length.
        const auto mw = mw_field(g, detail::length_gradient(g));
        const double mu = df_of(*len, g.L) / (3.0 * phi + dphi * g.L);
        for (std::size_t i = 0; i < n; ++i) out[i] = mu * mw[i];
        return out;
    }
    if (std::holds_alternative<FluxTranslation>(H) || std::holds_alternative<FluxRotation>(H)) {
        const double Ci = std::holds_alternative<FluxTranslation>(H) ? 2.0 : 3.0;
        const auto mw = mw_field(g, gradient(H, g));
        const double gamma = -Ci * value(H, g) * corr * f;
        for (std::size_t i = 0; i < n; ++i) out[i] = f * mw[i] + gamma * binormal[i];
        return out;
    }
    if (std::holds_alternative<SquaredCurvature>(H)) {
        const double Hv = value(H, g);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = f * (-cross(g.T[i], g.Q[i]) + (Hv * corr - 1.5 * g.k2[i]) * binormal[i]);
        return out;
    }
    if (std::holds_alternative<TotalTorsion>(H)) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f * cross(g.T[i], cross(g.T[i], g.J[i]));
        return out;
    }
    // SquaredScale
    const auto a = detail::liouville_density(g);
    double theta_K = 0.0, tc2 = 0.0, cK = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        theta_K += dot(a[i], g.K[i]);
        tc2 += norm2(cross(g.T[i], g.x[i])) * g.w[i];
        cK += norm2(g.x[i]) * dot(g.x[i], g.K[i]) * g.w[i];
    }
    const double beta = tc2 - 0.5 * cK;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 tc = cross(g.T[i], g.x[i]);
        out[i] = f * (-tc + 0.5 * norm2(g.x[i]) * binormal[i] +
                      corr * (-theta_K * cross(g.T[i], tc) - beta * binormal[i]));
    }
    return out;
}

}  // namespace curveflow
