#include "curveflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace curveflow {

namespace {

constexpr double kRoundoff = 1e-10;

std::string format_list(const std::vector<double>& xs) {
    std::ostringstream os;
    os.precision(4);
    os << '[';
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
    os << ']';
    return os.str();
}

bool all_at_least(const std::vector<double>& xs, double lo) {
    return std::all_of(xs.begin(), xs.end(), [lo](double x) { return x >= lo; });
}

std::string tagged(const std::string& base, const std::string& what) { return base + "[" + what + "]"; }

// Shared tail of the epsilon-sweep checks: orders are computed from the
// sweep; an error that stays at roundoff on every sweep point means the FD
// quotient is exact (quadratic functionals) and no order can be observed.
void finish_sweep(CheckReport& r, const std::vector<double>& sweep_err, double floor, double min_order) {
    r.min_order = min_order;
    r.refinement_orders = observed_orders(kEpsSweep, sweep_err, floor);
    const bool exact =
        std::all_of(sweep_err.begin(), sweep_err.end(), [floor](double e) { return e <= floor; });
    const bool orders_ok = exact ? true : (!r.refinement_orders.empty() && all_at_least(r.refinement_orders, min_order));
    r.passed = r.residual <= r.tolerance && orders_ok;
    std::ostringstream os;
    os << "sweep errors " << format_list(sweep_err);
    if (exact)
        os << "; exact to roundoff at every eps";
    else
        os << "; orders " << format_list(r.refinement_orders) << " (min " << min_order << ")";
    r.detail = os.str();
}

}  // namespace

double fd_directional(const CurveFunctional& F, const DiscreteCurve& c, const TangentField& h, double eps) {
    if (!(eps > 0.0)) throw ArgumentError("eps must be positive");
    return (F(displaced(c, h, eps)) - F(displaced(c, h, -eps))) / (2.0 * eps);
}

TangentField SmoothField::sample(std::size_t n) const {
    TangentField h(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        for (int m = 0; m < 4; ++m) h[i] += std::cos(m * t) * a[m] + std::sin(m * t) * b[m];
    }
    return h;
}

SmoothField random_smooth_field(std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    SmoothField f;
    for (int m = 0; m < 4; ++m) {
        const double s = 1.0 / (1.0 + m);
        f.a[m] = Vec3{nd(rng), nd(rng), nd(rng)} * s;
        f.b[m] = Vec3{nd(rng), nd(rng), nd(rng)} * s;
    }
    return f;
}

std::vector<TangentField> random_unit_directions(const DiscreteCurve& c, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<TangentField> out;
    for (int i = 0; i < count; ++i) {
        auto h = random_smooth_field(rng).sample(c.size());
        const double nrm = l2_norm(c, h);
        for (auto& v : h) v = v / nrm;
        out.push_back(std::move(h));
    }
    return out;
}

std::vector<double> observed_orders(const std::vector<double>& eps, const std::vector<double>& err, double floor) {
    std::vector<double> orders;
    for (std::size_t i = 0; i + 1 < eps.size() && i + 1 < err.size(); ++i)
        if (err[i] > floor && err[i + 1] > floor)
            orders.push_back(std::log(err[i] / err[i + 1]) / std::log(eps[i] / eps[i + 1]));
    return orders;
}

CheckReport check_gradient(const CurveFunctional& F, const TangentField& grad, const DiscreteCurve& c,
                           int directions, double eps, std::uint64_t seed, const std::string& name) {
    if (grad.size() != c.size()) throw ArgumentError("gradient size does not match the curve");
    CheckReport r;
    r.name = name;
    r.tolerance = 1e-5;
    r.seed = seed;
    const auto dirs = random_unit_directions(c, directions, seed);
    std::vector<double> g(dirs.size());
    const double f0 = std::abs(F(c));
    // Size of dH(h) for a unit direction when H has no special structure;
    // keeps the relative residual meaningful at critical points.
    const double natural = f0 / (std::sqrt(measures(c).total_length) * 0.5 * diameter(c));
    double scale = f0;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        g[d] = l2_inner(c, grad, dirs[d]);
        scale = std::max(scale, std::abs(g[d]));
        const double fd = fd_directional(F, c, dirs[d], eps);
        const double eta = std::max(std::abs(fd - fd_directional(F, c, dirs[d], 2.0 * eps)),
                                    std::abs(fd - fd_directional(F, c, dirs[d], 0.5 * eps)));
        const double res = std::max(0.0, std::abs(fd - g[d]) - eta) / (std::max(std::abs(fd), natural) + 1e-12);
        r.residual = std::max(r.residual, res);
    }
    std::vector<double> sweep;
    for (double e : kEpsSweep) {
        double m = 0.0;
        for (std::size_t d = 0; d < dirs.size(); ++d)
            m = std::max(m, std::abs(fd_directional(F, c, dirs[d], e) - g[d]));
        sweep.push_back(m);
    }
    finish_sweep(r, sweep, 2e-11 * scale, 1.0);
    return r;
}

CheckReport check_gradient(const HamiltonianSpec& H, const DiscreteCurve& c, int directions, double eps,
                           std::uint64_t seed) {
    const CurveFunctional F = [&H](const DiscreteCurve& x) { return h_value(H, x); };
    return check_gradient(F, h_grad_l2(H, c), c, directions, eps, seed,
                          tagged("gradient", hamiltonian_name(H)));
}

CheckReport check_form_consistency(const WeightSpec& w, const DiscreteCurve& c, int pairs, double eps,
                                   std::uint64_t seed) {
    CheckReport r;
    r.name = tagged("form_consistency", weight_name(w));
    r.tolerance = 1e-4;
    r.seed = seed;
    std::mt19937_64 rng(seed);
    std::vector<std::pair<TangentField, TangentField>> hk;
    for (int p = 0; p < pairs; ++p) {
        auto h = random_smooth_field(rng).sample(c.size());
        auto k = random_smooth_field(rng).sample(c.size());
        hk.emplace_back(std::move(h), std::move(k));
    }
    double scale = 0.0;
    std::vector<double> om;
    for (const auto& [h, k] : hk) {
        om.push_back(omega(w, c, h, k));
        scale = std::max(scale, std::abs(om.back()));
    }
    auto residual_at = [&](double e) {
        double m = 0.0;
        for (std::size_t p = 0; p < hk.size(); ++p) {
            const auto& [h, k] = hk[p];
            const CurveFunctional theta_k = [&w, &k](const DiscreteCurve& x) { return theta(w, x, k); };
            const CurveFunctional theta_h = [&w, &h](const DiscreteCurve& x) { return theta(w, x, h); };
            m = std::max(m, std::abs(om[p] + fd_directional(theta_k, c, h, e) - fd_directional(theta_h, c, k, e)));
        }
        return m;
    };
    if (!(scale > 0.0)) {
        r.residual = INFINITY;
        r.detail = "form vanishes on every sampled pair";
        return r;
    }
    r.residual = residual_at(eps) / scale;
    std::vector<double> sweep;
    for (double e : kEpsSweep) sweep.push_back(residual_at(e) / scale);
    finish_sweep(r, sweep, kRoundoff, 1.8);
    return r;
}

CheckReport check_closedness(const TwoForm& form, const DiscreteCurve& c, int triples, double eps,
                             std::uint64_t seed, const std::string& name) {
    CheckReport r;
    r.name = name;
    r.tolerance = 1e-4;
    r.seed = seed;
    std::mt19937_64 rng(seed);
    std::vector<std::array<TangentField, 3>> hkl;
    for (int t = 0; t < triples; ++t) {
        std::array<TangentField, 3> f;
        for (auto& x : f) x = random_smooth_field(rng).sample(c.size());
        hkl.push_back(std::move(f));
    }
    // Returns {|alternating sum|, sum of |terms|} maximised over triples.
    auto evaluate = [&](double e) {
        double res = 0.0, mag = 0.0;
        for (const auto& [h, k, l] : hkl) {
            auto fd = [&](const TangentField& dir, const TangentField& a, const TangentField& b) {
                const CurveFunctional F = [&](const DiscreteCurve& x) { return form(x, a, b); };
                return fd_directional(F, c, dir, e);
            };
            const double t1 = fd(h, k, l), t2 = fd(k, h, l), t3 = fd(l, h, k);
            res = std::max(res, std::abs(t1 - t2 + t3));
            mag = std::max(mag, std::abs(t1) + std::abs(t2) + std::abs(t3));
        }
        return std::pair{res, mag};
    };
    const auto [res, scale] = evaluate(eps);
    if (!(scale > 0.0)) {
        r.residual = INFINITY;
        r.detail = "form derivative vanishes on every sampled triple";
        return r;
    }
    r.residual = res / scale;
    std::vector<double> sweep;
    for (double e : kEpsSweep) sweep.push_back(evaluate(e).first / scale);
    finish_sweep(r, sweep, kRoundoff, 1.8);
    return r;
}

CheckReport check_closedness(const WeightSpec& w, const DiscreteCurve& c, int triples, double eps,
                             std::uint64_t seed) {
    const TwoForm form = [&w](const DiscreteCurve& x, const TangentField& a, const TangentField& b) {
        return omega(w, x, a, b);
    };
    return check_closedness(form, c, triples, eps, seed, tagged("closedness", weight_name(w)));
}

CheckReport check_comparison_closedness(const LengthWeighted& w, const DiscreteCurve& c, int triples, double eps,
                                        std::uint64_t seed) {
    const TwoForm form = [&w](const DiscreteCurve& x, const TangentField& a, const TangentField& b) {
        return comparison_form(w, x, a, b);
    };
    auto r = check_closedness(form, c, triples, eps, seed, tagged("closedness_control", weight_name(WeightSpec{w})));
    r.must_fail = true;
    return r;
}

CheckReport check_hamiltonian_identity(const HamiltonianSpec& H, const WeightSpec& w, const CurveFamily& family,
                                       int directions, std::vector<std::size_t> levels, std::uint64_t seed) {
    CheckReport r;
    r.name = tagged("hamiltonian_identity", hamiltonian_name(H) + "," + weight_name(w));
    r.seed = seed;
    r.min_order = std::log2(3.5);
    std::mt19937_64 rng(seed);
    std::vector<SmoothField> fields;
    for (int d = 0; d < directions; ++d) fields.push_back(random_smooth_field(rng));
    const CurveFunctional F = [&H](const DiscreteCurve& x) { return h_value(H, x); };

    std::vector<double> res, scale;
    for (std::size_t n : levels) {
        const auto c = make_curve(family, n);
        const auto X = hgrad(H, w, c);
        double m = 0.0, s = 0.0;
        for (const auto& f : fields) {
            const auto k = f.sample(n);
            const double dh = fd_directional(F, c, k, kDefaultEps);
            m = std::max(m, std::abs(omega(w, c, X, k) - dh));
            s = std::max(s, std::abs(dh));
        }
        res.push_back(m);
        scale.push_back(s);
    }
    std::vector<double> ratios;
    bool exact = true;
    for (std::size_t i = 0; i < res.size(); ++i) exact = exact && res[i] <= kRoundoff * std::max(scale[i], 1.0);
    for (std::size_t i = 0; i + 1 < res.size(); ++i) {
        ratios.push_back(res[i] / res[i + 1]);
        r.refinement_orders.push_back(std::log2(res[i] / res[i + 1]));
    }
    r.residual = res.empty() ? 0.0 : res.back();
    r.passed = exact || (!r.refinement_orders.empty() && all_at_least(ratios, 3.5));
    std::ostringstream os;
    os << "residuals " << format_list(res) << "; reductions " << format_list(ratios) << " (need >= 3.5)";
    r.detail = os.str();
    return r;
}

std::vector<CheckReport> check_invariances(const WeightSpec& w, const CurveFamily& family, std::size_t n,
                                           std::uint64_t seed) {
    std::vector<CheckReport> out;
    const auto c = make_curve(family, n);
    std::mt19937_64 rng(seed);
    const auto fh = random_smooth_field(rng), fk = random_smooth_field(rng);
    const auto h = fh.sample(n), k = fk.sample(n);
    const double th = theta(w, c, h), om = omega(w, c, h, k);
    const std::string wn = weight_name(w);

    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    auto simple = [&](const std::string& name, double residual, double tol, bool must_fail = false) {
        CheckReport r;
        r.name = tagged(name, wn);
        r.residual = residual;
        r.tolerance = tol;
        r.passed = residual <= tol;
        r.must_fail = must_fail;
        r.seed = seed;
        out.push_back(r);
    };

    {
        const long s = static_cast<long>(n) / 3 + 1;
        const auto cs = cyclic_shift(c, s);
        const auto hs = cyclic_shift(h, s), ks = cyclic_shift(k, s);
        simple("invariance.cyclic", std::max(rel(theta(w, cs, hs), th), rel(omega(w, cs, hs, ks), om)), 1e-10);
    }
    {
        const Mat3 R = rotation(Vec3{1, 2, 3}, 0.7);
        TangentField hr(n), kr(n);
        for (std::size_t i = 0; i < n; ++i) {
            hr[i] = R * h[i];
            kr[i] = R * k[i];
        }
        const auto cr = transformed(c, R);
        simple("invariance.so3", std::max(rel(theta(w, cr, hr), th), rel(omega(w, cr, hr, kr), om)), 1e-10);
    }
    bool scale_invariant = false;
    if (const auto* lw = std::get_if<LengthWeighted>(&w)) scale_invariant = lw->p == -3.0;
    if (std::holds_alternative<ConformalCustom>(w))
        scale_invariant = std::abs(scale_defect(w, c)) <= 1e-10 * lambda_value(w, c);
    if (scale_invariant) {
        const double a = 1.7;
        TangentField ha(n);
        for (std::size_t i = 0; i < n; ++i) ha[i] = a * h[i];
        simple("invariance.scaling", rel(theta(w, scaled(c, a), ha), th), 1e-12);
    }
    {
        CheckReport r;
        r.name = tagged("kernel.vertical", wn);
        r.seed = seed;
        r.min_order = 1.0;
        std::vector<double> res;
        const std::vector<std::size_t> levels{std::max<std::size_t>(n / 2, kMinVertices), n, 2 * n};
        for (std::size_t m : levels) {
            const auto cm = make_curve(family, m);
            const auto T = arclength_derivative(cm, positions(cm), 1);
            TangentField v(m);
            for (std::size_t i = 0; i < m; ++i) {
                const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
                v[i] = (1.0 + 0.5 * std::cos(t) + 0.3 * std::sin(2.0 * t)) * T[i];
            }
            const auto hm = fh.sample(m), km = fk.sample(m);
            const double ref = std::max(std::abs(omega(w, cm, hm, km)), 1e-300);
            res.push_back(std::abs(omega(w, cm, v, km)) / ref);
        }
        r.residual = res.back();
        for (std::size_t i = 0; i + 1 < res.size(); ++i)
            if (res[i] > kRoundoff && res[i + 1] > kRoundoff) r.refinement_orders.push_back(std::log2(res[i] / res[i + 1]));
        const bool exact = std::all_of(res.begin(), res.end(), [](double x) { return x <= kRoundoff; });
        r.passed = exact || (!r.refinement_orders.empty() && all_at_least(r.refinement_orders, 1.0));
        r.detail = "relative |Omega(a D_s c, k)| " + format_list(res);
        out.push_back(r);
    }
    {
        const Vec3 shift{0.3, -0.2, 0.5};
        simple("control.translation", rel(theta(w, transformed(c, rotation(e_z, 0.0), shift), h), th), 1e-10, true);
    }
    return out;
}

}  // namespace curveflow
