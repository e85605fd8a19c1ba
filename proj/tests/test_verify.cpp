#include <cmath>
#include <numbers>

#include "curveflow/verify.hpp"
#include "doctest.h"

using namespace curveflow;
using std::numbers::pi;

namespace {

const std::vector<WeightSpec> kWeights{Identity{}, LengthWeighted{1, 1}, LengthWeighted{1, -2}, LengthWeighted{1, -3},
                                       CurvatureWeighted{}};

}  // namespace

TEST_CASE("fd_directional examples") {
    const auto c = make_curve(Circle{1.0}, 256);
    const CurveFunctional length = [](const DiscreteCurve& x) { return measures(x).total_length; };
    // The polygon length is linear in the radius, so dL(c) equals L itself.
    const double l = measures(c).total_length;
    CHECK(std::abs(fd_directional(length, c, positions(c), 1e-5) - l) <= 1e-6 * l);
    CHECK(std::abs(l - 2 * pi) <= 1e-3 * 2 * pi);
    CHECK(fd_directional([](const DiscreteCurve&) { return 4.2; }, c, positions(c), 1e-5) == 0.0);

    // Sliding vertices along the circle leaves the length unchanged to second order in the grid.
    auto slide = [&](std::size_t n) {
        const auto x = make_curve(Circle{1.0}, n);
        TangentField v(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = 2 * pi * static_cast<double>(i) / static_cast<double>(n);
            v[i] = std::sin(3 * t) * Vec3{-std::sin(t), std::cos(t), 0};
        }
        return std::abs(fd_directional(length, x, v, 1e-5));
    };
    CHECK(slide(256) < 1e-4);
    CHECK_THROWS_AS(fd_directional(length, c, positions(c), 0.0), ArgumentError);
}

TEST_CASE("gradient check examples") {
    CHECK(check_gradient(SquaredScale{}, make_curve(Trefoil{}, 256)).residual <= 1e-5);
    const auto circle = make_curve(Circle{1.0}, 256);
    const auto r = check_gradient(Length{}, circle);
    CHECK(r.passed);
    CHECK(r.residual <= 1e-6);
    CHECK(r.seed == kDefaultSeed);
}

TEST_CASE("a corrupted gradient fails the check") {
    const auto c = make_curve(Trefoil{}, 256);
    auto g = h_grad_l2(SquaredScale{}, c);
    g[17] = 1.1 * g[17];
    const auto r = check_gradient([](const DiscreteCurve& x) { return h_value(SquaredScale{}, x); }, g, c);
    CHECK_FALSE(r.passed);
    CHECK(r.residual > r.tolerance);
}

TEST_CASE("form consistency passes for every weight") {
    for (const auto& family : {CurveFamily(Circle{1.0}), CurveFamily(Trefoil{})}) {
        const auto c = make_curve(family, 256);
        for (const auto& w : kWeights) {
            if (std::holds_alternative<CurvatureWeighted>(w) && std::holds_alternative<Circle>(family)) continue;
            const auto r = check_form_consistency(w, c);
            CAPTURE(r.name);
            CAPTURE(r.detail);
            CHECK(r.passed);
            CHECK(r.residual <= 1e-4);
        }
    }
    const auto r = check_form_consistency(CurvatureWeighted{}, make_curve(Trefoil{}, 256));
    for (double o : r.refinement_orders) CHECK(o >= 1.8);
}

TEST_CASE("form consistency with h equal to k is exactly zero") {
    const auto c = make_curve(Trefoil{}, 128);
    std::mt19937_64 rng(5);
    const auto h = random_smooth_field(rng).sample(128);
    for (const auto& w : kWeights) {
        const CurveFunctional th = [&](const DiscreteCurve& x) { return theta(w, x, h); };
        CHECK(omega(w, c, h, h) + fd_directional(th, c, h, 1e-5) - fd_directional(th, c, h, 1e-5) == 0.0);
    }
}

TEST_CASE("closedness passes for every weight and duplicate arguments give zero") {
    const auto c = make_curve(Trefoil{}, 128);
    for (const auto& w : kWeights) {
        const auto r = check_closedness(w, c, 3);
        CAPTURE(r.name);
        CAPTURE(r.detail);
        CHECK(r.passed);
    }
    std::mt19937_64 rng(9);
    const auto h = random_smooth_field(rng).sample(128), k = random_smooth_field(rng).sample(128);
    for (const auto& w : kWeights) {
        auto fd = [&](const TangentField& dir, const TangentField& a, const TangentField& b) {
            return fd_directional([&](const DiscreteCurve& x) { return omega(w, x, a, b); }, c, dir, 1e-5);
        };
        CHECK(fd(h, h, k) - fd(h, h, k) + fd(k, h, h) == 0.0);
    }
}

TEST_CASE("the comparison form is not closed") {
    const auto c = make_curve(Trefoil{}, 128);
    for (const LengthWeighted w : {LengthWeighted{1, 1}, LengthWeighted{1, -2}}) {
        const auto r = check_comparison_closedness(w, c, 3);
        CAPTURE(r.detail);
        CHECK(r.must_fail);
        CHECK_FALSE(r.passed);
        CHECK(report_ok(r));
    }
}

TEST_CASE("hamiltonian identity examples") {
    for (const auto& [H, w] : std::vector<std::pair<HamiltonianSpec, WeightSpec>>{
             {Length{}, LengthWeighted{1, 1}}, {SquaredScale{}, LengthWeighted{1, -2}}}) {
        const auto r = check_hamiltonian_identity(H, w, Trefoil{}, 3);
        CAPTURE(r.name);
        CAPTURE(r.detail);
        CHECK(r.passed);
    }
}

TEST_CASE("invariance bundle") {
    const auto reports = check_invariances(LengthWeighted{1, -3}, Trefoil{}, 128);
    bool scaling = false, control = false;
    for (const auto& r : reports) {
        CAPTURE(r.name);
        CAPTURE(r.detail);
        CHECK(report_ok(r));
        if (r.name.rfind("invariance.scaling", 0) == 0) {
            scaling = true;
            CHECK(r.residual <= 1e-12);
        }
        if (r.name.rfind("control.translation", 0) == 0) {
            control = true;
            CHECK(r.must_fail);
            CHECK_FALSE(r.passed);
        }
    }
    CHECK(scaling);
    CHECK(control);
    for (const auto& r : check_invariances(CurvatureWeighted{}, Trefoil{}, 128)) {
        CAPTURE(r.name);
        CHECK(r.name.find("scaling") == std::string::npos);
        CHECK(report_ok(r));
        if (r.name.rfind("kernel.vertical", 0) == 0)
            for (double o : r.refinement_orders) CHECK(o >= 1.0);
    }
}

TEST_CASE("reports are deterministic given the seed") {
    const auto c = make_curve(Trefoil{}, 128);
    const auto a = check_gradient(TotalTorsion{}, c, 5, kDefaultEps, 7);
    const auto b = check_gradient(TotalTorsion{}, c, 5, kDefaultEps, 7);
    CHECK(a.residual == b.residual);
    CHECK(a.refinement_orders == b.refinement_orders);
    const auto f1 = check_form_consistency(LengthWeighted{1, 1}, c, 3, kDefaultEps, 3);
    const auto f2 = check_form_consistency(LengthWeighted{1, 1}, c, 3, kDefaultEps, 3);
    CHECK(f1.residual == f2.residual);
    const auto f3 = check_form_consistency(LengthWeighted{1, 1}, c, 3, kDefaultEps, 4);
    CHECK(f1.residual != f3.residual);
}

TEST_CASE("observed orders skip pairs at the floor") {
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};
    const auto o = observed_orders(eps, {1e-4, 1e-6, 1e-20}, 1e-15);
    REQUIRE(o.size() == 1);
    CHECK(o[0] == doctest::Approx(2.0));
}
