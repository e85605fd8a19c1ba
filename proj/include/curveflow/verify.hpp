#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "curveflow/hamiltonians.hpp"

namespace curveflow {

struct CheckReport {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;  // 0 for refinement checks, which pass on their orders alone
    std::vector<double> refinement_orders;  // observed orders, when a sweep ran
    double min_order = 0.0;                 // declared minimum order (0: none)
    bool passed = false;
    bool must_fail = false;  // negative control: the suite expects passed == false
    std::uint64_t seed = 0;
    std::string detail;
};

// True when the report has the outcome the suite expects.
inline bool report_ok(const CheckReport& r) { return r.passed != r.must_fail; }

inline constexpr double kDefaultEps = 1e-5;
inline constexpr std::uint64_t kDefaultSeed = 42;
inline const std::vector<double> kEpsSweep{1e-2, 3e-3, 1e-3, 3e-4};

using CurveFunctional = std::function<double(const DiscreteCurve&)>;
using TwoForm = std::function<double(const DiscreteCurve&, const TangentField&, const TangentField&)>;

// (F(c + eps h) - F(c - eps h)) / (2 eps).
double fd_directional(const CurveFunctional& F, const DiscreteCurve& c, const TangentField& h, double eps);

// Band-limited random field sum_{m<4} a_m cos(m t) + b_m sin(m t) with
// a_m, b_m ~ N(0, 1) / (1 + m); sampled at t_i = 2 pi i / N so the same field
// can be evaluated on every refinement level.
struct SmoothField {
    std::array<Vec3, 4> a{}, b{};
    TangentField sample(std::size_t n) const;
};
SmoothField random_smooth_field(std::mt19937_64& rng);

// Random fields normalised to unit L2 norm on c.
std::vector<TangentField> random_unit_directions(const DiscreteCurve& c, int count, std::uint64_t seed);

// Orders log(e_i / e_{i+1}) / log(eps_i / eps_{i+1}) over consecutive pairs
// whose errors both exceed `floor`.
std::vector<double> observed_orders(const std::vector<double>& eps, const std::vector<double>& err, double floor);

// Compares fd_directional against l2_inner(grad, h) over unit directions.
// The per-direction residual is max(0, |FD - G| - eta) / max(|FD|, S), where
// eta is the spread of FD between eps, eps/2 and 2 eps and
// S = |F(c)| / (sqrt(length) * diameter / 2) is the typical size of dF for a
// unit direction (relevant only at critical points, where FD is pure noise).
CheckReport check_gradient(const CurveFunctional& F, const TangentField& grad, const DiscreteCurve& c,
                           int directions = 20, double eps = kDefaultEps, std::uint64_t seed = kDefaultSeed,
                           const std::string& name = "gradient");
CheckReport check_gradient(const HamiltonianSpec& H, const DiscreteCurve& c, int directions = 20,
                           double eps = kDefaultEps, std::uint64_t seed = kDefaultSeed);

// |omega(h, k) + FD_h theta(k) - FD_k theta(h)| relative to max |omega|.
CheckReport check_form_consistency(const WeightSpec& w, const DiscreteCurve& c, int pairs = 5,
                                   double eps = kDefaultEps, std::uint64_t seed = kDefaultSeed);

// Alternating sum FD_h W(k,l) - FD_k W(h,l) + FD_l W(h,k) relative to the
// magnitude of its terms.
CheckReport check_closedness(const TwoForm& form, const DiscreteCurve& c, int triples = 5,
                             double eps = kDefaultEps, std::uint64_t seed = kDefaultSeed,
                             const std::string& name = "closedness");
CheckReport check_closedness(const WeightSpec& w, const DiscreteCurve& c, int triples = 5,
                             double eps = kDefaultEps, std::uint64_t seed = kDefaultSeed);
// Must-fail control on Phi(l) G^id(J., .).
CheckReport check_comparison_closedness(const LengthWeighted& w, const DiscreteCurve& c, int triples = 5,
                                        double eps = kDefaultEps, std::uint64_t seed = kDefaultSeed);

// max_k |omega(hgrad H, k) - FD dH(k)| on `family` at each level; passes when
// each doubling shrinks it by at least 3.5.
CheckReport check_hamiltonian_identity(const HamiltonianSpec& H, const WeightSpec& w, const CurveFamily& family,
                                       int directions = 5, std::vector<std::size_t> levels = {128, 256, 512},
                                       std::uint64_t seed = kDefaultSeed);

// Cyclic shift, SO(3), scaling (scale-invariant weights only), vertical
// kernel under refinement and the translation control.
std::vector<CheckReport> check_invariances(const WeightSpec& w, const CurveFamily& family, std::size_t n = 256,
                                           std::uint64_t seed = kDefaultSeed);

}  // namespace curveflow
