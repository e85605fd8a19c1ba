#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "curveflow/forms.hpp"

namespace curveflow {

// H = f(l); f defaults to the identity.
struct Length {
    std::function<double(double)> f;
    std::function<double(double)> df;
};
struct FluxTranslation {
    Vec3 v{0, 0, 1};
};
// v must be a unit vector.
struct FluxRotation {
    Vec3 v{0, 0, 1};
};
struct SquaredCurvature {};
struct TotalTorsion {};
struct SquaredScale {};
struct LengthTimesK {};

using HamiltonianSpec =
    std::variant<Length, FluxTranslation, FluxRotation, SquaredCurvature, TotalTorsion, SquaredScale, LengthTimesK>;

std::string hamiltonian_name(const HamiltonianSpec& H);

double h_value(const HamiltonianSpec& H, const DiscreteCurve& c);

// Exact L2 gradient of the discrete functional: dH(k) = l2_inner(grad, k)
// up to roundoff for every k.
TangentField h_grad_l2(const HamiltonianSpec& H, const DiscreteCurve& c);

// Continuum gradient expression evaluated with discrete operators; converges
// to h_grad_l2 under refinement.
TangentField h_grad_formula(const HamiltonianSpec& H, const DiscreteCurve& c);

TangentField hgrad_mw(const HamiltonianSpec& H, const DiscreteCurve& c);

// Horizontal Hamiltonian field for Identity, LengthWeighted and ConformalCustom.
TangentField hgrad(const HamiltonianSpec& H, const WeightSpec& w, const DiscreteCurve& c);

// Throws InvarianceError / UnsupportedVariantError when hgrad(H, w, .) is not defined.
void require_supported(const HamiltonianSpec& H, const WeightSpec& w);

// Per-example closed forms under length weighting; nullopt when none exists.
std::optional<TangentField> closed_form_hgrad(const HamiltonianSpec& H, const LengthWeighted& w,
                                              const DiscreteCurve& c);

}  // namespace curveflow
