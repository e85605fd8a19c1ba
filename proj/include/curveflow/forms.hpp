#pragma once

#include <functional>
#include <string>
#include <variant>

#include "curveflow/curve.hpp"

namespace curveflow {

struct Identity {};

// Phi(l) = C * l^p.
struct LengthWeighted {
    double C = 1.0;
    double p = 0.0;
    double phi(double l) const;
    double dphi(double l) const;
};

// Conformal factor lambda(c) > 0 with its L2 gradient.
struct ConformalCustom {
    std::function<double(const DiscreteCurve&)> lambda;
    std::function<TangentField(const DiscreteCurve&)> gradient;
};

// Pointwise weight 1 + kappa^2.
struct CurvatureWeighted {};

using WeightSpec = std::variant<Identity, LengthWeighted, ConformalCustom, CurvatureWeighted>;

// Omega^id = 3 Omega^MW.
inline constexpr double kIdentityOverMW = 3.0;

std::string weight_name(const WeightSpec& w);

// Scalar factor lambda(c) for Identity, LengthWeighted and ConformalCustom.
double lambda_value(const WeightSpec& w, const DiscreteCurve& c);

// Per-vertex multiplier of the L2 pairing (constant except for CurvatureWeighted).
std::vector<double> weight_values(const WeightSpec& w, const DiscreteCurve& c);

double theta(const WeightSpec& w, const DiscreteCurve& c, const TangentField& h);

double omega_mw(const DiscreteCurve& c, const TangentField& h, const TangentField& k);

// Exterior derivative -dTheta of the discrete Liouville form, evaluated on
// fields that do not depend on the base curve.
double omega(const WeightSpec& w, const DiscreteCurve& c, const TangentField& h, const TangentField& k);

// The same form written with the continuum expressions (3 Omega^MW, the
// <h, D_s^2 c> correction, the six-term curvature formula). Agrees with
// `omega` up to O(N^-2).
double omega_closed_form(const WeightSpec& w, const DiscreteCurve& c, const TangentField& h,
                         const TangentField& k);

// Phi(l) * int <D_s c x h, k> ds: the almost-symplectic comparison form, not closed.
double comparison_form(const LengthWeighted& w, const DiscreteCurve& c, const TangentField& h,
                       const TangentField& k);

// 3 lambda + d lambda(c); zero exactly when Theta is scale invariant.
double scale_defect(const WeightSpec& w, const DiscreteCurve& c);

// L2 gradient of lambda. For LengthWeighted this is Phi'(l) times the exact
// gradient of the discrete length, which approximates -Phi'(l) D_s^2 c.
TangentField grad_lambda(const WeightSpec& w, const DiscreteCurve& c);

// d lambda(h) as used inside `omega`.
double dlambda(const WeightSpec& w, const DiscreteCurve& c, const TangentField& h);

}  // namespace curveflow
