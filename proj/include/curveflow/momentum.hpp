#pragma once

#include "curveflow/hamiltonians.hpp"

namespace curveflow {

struct MomentumRecord {
    Vec3 angular;
    Vec3 linear;
    double repar_residual = 0.0;
    double hamiltonian_value = 0.0;
    double length = 0.0;
};

// J_m = Theta^L(e_m x c): fundamental field convention Y o c = Y x c.
Vec3 angular_momentum(const WeightSpec& w, const DiscreteCurve& c);

// J = Theta^L evaluated on the constant fields e_x, e_y, e_z.
Vec3 linear_momentum(const WeightSpec& w, const DiscreteCurve& c);

// |Theta^L(a D_s c)| relative to sum |weight| |c x D_s c| |a D_s c| w_i,
// maximised over a in {1, cos, sin}.
double repar_residual(const WeightSpec& w, const DiscreteCurve& c);

MomentumRecord momentum_record(const WeightSpec& w, const HamiltonianSpec& H, const DiscreteCurve& c);

}  // namespace curveflow
