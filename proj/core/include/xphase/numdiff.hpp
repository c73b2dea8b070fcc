#pragma once

#include <functional>
#include <memory>

#include "xphase/constants.hpp"
#include "xphase/potentials.hpp"
#include "xphase/state.hpp"

namespace xphase {

// Scalar field on extended phase space, in canonical slot order
// (q1,q2,q3,q0,p1,p2,p3,p0). `grad` is optional; when set it is used as the
// exact gradient and must agree with `eval`. Evaluators must be pure.
struct ScalarField {
  std::function<double(const Vec8&)> eval;
  std::function<Vec8(const Vec8&)> grad;
};

// The field z -> z[slot], with exact gradient.
ScalarField coordinate_field(int slot);

// Exact gradient if attached, otherwise 4th-order central differences with
// step h*max(1,|z_i|) per slot. Non-finite stencil values raise an error
// naming the slot being varied.
Vec8 grad8(const ScalarField& f, const Vec8& z, double h = 1e-5);

// Canonical extended bracket sum_{mu=0..3} (df/dq^mu dg/dp_mu -
// df/dp_mu dg/dq^mu), i.e. grad(f)^T Omega0 grad(g).
double poisson_canonical(const ScalarField& f, const ScalarField& g, const Vec8& z);
double poisson_canonical(const ScalarField& f, const ScalarField& g,
                         const ExtendedState& s, const Constants& k);

// Re-expresses a field of the kinetic chart (q, q0, p, p0) as a field of the
// canonical primed chart (q, q0, p' = p + eA/c, p0' = p0 - eV/c): evaluation
// composes with the inverse momentum shift, the gradient applies the exact
// chain rule of that shift.
ScalarField field_in_canonical_chart(const ScalarField& f,
                                     std::shared_ptr<const PotentialDerivs> derivs,
                                     const Constants& k);

// Field-dependent bracket {f,g}^e_f: the canonical bracket evaluated in the
// primed chart after re-expressing both kinetic-chart fields through the
// inverse shift. `s` carries kinetic momenta.
double poisson_field(const ScalarField& f, const ScalarField& g,
                     const Potentials& pot, const ExtendedState& s,
                     const Constants& k);

}  // namespace xphase
