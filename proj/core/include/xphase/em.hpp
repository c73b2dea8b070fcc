#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "xphase/generating.hpp"
#include "xphase/numdiff.hpp"
#include "xphase/potentials.hpp"

namespace xphase {

struct FieldStrengths {
  Vec3 B{0.0, 0.0, 0.0};
  Vec3 E_vec{0.0, 0.0, 0.0};
};

// B = curl A, E = -(1/c) dA/dt - grad V, from exact AST derivatives.
FieldStrengths field_strengths(const Potentials& pot, const Vec3& q, double t,
                               const Constants& k);

// H = p^2/(2m), with exact gradient.
ScalarField hamiltonian_kinetic(double m);
// H = alpha*c*sqrt(m^2 c^2 + alpha p^2), with exact gradient; raises a domain
// error when the radicand is not positive.
ScalarField hamiltonian_relativistic(const Constants& k);

// Canonical extended equations: dq = dH/dp, dp = -dH/dq, dt = 1, dE = dH/dt
// (the t-derivative read off the q0 slot as c * dH/dq0).
Tangent8 extended_rhs(const ScalarField& H, const ExtendedState& s,
                      const Constants& k);

// Kinetic-chart equations of motion with the Lorentz force:
// dq = grad_p H, dp = -grad_q H + e[(1/c) dq x B + E], dt = 1,
// dE = e dq.E + dH/dt.
Tangent8 em_rhs(const ScalarField& H, const Potentials& pot,
                const ExtendedState& s, const Constants& k);

using Rhs8 = std::function<Tangent8(const ExtendedState&)>;
// Reusable closure over a shared derivative cache, for integration loops.
Rhs8 make_em_rhs(const ScalarField& H, std::shared_ptr<const PotentialDerivs> derivs,
                 const Constants& k);

struct TrajectorySample {
  double s = 0.0;
  ExtendedState state;
  double he_drift = 0.0;  // He(state) - He(initial), when He was supplied
};

struct Trajectory {
  std::string method;
  double ds = 0.0;
  std::vector<TrajectorySample> samples;  // includes the initial state
  bool aborted = false;                   // a step produced a non-finite state
  double max_dt_residual = 0.0;           // max |(t_{i+1}-t_i)/ds - 1|
  double max_abs_he_drift = 0.0;
};

// Fixed-step integration, method "rk4" or "implicit-midpoint" (stage equation
// solved by fixed-point iteration to 1e-12 relative). `He` is optional and
// only feeds the drift column.
Trajectory integrate(const Rhs8& rhs, const std::function<double(const ExtendedState&)>& He,
                     const ExtendedState& s0, double ds, int n_steps,
                     const std::string& method);

// A' = A + grad f, V' = V - (1/c) df/dt, built symbolically.
Potentials gauge_transform(const Potentials& pot, const expr::Ast& f,
                           const Constants& k);

// Primed-chart point (q, q0; p + eA/c, p0 - eV/c) as a 4-dof PhasePoint.
PhasePoint minimal_coupling(const ExtendedState& s, const Potentials& pot,
                            const Constants& k);
ExtendedState minimal_coupling_inverse(const PhasePoint& z, const Potentials& pot,
                                       const Constants& k);

// 8x8 coordinate matrix of the potential-deformed symplectic form in the
// kinetic chart, basis (q1,q2,q3,q0,p1,p2,p3,p0): blocks [[F, I],[-I, 0]]
// with F(a,b) = (e/c)(d_b A_a - d_a A_b) on spatial pairs and
// F(a, q0) = -(e/c) E_a.
Mat8 em_form_matrix(const Potentials& pot, const Vec3& q, double t,
                    const Constants& k);

// max-norm of (em form)^T X - dHe with X the em_rhs tangent and
// He = H + c p0. Zero in exact arithmetic for H(q,p,t).
double interior_product_residual(const ScalarField& H, const Potentials& pot,
                                 const ExtendedState& s, const Constants& k);

// (max |div B|, max ||curl E + (1/c) dB/dt||) over the samples, from exact
// AST derivatives of the potentials.
using SamplePoints = std::vector<std::pair<Vec3, double>>;
std::pair<double, double> maxwell_homogeneous_residual(const Potentials& pot,
                                                       const SamplePoints& samples,
                                                       const Constants& k);

// Same residuals from directly supplied field component ASTs; lets tests
// inject a B that is not a curl.
std::pair<double, double> maxwell_residual_from_fields(
    const std::array<expr::Ast, 3>& B, const std::array<expr::Ast, 3>& E,
    const std::map<std::string, double>& params, const SamplePoints& samples,
    const Constants& k);

// (max |c div A + dV/dt|, max ||(1/c^2) d^2A/dt^2 - lap A||) over the samples.
std::pair<double, double> vacuum_residual(const Potentials& pot,
                                          const SamplePoints& samples,
                                          const Constants& k);

// Hamiltonian of the canonical primed chart whose extended_rhs flow matches
// em_rhs after the inverse momentum shift: H(q, p'-eA/c, t) + eV.
ScalarField canonical_chart_hamiltonian(const ScalarField& H,
                                        std::shared_ptr<const PotentialDerivs> derivs,
                                        const Constants& k);

}  // namespace xphase
