#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xphase/em.hpp"
#include "xphase/generating.hpp"
#include "xphase/numdiff.hpp"
#include "xphase/state.hpp"

namespace xphase {

// Element of the inertial-equivalence algebra: rotation (axis-angle w, so the
// so(3) matrix is hat(w)), space translation d, boost v, time translation tau.
struct GalileiElement {
  Vec3 w{0.0, 0.0, 0.0};
  Vec3 d{0.0, 0.0, 0.0};
  Vec3 v{0.0, 0.0, 0.0};
  double tau = 0.0;

  static GalileiElement rotation(const Vec3& w);
  static GalileiElement translation(const Vec3& d);
  static GalileiElement boost(const Vec3& v);
  static GalileiElement time_shift(double tau);
};

Eigen::Matrix3d hat(const Vec3& w);
Vec3 unhat(const Eigen::Matrix3d& m);  // requires exact antisymmetry shape

// The ten basis elements with names, in a fixed order:
// w_x,w_y,w_z,v_x,v_y,v_z,d_x,d_y,d_z,tau.
std::vector<std::pair<std::string, GalileiElement>> algebra_basis();

enum class LiftTag { galilei_M, galilei_Me, alpha_Me };

struct LiftKind {
  LiftTag tag = LiftTag::galilei_Me;
  double alpha = 1.0;  // only read for alpha_Me
  double t0 = 0.0;     // frozen time of the galilei_M family

  static LiftKind galilei_M(double t0 = 0.0);
  static LiftKind galilei_Me();
  static LiftKind alpha_Me(double alpha);
  void validate() const;
  std::string name() const;
};

// q' = q + eps (hat(w) q - d - t v), t' = t - eps tau.
std::pair<Vec3, double> galilei_action_spacetime(const GalileiElement& g,
                                                 const Vec3& q, double t,
                                                 double eps);
// Same with the alpha term: t' = t + eps (-alpha v.q/c^2 - tau).
std::pair<Vec3, double> alpha_action_spacetime(const GalileiElement& g, double alpha,
                                               const Vec3& q, double t, double eps,
                                               const Constants& k);

// Block data of the n=4 generator for the chosen lift; b = c_mat = 0 always.
// galilei_M:  X=(mv,0), Y=(d+t0*v, tau), a=[[hat(w),0],[0,0]]
// galilei_Me: X=(mv,0), Y=(d,tau),       a=[[hat(w),0],[v/c,0]]
// alpha_Me:   X=0,      Y=(d,tau),       a=[[hat(w),alpha*v/c],[v/c,0]]
QuadraticGenerator lift(const GalileiElement& g, const LiftKind& kind,
                        const Constants& k, double m);

// Direction of the lifted flow at z (the eps-derivative of infinitesimal_map):
// dq~ = -Y - a^T q~, dp~ = -X + a p~.
Vec8 lift_direction(const QuadraticGenerator& gen, const Vec8& z);

// Exact polynomial momentum map J with exact gradient, assembled additively
// over sectors: w.(q x p) - d.p - tau p0 plus the kind's boost term
// (v.(m q - t0 p), v.(m q - q0 p/c), or -(alpha p0 v.q + q0 v.p)/c).
ScalarField momentum_map(const GalileiElement& g, const LiftKind& kind,
                         const Constants& k, double m);

// max-norm of Omega0^T X - grad J at z, the defining identity of J.
double momentum_map_residual(const GalileiElement& g, const LiftKind& kind,
                             const Constants& k, double m, const Vec8& z);

// Lie-algebra bracket under the lift, oriented so that the lifted fields
// anti-commute into it: X_[g,h] = -[X_g, X_h]. This is the orientation that
// makes the momentum maps close, {J_g, J_h} = J_[g,h] + cocycle.
GalileiElement algebra_bracket(const GalileiElement& g, const GalileiElement& h,
                               const LiftKind& kind, const Constants& k);

// {J_g, J_h}(z) - J_[g,h](z); state-independent for these lifts.
double cocycle(const GalileiElement& g, const GalileiElement& h,
               const LiftKind& kind, const Constants& k, double m,
               const ExtendedState& z);

struct CocyclePairEntry {
  std::string first, second;
  double value = 0.0;   // at the first sample
  double spread = 0.0;  // max - min over samples
};

struct EquivarianceReport {
  bool equivariant = false;
  double max_abs_cocycle = 0.0;
  std::string witness_first, witness_second;  // pair attaining the max
  double witness_value = 0.0;
  std::vector<CocyclePairEntry> table;  // all unordered basis pairs
};

// Cocycle over all unordered basis pairs at the given states; verdict
// EQUIVARIANT iff max |cocycle| <= 1e-7.
EquivarianceReport equivariance_verdict(const LiftKind& kind, const Constants& k,
                                        double m,
                                        const std::vector<ExtendedState>& samples);

// Finite boost of the spacetime coordinates. alpha=+1 is the hyperbolic form
// (requires |V| < c), alpha=-1 the circular form.
std::pair<Vec3, double> boost_finite(const Vec3& V, double alpha, const Vec3& q,
                                     double t, const Constants& k);
// Finite boost of (p, p0): hyperbolic rotation by artanh(|V|/c) along n for
// alpha=+1, circular rotation by arctan(|V|/c) for alpha=-1.
std::pair<Vec3, double> boost_momentum_finite(const Vec3& V, double alpha,
                                              const Vec3& p, double p0,
                                              const Constants& k);

double invariant_quadratic(const Vec3& p, double p0, double alpha);

// Closed-form 8x8 boost matrix on canonical slots, block-diagonal over
// (q~, p~).
Mat8 boost_matrix(const Vec3& V, double alpha, const Constants& k);

// Composition of K equal substeps of the boost generator, each substep the
// Cayley form (I - G/2K)^{-1}(I + G/2K) of the generator G scaled to total
// rapidity artanh(|V|/c) (arctan for alpha=-1). Exactly symplectic; converges
// to boost_matrix at second order in 1/K.
Mat8 boost_steps_matrix(const Vec3& V, double alpha, int K, const Constants& k);

}  // namespace xphase
