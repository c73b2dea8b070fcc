#pragma once

#include <Eigen/Dense>
#include <functional>

#include "xphase/error.hpp"
#include "xphase/state.hpp"

namespace xphase {

// Point of an n-degree-of-freedom phase space. For extended single-particle
// use n = 4 with slot order (q1,q2,q3,q0) / (p1,p2,p3,p0).
struct PhasePoint {
  Eigen::VectorXd q;
  Eigen::VectorXd p;

  int n() const { return static_cast<int>(q.size()); }
  bool finite() const { return q.allFinite() && p.allFinite(); }
};

// Coefficients of a quadratic generating function
//   Phi(q,p') = X.q - Y.p' - q^T a p' + (1/2) q^T b q + (1/2) p'^T c_mat p',
// the general form whose induced map is affine: a momentum shift by X, a
// coordinate shift by Y, and a linear symplectic part from (a, b, c_mat).
struct QuadraticGenerator {
  int n = 0;
  Eigen::VectorXd X, Y;
  Eigen::MatrixXd a, b, c_mat;

  static QuadraticGenerator zero(int n);
  void validate() const;  // sizes agree, b and c_mat exactly symmetric, finite
};

// First-order map q' = q + eps(-Y - a^T q + c_mat p),
//                 p' = p + eps(-X - b q + a p).
PhasePoint infinitesimal_map(const QuadraticGenerator& g, const PhasePoint& z,
                             double eps);

// A generating function Phi(q, p', t) presented through its partials.
struct GeneratingFunction {
  std::function<Eigen::VectorXd(const Eigen::VectorXd& q,
                                const Eigen::VectorXd& pp, double t)>
      dPhi_dq;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& q,
                                const Eigen::VectorXd& pp, double t)>
      dPhi_dpp;
  std::function<double(const Eigen::VectorXd& q, const Eigen::VectorXd& pp,
                       double t)>
      dPhi_dt;
};

// Exact partials of the eps-scaled quadratic generator above; dPhi_dt = 0.
GeneratingFunction generator_phi(const QuadraticGenerator& g, double eps);

// Finite map from the implicit relations p = p' + dPhi/dq, q' = q + dPhi/dp'.
// Solves for p' by damped Newton (absolute tolerance 1e-12, max 50 steps,
// step halving on residual increase).
PhasePoint apply_generating_function(const GeneratingFunction& phi,
                                     const PhasePoint& z, double t);

// Value of the transformed Hamiltonian H' = H + dPhi/dt at the image of z,
// with z given in the original chart (H is evaluated at z, dPhi/dt at the
// solved (q, p')).
using HamiltonianFn = std::function<double(const PhasePoint&, double t)>;
double transformed_hamiltonian(const HamiltonianFn& H, const GeneratingFunction& phi,
                               const PhasePoint& z, double t);

// One-particle boost generator Phi_v = V.(m q - t p') and rotation generator
// Phi_r = -t Omega.(q x p'), both with n = 3.
GeneratingFunction phi_galilei_boost(const Vec3& V, double m);
GeneratingFunction phi_rotation(const Vec3& Omega);

// First-order rotating-frame step q' = q - dt Omega x q, p' = p - dt Omega x p.
PhasePoint rotating_frame_step(const Vec3& Omega, double dt, const PhasePoint& z);

// max-norm of J^T Omega J - Omega with J the central-difference Jacobian of
// the map at z and Omega the canonical block form on (q,p).
using PhaseMap = std::function<PhasePoint(const PhasePoint&)>;
double symplecticity_residual(const PhaseMap& map, const PhasePoint& z,
                              double h = 1e-3);

}  // namespace xphase
