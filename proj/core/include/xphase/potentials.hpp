#pragma once

#include <array>
#include <map>
#include <string>

#include "xphase/constants.hpp"
#include "xphase/expr.hpp"
#include "xphase/state.hpp"

namespace xphase {

// Electromagnetic potentials as expression ASTs in (q1,q2,q3,t) plus named
// parameters. Keeping them symbolic makes every run reproducible from its
// scenario file and gives exact field derivatives.
struct Potentials {
  std::array<expr::Ast, 3> A;
  expr::Ast V;
  std::map<std::string, double> params;
};

// Parses the component sources against the parameter names in `params`.
Potentials make_potentials(const std::array<std::string, 3>& a_src,
                           const std::string& v_src,
                           const std::map<std::string, double>& params);

// Built-in entries: "uniform-b" (A = (-B0*q2/2, B0*q1/2, 0), V = 0, B0 = 1),
// "coulomb" (V = k/sqrt(q1^2+q2^2+q3^2), A = 0, k = 1),
// "plane-wave" (A = (0, A0*sin(q1 - c*t), 0), V = 0, A0 = 1, c bound from k),
// "free" (all zero). Unknown name -> validation error.
Potentials catalog_potentials(const std::string& name, const Constants& k);
bool is_catalog_name(const std::string& name);

// First derivatives of (A, V) as symbolic ASTs, built once and evaluated on
// demand. dA(k,j) holds d A_k / d q^{j+1}.
class PotentialDerivs {
 public:
  explicit PotentialDerivs(Potentials pot);

  const Potentials& pot() const { return pot_; }

  Vec3 A_at(const Vec3& q, double t) const;
  double V_at(const Vec3& q, double t) const;
  Eigen::Matrix3d dA_at(const Vec3& q, double t) const;  // (k,j) = d_j A_k
  Vec3 dAt_at(const Vec3& q, double t) const;            // d_t A
  Vec3 dV_at(const Vec3& q, double t) const;             // spatial grad V
  double dVt_at(const Vec3& q, double t) const;          // d_t V

  // B = curl A, E = -(1/c) dA/dt - grad V, both exact.
  Vec3 B_at(const Vec3& q, double t) const;
  Vec3 E_at(const Vec3& q, double t, double c) const;

  // Symbolic field components, for building second-derivative residuals.
  std::array<expr::Ast, 3> B_ast() const;
  std::array<expr::Ast, 3> E_ast(double c) const;

 private:
  Potentials pot_;
  std::array<std::array<expr::Ast, 3>, 3> da_;  // da_[k][j] = d_j A_k
  std::array<expr::Ast, 3> dat_;
  std::array<expr::Ast, 3> dv_;
  expr::Ast dvt_;
};

// Chart shift between kinetic momenta (p, E) and the canonical primed chart
// p' = p + eA/c, E' = E + eV (so p0' = p0 - eV/c). Coordinates are unchanged.
ExtendedState canonical_from_kinetic(const ExtendedState& s, const Potentials& pot,
                                     const Constants& k);
ExtendedState kinetic_from_canonical(const ExtendedState& s, const Potentials& pot,
                                     const Constants& k);

}  // namespace xphase
