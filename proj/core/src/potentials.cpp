#include "xphase/potentials.hpp"

#include <set>

namespace xphase {

namespace {

std::set<std::string> key_set(const std::map<std::string, double>& params) {
  std::set<std::string> names;
  for (const auto& [name, value] : params) {
    (void)value;
    names.insert(name);
  }
  return names;
}

}  // namespace

Potentials make_potentials(const std::array<std::string, 3>& a_src,
                           const std::string& v_src,
                           const std::map<std::string, double>& params) {
  const std::set<std::string> names = key_set(params);
  Potentials pot;
  for (int k = 0; k < 3; ++k) pot.A[k] = expr::parse(a_src[k], names);
  pot.V = expr::parse(v_src, names);
  pot.params = params;
  return pot;
}

bool is_catalog_name(const std::string& name) {
  return name == "uniform-b" || name == "coulomb" || name == "plane-wave" ||
         name == "free";
}

Potentials catalog_potentials(const std::string& name, const Constants& k) {
  k.validate();
  if (name == "uniform-b")
    return make_potentials({"-B0*q2/2", "B0*q1/2", "0"}, "0", {{"B0", 1.0}});
  if (name == "coulomb")
    return make_potentials({"0", "0", "0"}, "k/sqrt(q1^2 + q2^2 + q3^2)",
                           {{"k", 1.0}});
  if (name == "plane-wave")
    return make_potentials({"0", "A0*sin(q1 - c*t)", "0"}, "0",
                           {{"A0", 1.0}, {"c", k.c}});
  if (name == "free") return make_potentials({"0", "0", "0"}, "0", {});
  throw Error(ErrorKind::validation, "unknown catalog potential '" + name + "'");
}

PotentialDerivs::PotentialDerivs(Potentials pot) : pot_(std::move(pot)) {
  for (int comp = 0; comp < 3; ++comp) {
    for (int j = 0; j < 3; ++j) da_[comp][j] = expr::diff(pot_.A[comp], j);
    dat_[comp] = expr::diff(pot_.A[comp], expr::kVarT);
    dv_[comp] = expr::diff(pot_.V, comp);
  }
  dvt_ = expr::diff(pot_.V, expr::kVarT);
}

Vec3 PotentialDerivs::A_at(const Vec3& q, double t) const {
  Vec3 a;
  for (int k = 0; k < 3; ++k) a[k] = expr::eval(pot_.A[k], q, t, pot_.params);
  return a;
}

double PotentialDerivs::V_at(const Vec3& q, double t) const {
  return expr::eval(pot_.V, q, t, pot_.params);
}

Eigen::Matrix3d PotentialDerivs::dA_at(const Vec3& q, double t) const {
  Eigen::Matrix3d m;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j)
      m(k, j) = expr::eval(da_[k][j], q, t, pot_.params);
  return m;
}

Vec3 PotentialDerivs::dAt_at(const Vec3& q, double t) const {
  Vec3 v;
  for (int k = 0; k < 3; ++k) v[k] = expr::eval(dat_[k], q, t, pot_.params);
  return v;
}

Vec3 PotentialDerivs::dV_at(const Vec3& q, double t) const {
  Vec3 v;
  for (int k = 0; k < 3; ++k) v[k] = expr::eval(dv_[k], q, t, pot_.params);
  return v;
}

double PotentialDerivs::dVt_at(const Vec3& q, double t) const {
  return expr::eval(dvt_, q, t, pot_.params);
}

Vec3 PotentialDerivs::B_at(const Vec3& q, double t) const {
  const Eigen::Matrix3d da = dA_at(q, t);
  return Vec3{da(2, 1) - da(1, 2), da(0, 2) - da(2, 0), da(1, 0) - da(0, 1)};
}

Vec3 PotentialDerivs::E_at(const Vec3& q, double t, double c) const {
  return -dAt_at(q, t) / c - dV_at(q, t);
}

std::array<expr::Ast, 3> PotentialDerivs::B_ast() const {
  return {expr::mk_sub(da_[2][1], da_[1][2]), expr::mk_sub(da_[0][2], da_[2][0]),
          expr::mk_sub(da_[1][0], da_[0][1])};
}

std::array<expr::Ast, 3> PotentialDerivs::E_ast(double c) const {
  std::array<expr::Ast, 3> e;
  for (int k = 0; k < 3; ++k)
    e[k] = expr::mk_sub(expr::mk_div(expr::mk_neg(dat_[k]), expr::mk_const(c)),
                        dv_[k]);
  return e;
}

ExtendedState canonical_from_kinetic(const ExtendedState& s, const Potentials& pot,
                                     const Constants& k) {
  ExtendedState out = s;
  for (int i = 0; i < 3; ++i)
    out.p[i] += k.e / k.c * expr::eval(pot.A[i], s.q, s.t, pot.params);
  out.E += k.e * expr::eval(pot.V, s.q, s.t, pot.params);
  return out;
}

ExtendedState kinetic_from_canonical(const ExtendedState& s, const Potentials& pot,
                                     const Constants& k) {
  ExtendedState out = s;
  for (int i = 0; i < 3; ++i)
    out.p[i] -= k.e / k.c * expr::eval(pot.A[i], s.q, s.t, pot.params);
  out.E -= k.e * expr::eval(pot.V, s.q, s.t, pot.params);
  return out;
}

}  // namespace xphase
