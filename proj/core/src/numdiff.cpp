#include "xphase/numdiff.hpp"

#include <cmath>

namespace xphase {

ScalarField coordinate_field(int slot) {
  if (slot < 0 || slot >= 8)
    throw Error(ErrorKind::validation, "coordinate_field: slot out of range");
  ScalarField f;
  f.eval = [slot](const Vec8& z) { return z[slot]; };
  f.grad = [slot](const Vec8&) {
    Vec8 g = Vec8::Zero();
    g[slot] = 1.0;
    return g;
  };
  return f;
}

Vec8 grad8(const ScalarField& f, const Vec8& z, double h) {
  if (!f.eval) throw Error(ErrorKind::validation, "grad8: field has no evaluator");
  if (f.grad) return f.grad(z);
  Vec8 g;
  for (int i = 0; i < 8; ++i) {
    const double step = h * std::max(1.0, std::abs(z[i]));
    Vec8 zs = z;
    zs[i] = z[i] + step;
    const double f1 = f.eval(zs);
    zs[i] = z[i] - step;
    const double f2 = f.eval(zs);
    zs[i] = z[i] + 2.0 * step;
    const double f3 = f.eval(zs);
    zs[i] = z[i] - 2.0 * step;
    const double f4 = f.eval(zs);
    if (!std::isfinite(f1) || !std::isfinite(f2) || !std::isfinite(f3) ||
        !std::isfinite(f4))
      throw Error(ErrorKind::non_finite,
                  std::string("grad8: non-finite field value in the stencil along ") +
                      slot_name(i));
    g[i] = (8.0 * (f1 - f2) - (f3 - f4)) / (12.0 * step);
  }
  return g;
}

double poisson_canonical(const ScalarField& f, const ScalarField& g, const Vec8& z) {
  const Vec8 gf = grad8(f, z);
  const Vec8 gg = grad8(g, z);
  double acc = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    acc += gf[Q1 + mu] * gg[P1 + mu] - gf[P1 + mu] * gg[Q1 + mu];
  return acc;
}

double poisson_canonical(const ScalarField& f, const ScalarField& g,
                         const ExtendedState& s, const Constants& k) {
  return poisson_canonical(f, g, canonical_coords(s, k));
}

ScalarField field_in_canonical_chart(const ScalarField& f,
                                     std::shared_ptr<const PotentialDerivs> derivs,
                                     const Constants& k) {
  if (!derivs) throw Error(ErrorKind::validation, "field_in_canonical_chart: null derivs");
  k.validate();
  auto kinetic_image = [derivs, k](const Vec8& zp) {
    const Vec3 q{zp[Q1], zp[Q2], zp[Q3]};
    const double t = zp[Q0] / k.c;
    const Vec3 a = derivs->A_at(q, t);
    Vec8 z = zp;
    for (int i = 0; i < 3; ++i) z[P1 + i] -= k.e / k.c * a[i];
    z[P0] += k.e / k.c * derivs->V_at(q, t);
    return z;
  };
  ScalarField out;
  out.eval = [f, kinetic_image](const Vec8& zp) { return f.eval(kinetic_image(zp)); };
  out.grad = [f, kinetic_image, derivs, k](const Vec8& zp) {
    const Vec8 z = kinetic_image(zp);
    const Vec8 g = grad8(f, z);
    const Vec3 q{zp[Q1], zp[Q2], zp[Q3]};
    const double t = zp[Q0] / k.c;
    const Eigen::Matrix3d da = derivs->dA_at(q, t);  // (k,j) = d_j A_k
    const Vec3 dat = derivs->dAt_at(q, t);
    const Vec3 dv = derivs->dV_at(q, t);
    const double dvt = derivs->dVt_at(q, t);
    const double ec = k.e / k.c;
    Vec8 gh = g;
    for (int nu = 0; nu < 3; ++nu) {
      double acc = g[Q1 + nu];
      for (int comp = 0; comp < 3; ++comp) acc -= ec * g[P1 + comp] * da(comp, nu);
      acc += ec * g[P0] * dv[nu];
      gh[Q1 + nu] = acc;
    }
    double acc0 = g[Q0];
    for (int comp = 0; comp < 3; ++comp)
      acc0 -= ec / k.c * g[P1 + comp] * dat[comp];
    acc0 += ec / k.c * g[P0] * dvt;
    gh[Q0] = acc0;
    return gh;
  };
  return out;
}

double poisson_field(const ScalarField& f, const ScalarField& g,
                     const Potentials& pot, const ExtendedState& s,
                     const Constants& k) {
  auto derivs = std::make_shared<const PotentialDerivs>(pot);
  const ScalarField fh = field_in_canonical_chart(f, derivs, k);
  const ScalarField gh = field_in_canonical_chart(g, derivs, k);
  const ExtendedState primed = canonical_from_kinetic(s, pot, k);
  return poisson_canonical(fh, gh, canonical_coords(primed, k));
}

}  // namespace xphase
