#include "xphase/em.hpp"

#include <cmath>

namespace xphase {

FieldStrengths field_strengths(const Potentials& pot, const Vec3& q, double t,
                               const Constants& k) {
  k.validate();
  const PotentialDerivs derivs(pot);
  FieldStrengths f;
  f.B = derivs.B_at(q, t);
  f.E_vec = derivs.E_at(q, t, k.c);
  return f;
}

ScalarField hamiltonian_kinetic(double m) {
  if (!(std::isfinite(m) && m > 0.0))
    throw Error(ErrorKind::validation, "hamiltonian_kinetic: m must be > 0");
  ScalarField H;
  H.eval = [m](const Vec8& z) {
    return (z[P1] * z[P1] + z[P2] * z[P2] + z[P3] * z[P3]) / (2.0 * m);
  };
  H.grad = [m](const Vec8& z) {
    Vec8 g = Vec8::Zero();
    g[P1] = z[P1] / m;
    g[P2] = z[P2] / m;
    g[P3] = z[P3] / m;
    return g;
  };
  return H;
}

ScalarField hamiltonian_relativistic(const Constants& k) {
  k.validate();
  k.require_mass();
  const double m = k.m, c = k.c, alpha = k.alpha;
  auto radicand = [m, c, alpha](const Vec8& z) {
    const double p2 = z[P1] * z[P1] + z[P2] * z[P2] + z[P3] * z[P3];
    const double r = m * m * c * c + alpha * p2;
    if (!(r > 0.0))
      throw Error(ErrorKind::domain,
                  "hamiltonian_relativistic: m^2 c^2 + alpha p^2 must be > 0");
    return r;
  };
  ScalarField H;
  H.eval = [radicand, c, alpha](const Vec8& z) {
    return alpha * c * std::sqrt(radicand(z));
  };
  H.grad = [radicand, c](const Vec8& z) {
    const double root = std::sqrt(radicand(z));
    Vec8 g = Vec8::Zero();
    g[P1] = c * z[P1] / root;
    g[P2] = c * z[P2] / root;
    g[P3] = c * z[P3] / root;
    return g;
  };
  return H;
}

Tangent8 extended_rhs(const ScalarField& H, const ExtendedState& s,
                      const Constants& k) {
  const Vec8 g = grad8(H, canonical_coords(s, k));
  Tangent8 v;
  v.dq = Vec3{g[P1], g[P2], g[P3]};
  v.dp = -Vec3{g[Q1], g[Q2], g[Q3]};
  v.dt = 1.0;
  v.dE = k.c * g[Q0];  // dH/dt through the q0 slot
  return v;
}

namespace {

Tangent8 em_rhs_impl(const ScalarField& H, const PotentialDerivs& derivs,
                     const ExtendedState& s, const Constants& k) {
  const Vec8 g = grad8(H, canonical_coords(s, k));
  const Vec3 B = derivs.B_at(s.q, s.t);
  const Vec3 E = derivs.E_at(s.q, s.t, k.c);
  Tangent8 v;
  v.dq = Vec3{g[P1], g[P2], g[P3]};
  v.dp = -Vec3{g[Q1], g[Q2], g[Q3]} + k.e * (v.dq.cross(B) / k.c + E);
  v.dt = 1.0;
  v.dE = k.e * v.dq.dot(E) + k.c * g[Q0];
  return v;
}

}  // namespace

Tangent8 em_rhs(const ScalarField& H, const Potentials& pot,
                const ExtendedState& s, const Constants& k) {
  k.validate();
  const PotentialDerivs derivs(pot);
  return em_rhs_impl(H, derivs, s, k);
}

Rhs8 make_em_rhs(const ScalarField& H, std::shared_ptr<const PotentialDerivs> derivs,
                 const Constants& k) {
  if (!derivs) throw Error(ErrorKind::validation, "make_em_rhs: null derivs");
  k.validate();
  return [H, derivs, k](const ExtendedState& s) {
    return em_rhs_impl(H, *derivs, s, k);
  };
}

namespace {

Vec8 flat(const ExtendedState& s) {
  Vec8 y;
  y << s.q[0], s.q[1], s.q[2], s.p[0], s.p[1], s.p[2], s.t, s.E;
  return y;
}

ExtendedState unflat(const Vec8& y) {
  ExtendedState s;
  s.q = Vec3{y[0], y[1], y[2]};
  s.p = Vec3{y[3], y[4], y[5]};
  s.t = y[6];
  s.E = y[7];
  return s;
}

Vec8 flat_rhs(const Rhs8& rhs, const Vec8& y) {
  const Tangent8 v = rhs(unflat(y));
  Vec8 f;
  f << v.dq[0], v.dq[1], v.dq[2], v.dp[0], v.dp[1], v.dp[2], v.dt, v.dE;
  return f;
}

Vec8 rk4_step(const Rhs8& rhs, const Vec8& y, double ds) {
  const Vec8 k1 = flat_rhs(rhs, y);
  const Vec8 k2 = flat_rhs(rhs, y + 0.5 * ds * k1);
  const Vec8 k3 = flat_rhs(rhs, y + 0.5 * ds * k2);
  const Vec8 k4 = flat_rhs(rhs, y + ds * k3);
  return y + ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vec8 midpoint_step(const Rhs8& rhs, const Vec8& y, double ds) {
  const double tol = 1e-12 * std::max(1.0, y.lpNorm<Eigen::Infinity>());
  Vec8 k = flat_rhs(rhs, y);
  for (int iter = 0; iter < 200; ++iter) {
    const Vec8 k_next = flat_rhs(rhs, y + 0.5 * ds * k);
    const double delta = (k_next - k).lpNorm<Eigen::Infinity>();
    k = k_next;
    if (delta <= tol) return y + ds * k;
  }
  throw Error(ErrorKind::newton_nonconvergence,
              "implicit-midpoint: stage equation did not converge");
}

}  // namespace

Trajectory integrate(const Rhs8& rhs, const std::function<double(const ExtendedState&)>& He,
                     const ExtendedState& s0, double ds, int n_steps,
                     const std::string& method) {
  if (!(std::isfinite(ds) && ds > 0.0))
    throw Error(ErrorKind::validation, "integrate: ds must be > 0");
  if (n_steps < 1) throw Error(ErrorKind::validation, "integrate: n_steps must be >= 1");
  const bool rk4 = method == "rk4";
  if (!rk4 && method != "implicit-midpoint")
    throw Error(ErrorKind::validation, "integrate: unknown method '" + method + "'");
  if (!s0.finite())
    throw Error(ErrorKind::non_finite, "integrate: initial state is not finite");

  Trajectory traj;
  traj.method = method;
  traj.ds = ds;
  const double he0 = He ? He(s0) : 0.0;
  traj.samples.push_back({0.0, s0, 0.0});

  Vec8 y = flat(s0);
  for (int i = 1; i <= n_steps; ++i) {
    const Vec8 y_next = rk4 ? rk4_step(rhs, y, ds) : midpoint_step(rhs, y, ds);
    if (!y_next.allFinite()) {
      traj.aborted = true;
      break;
    }
    const double dt_residual = std::abs((y_next[6] - y[6]) / ds - 1.0);
    traj.max_dt_residual = std::max(traj.max_dt_residual, dt_residual);
    y = y_next;
    const ExtendedState state = unflat(y);
    const double drift = He ? He(state) - he0 : 0.0;
    traj.max_abs_he_drift = std::max(traj.max_abs_he_drift, std::abs(drift));
    traj.samples.push_back({i * ds, state, drift});
  }
  return traj;
}

Potentials gauge_transform(const Potentials& pot, const expr::Ast& f,
                           const Constants& k) {
  k.validate();
  Potentials out = pot;
  for (int i = 0; i < 3; ++i) out.A[i] = expr::mk_add(pot.A[i], expr::diff(f, i));
  out.V = expr::mk_sub(
      pot.V, expr::mk_div(expr::diff(f, expr::kVarT), expr::mk_const(k.c)));
  return out;
}

PhasePoint minimal_coupling(const ExtendedState& s, const Potentials& pot,
                            const Constants& k) {
  k.validate();
  const ExtendedState primed = canonical_from_kinetic(s, pot, k);
  PhasePoint z;
  z.q = Eigen::Vector4d{primed.q[0], primed.q[1], primed.q[2], primed.q0(k)};
  z.p = Eigen::Vector4d{primed.p[0], primed.p[1], primed.p[2], primed.p0(k)};
  return z;
}

ExtendedState minimal_coupling_inverse(const PhasePoint& z, const Potentials& pot,
                                       const Constants& k) {
  k.validate();
  if (z.n() != 4 || z.p.size() != 4)
    throw Error(ErrorKind::dimension_mismatch, "minimal_coupling_inverse: n must be 4");
  ExtendedState primed;
  primed.q = Vec3{z.q[0], z.q[1], z.q[2]};
  primed.p = Vec3{z.p[0], z.p[1], z.p[2]};
  primed.t = z.q[3] / k.c;
  primed.E = -k.c * z.p[3];
  return kinetic_from_canonical(primed, pot, k);
}

Mat8 em_form_matrix(const Potentials& pot, const Vec3& q, double t,
                    const Constants& k) {
  k.validate();
  const PotentialDerivs derivs(pot);
  const Eigen::Matrix3d da = derivs.dA_at(q, t);  // (a,j) = d_j A_a
  const Vec3 e_field = derivs.E_at(q, t, k.c);
  const double ec = k.e / k.c;
  Mat8 w = Mat8::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) w(Q1 + a, Q1 + b) = ec * (da(a, b) - da(b, a));
  for (int a = 0; a < 3; ++a) {
    w(Q1 + a, Q0) = -ec * e_field[a];
    w(Q0, Q1 + a) = ec * e_field[a];
  }
  for (int mu = 0; mu < 4; ++mu) {
    w(Q1 + mu, P1 + mu) = 1.0;
    w(P1 + mu, Q1 + mu) = -1.0;
  }
  return w;
}

double interior_product_residual(const ScalarField& H, const Potentials& pot,
                                 const ExtendedState& s, const Constants& k) {
  const Mat8 w = em_form_matrix(pot, s.q, s.t, k);
  const Tangent8 v = em_rhs(H, pot, s, k);
  const Vec8 x = tangent_coords(v, k);
  Vec8 dhe = grad8(H, canonical_coords(s, k));
  dhe[P0] += k.c;  // He = H + c p0
  return (w.transpose() * x - dhe).lpNorm<Eigen::Infinity>();
}

std::pair<double, double> maxwell_residual_from_fields(
    const std::array<expr::Ast, 3>& B, const std::array<expr::Ast, 3>& E,
    const std::map<std::string, double>& params, const SamplePoints& samples,
    const Constants& k) {
  k.validate();
  expr::Ast div_b = expr::mk_const(0.0);
  for (int i = 0; i < 3; ++i) div_b = expr::mk_add(div_b, expr::diff(B[i], i));
  // curl E + (1/c) dB/dt, componentwise
  const expr::Ast c_ast = expr::mk_const(k.c);
  std::array<expr::Ast, 3> faraday;
  faraday[0] = expr::mk_add(expr::mk_sub(expr::diff(E[2], 1), expr::diff(E[1], 2)),
                            expr::mk_div(expr::diff(B[0], expr::kVarT), c_ast));
  faraday[1] = expr::mk_add(expr::mk_sub(expr::diff(E[0], 2), expr::diff(E[2], 0)),
                            expr::mk_div(expr::diff(B[1], expr::kVarT), c_ast));
  faraday[2] = expr::mk_add(expr::mk_sub(expr::diff(E[1], 0), expr::diff(E[0], 1)),
                            expr::mk_div(expr::diff(B[2], expr::kVarT), c_ast));
  double max_div = 0.0, max_faraday = 0.0;
  for (const auto& [q, t] : samples) {
    max_div = std::max(max_div, std::abs(expr::eval(div_b, q, t, params)));
    Vec3 f;
    for (int i = 0; i < 3; ++i) f[i] = expr::eval(faraday[i], q, t, params);
    max_faraday = std::max(max_faraday, f.norm());
  }
  return {max_div, max_faraday};
}

std::pair<double, double> maxwell_homogeneous_residual(const Potentials& pot,
                                                       const SamplePoints& samples,
                                                       const Constants& k) {
  const PotentialDerivs derivs(pot);
  return maxwell_residual_from_fields(derivs.B_ast(), derivs.E_ast(k.c),
                                      pot.params, samples, k);
}

std::pair<double, double> vacuum_residual(const Potentials& pot,
                                          const SamplePoints& samples,
                                          const Constants& k) {
  k.validate();
  expr::Ast div_a = expr::mk_const(0.0);
  for (int i = 0; i < 3; ++i) div_a = expr::mk_add(div_a, expr::diff(pot.A[i], i));
  const expr::Ast gauge =
      expr::mk_add(expr::mk_mul(expr::mk_const(k.c), div_a),
                   expr::diff(pot.V, expr::kVarT));
  std::array<expr::Ast, 3> wave;
  for (int i = 0; i < 3; ++i) {
    const expr::Ast att =
        expr::diff(expr::diff(pot.A[i], expr::kVarT), expr::kVarT);
    expr::Ast lap = expr::mk_const(0.0);
    for (int j = 0; j < 3; ++j)
      lap = expr::mk_add(lap, expr::diff(expr::diff(pot.A[i], j), j));
    wave[i] = expr::mk_sub(expr::mk_div(att, expr::mk_const(k.c * k.c)), lap);
  }
  double max_gauge = 0.0, max_wave = 0.0;
  for (const auto& [q, t] : samples) {
    max_gauge = std::max(max_gauge, std::abs(expr::eval(gauge, q, t, pot.params)));
    Vec3 w;
    for (int i = 0; i < 3; ++i) w[i] = expr::eval(wave[i], q, t, pot.params);
    max_wave = std::max(max_wave, w.norm());
  }
  return {max_gauge, max_wave};
}

ScalarField canonical_chart_hamiltonian(const ScalarField& H,
                                        std::shared_ptr<const PotentialDerivs> derivs,
                                        const Constants& k) {
  const ScalarField wrapped = field_in_canonical_chart(H, derivs, k);
  ScalarField out;
  out.eval = [wrapped, derivs, k](const Vec8& z) {
    const Vec3 q{z[Q1], z[Q2], z[Q3]};
    const double t = z[Q0] / k.c;
    return wrapped.eval(z) + k.e * derivs->V_at(q, t);
  };
  out.grad = [wrapped, derivs, k](const Vec8& z) {
    const Vec3 q{z[Q1], z[Q2], z[Q3]};
    const double t = z[Q0] / k.c;
    Vec8 g = wrapped.grad(z);
    const Vec3 dv = derivs->dV_at(q, t);
    for (int i = 0; i < 3; ++i) g[Q1 + i] += k.e * dv[i];
    g[Q0] += k.e / k.c * derivs->dVt_at(q, t);
    return g;
  };
  return out;
}

}  // namespace xphase
