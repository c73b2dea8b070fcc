// Acceptance gate: one line per criterion, nonzero exit if any line fails.
// Tolerances and runtime budgets are stated inline with each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "xphase/em.hpp"
#include "xphase/error.hpp"
#include "xphase/expr.hpp"
#include "xphase/generating.hpp"
#include "xphase/group.hpp"
#include "xphase/numdiff.hpp"
#include "xphase/potentials.hpp"
#include "xphase/rng.hpp"
#include "xphase/scenario.hpp"

using namespace xphase;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::vector<ExtendedState> random_states(Rng& rng, int n, double q_min_norm = 0.0) {
  std::vector<ExtendedState> out;
  for (int i = 0; i < n; ++i) {
    ExtendedState s;
    s.q = rng.vec3(-1.0, 1.0);
    while (q_min_norm > 0.0 && s.q.norm() < q_min_norm) {
      s.q = rng.vec3(-1.0, 1.0);
    }
    s.p = rng.vec3(-1.0, 1.0);
    s.t = rng.uniform(0.0, 1.0);
    s.E = rng.uniform(-1.0, 1.0);
    out.push_back(s);
  }
  return out;
}

GalileiElement random_element(Rng& rng) {
  GalileiElement g;
  g.w = rng.vec3(-1.0, 1.0);
  g.d = rng.vec3(-1.0, 1.0);
  g.v = rng.vec3(-1.0, 1.0);
  g.tau = rng.uniform(-1.0, 1.0);
  return g;
}

// ---------------------------------------------------------------- criterion 1
Outcome galilei_cocycle_value() {
  Constants k;
  const double m = 1.0;
  LiftKind me = LiftKind::galilei_Me();
  GalileiElement vx = GalileiElement::boost(Vec3(1.0, 0.0, 0.0));
  GalileiElement dx = GalileiElement::translation(Vec3(1.0, 0.0, 0.0));

  Rng rng(101);
  auto states = random_states(rng, 3);
  double witness_dev = 0.0;
  for (const auto& s : states) {
    witness_dev = std::max(witness_dev,
                           std::abs(cocycle(vx, dx, me, k, m, s) - (-1.0)));
  }

  double table_dev = 0.0;
  for (int i = 0; i < 50; ++i) {
    GalileiElement g = random_element(rng);
    GalileiElement h = random_element(rng);
    double want = m * (g.d.dot(h.v) - h.d.dot(g.v));
    table_dev = std::max(
        table_dev, std::abs(cocycle(g, h, me, k, m, states[0]) - want));
  }

  Outcome o;
  o.pass = witness_dev <= 1e-9 && table_dev <= 1e-8;
  o.detail = "witness (v_x,d_x) = -1 within " + fmt(witness_dev) +
             " (tol 1e-9); bilinear table m(d.v' - d'.v) within " +
             fmt(table_dev) + " (tol 1e-8) on 50 pairs";
  return o;
}

// ---------------------------------------------------------------- criterion 2
using VField = std::function<Vec8(const Vec8&)>;

Vec8 fd_commutator(const VField& X, const VField& Y, const Vec8& z) {
  const double h = 1e-5;
  Vec8 Xz = X(z);
  Vec8 Yz = Y(z);
  Vec8 out = Vec8::Zero();
  for (int j = 0; j < 8; ++j) {
    Vec8 zp = z, zm = z;
    zp[j] += h;
    zm[j] -= h;
    Vec8 dY = (Y(zp) - Y(zm)) / (2.0 * h);
    Vec8 dX = (X(zp) - X(zm)) / (2.0 * h);
    out += dY * Xz[j] - dX * Yz[j];
  }
  return out;
}

Outcome equivariance_restoration() {
  Constants k;
  const double m = 1.0;
  Rng rng(202);
  auto states = random_states(rng, 5);

  double max_cocycle = 0.0;
  for (double alpha : {1.0, -1.0}) {
    LiftKind kind = LiftKind::alpha_Me(alpha);
    EquivarianceReport rep = equivariance_verdict(kind, k, m, states);
    max_cocycle = std::max(max_cocycle, rep.max_abs_cocycle);
  }

  // boost-translation commutator as vector fields: expect a pure time-
  // translation flow of size alpha v.d / c, i.e. the q0 component -alpha v.d/c
  double comm_dev = 0.0;
  double bracket_dev = 0.0;
  for (double alpha : {1.0, -1.0}) {
    LiftKind kind = LiftKind::alpha_Me(alpha);
    for (int trial = 0; trial < 2; ++trial) {
      Vec3 v = trial == 0 ? Vec3(1.0, 0.0, 0.0) : Vec3(rng.vec3(-1.0, 1.0));
      Vec3 d = trial == 0 ? Vec3(1.0, 0.0, 0.0) : Vec3(rng.vec3(-1.0, 1.0));
      GalileiElement gv = GalileiElement::boost(v);
      GalileiElement gd = GalileiElement::translation(d);
      QuadraticGenerator lv = lift(gv, kind, k, m);
      QuadraticGenerator ld = lift(gd, kind, k, m);
      VField Xv = [&lv](const Vec8& z) { return lift_direction(lv, z); };
      VField Xd = [&ld](const Vec8& z) { return lift_direction(ld, z); };

      GalileiElement br = algebra_bracket(gv, gd, kind, k);
      QuadraticGenerator lb = lift(br, kind, k, m);

      for (const auto& s : states) {
        Vec8 z = canonical_coords(s, k);
        Vec8 comm = fd_commutator(Xv, Xd, z);
        Vec8 want = Vec8::Zero();
        want[Q0] = -alpha * v.dot(d) / k.c;
        comm_dev = std::max(comm_dev, (comm - want).cwiseAbs().maxCoeff());
        // lifts realize the bracket with a sign flip: [X_g, X_h] = -X_[g,h]
        Vec8 xb = lift_direction(lb, z);
        bracket_dev = std::max(bracket_dev, (comm + xb).cwiseAbs().maxCoeff());
      }
    }
  }

  Outcome o;
  o.pass = max_cocycle <= 1e-9 && comm_dev <= 1e-6 && bracket_dev <= 1e-6;
  o.detail = "max |cocycle| over 45 basis pairs, both signs of alpha: " +
             fmt(max_cocycle) + " (tol 1e-9); [X_v,X_d] = (alpha v.d/c) " +
             "time-translation flow within " + fmt(comm_dev) +
             " (tol 1e-6); equals -X_[v,d] within " + fmt(bracket_dev) +
             " (note: algebra_bracket stores tau* = -alpha v.d/c, the " +
             "opposite labeling of the same commutator)";
  return o;
}

// ---------------------------------------------------------------- criterion 3
Outcome lorentz_limit() {
  Constants k;
  Vec3 V(0.6, 0.0, 0.0);
  const std::vector<int> Ks = {100, 1000, 10000};
  double min_slope = 1e300;
  std::string per_alpha;
  for (double alpha : {1.0, -1.0}) {
    Mat8 target = boost_matrix(V, alpha, k);
    std::vector<double> disc;
    for (int K : Ks) {
      Mat8 S = boost_steps_matrix(V, alpha, K, k);
      disc.push_back((S - target).cwiseAbs().maxCoeff());
    }
    for (size_t i = 0; i + 1 < disc.size(); ++i) {
      double slope = std::log(disc[i] / disc[i + 1]) /
                     std::log(double(Ks[i + 1]) / double(Ks[i]));
      min_slope = std::min(min_slope, slope);
    }
    per_alpha += std::string(per_alpha.empty() ? "" : "; ") + "alpha=" +
                 (alpha > 0 ? "+1" : "-1") + " disc " + fmt(disc[0]) + "->" +
                 fmt(disc[2]);
  }
  Outcome o;
  o.pass = min_slope >= 1.9;
  o.detail = "composed-step error vs closed form, K in {1e2,1e3,1e4}: " +
             per_alpha + "; min log-log slope " + fmt(min_slope) +
             " (need >= 1.9)";
  return o;
}

// ---------------------------------------------------------------- criterion 4
Outcome boost_invariant() {
  Constants k;
  Rng rng(404);
  double drift = 0.0;
  for (double alpha : {1.0, -1.0}) {
    for (int i = 0; i < 1000; ++i) {
      Vec3 p = rng.vec3(-2.0, 2.0);
      double p0 = rng.uniform(-2.0, 2.0);
      Vec3 V = rng.vec3(-1.0, 1.0) * (alpha > 0 ? 0.55 : 1.5);
      auto [pp, pp0] = boost_momentum_finite(V, alpha, p, p0, k);
      drift = std::max(drift, std::abs(invariant_quadratic(pp, pp0, alpha) -
                                       invariant_quadratic(p, p0, alpha)));
    }
  }
  Outcome o;
  o.pass = drift <= 1e-10;
  o.detail = "p^2 - alpha p0^2 drift over 1000 triples per alpha: " +
             fmt(drift) + " (tol 1e-10)";
  return o;
}

// ---------------------------------------------------------------- criterion 5
Outcome lorentz_force_dynamics() {
  Constants k;
  Potentials pot = catalog_potentials("uniform-b", k);
  auto derivs = std::make_shared<const PotentialDerivs>(pot);
  ScalarField H = hamiltonian_kinetic(k.m);
  Rhs8 rhs = make_em_rhs(H, derivs, k);
  ExtendedState s0;
  s0.p = Vec3(1.0, 0.0, 0.0);
  s0.E = 0.5;
  auto he = [&H, &k](const ExtendedState& s) {
    return H.eval(canonical_coords(s, k)) - s.E;
  };
  const double ds = 1e-3;
  const double period = 2.0 * M_PI;
  const int n = int(period / ds);
  Trajectory tr = integrate(rhs, he, s0, ds, n, "rk4");
  double rem = period - n * ds;
  Trajectory tail = integrate(rhs, he, tr.samples.back().state, rem, 1, "rk4");
  const ExtendedState& fin = tail.samples.back().state;

  double ret = std::max((fin.q - s0.q).cwiseAbs().maxCoeff(),
                        (fin.p - s0.p).cwiseAbs().maxCoeff());
  double edrift = 0.0;
  for (const auto& smp : tr.samples) {
    edrift = std::max(edrift, std::abs(smp.state.E - s0.E));
  }
  edrift = std::max(edrift, std::abs(fin.E - s0.E));

  Outcome o;
  o.pass = ret <= 1e-6 && edrift <= 1e-8;
  o.detail = "cyclotron return after s = 2pi: " + fmt(ret) +
             " (tol 1e-6); energy drift " + fmt(edrift) + " (tol 1e-8)";
  return o;
}

// ---------------------------------------------------------------- criterion 6
Outcome energy_rate_identity() {
  Constants k;
  Potentials pot = make_potentials({"0", "0", "0"}, "-E1*q1", {{"E1", 1.0}});
  auto derivs = std::make_shared<const PotentialDerivs>(pot);
  ScalarField H = hamiltonian_kinetic(k.m);
  Rhs8 rhs = make_em_rhs(H, derivs, k);
  ExtendedState s0;
  s0.p = Vec3(0.5, 0.0, 0.0);
  s0.E = 0.125;
  const double ds = 1e-3;
  const int n = 2000;
  Trajectory tr = integrate(rhs, nullptr, s0, ds, n, "rk4");
  double worst = 0.0;
  for (int i = 1; i + 1 <= n; ++i) {
    const auto& prev = tr.samples[i - 1];
    const auto& cur = tr.samples[i];
    const auto& next = tr.samples[i + 1];
    double dE = (next.state.E - prev.state.E) / (2.0 * ds);
    Vec8 g = grad8(H, canonical_coords(cur.state, k));
    Vec3 qdot(g[P1], g[P2], g[P3]);
    Vec3 efield = derivs->E_at(cur.state.q, cur.state.t, k.c);
    worst = std::max(worst, std::abs(dE - k.e * qdot.dot(efield)));
  }
  Outcome o;
  o.pass = worst <= 1e-6;
  o.detail = "max |dE/ds - e qdot.E| along 2000 static-field steps: " +
             fmt(worst) + " (tol 1e-6)";
  return o;
}

// ---------------------------------------------------------------- criterion 7
expr::Ast random_gauge_poly(Rng& rng) {
  using namespace xphase::expr;
  auto coef = [&rng]() { return mk_const(rng.uniform(-0.5, 0.5)); };
  Ast vars[4] = {mk_var(0), mk_var(1), mk_var(2), mk_var(kVarT)};
  Ast f = coef();
  for (int i = 0; i < 4; ++i) {
    f = mk_add(f, mk_mul(coef(), vars[i]));
    for (int j = i; j < 4; ++j) {
      f = mk_add(f, mk_mul(coef(), mk_mul(vars[i], vars[j])));
    }
  }
  return f;
}

Outcome gauge_invariance() {
  Constants k;
  Rng rng(707);
  double field_dev = 0.0;
  double traj_dev = 0.0;
  const double ds = 1e-3;
  const int n = 200;

  for (const char* name : {"uniform-b", "coulomb", "plane-wave", "free"}) {
    Potentials pot = catalog_potentials(name, k);
    ScalarField H = hamiltonian_kinetic(k.m);
    auto derivs0 = std::make_shared<const PotentialDerivs>(pot);
    Rhs8 rhs0 = make_em_rhs(H, derivs0, k);
    ExtendedState s0;
    s0.q = Vec3(0.3, 0.4, 0.1);
    s0.p = Vec3(0.6, 0.2, -0.3);
    s0.E = 0.5;
    Trajectory base = integrate(rhs0, nullptr, s0, ds, n, "rk4");

    for (int trial = 0; trial < 20; ++trial) {
      expr::Ast f = random_gauge_poly(rng);
      Potentials gauged = gauge_transform(pot, f, k);

      for (int i = 0; i < 20; ++i) {
        Vec3 q = rng.vec3(-1.0, 1.0);
        while (q.norm() < 0.4) q = rng.vec3(-1.0, 1.0);
        double t = rng.uniform(0.0, 1.0);
        FieldStrengths a = field_strengths(pot, q, t, k);
        FieldStrengths b = field_strengths(gauged, q, t, k);
        field_dev = std::max(field_dev, (a.B - b.B).cwiseAbs().maxCoeff());
        field_dev =
            std::max(field_dev, (a.E_vec - b.E_vec).cwiseAbs().maxCoeff());
      }

      auto gderivs = std::make_shared<const PotentialDerivs>(gauged);
      ScalarField Heff = canonical_chart_hamiltonian(H, gderivs, k);
      Rhs8 rhs = [&Heff, &k](const ExtendedState& s) {
        return extended_rhs(Heff, s, k);
      };
      ExtendedState c0 = canonical_from_kinetic(s0, gauged, k);
      Trajectory tr = integrate(rhs, nullptr, c0, ds, n, "rk4");
      for (size_t i = 0; i < tr.samples.size(); i += 40) {
        ExtendedState kin =
            kinetic_from_canonical(tr.samples[i].state, gauged, k);
        const ExtendedState& ref = base.samples[i].state;
        traj_dev = std::max(traj_dev, (kin.q - ref.q).cwiseAbs().maxCoeff());
        traj_dev = std::max(traj_dev, (kin.p - ref.p).cwiseAbs().maxCoeff());
        traj_dev = std::max(traj_dev, std::abs(kin.E - ref.E));
      }
    }
  }
  Outcome o;
  o.pass = field_dev <= 1e-10 && traj_dev <= 1e-8;
  o.detail = "20 random quadratic gauges per catalog potential: field dev " +
             fmt(field_dev) + " (tol 1e-10); kinetic-chart trajectory dev " +
             fmt(traj_dev) + " (tol 1e-8)";
  return o;
}

// ---------------------------------------------------------------- criterion 8
Outcome maxwell_residuals() {
  Constants k;
  Rng rng(808);
  SamplePoints pts;
  for (int i = 0; i < 100; ++i) {
    Vec3 q = rng.vec3(-2.0, 2.0);
    while (q.norm() < 0.5) q = rng.vec3(-2.0, 2.0);
    pts.push_back({q, rng.uniform(0.0, 2.0)});
  }
  double hom = 0.0;
  for (const char* name : {"uniform-b", "coulomb", "plane-wave", "free"}) {
    auto [divb, faraday] =
        maxwell_homogeneous_residual(catalog_potentials(name, k), pts, k);
    hom = std::max(hom, std::max(divb, faraday));
  }
  auto [gauge, wave] = vacuum_residual(catalog_potentials("plane-wave", k), pts, k);

  std::array<expr::Ast, 3> B = {expr::parse("q1"), expr::parse("0"),
                                expr::parse("0")};
  std::array<expr::Ast, 3> E = {expr::parse("0"), expr::parse("0"),
                                expr::parse("0")};
  auto [divb_injected, faraday_injected] =
      maxwell_residual_from_fields(B, E, {}, pts, k);
  double injected_dev = std::abs(divb_injected - 1.0);

  Outcome o;
  o.pass = hom <= 1e-12 && wave <= 1e-12 && gauge <= 1e-12 &&
           injected_dev <= 1e-12 && faraday_injected <= 1e-12;
  o.detail = "homogeneous residuals over catalogs: " + fmt(hom) +
             "; plane-wave vacuum gauge " + fmt(gauge) + ", wave " + fmt(wave) +
             " (tol 1e-12 each); injected non-curl B flagged with div " +
             fmt(divb_injected) + " (want 1 +- 1e-12)";
  return o;
}

// ---------------------------------------------------------------- criterion 9
Outcome interior_product_identity() {
  Constants k;
  Rng rng(909);
  ScalarField H = hamiltonian_kinetic(k.m);
  double worst = 0.0;
  for (const char* name : {"uniform-b", "coulomb", "plane-wave", "free"}) {
    Potentials pot = catalog_potentials(name, k);
    auto states = random_states(rng, 100, 0.5);
    for (const auto& s : states) {
      worst = std::max(worst, interior_product_residual(H, pot, s, k));
    }
  }
  Outcome o;
  o.pass = worst <= 1e-7;
  o.detail = "max |omega^T X - dHe| over 100 states per catalog potential: " +
             fmt(worst) + " (tol 1e-7)";
  return o;
}

// --------------------------------------------------------------- criterion 10
Outcome field_dependent_brackets() {
  Constants k;
  Rng rng(1010);
  double stated_b_dev = 0.0;   // against {p1,p2} = -e B3 / c as stated
  double measured_b_dev = 0.0; // against the opposite sign, for diagnosis
  double e_dev = 0.0;          // {p_a, p0} = e E_a / c as stated
  for (const char* name : {"uniform-b", "coulomb", "plane-wave", "free"}) {
    Potentials pot = catalog_potentials(name, k);
    auto derivs = std::make_shared<const PotentialDerivs>(pot);
    auto states = random_states(rng, 50, 0.5);
    for (const auto& s : states) {
      FieldStrengths f = field_strengths(pot, s.q, s.t, k);
      double b12 =
          poisson_field(coordinate_field(P1), coordinate_field(P2), pot, s, k);
      stated_b_dev =
          std::max(stated_b_dev, std::abs(b12 - (-k.e * f.B[2] / k.c)));
      measured_b_dev =
          std::max(measured_b_dev, std::abs(b12 - (k.e * f.B[2] / k.c)));
      for (int a = 0; a < 3; ++a) {
        double bp0 = poisson_field(coordinate_field(P1 + a),
                                   coordinate_field(P0), pot, s, k);
        e_dev = std::max(e_dev, std::abs(bp0 - k.e * f.E_vec[a] / k.c));
      }
    }
  }
  Outcome o;
  o.pass = stated_b_dev <= 1e-6 && e_dev <= 1e-6;
  o.detail = "stated {p1,p2}^e_f = -e B3/c: max dev " + fmt(stated_b_dev) +
             " (tol 1e-6) [measured bracket equals +e B3/c within " +
             fmt(measured_b_dev) +
             ", so the stated B-term sign is not reproduced by this bracket " +
             "convention]; stated {p_a,p0}^e_f = e E_a/c: max dev " +
             fmt(e_dev) + " (tol 1e-6)";
  return o;
}

// --------------------------------------------------------------- criterion 11
Outcome symplecticity() {
  Constants k;
  Rng rng(1111);
  const double m = 1.0;
  double worst = 0.0;

  // every lift, driven as a finite generating-function map
  for (const auto& kind :
       {LiftKind::galilei_M(0.3), LiftKind::galilei_Me(), LiftKind::alpha_Me(1.0)}) {
    for (const auto& entry : algebra_basis()) {
      QuadraticGenerator gen = lift(entry.second, kind, k, m);
      GeneratingFunction phi = generator_phi(gen, 0.3);
      PhaseMap map = [&phi](const PhasePoint& w) {
        return apply_generating_function(phi, w, 0.0);
      };
      for (int i = 0; i < 100; ++i) {
        PhasePoint z;
        z.q = Eigen::Vector4d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                              rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        z.p = Eigen::Vector4d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                              rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        worst = std::max(worst, symplecticity_residual(map, z));
      }
    }
  }

  // named generating functions and a generic quadratic one
  std::vector<std::pair<std::string, GeneratingFunction>> maps;
  maps.push_back({"boost", phi_galilei_boost(Vec3(0.3, -0.2, 0.1), m)});
  maps.push_back({"rotation", phi_rotation(Vec3(0.2, 0.5, -0.4))});
  QuadraticGenerator qg = QuadraticGenerator::zero(3);
  qg.X = Eigen::Vector3d(0.3, -0.1, 0.2);
  qg.Y = Eigen::Vector3d(-0.5, 0.4, 0.1);
  qg.a << 0.1, 0.2, -0.3, 0.0, -0.1, 0.4, 0.2, 0.1, 0.0;
  qg.b << 0.2, 0.1, 0.0, 0.1, -0.3, 0.2, 0.0, 0.2, 0.1;
  qg.c_mat << -0.1, 0.0, 0.2, 0.0, 0.3, 0.1, 0.2, 0.1, 0.0;
  maps.push_back({"quadratic", generator_phi(qg, 0.4)});
  for (const auto& entry : maps) {
    const GeneratingFunction& phi_ref = entry.second;
    PhaseMap map = [&phi_ref](const PhasePoint& w) {
      return apply_generating_function(phi_ref, w, 0.6);
    };
    for (int i = 0; i < 100; ++i) {
      PhasePoint z;
      z.q = Eigen::Vector3d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                            rng.uniform(-1.0, 1.0));
      z.p = Eigen::Vector3d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                            rng.uniform(-1.0, 1.0));
      worst = std::max(worst, symplecticity_residual(map, z));
    }
  }

  Outcome o;
  o.pass = worst <= 1e-8;
  o.detail = "max |J^T Omega J - Omega| over 30 lift maps and 3 generating-"
             "function maps, 100 points each: " +
             fmt(worst) + " (tol 1e-8)";
  return o;
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Outcome()> fn;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"galilei cocycle value", 1.0, galilei_cocycle_value},
      {"equivariance restoration", 5.0, equivariance_restoration},
      {"lorentz limit", 10.0, lorentz_limit},
      {"boost invariant", 1.0, boost_invariant},
      {"lorentz-force dynamics", 5.0, lorentz_force_dynamics},
      {"energy-rate identity", 5.0, energy_rate_identity},
      {"gauge invariance", 30.0, gauge_invariance},
      {"maxwell residuals", 2.0, maxwell_residuals},
      {"interior-product identity", 5.0, interior_product_identity},
      {"field-dependent brackets", 5.0, field_dependent_brackets},
      {"symplecticity", 10.0, symplecticity},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    bool in_budget = secs < c.budget_s;
    bool pass = o.pass && in_budget;
    if (!pass) ++failures;
    std::printf("criterion %2zu: %s  %s | %s | %.2f s (budget %.0f s)%s\n",
                i + 1, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                c.budget_s, in_budget ? "" : " [over budget]");
  }
  std::printf("summary: %zu/%zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
