#include "xphase/group.hpp"

#include <cmath>
#include <cstdio>

#include "xphase/error.hpp"

namespace xphase {

namespace {

double maxabs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_finite_vec3(const Vec3& v, const char* what) {
  if (!v.allFinite()) {
    throw Error(ErrorKind::validation, std::string(what) + " must be finite");
  }
}

void require_finite_element(const GalileiElement& g) {
  require_finite_vec3(g.w, "rotation w");
  require_finite_vec3(g.d, "translation d");
  require_finite_vec3(g.v, "boost v");
  if (!std::isfinite(g.tau)) {
    throw Error(ErrorKind::validation, "time shift tau must be finite");
  }
}

}  // namespace

GalileiElement GalileiElement::rotation(const Vec3& w) {
  GalileiElement g;
  g.w = w;
  return g;
}

GalileiElement GalileiElement::translation(const Vec3& d) {
  GalileiElement g;
  g.d = d;
  return g;
}

GalileiElement GalileiElement::boost(const Vec3& v) {
  GalileiElement g;
  g.v = v;
  return g;
}

GalileiElement GalileiElement::time_shift(double tau) {
  GalileiElement g;
  g.tau = tau;
  return g;
}

Eigen::Matrix3d hat(const Vec3& w) {
  Eigen::Matrix3d m;
  m << 0.0, -w[2], w[1], w[2], 0.0, -w[0], -w[1], w[0], 0.0;
  return m;
}

Vec3 unhat(const Eigen::Matrix3d& m) {
  const double scale = std::max(1.0, maxabs(m));
  if (maxabs(m + m.transpose()) > 1e-9 * scale) {
    throw Error(ErrorKind::validation, "unhat: matrix is not antisymmetric");
  }
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

std::vector<std::pair<std::string, GalileiElement>> algebra_basis() {
  std::vector<std::pair<std::string, GalileiElement>> out;
  const char* axis = "xyz";
  for (int i = 0; i < 3; ++i) {
    out.emplace_back(std::string("w_") + axis[i],
                     GalileiElement::rotation(Vec3::Unit(i)));
  }
  for (int i = 0; i < 3; ++i) {
    out.emplace_back(std::string("v_") + axis[i],
                     GalileiElement::boost(Vec3::Unit(i)));
  }
  for (int i = 0; i < 3; ++i) {
    out.emplace_back(std::string("d_") + axis[i],
                     GalileiElement::translation(Vec3::Unit(i)));
  }
  out.emplace_back("tau", GalileiElement::time_shift(1.0));
  return out;
}

LiftKind LiftKind::galilei_M(double t0) {
  LiftKind kind;
  kind.tag = LiftTag::galilei_M;
  kind.t0 = t0;
  return kind;
}

LiftKind LiftKind::galilei_Me() {
  LiftKind kind;
  kind.tag = LiftTag::galilei_Me;
  return kind;
}

LiftKind LiftKind::alpha_Me(double alpha) {
  LiftKind kind;
  kind.tag = LiftTag::alpha_Me;
  kind.alpha = alpha;
  return kind;
}

void LiftKind::validate() const {
  if (tag == LiftTag::alpha_Me && alpha != 1.0 && alpha != -1.0) {
    throw Error(ErrorKind::validation, "alpha_Me lift requires alpha = +1 or -1");
  }
  if (tag == LiftTag::galilei_M && !std::isfinite(t0)) {
    throw Error(ErrorKind::validation, "galilei_M lift requires finite t0");
  }
}

std::string LiftKind::name() const {
  switch (tag) {
    case LiftTag::galilei_M:
      return "galilei_M";
    case LiftTag::galilei_Me:
      return "galilei_Me";
    case LiftTag::alpha_Me:
      return "alpha_Me";
  }
  return "unknown";
}

std::pair<Vec3, double> galilei_action_spacetime(const GalileiElement& g,
                                                 const Vec3& q, double t,
                                                 double eps) {
  require_finite_element(g);
  Vec3 qp = q + eps * (g.w.cross(q) - g.d - t * g.v);
  double tp = t - eps * g.tau;
  return {qp, tp};
}

std::pair<Vec3, double> alpha_action_spacetime(const GalileiElement& g, double alpha,
                                               const Vec3& q, double t, double eps,
                                               const Constants& k) {
  require_finite_element(g);
  k.validate();
  if (alpha != 1.0 && alpha != -1.0) {
    throw Error(ErrorKind::validation, "alpha action requires alpha = +1 or -1");
  }
  Vec3 qp = q + eps * (g.w.cross(q) - g.d - t * g.v);
  double tp = t + eps * (-alpha * g.v.dot(q) / (k.c * k.c) - g.tau);
  return {qp, tp};
}

QuadraticGenerator lift(const GalileiElement& g, const LiftKind& kind,
                        const Constants& k, double m) {
  require_finite_element(g);
  kind.validate();
  k.validate();
  const bool galilei =
      kind.tag == LiftTag::galilei_M || kind.tag == LiftTag::galilei_Me;
  if (galilei && !(std::isfinite(m) && m > 0.0)) {
    throw Error(ErrorKind::validation, "galilei lifts require m > 0");
  }

  QuadraticGenerator gen = QuadraticGenerator::zero(4);
  gen.a.block<3, 3>(0, 0) = hat(g.w);
  gen.Y.head<3>() = g.d;
  gen.Y[3] = g.tau;
  switch (kind.tag) {
    case LiftTag::galilei_M:
      gen.X.head<3>() = m * g.v;
      gen.Y.head<3>() += kind.t0 * g.v;
      break;
    case LiftTag::galilei_Me:
      gen.X.head<3>() = m * g.v;
      gen.a.block<1, 3>(3, 0) = g.v.transpose() / k.c;
      break;
    case LiftTag::alpha_Me:
      gen.a.block<1, 3>(3, 0) = g.v.transpose() / k.c;
      gen.a.block<3, 1>(0, 3) = kind.alpha * g.v / k.c;
      break;
  }
  gen.validate();
  return gen;
}

Vec8 lift_direction(const QuadraticGenerator& gen, const Vec8& z) {
  if (gen.n != 4) {
    throw Error(ErrorKind::dimension_mismatch, "lift_direction requires n = 4");
  }
  Eigen::Vector4d qt = z.head<4>();
  Eigen::Vector4d pt = z.tail<4>();
  Vec8 out;
  out.head<4>() = -gen.Y - gen.a.transpose() * qt + gen.c_mat * pt;
  out.tail<4>() = -gen.X - gen.b * qt + gen.a * pt;
  return out;
}

ScalarField momentum_map(const GalileiElement& g, const LiftKind& kind,
                         const Constants& k, double m) {
  require_finite_element(g);
  kind.validate();
  k.validate();
  const bool galilei =
      kind.tag == LiftTag::galilei_M || kind.tag == LiftTag::galilei_Me;
  if (galilei && !(std::isfinite(m) && m > 0.0)) {
    throw Error(ErrorKind::validation, "galilei momentum maps require m > 0");
  }
  const GalileiElement el = g;
  const LiftKind kd = kind;
  const double c = k.c;

  ScalarField f;
  f.eval = [el, kd, c, m](const Vec8& z) {
    Vec3 q(z[Q1], z[Q2], z[Q3]);
    Vec3 p(z[P1], z[P2], z[P3]);
    const double q0 = z[Q0];
    const double p0 = z[P0];
    double val = el.w.dot(q.cross(p)) - el.d.dot(p) - el.tau * p0;
    switch (kd.tag) {
      case LiftTag::galilei_M:
        val += el.v.dot(m * q - kd.t0 * p);
        break;
      case LiftTag::galilei_Me:
        val += el.v.dot(m * q - (q0 / c) * p);
        break;
      case LiftTag::alpha_Me:
        val -= (kd.alpha * p0 * el.v.dot(q) + q0 * el.v.dot(p)) / c;
        break;
    }
    return val;
  };
  f.grad = [el, kd, c, m](const Vec8& z) {
    Vec3 q(z[Q1], z[Q2], z[Q3]);
    Vec3 p(z[P1], z[P2], z[P3]);
    const double q0 = z[Q0];
    const double p0 = z[P0];
    Vec3 dq = p.cross(el.w);
    Vec3 dp = el.w.cross(q) - el.d;
    double dq0 = 0.0;
    double dp0 = -el.tau;
    switch (kd.tag) {
      case LiftTag::galilei_M:
        dq += m * el.v;
        dp += -kd.t0 * el.v;
        break;
      case LiftTag::galilei_Me:
        dq += m * el.v;
        dp += -(q0 / c) * el.v;
        dq0 += -el.v.dot(p) / c;
        break;
      case LiftTag::alpha_Me:
        dq += -(kd.alpha * p0 / c) * el.v;
        dp += -(q0 / c) * el.v;
        dq0 += -el.v.dot(p) / c;
        dp0 += -kd.alpha * el.v.dot(q) / c;
        break;
    }
    Vec8 out;
    out << dq, dq0, dp, dp0;
    return out;
  };
  return f;
}

double momentum_map_residual(const GalileiElement& g, const LiftKind& kind,
                             const Constants& k, double m, const Vec8& z) {
  QuadraticGenerator gen = lift(g, kind, k, m);
  Vec8 x = lift_direction(gen, z);
  Vec8 grad = momentum_map(g, kind, k, m).grad(z);
  Vec8 resid = grad + omega0() * x;
  return resid.cwiseAbs().maxCoeff();
}

GalileiElement algebra_bracket(const GalileiElement& g, const GalileiElement& h,
                               const LiftKind& kind, const Constants& k) {
  kind.validate();
  k.validate();
  // The bracket is mass-independent; the lifts here only recognize it, so any
  // positive internal mass works.
  const double m_internal = 1.0;
  QuadraticGenerator lg = lift(g, kind, k, m_internal);
  QuadraticGenerator lh = lift(h, kind, k, m_internal);

  auto affine = [](const QuadraticGenerator& gen) {
    Mat8 M = Mat8::Zero();
    M.block<4, 4>(0, 0) = -gen.a.transpose();
    M.block<4, 4>(0, 4) = gen.c_mat;
    M.block<4, 4>(4, 0) = -gen.b;
    M.block<4, 4>(4, 4) = gen.a;
    Vec8 b;
    b << -gen.Y, -gen.X;
    return std::make_pair(M, b);
  };
  auto [Mg, bg] = affine(lg);
  auto [Mh, bh] = affine(lh);

  // Orientation: X_[g,h] = -[X_g, X_h], so the bracket's affine data is the
  // plain matrix commutator.
  Mat8 Mstar = Mg * Mh - Mh * Mg;
  Vec8 bstar = Mg * bh - Mh * bg;

  const double scale =
      std::max({1.0, maxabs(Mg) * maxabs(Mh),
                maxabs(Mg) * bh.cwiseAbs().maxCoeff(),
                maxabs(Mh) * bg.cwiseAbs().maxCoeff()});
  const double tol = 1e-9 * scale;
  auto require = [&](bool ok) {
    if (!ok) {
      throw Error(ErrorKind::validation,
                  "algebra bracket does not close on the " + kind.name() +
                      " lift family");
    }
  };

  Eigen::Matrix4d astar = Mstar.block<4, 4>(4, 4);
  require(maxabs(Mstar.block<4, 4>(0, 0) + astar.transpose()) <= tol);
  require(maxabs(Mstar.block<4, 4>(0, 4)) <= tol);
  require(maxabs(Mstar.block<4, 4>(4, 0)) <= tol);
  require(std::abs(astar(3, 3)) <= tol);

  Eigen::Matrix3d spatial = astar.block<3, 3>(0, 0);
  require(maxabs(spatial + spatial.transpose()) <= tol);

  Eigen::Vector4d Ystar = -bstar.head<4>();
  Eigen::Vector4d Xstar = -bstar.tail<4>();

  GalileiElement out;
  out.w = Vec3(spatial(2, 1), spatial(0, 2), spatial(1, 0));
  out.tau = Ystar[3];
  switch (kind.tag) {
    case LiftTag::galilei_M:
      require(maxabs(astar.block<3, 1>(0, 3)) <= tol);
      require(maxabs(astar.block<1, 3>(3, 0)) <= tol);
      require(std::abs(Xstar[3]) <= tol);
      out.v = Xstar.head<3>() / m_internal;
      out.d = Ystar.head<3>() - kind.t0 * out.v;
      break;
    case LiftTag::galilei_Me:
      require(maxabs(astar.block<3, 1>(0, 3)) <= tol);
      out.v = k.c * astar.block<1, 3>(3, 0).transpose();
      require(std::abs(Xstar[3]) <= tol);
      require((Xstar.head<3>() / m_internal - out.v).cwiseAbs().maxCoeff() <= tol);
      out.d = Ystar.head<3>();
      break;
    case LiftTag::alpha_Me:
      out.v = k.c * astar.block<1, 3>(3, 0).transpose();
      require((astar.block<3, 1>(0, 3) - kind.alpha * out.v / k.c)
                  .cwiseAbs()
                  .maxCoeff() <= tol);
      require(Xstar.cwiseAbs().maxCoeff() <= tol);
      out.d = Ystar.head<3>();
      break;
  }
  return out;
}

double cocycle(const GalileiElement& g, const GalileiElement& h,
               const LiftKind& kind, const Constants& k, double m,
               const ExtendedState& z) {
  Vec8 zc = canonical_coords(z, k);
  ScalarField jg = momentum_map(g, kind, k, m);
  ScalarField jh = momentum_map(h, kind, k, m);
  GalileiElement br = algebra_bracket(g, h, kind, k);
  ScalarField jb = momentum_map(br, kind, k, m);
  return poisson_canonical(jg, jh, zc) - jb.eval(zc);
}

EquivarianceReport equivariance_verdict(const LiftKind& kind, const Constants& k,
                                        double m,
                                        const std::vector<ExtendedState>& samples) {
  if (samples.empty()) {
    throw Error(ErrorKind::validation,
                "equivariance verdict requires at least one sample state");
  }
  auto basis = algebra_basis();
  EquivarianceReport rep;
  rep.max_abs_cocycle = 0.0;
  for (size_t i = 0; i < basis.size(); ++i) {
    for (size_t j = i + 1; j < basis.size(); ++j) {
      CocyclePairEntry entry;
      entry.first = basis[i].first;
      entry.second = basis[j].first;
      double lo = 0.0, hi = 0.0;
      for (size_t s = 0; s < samples.size(); ++s) {
        double val =
            cocycle(basis[i].second, basis[j].second, kind, k, m, samples[s]);
        if (s == 0) {
          entry.value = val;
          lo = hi = val;
        } else {
          lo = std::min(lo, val);
          hi = std::max(hi, val);
        }
        if (std::abs(val) > rep.max_abs_cocycle) {
          rep.max_abs_cocycle = std::abs(val);
          rep.witness_first = entry.first;
          rep.witness_second = entry.second;
          rep.witness_value = val;
        }
      }
      entry.spread = hi - lo;
      rep.table.push_back(entry);
    }
  }
  rep.equivariant = rep.max_abs_cocycle <= 1e-7;
  return rep;
}

namespace {

// cos/sin (alpha=-1) or cosh/sinh (alpha=+1) of the boost angle, with the
// speed-limit check for the hyperbolic case.
struct BoostTrig {
  double cs = 1.0;  // cos or cosh
  double sn = 0.0;  // sin or sinh
};

BoostTrig boost_trig(double speed, double alpha, const Constants& k) {
  BoostTrig t;
  if (alpha == 1.0) {
    if (speed >= k.c) {
      throw Error(ErrorKind::domain,
                  "boost speed must satisfy |V| < c when alpha = +1");
    }
    double phi = std::atanh(speed / k.c);
    t.cs = std::cosh(phi);
    t.sn = std::sinh(phi);
  } else if (alpha == -1.0) {
    double theta = std::atan(speed / k.c);
    t.cs = std::cos(theta);
    t.sn = std::sin(theta);
  } else {
    throw Error(ErrorKind::validation, "boost requires alpha = +1 or -1");
  }
  return t;
}

}  // namespace

std::pair<Vec3, double> boost_finite(const Vec3& V, double alpha, const Vec3& q,
                                     double t, const Constants& k) {
  k.validate();
  require_finite_vec3(V, "boost velocity");
  const double speed = V.norm();
  if (speed == 0.0) {
    if (alpha != 1.0 && alpha != -1.0) {
      throw Error(ErrorKind::validation, "boost requires alpha = +1 or -1");
    }
    return {q, t};
  }
  BoostTrig tr = boost_trig(speed, alpha, k);
  Vec3 n = V / speed;
  const double q0 = k.c * t;
  const double qn = q.dot(n);
  Vec3 qp = q + (tr.cs - 1.0) * qn * n - tr.sn * q0 * n;
  double q0p = alpha == 1.0 ? tr.cs * q0 - tr.sn * qn : tr.cs * q0 + tr.sn * qn;
  return {qp, q0p / k.c};
}

std::pair<Vec3, double> boost_momentum_finite(const Vec3& V, double alpha,
                                              const Vec3& p, double p0,
                                              const Constants& k) {
  k.validate();
  require_finite_vec3(V, "boost velocity");
  const double speed = V.norm();
  if (speed == 0.0) {
    if (alpha != 1.0 && alpha != -1.0) {
      throw Error(ErrorKind::validation, "boost requires alpha = +1 or -1");
    }
    return {p, p0};
  }
  BoostTrig tr = boost_trig(speed, alpha, k);
  Vec3 n = V / speed;
  const double pn = p.dot(n);
  Vec3 pp;
  double p0p;
  if (alpha == 1.0) {
    pp = p + (tr.cs - 1.0) * pn * n + tr.sn * p0 * n;
    p0p = tr.cs * p0 + tr.sn * pn;
  } else {
    pp = p + (tr.cs - 1.0) * pn * n - tr.sn * p0 * n;
    p0p = tr.cs * p0 + tr.sn * pn;
  }
  return {pp, p0p};
}

double invariant_quadratic(const Vec3& p, double p0, double alpha) {
  return p.squaredNorm() - alpha * p0 * p0;
}

Mat8 boost_matrix(const Vec3& V, double alpha, const Constants& k) {
  k.validate();
  require_finite_vec3(V, "boost velocity");
  const double speed = V.norm();
  if (speed == 0.0) {
    if (alpha != 1.0 && alpha != -1.0) {
      throw Error(ErrorKind::validation, "boost requires alpha = +1 or -1");
    }
    return Mat8::Identity();
  }
  BoostTrig tr = boost_trig(speed, alpha, k);
  Vec3 n = V / speed;
  Eigen::Matrix3d proj = n * n.transpose();

  Eigen::Matrix4d A = Eigen::Matrix4d::Identity();
  A.block<3, 3>(0, 0) += (tr.cs - 1.0) * proj;
  A.block<3, 1>(0, 3) = -tr.sn * n;
  A(3, 3) = tr.cs;
  Eigen::Matrix4d B = Eigen::Matrix4d::Identity();
  B.block<3, 3>(0, 0) += (tr.cs - 1.0) * proj;
  B(3, 3) = tr.cs;
  B.block<1, 3>(3, 0) = tr.sn * n.transpose();
  if (alpha == 1.0) {
    A.block<1, 3>(3, 0) = -tr.sn * n.transpose();
    B.block<3, 1>(0, 3) = tr.sn * n;
  } else {
    A.block<1, 3>(3, 0) = tr.sn * n.transpose();
    B.block<3, 1>(0, 3) = -tr.sn * n;
  }

  Mat8 out = Mat8::Zero();
  out.block<4, 4>(0, 0) = A;
  out.block<4, 4>(4, 4) = B;
  return out;
}

Mat8 boost_steps_matrix(const Vec3& V, double alpha, int K, const Constants& k) {
  k.validate();
  require_finite_vec3(V, "boost velocity");
  if (K < 1) {
    throw Error(ErrorKind::validation, "boost step count must be at least 1");
  }
  const double speed = V.norm();
  if (speed == 0.0) {
    if (alpha != 1.0 && alpha != -1.0) {
      throw Error(ErrorKind::validation, "boost requires alpha = +1 or -1");
    }
    return Mat8::Identity();
  }
  double u;  // generator scale: c times the total boost angle
  if (alpha == 1.0) {
    if (speed >= k.c) {
      throw Error(ErrorKind::domain,
                  "boost speed must satisfy |V| < c when alpha = +1");
    }
    u = k.c * std::atanh(speed / k.c);
  } else if (alpha == -1.0) {
    u = k.c * std::atan(speed / k.c);
  } else {
    throw Error(ErrorKind::validation, "boost requires alpha = +1 or -1");
  }
  Vec3 n = V / speed;

  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  a.block<3, 1>(0, 3) = alpha * (u / k.c) * n;
  a.block<1, 3>(3, 0) = (u / k.c) * n.transpose();
  Mat8 G = Mat8::Zero();
  G.block<4, 4>(0, 0) = -a.transpose();
  G.block<4, 4>(4, 4) = a;

  Mat8 half = G / (2.0 * K);
  Mat8 step = (Mat8::Identity() - half).partialPivLu().solve(
      Mat8::Identity() + half);
  Mat8 out = Mat8::Identity();
  for (int i = 0; i < K; ++i) {
    out = step * out;
  }
  return out;
}

}  // namespace xphase
