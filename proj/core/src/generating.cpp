#include "xphase/generating.hpp"

#include <cmath>
#include <cstdio>

namespace xphase {

QuadraticGenerator QuadraticGenerator::zero(int n) {
  QuadraticGenerator g;
  g.n = n;
  g.X = Eigen::VectorXd::Zero(n);
  g.Y = Eigen::VectorXd::Zero(n);
  g.a = Eigen::MatrixXd::Zero(n, n);
  g.b = Eigen::MatrixXd::Zero(n, n);
  g.c_mat = Eigen::MatrixXd::Zero(n, n);
  return g;
}

void QuadraticGenerator::validate() const {
  if (n <= 0) throw Error(ErrorKind::validation, "generator: n must be positive");
  if (X.size() != n || Y.size() != n)
    throw Error(ErrorKind::dimension_mismatch, "generator: X/Y size != n");
  if (a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != n ||
      c_mat.rows() != n || c_mat.cols() != n)
    throw Error(ErrorKind::dimension_mismatch, "generator: matrix blocks must be n x n");
  if (b != b.transpose())
    throw Error(ErrorKind::validation, "generator: b must be exactly symmetric");
  if (c_mat != c_mat.transpose())
    throw Error(ErrorKind::validation, "generator: c_mat must be exactly symmetric");
  if (!X.allFinite() || !Y.allFinite() || !a.allFinite() || !b.allFinite() ||
      !c_mat.allFinite())
    throw Error(ErrorKind::non_finite, "generator: entries must be finite");
}

PhasePoint infinitesimal_map(const QuadraticGenerator& g, const PhasePoint& z,
                             double eps) {
  g.validate();
  if (z.n() != g.n || z.p.size() != g.n)
    throw Error(ErrorKind::dimension_mismatch, "infinitesimal_map: point size != n");
  PhasePoint out;
  out.q = z.q + eps * (-g.Y - g.a.transpose() * z.q + g.c_mat * z.p);
  out.p = z.p + eps * (-g.X - g.b * z.q + g.a * z.p);
  return out;
}

GeneratingFunction generator_phi(const QuadraticGenerator& g, double eps) {
  g.validate();
  GeneratingFunction phi;
  phi.dPhi_dq = [g, eps](const Eigen::VectorXd& q, const Eigen::VectorXd& pp,
                         double) -> Eigen::VectorXd {
    return eps * (g.X - g.a * pp + g.b * q);
  };
  phi.dPhi_dpp = [g, eps](const Eigen::VectorXd& q, const Eigen::VectorXd& pp,
                          double) -> Eigen::VectorXd {
    return eps * (-g.Y - g.a.transpose() * q + g.c_mat * pp);
  };
  phi.dPhi_dt = [](const Eigen::VectorXd&, const Eigen::VectorXd&, double) {
    return 0.0;
  };
  return phi;
}

namespace {

// d(residual)/d(p') where residual(p') = p' + dPhi/dq(q,p',t) - p, by central
// differences on dPhi/dq; exact for generators quadratic in p'.
Eigen::MatrixXd newton_jacobian(const GeneratingFunction& phi,
                                const Eigen::VectorXd& q, const Eigen::VectorXd& pp,
                                double t) {
  const int n = static_cast<int>(pp.size());
  Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(n, n);
  for (int j = 0; j < n; ++j) {
    const double h = 1e-7 * std::max(1.0, std::abs(pp[j]));
    Eigen::VectorXd lo = pp, hi = pp;
    hi[j] += h;
    lo[j] -= h;
    jac.col(j) += (phi.dPhi_dq(q, hi, t) - phi.dPhi_dq(q, lo, t)) / (2.0 * h);
  }
  return jac;
}

}  // namespace

PhasePoint apply_generating_function(const GeneratingFunction& phi,
                                     const PhasePoint& z, double t) {
  if (!phi.dPhi_dq || !phi.dPhi_dpp)
    throw Error(ErrorKind::validation, "apply_generating_function: partials missing");
  if (z.q.size() != z.p.size())
    throw Error(ErrorKind::dimension_mismatch, "apply_generating_function: q/p sizes differ");
  constexpr double kTol = 1e-12;
  constexpr int kMaxIter = 50;

  Eigen::VectorXd pp = z.p;  // start from the identity guess p' = p
  Eigen::VectorXd residual = pp + phi.dPhi_dq(z.q, pp, t) - z.p;
  double rnorm = residual.lpNorm<Eigen::Infinity>();
  for (int iter = 0; iter < kMaxIter && rnorm > kTol; ++iter) {
    const Eigen::MatrixXd jac = newton_jacobian(phi, z.q, pp, t);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible())
      throw Error(ErrorKind::singular_jacobian,
                  "apply_generating_function: singular Newton Jacobian");
    const Eigen::VectorXd step = lu.solve(residual);
    double scale = 1.0;
    for (int halving = 0; halving < 40; ++halving) {
      const Eigen::VectorXd trial = pp - scale * step;
      const Eigen::VectorXd trial_res = trial + phi.dPhi_dq(z.q, trial, t) - z.p;
      const double trial_norm = trial_res.lpNorm<Eigen::Infinity>();
      if (trial_norm <= rnorm || trial_norm <= kTol) {
        pp = trial;
        residual = trial_res;
        rnorm = trial_norm;
        break;
      }
      scale *= 0.5;  // damp on residual increase
      if (halving == 39) {
        pp = trial;
        residual = trial_res;
        rnorm = trial_norm;
      }
    }
  }
  if (!(rnorm <= kTol)) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", rnorm);
    throw Error(ErrorKind::newton_nonconvergence,
                std::string("apply_generating_function: final residual ") + buf);
  }
  PhasePoint out;
  out.q = z.q + phi.dPhi_dpp(z.q, pp, t);
  out.p = pp;
  return out;
}

double transformed_hamiltonian(const HamiltonianFn& H, const GeneratingFunction& phi,
                               const PhasePoint& z, double t) {
  if (!phi.dPhi_dt)
    throw Error(ErrorKind::validation, "transformed_hamiltonian: dPhi_dt missing");
  const PhasePoint image = apply_generating_function(phi, z, t);
  return H(z, t) + phi.dPhi_dt(z.q, image.p, t);
}

GeneratingFunction phi_galilei_boost(const Vec3& V, double m) {
  GeneratingFunction phi;
  phi.dPhi_dq = [V, m](const Eigen::VectorXd& q, const Eigen::VectorXd&,
                       double) -> Eigen::VectorXd {
    if (q.size() != 3)
      throw Error(ErrorKind::dimension_mismatch, "phi_galilei_boost: n must be 3");
    return m * Eigen::Vector3d(V);
  };
  phi.dPhi_dpp = [V](const Eigen::VectorXd&, const Eigen::VectorXd&,
                     double t) -> Eigen::VectorXd {
    return -t * Eigen::Vector3d(V);
  };
  phi.dPhi_dt = [V](const Eigen::VectorXd&, const Eigen::VectorXd& pp, double) {
    return -V.dot(Vec3(pp.head<3>()));
  };
  return phi;
}

GeneratingFunction phi_rotation(const Vec3& Omega) {
  GeneratingFunction phi;
  phi.dPhi_dq = [Omega](const Eigen::VectorXd&, const Eigen::VectorXd& pp,
                        double t) -> Eigen::VectorXd {
    return -t * Vec3(pp.head<3>()).cross(Omega);
  };
  phi.dPhi_dpp = [Omega](const Eigen::VectorXd& q, const Eigen::VectorXd&,
                         double t) -> Eigen::VectorXd {
    return -t * Omega.cross(Vec3(q.head<3>()));
  };
  phi.dPhi_dt = [Omega](const Eigen::VectorXd& q, const Eigen::VectorXd& pp, double) {
    return -Omega.dot(Vec3(q.head<3>()).cross(Vec3(pp.head<3>())));
  };
  return phi;
}

PhasePoint rotating_frame_step(const Vec3& Omega, double dt, const PhasePoint& z) {
  if (z.n() != 3 || z.p.size() != 3)
    throw Error(ErrorKind::dimension_mismatch, "rotating_frame_step: n must be 3");
  PhasePoint out;
  out.q = Vec3(z.q) - dt * Omega.cross(Vec3(z.q));
  out.p = Vec3(z.p) - dt * Omega.cross(Vec3(z.p));
  return out;
}

double symplecticity_residual(const PhaseMap& map, const PhasePoint& z, double h) {
  const int n = z.n();
  const int dim = 2 * n;
  auto coords = [n](const PhasePoint& w) {
    Eigen::VectorXd v(2 * n);
    v.head(n) = w.q;
    v.tail(n) = w.p;
    return v;
  };
  auto from_coords = [n](const Eigen::VectorXd& v) {
    PhasePoint w;
    w.q = v.head(n);
    w.p = v.tail(n);
    return w;
  };
  const Eigen::VectorXd z0 = coords(z);
  Eigen::MatrixXd jac(dim, dim);
  for (int j = 0; j < dim; ++j) {
    const double step = h * std::max(1.0, std::abs(z0[j]));
    Eigen::VectorXd hi = z0, lo = z0;
    hi[j] += step;
    lo[j] -= step;
    jac.col(j) =
        (coords(map(from_coords(hi))) - coords(map(from_coords(lo)))) / (2.0 * step);
  }
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim, dim);
  omega.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  omega.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return (jac.transpose() * omega * jac - omega).cwiseAbs().maxCoeff();
}

}  // namespace xphase
