#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "xphase/constants.hpp"
#include "xphase/error.hpp"

namespace xphase {

using Vec3 = Eigen::Vector3d;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

// Canonical slot order used everywhere: (q1,q2,q3,q0,p1,p2,p3,p0).
enum Slot : int { Q1 = 0, Q2 = 1, Q3 = 2, Q0 = 3, P1 = 4, P2 = 5, P3 = 6, P0 = 7 };

inline const char* slot_name(int i) {
  static const char* names[8] = {"q1", "q2", "q3", "q0", "p1", "p2", "p3", "p0"};
  return (i >= 0 && i < 8) ? names[i] : "?";
}

// A point of the extended phase-space: ordinary (q, p) plus dynamical (t, E).
// The conjugate pair is (q0, p0) = (c*t, -E/c).
struct ExtendedState {
  Vec3 q{0.0, 0.0, 0.0};
  Vec3 p{0.0, 0.0, 0.0};
  double t = 0.0;
  double E = 0.0;

  double q0(const Constants& k) const { return k.c * t; }
  double p0(const Constants& k) const { return -E / k.c; }

  bool finite() const {
    return q.allFinite() && p.allFinite() && std::isfinite(t) && std::isfinite(E);
  }
};

// Tangent components in the (q, p, t, E) chart.
struct Tangent8 {
  Vec3 dq{0.0, 0.0, 0.0};
  Vec3 dp{0.0, 0.0, 0.0};
  double dt = 0.0;
  double dE = 0.0;

  bool finite() const {
    return dq.allFinite() && dp.allFinite() && std::isfinite(dt) && std::isfinite(dE);
  }
};

inline Vec8 canonical_coords(const ExtendedState& s, const Constants& k) {
  k.validate();
  if (!s.finite())
    throw Error(ErrorKind::validation, "canonical_coords: non-finite state component");
  Vec8 z;
  z[Q1] = s.q[0]; z[Q2] = s.q[1]; z[Q3] = s.q[2]; z[Q0] = s.q0(k);
  z[P1] = s.p[0]; z[P2] = s.p[1]; z[P3] = s.p[2]; z[P0] = s.p0(k);
  return z;
}

inline ExtendedState from_canonical(const Vec8& z, const Constants& k) {
  k.validate();
  if (!z.allFinite())
    throw Error(ErrorKind::validation, "from_canonical: non-finite coordinate");
  ExtendedState s;
  s.q = Vec3{z[Q1], z[Q2], z[Q3]};
  s.p = Vec3{z[P1], z[P2], z[P3]};
  s.t = z[Q0] / k.c;
  s.E = -z[P0] * k.c;
  return s;
}

inline Vec8 tangent_coords(const Tangent8& v, const Constants& k) {
  Vec8 z;
  z[Q1] = v.dq[0]; z[Q2] = v.dq[1]; z[Q3] = v.dq[2]; z[Q0] = k.c * v.dt;
  z[P1] = v.dp[0]; z[P2] = v.dp[1]; z[P3] = v.dp[2]; z[P0] = -v.dE / k.c;
  return z;
}

inline Tangent8 tangent_from_coords(const Vec8& z, const Constants& k) {
  Tangent8 v;
  v.dq = Vec3{z[Q1], z[Q2], z[Q3]};
  v.dp = Vec3{z[P1], z[P2], z[P3]};
  v.dt = z[Q0] / k.c;
  v.dE = -z[P0] * k.c;
  return v;
}

// Matrix of the canonical two-form in the slot order above: w(X,Y) = X^T W Y.
inline Mat8 omega0() {
  Mat8 w = Mat8::Zero();
  w.block<4, 4>(0, 4) = Eigen::Matrix4d::Identity();
  w.block<4, 4>(4, 0) = -Eigen::Matrix4d::Identity();
  return w;
}

}  // namespace xphase
