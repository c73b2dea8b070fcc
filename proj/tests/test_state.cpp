#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "xphase/error.hpp"
#include "xphase/state.hpp"

using namespace xphase;

TEST_CASE("slot layout is (q1,q2,q3,q0,p1,p2,p3,p0)") {
  Constants k;
  k.c = 2.0;
  ExtendedState s;
  s.q = Vec3(1.0, 2.0, 3.0);
  s.p = Vec3(4.0, 5.0, 6.0);
  s.t = 7.0;
  s.E = 8.0;

  Vec8 z = canonical_coords(s, k);
  CHECK(z[Q1] == 1.0);
  CHECK(z[Q2] == 2.0);
  CHECK(z[Q3] == 3.0);
  CHECK(z[Q0] == 14.0);  // c t
  CHECK(z[P1] == 4.0);
  CHECK(z[P2] == 5.0);
  CHECK(z[P3] == 6.0);
  CHECK(z[P0] == -4.0);  // -E/c
}

TEST_CASE("canonical roundtrip is exact") {
  Constants k;
  k.c = 3.0;
  ExtendedState s;
  s.q = Vec3(0.1, -0.2, 0.3);
  s.p = Vec3(-1.5, 2.5, 0.0);
  s.t = -0.7;
  s.E = 1.9;

  ExtendedState r = from_canonical(canonical_coords(s, k), k);
  CHECK(r.q == s.q);
  CHECK(r.p == s.p);
  CHECK(r.t == doctest::Approx(s.t).epsilon(1e-15));
  CHECK(r.E == doctest::Approx(s.E).epsilon(1e-15));
}

TEST_CASE("tangent coordinates follow the same chart") {
  Constants k;
  k.c = 2.0;
  Tangent8 v;
  v.dq = Vec3(1.0, 0.0, 0.0);
  v.dp = Vec3(0.0, 1.0, 0.0);
  v.dt = 3.0;
  v.dE = 4.0;

  Vec8 z = tangent_coords(v, k);
  CHECK(z[Q1] == 1.0);
  CHECK(z[Q0] == 6.0);
  CHECK(z[P2] == 1.0);
  CHECK(z[P0] == -2.0);

  Tangent8 r = tangent_from_coords(z, k);
  CHECK(r.dq == v.dq);
  CHECK(r.dp == v.dp);
  CHECK(r.dt == v.dt);
  CHECK(r.dE == v.dE);
}

TEST_CASE("omega0 is the standard block form") {
  Mat8 om = omega0();
  CHECK((om + om.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((om * om + Mat8::Identity()).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 4; ++i) {
    CHECK(om(i, i + 4) == 1.0);
    CHECK(om(i + 4, i) == -1.0);
  }
  // {q1, p1} pairing fixes the bracket orientation for everything downstream
  Vec8 df = Vec8::Zero();
  df[Q1] = 1.0;
  Vec8 dg = Vec8::Zero();
  dg[P1] = 1.0;
  CHECK(df.dot(om * dg) == 1.0);
}

TEST_CASE("non-finite states are rejected") {
  Constants k;
  ExtendedState s;
  s.q = Vec3(1.0, std::nan(""), 0.0);
  CHECK_THROWS_AS(canonical_coords(s, k), Error);
  try {
    canonical_coords(s, k);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
  }
}

TEST_CASE("constants validate") {
  Constants k;
  CHECK_NOTHROW(k.validate());
  k.alpha = 0.5;
  CHECK_THROWS_AS(k.validate(), Error);
  k = Constants{};
  k.c = -1.0;
  CHECK_THROWS_AS(k.validate(), Error);
}
