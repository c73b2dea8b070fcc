#include <benchmark/benchmark.h>

#include <memory>

#include "xphase/em.hpp"
#include "xphase/expr.hpp"
#include "xphase/group.hpp"
#include "xphase/numdiff.hpp"
#include "xphase/potentials.hpp"

using namespace xphase;

static void BM_ExprEval(benchmark::State& state) {
  expr::Ast ast = expr::parse("sin(q1 - t) * exp(q2) + q3^2 / (1 + q1^2)");
  Vec3 q(0.3, -0.2, 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expr::eval(ast, q, 0.4, {}));
  }
}
BENCHMARK(BM_ExprEval);

static void BM_ExprDiff(benchmark::State& state) {
  expr::Ast ast = expr::parse("sin(q1 - t) * exp(q2) + q3^2 / (1 + q1^2)");
  for (auto _ : state) {
    benchmark::DoNotOptimize(expr::diff(ast, 0));
  }
}
BENCHMARK(BM_ExprDiff);

static void BM_EmRhs(benchmark::State& state) {
  Constants k;
  auto derivs = std::make_shared<const PotentialDerivs>(
      catalog_potentials("plane-wave", k));
  ScalarField H = hamiltonian_kinetic(k.m);
  Rhs8 rhs = make_em_rhs(H, derivs, k);
  ExtendedState s;
  s.q = Vec3(0.3, -0.2, 0.7);
  s.p = Vec3(1.0, 0.2, -0.4);
  s.E = 0.6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs(s));
  }
}
BENCHMARK(BM_EmRhs);

static void BM_IntegrateRk4(benchmark::State& state) {
  Constants k;
  auto derivs = std::make_shared<const PotentialDerivs>(
      catalog_potentials("uniform-b", k));
  ScalarField H = hamiltonian_kinetic(k.m);
  Rhs8 rhs = make_em_rhs(H, derivs, k);
  ExtendedState s;
  s.p = Vec3(1.0, 0.0, 0.0);
  s.E = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(rhs, nullptr, s, 1e-3, 100, "rk4"));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_IntegrateRk4);

static void BM_PoissonField(benchmark::State& state) {
  Constants k;
  Potentials pot = catalog_potentials("uniform-b", k);
  ScalarField f = coordinate_field(P1);
  ScalarField g = coordinate_field(P2);
  ExtendedState s;
  s.q = Vec3(0.3, -0.2, 0.7);
  s.p = Vec3(1.0, 0.2, -0.4);
  s.E = 0.6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(poisson_field(f, g, pot, s, k));
  }
}
BENCHMARK(BM_PoissonField);

static void BM_BoostSteps(benchmark::State& state) {
  Constants k;
  Vec3 V(0.6, 0.0, 0.0);
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(boost_steps_matrix(V, 1.0, K, k));
  }
}
BENCHMARK(BM_BoostSteps)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
