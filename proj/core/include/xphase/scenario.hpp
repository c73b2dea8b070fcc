#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xphase/constants.hpp"
#include "xphase/generating.hpp"
#include "xphase/group.hpp"
#include "xphase/potentials.hpp"
#include "xphase/state.hpp"

namespace xphase {

enum class ScenarioKind {
  simulate,
  transform,
  cocycle,
  equivariance,
  maxwell_check,
  boost_table,
};

std::string to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_kind_from_string(const std::string& name);

// Catalog name or inline expression sources; parsed and validated at load.
struct PotentialSpec {
  bool catalog = false;
  std::string name;
  std::array<std::string, 3> a_src{"0", "0", "0"};
  std::string v_src = "0";
  std::map<std::string, double> params;

  Potentials build(const Constants& k) const;
};

// Directly supplied field components for maxwell-check; lets a scenario
// probe fields that are not derived from any potential.
struct FieldSpec {
  std::array<std::string, 3> b_src{"0", "0", "0"};
  std::array<std::string, 3> e_src{"0", "0", "0"};
  std::map<std::string, double> params;
};

struct StateSpec {
  Vec3 q{0.0, 0.0, 0.0};
  Vec3 p{0.0, 0.0, 0.0};
  double t = 0.0;
  double E = 0.0;

  ExtendedState to_state() const;
};

struct IntegratorSpec {
  std::string method = "rk4";  // "rk4" | "implicit-midpoint"
  double ds = 1e-3;
  long steps = 0;          // full steps of size ds
  double remainder = 0.0;  // trailing partial step when "s_total" was given
};

struct GeneratorSpec {
  std::string form;  // "galilei_boost" | "rotation" | "quadratic"
  Vec3 vec{0.0, 0.0, 0.0};
  QuadraticGenerator quad = QuadraticGenerator::zero(3);
  double eps = 1.0;  // scale of the quadratic form
};

struct CompositionSpec {
  Vec3 V{0.0, 0.0, 0.0};
  std::vector<int> K;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::simulate;
  Constants constants;
  std::uint64_t seed = 0;

  // simulate / transform
  std::string hamiltonian_form = "kinetic";
  std::optional<PotentialSpec> potential;
  std::optional<StateSpec> initial_state;
  IntegratorSpec integrator;
  std::optional<GeneratorSpec> generator;
  std::vector<int> composition_k;

  // cocycle / equivariance
  std::optional<LiftKind> lift;
  std::optional<std::pair<GalileiElement, GalileiElement>> pair;
  int sample_count = 0;
  std::vector<StateSpec> explicit_states;
  std::string expect_verdict;  // "", "equivariant", "not-equivariant"

  // maxwell-check
  std::optional<FieldSpec> fields;
  int maxwell_sample_count = 100;
  double sample_box = 1.0;
  double t_lo = 0.0;
  double t_hi = 1.0;
  std::optional<std::pair<double, double>> expect_div_b;  // (value, tol)

  // boost-table
  int table_count = 0;
  double speed_max = 0.9;  // fraction of c
  std::optional<CompositionSpec> composition;

  // residual gates: name -> tolerance; per-kind semantics are part of the
  // public report contract
  std::map<std::string, double> gates;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

struct GateOutcome {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool at_most = true;  // pass iff measured <= tolerance (>= when false)
  bool pass = true;
};

struct RunResult {
  bool gates_pass = true;
  std::vector<GateOutcome> gates;
  std::string report_json;  // exact bytes of the written report
  std::vector<std::string> files_written;
  std::string human_summary;
};

// Runs the scenario, writes <kind>.report.json (and <kind>.csv where the kind
// produces a table) into out_dir, creating it if needed. Byte-identical
// output for identical scenario + seed.
RunResult run(const Scenario& sc, const std::string& out_dir);

}  // namespace xphase
