#include "xphase/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"
#include "xphase/em.hpp"
#include "xphase/error.hpp"
#include "xphase/numdiff.hpp"
#include "xphase/rng.hpp"

namespace xphase {

using Json = nlohmann::json;

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::simulate:
      return "simulate";
    case ScenarioKind::transform:
      return "transform";
    case ScenarioKind::cocycle:
      return "cocycle";
    case ScenarioKind::equivariance:
      return "equivariance";
    case ScenarioKind::maxwell_check:
      return "maxwell-check";
    case ScenarioKind::boost_table:
      return "boost-table";
  }
  return "unknown";
}

std::optional<ScenarioKind> scenario_kind_from_string(const std::string& name) {
  if (name == "simulate") return ScenarioKind::simulate;
  if (name == "transform") return ScenarioKind::transform;
  if (name == "cocycle") return ScenarioKind::cocycle;
  if (name == "equivariance") return ScenarioKind::equivariance;
  if (name == "maxwell-check") return ScenarioKind::maxwell_check;
  if (name == "boost-table") return ScenarioKind::boost_table;
  return std::nullopt;
}

Potentials PotentialSpec::build(const Constants& k) const {
  if (catalog) {
    return catalog_potentials(name, k);
  }
  return make_potentials(a_src, v_src, params);
}

ExtendedState StateSpec::to_state() const {
  ExtendedState s;
  s.q = q;
  s.p = p;
  s.t = t;
  s.E = E;
  return s;
}

namespace {

std::string subkey(const std::string& where, const std::string& name) {
  return where.empty() ? name : where + "." + name;
}

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
  throw Error::keyed(ErrorKind::schema, key, msg);
}

// Rethrows a library error as a keyed error so the offending config key is
// named; expression offsets are folded into the message.
[[noreturn]] void rethrow_keyed(const Error& e, const std::string& key) {
  std::string msg = e.what();
  if (e.offset()) {
    msg += " (offset " + std::to_string(*e.offset()) + ")";
  }
  throw Error::keyed(e.kind(), key, msg);
}

void check_keys(const Json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) {
      if (it.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      fail(subkey(where, it.key()), "unknown key");
    }
  }
}

const Json& require_field(const Json& obj, const std::string& where,
                          const char* name) {
  if (!obj.contains(name)) {
    fail(subkey(where, name), "missing required field");
  }
  return obj.at(name);
}

const Json& require_object(const Json& j, const std::string& key) {
  if (!j.is_object()) {
    fail(key, "expected an object");
  }
  return j;
}

double number_at(const Json& v, const std::string& key) {
  if (!v.is_number()) {
    fail(key, "expected a number");
  }
  double d = v.get<double>();
  if (!std::isfinite(d)) {
    fail(key, "must be finite");
  }
  return d;
}

double get_number(const Json& obj, const std::string& where, const char* name,
                  std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(name)) {
    if (fallback) return *fallback;
    fail(subkey(where, name), "missing required number");
  }
  return number_at(obj.at(name), subkey(where, name));
}

long get_integer(const Json& obj, const std::string& where, const char* name,
                 long lo, long hi, std::optional<long> fallback = std::nullopt) {
  if (!obj.contains(name)) {
    if (fallback) return *fallback;
    fail(subkey(where, name), "missing required integer");
  }
  const Json& v = obj.at(name);
  if (!v.is_number_integer()) {
    fail(subkey(where, name), "expected an integer");
  }
  long n = v.get<long>();
  if (n < lo || n > hi) {
    fail(subkey(where, name), "out of range [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
  }
  return n;
}

std::string get_string(const Json& obj, const std::string& where,
                       const char* name) {
  const Json& v = require_field(obj, where, name);
  if (!v.is_string()) {
    fail(subkey(where, name), "expected a string");
  }
  return v.get<std::string>();
}

Vec3 vec3_at(const Json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 3) {
    fail(key, "expected an array of 3 numbers");
  }
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    out[i] = number_at(v.at(i), key + "[" + std::to_string(i) + "]");
  }
  return out;
}

Vec3 get_vec3(const Json& obj, const std::string& where, const char* name,
              std::optional<Vec3> fallback = std::nullopt) {
  if (!obj.contains(name)) {
    if (fallback) return *fallback;
    fail(subkey(where, name), "missing required array of 3 numbers");
  }
  return vec3_at(obj.at(name), subkey(where, name));
}

std::array<std::string, 3> get_str3(const Json& obj, const std::string& where,
                                    const char* name) {
  const Json& v = require_field(obj, where, name);
  const std::string key = subkey(where, name);
  if (!v.is_array() || v.size() != 3) {
    fail(key, "expected an array of 3 expression strings");
  }
  std::array<std::string, 3> out;
  for (int i = 0; i < 3; ++i) {
    const Json& e = v.at(i);
    if (!e.is_string()) {
      fail(key + "[" + std::to_string(i) + "]", "expected a string");
    }
    out[i] = e.get<std::string>();
  }
  return out;
}

std::map<std::string, double> get_params(const Json& obj, const std::string& where) {
  std::map<std::string, double> out;
  if (!obj.contains("params")) return out;
  const Json& v = obj.at("params");
  const std::string key = subkey(where, "params");
  if (!v.is_object()) {
    fail(key, "expected an object of numbers");
  }
  for (auto it = v.begin(); it != v.end(); ++it) {
    out[it.key()] = number_at(it.value(), subkey(key, it.key()));
  }
  return out;
}

Eigen::Matrix3d get_mat3(const Json& obj, const std::string& where,
                         const char* name) {
  const std::string key = subkey(where, name);
  if (!obj.contains(name)) {
    return Eigen::Matrix3d::Zero();
  }
  const Json& v = obj.at(name);
  if (!v.is_array() || v.size() != 3) {
    fail(key, "expected a 3x3 array of numbers");
  }
  Eigen::Matrix3d out;
  for (int i = 0; i < 3; ++i) {
    const Json& row = v.at(i);
    if (!row.is_array() || row.size() != 3) {
      fail(key + "[" + std::to_string(i) + "]", "expected an array of 3 numbers");
    }
    for (int j = 0; j < 3; ++j) {
      out(i, j) = number_at(row.at(j), key + "[" + std::to_string(i) + "][" +
                                           std::to_string(j) + "]");
    }
  }
  return out;
}

Constants parse_constants(const Json& root) {
  Constants k;
  if (!root.contains("constants")) return k;
  const Json& v = require_object(root.at("constants"), "constants");
  check_keys(v, "constants", {"c", "e", "m", "alpha"});
  k.c = get_number(v, "constants", "c", k.c);
  if (k.c <= 0.0) fail("constants.c", "must be positive");
  k.e = get_number(v, "constants", "e", k.e);
  k.m = get_number(v, "constants", "m", k.m);
  k.alpha = get_number(v, "constants", "alpha", k.alpha);
  if (k.alpha != 1.0 && k.alpha != -1.0) {
    fail("constants.alpha", "must be +1 or -1");
  }
  return k;
}

void require_positive_mass(const Constants& k, const std::string& why) {
  if (!(std::isfinite(k.m) && k.m > 0.0)) {
    fail("constants.m", why);
  }
}

PotentialSpec parse_potential(const Json& j, const std::string& where,
                              const Constants& k) {
  PotentialSpec ps;
  if (j.is_string()) {
    ps.catalog = true;
    ps.name = j.get<std::string>();
    if (!is_catalog_name(ps.name)) {
      fail(where, "unknown catalog potential \"" + ps.name + "\"");
    }
    return ps;
  }
  if (!j.is_object()) {
    fail(where, "expected a catalog name or an inline potential object");
  }
  check_keys(j, where, {"A", "V", "params"});
  ps.a_src = get_str3(j, where, "A");
  ps.v_src = get_string(j, where, "V");
  ps.params = get_params(j, where);
  std::set<std::string> names;
  for (const auto& kv : ps.params) names.insert(kv.first);
  for (int i = 0; i < 3; ++i) {
    try {
      expr::parse(ps.a_src[i], names);
    } catch (const Error& e) {
      rethrow_keyed(e, subkey(where, "A[" + std::to_string(i) + "]"));
    }
  }
  try {
    expr::parse(ps.v_src, names);
  } catch (const Error& e) {
    rethrow_keyed(e, subkey(where, "V"));
  }
  try {
    ps.build(k);
  } catch (const Error& e) {
    rethrow_keyed(e, where);
  }
  return ps;
}

FieldSpec parse_fields(const Json& j, const std::string& where) {
  const Json& v = require_object(j, where);
  check_keys(v, where, {"B", "E", "params"});
  FieldSpec fs;
  fs.b_src = get_str3(v, where, "B");
  fs.e_src = get_str3(v, where, "E");
  fs.params = get_params(v, where);
  std::set<std::string> names;
  for (const auto& kv : fs.params) names.insert(kv.first);
  for (int i = 0; i < 3; ++i) {
    try {
      expr::parse(fs.b_src[i], names);
    } catch (const Error& e) {
      rethrow_keyed(e, subkey(where, "B[" + std::to_string(i) + "]"));
    }
    try {
      expr::parse(fs.e_src[i], names);
    } catch (const Error& e) {
      rethrow_keyed(e, subkey(where, "E[" + std::to_string(i) + "]"));
    }
  }
  return fs;
}

StateSpec parse_state(const Json& j, const std::string& where, bool allow_energy) {
  const Json& v = require_object(j, where);
  if (allow_energy) {
    check_keys(v, where, {"q", "p", "t", "E"});
  } else {
    check_keys(v, where, {"q", "p", "t"});
  }
  StateSpec st;
  st.q = get_vec3(v, where, "q");
  st.p = get_vec3(v, where, "p");
  st.t = get_number(v, where, "t", 0.0);
  if (allow_energy) {
    st.E = get_number(v, where, "E", 0.0);
  }
  return st;
}

GalileiElement parse_element(const Json& j, const std::string& where) {
  const Json& v = require_object(j, where);
  check_keys(v, where, {"w", "d", "v", "tau"});
  GalileiElement el;
  el.w = get_vec3(v, where, "w", Vec3{0.0, 0.0, 0.0});
  el.d = get_vec3(v, where, "d", Vec3{0.0, 0.0, 0.0});
  el.v = get_vec3(v, where, "v", Vec3{0.0, 0.0, 0.0});
  el.tau = get_number(v, where, "tau", 0.0);
  return el;
}

LiftKind parse_lift(const Json& j, const Constants& k) {
  const Json& v = require_object(j, "lift");
  check_keys(v, "lift", {"kind", "t0"});
  std::string name = get_string(v, "lift", "kind");
  if (name == "galilei_M") {
    double t0 = get_number(v, "lift", "t0", 0.0);
    require_positive_mass(k, "galilei lifts require m > 0");
    return LiftKind::galilei_M(t0);
  }
  if (v.contains("t0")) {
    fail("lift.t0", "only valid for kind galilei_M");
  }
  if (name == "galilei_Me") {
    require_positive_mass(k, "galilei lifts require m > 0");
    return LiftKind::galilei_Me();
  }
  if (name == "alpha_Me") {
    return LiftKind::alpha_Me(k.alpha);
  }
  fail("lift.kind", "expected galilei_M, galilei_Me or alpha_Me");
}

void parse_samples(const Json& root, Scenario& sc) {
  const Json& v = require_object(require_field(root, "", "samples"), "samples");
  check_keys(v, "samples", {"count", "states"});
  const bool has_count = v.contains("count");
  const bool has_states = v.contains("states");
  if (has_count == has_states) {
    fail("samples", "exactly one of count or states is required");
  }
  if (has_count) {
    sc.sample_count = static_cast<int>(get_integer(v, "samples", "count", 1, 100000));
    return;
  }
  const Json& states = v.at("states");
  if (!states.is_array() || states.empty()) {
    fail("samples.states", "expected a non-empty array of states");
  }
  for (size_t i = 0; i < states.size(); ++i) {
    sc.explicit_states.push_back(
        parse_state(states.at(i), "samples.states[" + std::to_string(i) + "]",
                    /*allow_energy=*/true));
  }
}

std::map<std::string, double> parse_gates(const Json& root,
                                          std::initializer_list<const char*> allowed) {
  std::map<std::string, double> out;
  if (!root.contains("gates")) return out;
  const Json& v = require_object(root.at("gates"), "gates");
  check_keys(v, "gates", allowed);
  for (auto it = v.begin(); it != v.end(); ++it) {
    double tol = number_at(it.value(), subkey("gates", it.key()));
    if (tol <= 0.0) {
      fail(subkey("gates", it.key()), "tolerance must be positive");
    }
    out[it.key()] = tol;
  }
  return out;
}

std::string parse_hamiltonian(const Json& root, const Constants& k) {
  std::string form = "kinetic";
  if (root.contains("hamiltonian")) {
    const Json& v = require_object(root.at("hamiltonian"), "hamiltonian");
    check_keys(v, "hamiltonian", {"form"});
    form = get_string(v, "hamiltonian", "form");
    if (form != "kinetic" && form != "relativistic") {
      fail("hamiltonian.form", "expected kinetic or relativistic");
    }
  }
  require_positive_mass(k, "dynamics require m > 0");
  return form;
}

IntegratorSpec parse_integrator(const Json& root) {
  const Json& v =
      require_object(require_field(root, "", "integrator"), "integrator");
  check_keys(v, "integrator", {"method", "ds", "steps", "s_total"});
  IntegratorSpec spec;
  spec.method = get_string(v, "integrator", "method");
  if (spec.method != "rk4" && spec.method != "implicit-midpoint") {
    fail("integrator.method", "expected rk4 or implicit-midpoint");
  }
  spec.ds = get_number(v, "integrator", "ds");
  if (spec.ds <= 0.0) {
    fail("integrator.ds", "must be positive");
  }
  const bool has_steps = v.contains("steps");
  const bool has_total = v.contains("s_total");
  if (has_steps == has_total) {
    fail("integrator", "exactly one of steps or s_total is required");
  }
  if (has_steps) {
    spec.steps = get_integer(v, "integrator", "steps", 1, 100000000);
    return spec;
  }
  double s_total = get_number(v, "integrator", "s_total");
  if (s_total <= 0.0) {
    fail("integrator.s_total", "must be positive");
  }
  double n = std::floor(s_total / spec.ds);
  if (n > 1e8) {
    fail("integrator.s_total", "requires more than 1e8 steps");
  }
  spec.steps = static_cast<long>(n);
  spec.remainder = s_total - n * spec.ds;
  if (spec.remainder < 1e-9 * spec.ds) {
    spec.remainder = 0.0;
  }
  if (spec.steps == 0 && spec.remainder == 0.0) {
    fail("integrator.s_total", "too small for the step size");
  }
  return spec;
}

GeneratorSpec parse_generator(const Json& root, const Constants& k) {
  const Json& v =
      require_object(require_field(root, "", "generator"), "generator");
  GeneratorSpec gs;
  gs.form = get_string(v, "generator", "form");
  if (gs.form == "galilei_boost") {
    check_keys(v, "generator", {"form", "V"});
    gs.vec = get_vec3(v, "generator", "V");
    require_positive_mass(k, "galilei_boost generator requires m > 0");
    return gs;
  }
  if (gs.form == "rotation") {
    check_keys(v, "generator", {"form", "Omega"});
    gs.vec = get_vec3(v, "generator", "Omega");
    return gs;
  }
  if (gs.form == "quadratic") {
    check_keys(v, "generator", {"form", "X", "Y", "a", "b", "c", "eps"});
    gs.quad = QuadraticGenerator::zero(3);
    Vec3 x = get_vec3(v, "generator", "X", Vec3{0.0, 0.0, 0.0});
    Vec3 y = get_vec3(v, "generator", "Y", Vec3{0.0, 0.0, 0.0});
    gs.quad.X = x;
    gs.quad.Y = y;
    gs.quad.a = get_mat3(v, "generator", "a");
    gs.quad.b = get_mat3(v, "generator", "b");
    gs.quad.c_mat = get_mat3(v, "generator", "c");
    gs.eps = get_number(v, "generator", "eps", 1.0);
    try {
      gs.quad.validate();
    } catch (const Error& e) {
      rethrow_keyed(e, "generator");
    }
    return gs;
  }
  fail("generator.form", "expected galilei_boost, rotation or quadratic");
}

std::vector<int> parse_k_list(const Json& v, const std::string& key) {
  if (!v.is_array() || v.empty() || v.size() > 16) {
    fail(key, "expected an array of 1..16 integers");
  }
  std::vector<int> out;
  for (size_t i = 0; i < v.size(); ++i) {
    const Json& e = v.at(i);
    const std::string ekey = key + "[" + std::to_string(i) + "]";
    if (!e.is_number_integer()) {
      fail(ekey, "expected an integer");
    }
    long n = e.get<long>();
    if (n < 1 || n > 1000000) {
      fail(ekey, "out of range [1, 1000000]");
    }
    out.push_back(static_cast<int>(n));
  }
  return out;
}

void check_dispersion(const StateSpec& st, const Constants& k,
                      const std::string& key) {
  const double p0 = -st.E / k.c;
  const double mcc = k.m * k.m * k.c * k.c;
  const double resid = st.p.squaredNorm() - k.alpha * p0 * p0 + k.alpha * mcc;
  if (std::abs(resid) > 1e-12 * std::max(1.0, mcc)) {
    fail(key,
         "state violates the dispersion constraint p^2 - alpha p0^2 = "
         "-alpha m^2 c^2");
  }
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::schema, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw Error(ErrorKind::schema, "scenario must be a JSON object");
  }
  if (!root.contains("schema")) {
    fail("schema", "missing required field");
  }
  if (!root.at("schema").is_string() ||
      root.at("schema").get<std::string>() != "xphase/1") {
    fail("schema", "unsupported schema (expected \"xphase/1\")");
  }
  std::string kind_str = get_string(root, "", "kind");
  auto kind = scenario_kind_from_string(kind_str);
  if (!kind) {
    fail("kind", "unknown scenario kind \"" + kind_str + "\"");
  }

  Scenario sc;
  sc.kind = *kind;
  sc.constants = parse_constants(root);
  if (root.contains("seed")) {
    const Json& v = root.at("seed");
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<long long>() < 0)) {
      fail("seed", "expected a non-negative integer");
    }
    sc.seed = v.get<std::uint64_t>();
  }

  switch (sc.kind) {
    case ScenarioKind::simulate: {
      check_keys(root, "",
                 {"schema", "kind", "constants", "seed", "hamiltonian",
                  "potential", "initial_state", "integrator", "gates"});
      sc.hamiltonian_form = parse_hamiltonian(root, sc.constants);
      sc.potential = parse_potential(require_field(root, "", "potential"),
                                     "potential", sc.constants);
      sc.initial_state = parse_state(require_field(root, "", "initial_state"),
                                     "initial_state", /*allow_energy=*/true);
      if (sc.hamiltonian_form == "relativistic") {
        check_dispersion(*sc.initial_state, sc.constants, "initial_state");
      }
      sc.integrator = parse_integrator(root);
      sc.gates = parse_gates(
          root, {"return_to_start", "energy_drift", "energy_rate", "he_drift"});
      break;
    }
    case ScenarioKind::transform: {
      check_keys(root, "",
                 {"schema", "kind", "constants", "seed", "hamiltonian",
                  "generator", "state", "composition_K", "gates"});
      sc.hamiltonian_form = parse_hamiltonian(root, sc.constants);
      sc.generator = parse_generator(root, sc.constants);
      sc.initial_state = parse_state(require_field(root, "", "state"), "state",
                                     /*allow_energy=*/false);
      if (root.contains("composition_K")) {
        sc.composition_k = parse_k_list(root.at("composition_K"), "composition_K");
      } else {
        sc.composition_k = {10, 100, 1000};
      }
      sc.gates = parse_gates(root, {"symplecticity"});
      break;
    }
    case ScenarioKind::cocycle: {
      check_keys(root, "",
                 {"schema", "kind", "constants", "seed", "lift", "pair",
                  "samples", "gates"});
      sc.lift = parse_lift(require_field(root, "", "lift"), sc.constants);
      const Json& pv = require_object(require_field(root, "", "pair"), "pair");
      check_keys(pv, "pair", {"first", "second"});
      sc.pair = {parse_element(require_field(pv, "pair", "first"), "pair.first"),
                 parse_element(require_field(pv, "pair", "second"), "pair.second")};
      parse_samples(root, sc);
      sc.gates = parse_gates(root, {"max_abs"});
      break;
    }
    case ScenarioKind::equivariance: {
      check_keys(root, "",
                 {"schema", "kind", "constants", "seed", "lift", "samples",
                  "expect_verdict", "gates"});
      sc.lift = parse_lift(require_field(root, "", "lift"), sc.constants);
      parse_samples(root, sc);
      if (root.contains("expect_verdict")) {
        const Json& v = root.at("expect_verdict");
        if (!v.is_string()) {
          fail("expect_verdict", "expected a string");
        }
        sc.expect_verdict = v.get<std::string>();
        if (sc.expect_verdict != "equivariant" &&
            sc.expect_verdict != "not-equivariant") {
          fail("expect_verdict", "expected equivariant or not-equivariant");
        }
      }
      sc.gates = parse_gates(root, {});
      break;
    }
    case ScenarioKind::maxwell_check: {
      check_keys(root, "",
                 {"schema", "kind", "constants", "seed", "potential", "fields",
                  "samples", "expect_div_b", "gates"});
      const bool has_pot = root.contains("potential");
      const bool has_fields = root.contains("fields");
      if (has_pot == has_fields) {
        fail("potential", "exactly one of potential or fields is required");
      }
      if (has_pot) {
        sc.potential =
            parse_potential(root.at("potential"), "potential", sc.constants);
      } else {
        sc.fields = parse_fields(root.at("fields"), "fields");
      }
      if (root.contains("samples")) {
        const Json& v = require_object(root.at("samples"), "samples");
        check_keys(v, "samples", {"count", "box", "t_range"});
        sc.maxwell_sample_count =
            static_cast<int>(get_integer(v, "samples", "count", 1, 100000, 100));
        sc.sample_box = get_number(v, "samples", "box", 1.0);
        if (sc.sample_box <= 0.0) {
          fail("samples.box", "must be positive");
        }
        if (v.contains("t_range")) {
          const Json& tr = v.at("t_range");
          if (!tr.is_array() || tr.size() != 2) {
            fail("samples.t_range", "expected [lo, hi]");
          }
          sc.t_lo = number_at(tr.at(0), "samples.t_range[0]");
          sc.t_hi = number_at(tr.at(1), "samples.t_range[1]");
          if (sc.t_hi < sc.t_lo) {
            fail("samples.t_range", "hi must be >= lo");
          }
        }
      }
      if (root.contains("expect_div_b")) {
        const Json& v = require_object(root.at("expect_div_b"), "expect_div_b");
        check_keys(v, "expect_div_b", {"value", "tol"});
        double value = get_number(v, "expect_div_b", "value");
        double tol = get_number(v, "expect_div_b", "tol");
        if (tol <= 0.0) {
          fail("expect_div_b.tol", "must be positive");
        }
        sc.expect_div_b = {value, tol};
      }
      sc.gates = parse_gates(root, {"homogeneous_max", "vacuum_max"});
      if (sc.gates.count("vacuum_max") && !has_pot) {
        fail("gates.vacuum_max", "requires a potential");
      }
      break;
    }
    case ScenarioKind::boost_table: {
      check_keys(root, "",
                 {"schema", "kind", "constants", "seed", "table", "composition",
                  "gates"});
      require_positive_mass(sc.constants, "boost tables require m > 0");
      const Json& tv = require_object(require_field(root, "", "table"), "table");
      check_keys(tv, "table", {"count", "speed_max"});
      sc.table_count =
          static_cast<int>(get_integer(tv, "table", "count", 1, 1000000));
      sc.speed_max = get_number(tv, "table", "speed_max", 0.9);
      if (!(sc.speed_max > 0.0 && sc.speed_max < 1.0)) {
        fail("table.speed_max", "must be a fraction of c in (0, 1)");
      }
      if (root.contains("composition")) {
        const Json& cv = require_object(root.at("composition"), "composition");
        check_keys(cv, "composition", {"V", "K"});
        CompositionSpec comp;
        comp.V = get_vec3(cv, "composition", "V");
        if (comp.V.norm() == 0.0) {
          fail("composition.V", "must be nonzero");
        }
        if (sc.constants.alpha == 1.0 && comp.V.norm() >= sc.constants.c) {
          fail("composition.V", "|V| must be < c when alpha = +1");
        }
        comp.K = parse_k_list(require_field(cv, "composition", "K"),
                              "composition.K");
        for (size_t i = 1; i < comp.K.size(); ++i) {
          if (comp.K[i] <= comp.K[i - 1]) {
            fail("composition.K", "must be strictly increasing");
          }
        }
        sc.composition = comp;
      }
      sc.gates = parse_gates(root, {"invariant_drift", "composition_slope_min"});
      if (!sc.gates.count("invariant_drift")) {
        sc.gates["invariant_drift"] = 1e-10;
      }
      if (sc.gates.count("composition_slope_min")) {
        if (!sc.composition || sc.composition->K.size() < 2) {
          fail("gates.composition_slope_min",
               "requires a composition section with at least two K values");
        }
      }
      break;
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot read scenario file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct GateSet {
  std::vector<GateOutcome> outcomes;
  bool all_pass = true;

  void add(const std::string& name, double measured, double tol,
           bool at_most = true) {
    GateOutcome g;
    g.name = name;
    g.measured = measured;
    g.tolerance = tol;
    g.at_most = at_most;
    g.pass = at_most ? measured <= tol : measured >= tol;
    all_pass = all_pass && g.pass;
    outcomes.push_back(g);
  }

  Json to_json() const {
    Json j = Json::object();
    for (const auto& g : outcomes) {
      j[g.name] = Json{{"measured", g.measured},
                       {"tolerance", g.tolerance},
                       {"comparison", g.at_most ? "<=" : ">="},
                       {"pass", g.pass}};
    }
    return j;
  }
};

struct KindOutput {
  Json payload = Json::object();
  GateSet gates;
  std::optional<std::string> csv_text;
  std::vector<std::string> notes;
};

Json vec3_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

Json state_json(const ExtendedState& s) {
  return Json{{"q", vec3_json(s.q)},
              {"p", vec3_json(s.p)},
              {"t", s.t},
              {"E", s.E}};
}

Json element_json(const GalileiElement& el) {
  return Json{{"w", vec3_json(el.w)},
              {"d", vec3_json(el.d)},
              {"v", vec3_json(el.v)},
              {"tau", el.tau}};
}

ExtendedState random_state(Rng& rng) {
  ExtendedState s;
  s.q = rng.vec3(-1.0, 1.0);
  s.p = rng.vec3(-1.0, 1.0);
  s.t = rng.uniform(0.0, 1.0);
  s.E = rng.uniform(-1.0, 1.0);
  return s;
}

Vec3 random_unit(Rng& rng) {
  for (int i = 0; i < 10000; ++i) {
    Vec3 v = rng.vec3(-1.0, 1.0);
    const double n = v.norm();
    if (n >= 1e-3 && n <= 1.0) {
      return v / n;
    }
  }
  throw Error(ErrorKind::non_finite, "unit vector sampling failed");
}

std::vector<ExtendedState> scenario_states(const Scenario& sc) {
  std::vector<ExtendedState> states;
  if (!sc.explicit_states.empty()) {
    for (const auto& st : sc.explicit_states) {
      states.push_back(st.to_state());
    }
    return states;
  }
  Rng rng(sc.seed);
  for (int i = 0; i < sc.sample_count; ++i) {
    states.push_back(random_state(rng));
  }
  return states;
}

KindOutput run_simulate(const Scenario& sc) {
  const Constants& k = sc.constants;
  Potentials pot = sc.potential->build(k);
  auto derivs = std::make_shared<PotentialDerivs>(pot);
  ScalarField H = sc.hamiltonian_form == "kinetic"
                      ? hamiltonian_kinetic(k.m)
                      : hamiltonian_relativistic(k);
  Rhs8 rhs = make_em_rhs(H, derivs, k);
  const ScalarField He_of = H;
  const Constants kc = k;
  auto he = [He_of, kc](const ExtendedState& st) {
    return He_of.eval(canonical_coords(st, kc)) - st.E;
  };

  const ExtendedState s0 = sc.initial_state->to_state();
  Trajectory traj = integrate(rhs, he, s0, sc.integrator.ds,
                              static_cast<int>(sc.integrator.steps),
                              sc.integrator.method);
  if (traj.aborted) {
    throw Error(ErrorKind::non_finite,
                "integration aborted on a non-finite state");
  }
  const long uniform_last = sc.integrator.steps;  // sample index of last ds step
  if (sc.integrator.remainder > 0.0) {
    Trajectory tail =
        integrate(rhs, he, traj.samples.back().state, sc.integrator.remainder,
                  1, sc.integrator.method);
    if (tail.aborted) {
      throw Error(ErrorKind::non_finite,
                  "integration aborted on a non-finite state");
    }
    TrajectorySample last = tail.samples.back();
    last.s = traj.samples.back().s + sc.integrator.remainder;
    last.he_drift = he(last.state) - he(s0);
    traj.samples.push_back(last);
    traj.max_dt_residual = std::max(traj.max_dt_residual, tail.max_dt_residual);
    traj.max_abs_he_drift =
        std::max(traj.max_abs_he_drift, std::abs(last.he_drift));
  }

  std::string csv = "s,q1,q2,q3,t,p1,p2,p3,E,H_e_drift\n";
  for (const auto& smp : traj.samples) {
    const ExtendedState& st = smp.state;
    csv += fmt17(smp.s) + "," + fmt17(st.q[0]) + "," + fmt17(st.q[1]) + "," +
           fmt17(st.q[2]) + "," + fmt17(st.t) + "," + fmt17(st.p[0]) + "," +
           fmt17(st.p[1]) + "," + fmt17(st.p[2]) + "," + fmt17(st.E) + "," +
           fmt17(smp.he_drift) + "\n";
  }

  KindOutput out;
  out.csv_text = csv;
  const ExtendedState& fin = traj.samples.back().state;

  for (const auto& [name, tol] : sc.gates) {
    if (name == "he_drift") {
      out.gates.add(name, traj.max_abs_he_drift, tol);
    } else if (name == "energy_drift") {
      double drift = 0.0;
      for (const auto& smp : traj.samples) {
        drift = std::max(drift, std::abs(smp.state.E - s0.E));
      }
      out.gates.add(name, drift, tol);
    } else if (name == "return_to_start") {
      double r = std::max((fin.q - s0.q).cwiseAbs().maxCoeff(),
                          (fin.p - s0.p).cwiseAbs().maxCoeff());
      out.gates.add(name, r, tol);
    } else if (name == "energy_rate") {
      // centered dE/ds along the uniform section against e q_dot . E_field
      double worst = 0.0;
      for (long i = 1; i + 1 <= uniform_last; ++i) {
        const auto& prev = traj.samples[i - 1];
        const auto& cur = traj.samples[i];
        const auto& next = traj.samples[i + 1];
        const double dE =
            (next.state.E - prev.state.E) / (2.0 * sc.integrator.ds);
        Vec8 z = canonical_coords(cur.state, k);
        Vec8 g = grad8(H, z);
        Vec3 qdot(g[P1], g[P2], g[P3]);
        Vec3 efield = derivs->E_at(cur.state.q, cur.state.t, k.c);
        worst = std::max(worst, std::abs(dE - k.e * qdot.dot(efield)));
      }
      out.gates.add(name, worst, tol);
    }
  }

  out.payload["hamiltonian"] = sc.hamiltonian_form;
  out.payload["integrator"] = Json{{"method", sc.integrator.method},
                                   {"ds", sc.integrator.ds},
                                   {"steps", sc.integrator.steps},
                                   {"remainder", sc.integrator.remainder}};
  out.payload["initial_state"] = state_json(s0);
  out.payload["final_state"] = state_json(fin);
  out.payload["samples"] = traj.samples.size();
  out.payload["max_abs_he_drift"] = traj.max_abs_he_drift;
  out.payload["max_dt_residual"] = traj.max_dt_residual;
  out.notes.push_back("integrated " + std::to_string(traj.samples.size() - 1) +
                      " steps of " + sc.integrator.method +
                      ", ds=" + fmt6(sc.integrator.ds));
  out.notes.push_back("max |He drift| " + fmt6(traj.max_abs_he_drift));
  return out;
}

HamiltonianFn make_hamiltonian_fn(const std::string& form, const Constants& k) {
  if (form == "kinetic") {
    const double m = k.m;
    return [m](const PhasePoint& z, double) {
      return z.p.squaredNorm() / (2.0 * m);
    };
  }
  const Constants kc = k;
  return [kc](const PhasePoint& z, double) {
    const double r = kc.m * kc.m * kc.c * kc.c + kc.alpha * z.p.squaredNorm();
    if (r <= 0.0) {
      throw Error(ErrorKind::domain,
                  "relativistic Hamiltonian radicand is not positive");
    }
    return kc.alpha * kc.c * std::sqrt(r);
  };
}

KindOutput run_transform(const Scenario& sc) {
  const Constants& k = sc.constants;
  const GeneratorSpec& gs = *sc.generator;
  const StateSpec& st = *sc.initial_state;

  GeneratingFunction phi;
  QuadraticGenerator quad = QuadraticGenerator::zero(3);
  double eps_total = 1.0;
  if (gs.form == "galilei_boost") {
    phi = phi_galilei_boost(gs.vec, k.m);
    quad.X = k.m * gs.vec;
    quad.Y = st.t * gs.vec;
  } else if (gs.form == "rotation") {
    phi = phi_rotation(gs.vec);
    quad.a = -st.t * hat(gs.vec);
  } else {
    phi = generator_phi(gs.quad, gs.eps);
    quad = gs.quad;
    eps_total = gs.eps;
  }

  PhasePoint z;
  z.q = st.q;
  z.p = st.p;
  PhasePoint after = apply_generating_function(phi, z, st.t);
  PhaseMap map = [&phi, &st](const PhasePoint& w) {
    return apply_generating_function(phi, w, st.t);
  };
  const double symp = symplecticity_residual(map, z);

  HamiltonianFn hfn = make_hamiltonian_fn(sc.hamiltonian_form, k);
  const double h_before = hfn(z, st.t);
  const double h_transformed = transformed_hamiltonian(hfn, phi, z, st.t);

  Json comps = Json::array();
  for (int K : sc.composition_k) {
    PhasePoint w = z;
    const double eps_step = eps_total / K;
    for (int i = 0; i < K; ++i) {
      w = infinitesimal_map(quad, w, eps_step);
    }
    const double disc =
        std::max((w.q - after.q).cwiseAbs().maxCoeff(),
                 (w.p - after.p).cwiseAbs().maxCoeff());
    Json entry;
    entry["K"] = K;
    entry["q"] = Json::array({w.q[0], w.q[1], w.q[2]});
    entry["p"] = Json::array({w.p[0], w.p[1], w.p[2]});
    entry["discrepancy"] = disc;
    comps.push_back(entry);
  }

  KindOutput out;
  for (const auto& [name, tol] : sc.gates) {
    if (name == "symplecticity") {
      out.gates.add(name, symp, tol);
    }
  }
  out.payload["generator"] = gs.form;
  out.payload["before"] =
      Json{{"q", vec3_json(st.q)}, {"p", vec3_json(st.p)}, {"t", st.t}};
  out.payload["after"] = Json{{"q", Json::array({after.q[0], after.q[1], after.q[2]})},
                              {"p", Json::array({after.p[0], after.p[1], after.p[2]})}};
  out.payload["h_before"] = h_before;
  out.payload["h_transformed"] = h_transformed;
  out.payload["symplecticity_residual"] = symp;
  out.payload["composition"] = comps;
  out.notes.push_back("generator " + gs.form + ", symplecticity residual " +
                      fmt6(symp));
  return out;
}

KindOutput run_cocycle(const Scenario& sc) {
  const Constants& k = sc.constants;
  const LiftKind& kind = *sc.lift;
  const double m = k.m;
  const auto& [g, h] = *sc.pair;
  std::vector<ExtendedState> states = scenario_states(sc);

  std::vector<double> values;
  double lo = 0.0, hi = 0.0, max_abs = 0.0, mm_res = 0.0;
  for (size_t i = 0; i < states.size(); ++i) {
    const double q = cocycle(g, h, kind, k, m, states[i]);
    values.push_back(q);
    if (i == 0) {
      lo = hi = q;
    } else {
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    max_abs = std::max(max_abs, std::abs(q));
    Vec8 z = canonical_coords(states[i], k);
    mm_res = std::max(mm_res, momentum_map_residual(g, kind, k, m, z));
    mm_res = std::max(mm_res, momentum_map_residual(h, kind, k, m, z));
  }
  GalileiElement bracket = algebra_bracket(g, h, kind, k);

  KindOutput out;
  out.gates.add("state_independence", hi - lo, 1e-8);
  out.gates.add("momentum_map_residual", mm_res, 1e-9);
  for (const auto& [name, tol] : sc.gates) {
    if (name == "max_abs") {
      out.gates.add(name, max_abs, tol);
    }
  }
  out.payload["lift"] = kind.name();
  out.payload["mass"] = m;
  out.payload["first"] = element_json(g);
  out.payload["second"] = element_json(h);
  out.payload["bracket"] = element_json(bracket);
  out.payload["q_values"] = values;
  out.payload["max_abs_q"] = max_abs;
  out.payload["spread"] = hi - lo;
  out.payload["states"] = states.size();
  out.notes.push_back("Q = " + fmt6(values.front()) + " over " +
                      std::to_string(states.size()) + " states (lift " +
                      kind.name() + ")");
  return out;
}

KindOutput run_equivariance(const Scenario& sc) {
  const Constants& k = sc.constants;
  const LiftKind& kind = *sc.lift;
  const double m = k.m;
  std::vector<ExtendedState> states = scenario_states(sc);

  EquivarianceReport rep = equivariance_verdict(kind, k, m, states);

  double mm_res = 0.0;
  auto basis = algebra_basis();
  for (const auto& st : states) {
    Vec8 z = canonical_coords(st, k);
    for (const auto& [name, el] : basis) {
      mm_res = std::max(mm_res, momentum_map_residual(el, kind, k, m, z));
    }
  }
  double max_spread = 0.0;
  Json table = Json::array();
  for (const auto& entry : rep.table) {
    max_spread = std::max(max_spread, entry.spread);
    table.push_back(Json{{"pair", Json::array({entry.first, entry.second})},
                         {"value", entry.value},
                         {"spread", entry.spread}});
  }
  const std::string verdict = rep.equivariant ? "equivariant" : "not-equivariant";

  KindOutput out;
  out.gates.add("state_independence", max_spread, 1e-8);
  out.gates.add("momentum_map_residual", mm_res, 1e-9);
  if (!sc.expect_verdict.empty()) {
    out.gates.add("expect_verdict", verdict == sc.expect_verdict ? 0.0 : 1.0,
                  0.5);
  }
  out.payload["lift"] = kind.name();
  out.payload["mass"] = m;
  out.payload["verdict"] = verdict;
  out.payload["max_abs_cocycle"] = rep.max_abs_cocycle;
  if (!rep.witness_first.empty()) {
    out.payload["witness"] =
        Json{{"pair", Json::array({rep.witness_first, rep.witness_second})},
             {"value", rep.witness_value}};
  }
  out.payload["table"] = table;
  out.payload["states"] = states.size();
  out.notes.push_back("verdict " + verdict + ", max |Q| " +
                      fmt6(rep.max_abs_cocycle));
  return out;
}

KindOutput run_maxwell(const Scenario& sc) {
  const Constants& k = sc.constants;
  Rng rng(sc.seed);
  const bool coulomb =
      sc.potential && sc.potential->catalog && sc.potential->name == "coulomb";
  SamplePoints pts;
  for (int i = 0; i < sc.maxwell_sample_count; ++i) {
    Vec3 q = rng.vec3(-sc.sample_box, sc.sample_box);
    int guard = 0;
    while (coulomb && q.norm() < 0.3) {
      q = rng.vec3(-sc.sample_box, sc.sample_box);
      if (++guard > 10000) {
        throw Error(ErrorKind::non_finite, "sample rejection did not terminate");
      }
    }
    const double t = rng.uniform(sc.t_lo, sc.t_hi);
    pts.push_back({q, t});
  }

  KindOutput out;
  std::pair<double, double> hom{0.0, 0.0};
  std::optional<std::pair<double, double>> vac;
  if (sc.potential) {
    Potentials pot = sc.potential->build(k);
    hom = maxwell_homogeneous_residual(pot, pts, k);
    vac = vacuum_residual(pot, pts, k);
  } else {
    const FieldSpec& fs = *sc.fields;
    std::set<std::string> names;
    for (const auto& kv : fs.params) names.insert(kv.first);
    std::array<expr::Ast, 3> b_ast, e_ast;
    for (int i = 0; i < 3; ++i) {
      b_ast[i] = expr::parse(fs.b_src[i], names);
      e_ast[i] = expr::parse(fs.e_src[i], names);
    }
    hom = maxwell_residual_from_fields(b_ast, e_ast, fs.params, pts, k);
  }

  for (const auto& [name, tol] : sc.gates) {
    if (name == "homogeneous_max") {
      out.gates.add(name, std::max(hom.first, hom.second), tol);
    } else if (name == "vacuum_max" && vac) {
      out.gates.add(name, std::max(vac->first, vac->second), tol);
    }
  }
  if (sc.expect_div_b) {
    out.gates.add("expect_div_b", std::abs(hom.first - sc.expect_div_b->first),
                  sc.expect_div_b->second);
  }

  out.payload["max_div_b"] = hom.first;
  out.payload["max_faraday"] = hom.second;
  if (vac) {
    out.payload["max_gauge"] = vac->first;
    out.payload["max_wave"] = vac->second;
  }
  out.payload["samples"] = pts.size();
  out.notes.push_back("max |div B| " + fmt6(hom.first) + ", max Faraday " +
                      fmt6(hom.second));
  return out;
}

KindOutput run_boost_table(const Scenario& sc) {
  const Constants& k = sc.constants;
  Rng rng(sc.seed);
  std::string csv =
      "v1,v2,v3,q1,q2,q3,t,p1,p2,p3,E,q1_p,q2_p,q3_p,t_p,p1_p,p2_p,p3_p,E_p,"
      "inv_before,inv_after\n";
  double max_drift = 0.0;
  for (int i = 0; i < sc.table_count; ++i) {
    const Vec3 n = random_unit(rng);
    const double speed = k.c * rng.uniform(0.0, sc.speed_max);
    const Vec3 V = speed * n;
    const Vec3 q = rng.vec3(-1.0, 1.0);
    const double t = rng.uniform(0.0, 1.0);
    const Vec3 pdir = random_unit(rng);
    const double pmag = rng.uniform(0.0, 0.9 * k.m * k.c);
    const Vec3 p = pmag * pdir;
    const double rad = k.m * k.m * k.c * k.c + k.alpha * p.squaredNorm();
    const double E = k.alpha * k.c * std::sqrt(rad);
    const double p0 = -E / k.c;

    auto [qp, tp] = boost_finite(V, k.alpha, q, t, k);
    auto [pp, p0p] = boost_momentum_finite(V, k.alpha, p, p0, k);
    const double Ep = -k.c * p0p;
    const double inv_b = invariant_quadratic(p, p0, k.alpha);
    const double inv_a = invariant_quadratic(pp, p0p, k.alpha);
    max_drift = std::max(max_drift, std::abs(inv_a - inv_b));

    csv += fmt17(V[0]) + "," + fmt17(V[1]) + "," + fmt17(V[2]) + "," +
           fmt17(q[0]) + "," + fmt17(q[1]) + "," + fmt17(q[2]) + "," + fmt17(t) +
           "," + fmt17(p[0]) + "," + fmt17(p[1]) + "," + fmt17(p[2]) + "," +
           fmt17(E) + "," + fmt17(qp[0]) + "," + fmt17(qp[1]) + "," +
           fmt17(qp[2]) + "," + fmt17(tp) + "," + fmt17(pp[0]) + "," +
           fmt17(pp[1]) + "," + fmt17(pp[2]) + "," + fmt17(Ep) + "," +
           fmt17(inv_b) + "," + fmt17(inv_a) + "\n";
  }

  KindOutput out;
  out.csv_text = csv;

  std::optional<double> min_slope;
  if (sc.composition) {
    const CompositionSpec& comp = *sc.composition;
    Mat8 target = boost_matrix(comp.V, k.alpha, k);
    Mat8 om = omega0();
    Json entries = Json::array();
    std::vector<double> discs;
    for (int K : comp.K) {
      Mat8 S = boost_steps_matrix(comp.V, k.alpha, K, k);
      const double disc = (S - target).cwiseAbs().maxCoeff();
      const double symp = (S.transpose() * om * S - om).cwiseAbs().maxCoeff();
      discs.push_back(disc);
      entries.push_back(Json{{"K", K},
                             {"discrepancy", disc},
                             {"symplecticity_residual", symp}});
    }
    for (size_t i = 0; i + 1 < discs.size(); ++i) {
      if (discs[i] <= 0.0 || discs[i + 1] <= 0.0) continue;
      const double slope = std::log(discs[i] / discs[i + 1]) /
                           std::log(double(comp.K[i + 1]) / double(comp.K[i]));
      min_slope = min_slope ? std::min(*min_slope, slope) : slope;
    }
    Json cj;
    cj["V"] = vec3_json(comp.V);
    cj["entries"] = entries;
    if (min_slope) {
      cj["min_slope"] = *min_slope;
    }
    out.payload["composition"] = cj;
  }

  for (const auto& [name, tol] : sc.gates) {
    if (name == "invariant_drift") {
      out.gates.add(name, max_drift, tol);
    } else if (name == "composition_slope_min") {
      out.gates.add(name, min_slope.value_or(0.0), tol, /*at_most=*/false);
    }
  }
  out.payload["rows"] = sc.table_count;
  out.payload["max_invariant_drift"] = max_drift;
  out.notes.push_back("boosted " + std::to_string(sc.table_count) +
                      " states, max invariant drift " + fmt6(max_drift));
  return out;
}

}  // namespace

RunResult run(const Scenario& sc, const std::string& out_dir) {
  sc.constants.validate();
  namespace fs = std::filesystem;
  const std::string dir = out_dir.empty() ? "." : out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::io, "cannot create output directory " + dir);
  }

  KindOutput out;
  switch (sc.kind) {
    case ScenarioKind::simulate:
      out = run_simulate(sc);
      break;
    case ScenarioKind::transform:
      out = run_transform(sc);
      break;
    case ScenarioKind::cocycle:
      out = run_cocycle(sc);
      break;
    case ScenarioKind::equivariance:
      out = run_equivariance(sc);
      break;
    case ScenarioKind::maxwell_check:
      out = run_maxwell(sc);
      break;
    case ScenarioKind::boost_table:
      out = run_boost_table(sc);
      break;
  }

  const std::string kind_str = to_string(sc.kind);
  Json report;
  report["schema"] = "xphase/1";
  report["kind"] = kind_str;
  report["seed"] = sc.seed;
  report["constants"] = Json{{"c", sc.constants.c},
                             {"e", sc.constants.e},
                             {"m", sc.constants.m},
                             {"alpha", sc.constants.alpha}};
  for (auto it = out.payload.begin(); it != out.payload.end(); ++it) {
    report[it.key()] = it.value();
  }
  Json artifacts = Json::object();
  if (out.csv_text) {
    artifacts["csv"] = kind_str + ".csv";
  }
  artifacts["report"] = kind_str + ".report.json";
  report["artifacts"] = artifacts;
  report["gates"] = out.gates.to_json();
  report["gates_pass"] = out.gates.all_pass;

  RunResult res;
  res.gates_pass = out.gates.all_pass;
  res.gates = out.gates.outcomes;
  res.report_json = report.dump(2) + "\n";

  const fs::path report_path = fs::path(dir) / (kind_str + ".report.json");
  {
    std::ofstream f(report_path, std::ios::binary);
    if (!f) {
      throw Error(ErrorKind::io, "cannot write " + report_path.string());
    }
    f << res.report_json;
  }
  res.files_written.push_back(report_path.string());
  if (out.csv_text) {
    const fs::path csv_path = fs::path(dir) / (kind_str + ".csv");
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) {
      throw Error(ErrorKind::io, "cannot write " + csv_path.string());
    }
    f << *out.csv_text;
    res.files_written.push_back(csv_path.string());
  }

  std::string summary = "xphase " + kind_str + " (seed " +
                        std::to_string(sc.seed) + ")\n";
  for (const auto& note : out.notes) {
    summary += note + "\n";
  }
  for (const auto& g : res.gates) {
    summary += "gate " + g.name + ": " + (g.pass ? "PASS" : "FAIL") +
               " (measured " + fmt6(g.measured) +
               (g.at_most ? " <= " : " >= ") + "tolerance " +
               fmt6(g.tolerance) + ")\n";
  }
  summary += "result: " + std::string(res.gates_pass ? "PASS" : "FAIL") + "\n";
  res.human_summary = summary;
  return res;
}

}  // namespace xphase
