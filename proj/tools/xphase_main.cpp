#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "xphase/error.hpp"
#include "xphase/scenario.hpp"

namespace {

// Single-line JSON on stderr so callers can parse failures mechanically.
void print_error(xphase::ErrorKind kind, const std::string& message,
                 const std::string& key, const std::optional<std::size_t>& offset) {
  nlohmann::json err;
  err["kind"] = xphase::to_string(kind);
  err["message"] = message;
  if (!key.empty()) {
    err["key"] = key;
  }
  if (offset) {
    err["offset"] = *offset;
  }
  nlohmann::json root;
  root["error"] = err;
  std::fprintf(stderr, "%s\n", root.dump().c_str());
}

struct SubArgs {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extended phase space dynamics runner"};
  app.require_subcommand(1);

  const char* kinds[] = {"simulate",      "transform",     "cocycle",
                         "equivariance",  "maxwell-check", "boost-table"};
  SubArgs args;
  std::string selected;
  for (const char* kind : kinds) {
    CLI::App* sub = app.add_subcommand(kind, std::string("run a ") + kind +
                                                 " scenario");
    sub->add_option("--config", args.config, "scenario file (JSON)")
        ->required();
    sub->add_option("--out", args.out, "output directory (default .)");
    sub->add_option("--seed", args.seed, "override the scenario seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    sub->callback([&selected, kind]() { selected = kind; });
  }
  CLI::App* val = app.add_subcommand("validate", "parse and validate a scenario");
  val->add_option("--config", args.config, "scenario file (JSON)")->required();
  val->callback([&selected]() { selected = "validate"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    print_error(xphase::ErrorKind::schema, e.what(), "", std::nullopt);
    return 2;
  }

  try {
    xphase::Scenario sc = xphase::load_scenario(args.config);
    if (selected == "validate") {
      std::printf("valid: %s scenario (seed %llu)\n",
                  xphase::to_string(sc.kind).c_str(),
                  static_cast<unsigned long long>(sc.seed));
      return 0;
    }
    if (xphase::to_string(sc.kind) != selected) {
      throw xphase::Error::keyed(xphase::ErrorKind::schema, "kind",
                                 "scenario kind " + xphase::to_string(sc.kind) +
                                     " does not match subcommand " + selected);
    }
    if (args.seed_set) {
      sc.seed = args.seed;
    }
    xphase::RunResult res = xphase::run(sc, args.out);
    std::fputs(res.human_summary.c_str(), stdout);
    return res.gates_pass ? 0 : 1;
  } catch (const xphase::Error& e) {
    print_error(e.kind(), e.what(), e.key(), e.offset());
    return 2;
  } catch (const std::exception& e) {
    print_error(xphase::ErrorKind::validation,
                std::string("internal: ") + e.what(), "", std::nullopt);
    return 2;
  }
}
