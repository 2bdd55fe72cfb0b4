#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "arcwidom/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Capacity, equilibrium and Widom-factor computations for a single smooth arc"};
  app.require_subcommand(1);

  arcwidom::RunConfig cfg;
  std::string degrees;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--arc", cfg.arc, "arc JSON file or built-in arc name");
    sub->add_option("--weight", cfg.weight, "weight, e.g. '1' or '|z-(1,0)|^0.5*|z+(1,0)|^0.5'");
    sub->add_option("--nodes", cfg.nodes, "boundary nodes N (power of two, 256..16384)");
    sub->add_option("--degrees", degrees, "degrees, e.g. 10,20,40 or 1-10");
    sub->add_option("--tol", cfg.tol, "conformal map tolerance");
    sub->add_option("--spread", cfg.spread, "Lawson relative spread target");
    sub->add_option("--format", cfg.format, "csv or json");
    sub->add_option("--out", cfg.out, "directory for report and CSV dumps");
    sub->add_option("--seed", cfg.seed, "seed for randomized checks");
  };
  add_common(app.add_subcommand("capacity", "capacity from the conformal map, checked against Symm"));
  add_common(app.add_subcommand("nu", "nu(mu), R(infinity) and the Szego integral"));
  add_common(app.add_subcommand("widom", "L2 and sup Widom factors against their bounds"));
  add_common(app.add_subcommand("verify", "acceptance checks (built-in family, or one arc)"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : arcwidom::kExitBadInput;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  arcwidom::CommandOutput out;
  try {
    if (!degrees.empty()) cfg.degrees = arcwidom::parse_degrees(degrees);
    out = arcwidom::run_command(cfg);
  } catch (const arcwidom::InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return arcwidom::kExitBadInput;
  }
  std::fputs(out.text.c_str(), stdout);
  for (const auto& v : out.verdicts) std::fprintf(stderr, "%s\n", v.c_str());
  return out.exit_code;
}
