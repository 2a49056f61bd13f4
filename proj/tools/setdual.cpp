#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "setdual/commands.hpp"

using namespace setdual;

namespace {

std::string ext_list(const std::vector<ExtReal>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) out += (i ? "," : "") + format_ext(vs[i]);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"setdual: set-valued duality checks"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions globals;
  std::string eps_text;
  app.add_option("--tol", globals.tol, "membership tolerance");
  app.add_option("--eps-schedule", eps_text, "probe schedule, comma separated (e.g. 1e-3,1e-6)");
  app.add_option("--seed", globals.seed, "sampling seed");

  LatticeCheckConfig lattice;
  auto* lc = app.add_subcommand("lattice-check", "exact identities on random discrete instances");
  lc->add_option("--instances", lattice.instances)->check(CLI::PositiveNumber);
  lc->add_option("--dim-x", lattice.dim_x)->check(CLI::Range(1, 3));
  lc->add_option("--dim-z", lattice.dim_z)->check(CLI::Range(1, 3));
  lc->add_option("--box", lattice.box)->check(CLI::Range(7, 64));

  std::string problem, report, dual_grid = "problem", pairs, oracle = "qc", against = "fm";
  auto* inv = app.add_subcommand("invert", "level-set table and inverse consistency");
  inv->add_option("problem", problem)->required()->check(CLI::ExistingFile);
  inv->add_option("--report", report, "CSV output path");

  auto* dual = app.add_subcommand("dualize", "direct vs reconstructed membership");
  dual->add_option("problem", problem)->required()->check(CLI::ExistingFile);
  dual->add_option("--dual-grid", dual_grid, "problem | auto | path to a JSON array");
  dual->add_option("--report", report, "CSV output path");

  auto* conj = app.add_subcommand("conjugate", "conjugate thresholds and R vs R~ membership");
  conj->add_option("problem", problem)->required()->check(CLI::ExistingFile);
  conj->add_option("--pairs", pairs)->required()->check(CLI::ExistingFile);
  conj->add_option("--report", report, "CSV output path");

  auto* cmp = app.add_subcommand("compare", "agreement of two membership oracles");
  cmp->add_option("problem", problem)->required()->check(CLI::ExistingFile);
  cmp->add_option("--oracle", oracle)->check(CLI::IsMember({"direct", "qc", "fm"}));
  cmp->add_option("--against", against)->check(CLI::IsMember({"direct", "qc", "fm"}));
  cmp->add_option("--dual-grid", dual_grid, "problem | auto | path to a JSON array");
  cmp->add_option("--report", report, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (!eps_text.empty()) globals.eps_schedule = parse_number_list(eps_text);
    if (*lc) {
      if (globals.seed) lattice.seed = *globals.seed;
      return cmd_lattice_check(lattice, std::cout);
    }
    ProblemSpec spec = load_problem(problem);
    apply_globals(spec, globals);
    if (*inv) return cmd_invert(spec, report, std::cout);
    if (*dual) return cmd_dualize(spec, dual_grid, report, std::cout);
    if (*conj) return cmd_conjugate(spec, pairs, report, std::cout);
    return cmd_compare(spec, oracle, against, dual_grid, report, std::cout);
  } catch (const ProbeNonConvergence& e) {
    nlohmann::ordered_json j;
    j["error"] = "non-convergence";
    j["message"] = e.what();
    j["z"] = e.z;
    j["xstar"] = e.xstar;
    j["values"] = ext_list(e.values);
    std::cout << j.dump(2) << '\n';
    return kNonConvergence;
  } catch (const ProblemError& e) {
    std::cerr << "input error:\n" << e.what() << '\n';
    return kInputError;
  } catch (const UnsupportedOperation& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kInputError;
  }
}
