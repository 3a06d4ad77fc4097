#include "seqlocal/cli.hpp"

#include <cstdlib>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "seqlocal/errors.hpp"
#include "seqlocal/json_io.hpp"
#include "seqlocal/parallel.hpp"

namespace seqlocal {

namespace {

using io::Json;

constexpr int kOk = 0;
constexpr int kFalse = 1;
constexpr int kInputError = 2;

struct Options {
  std::optional<double> tol;
  bool pretty = false;

  std::string file;
  std::string polytope = "P";
  std::optional<std::size_t> L;
  std::optional<std::size_t> canonical;
  std::string state_file;
  std::uint64_t seed = 0;
  std::size_t iters = 200;
  std::size_t n = 1;
  std::size_t max_iters = 10000;
  std::string demo_name;
  std::size_t d = 5;
  std::optional<double> mixing;
};

double default_tol(const Options& o) {
  if (o.tol) return *o.tol;
  if (const char* env = std::getenv("SEQLOCAL_TOL"); env && *env) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) throw StructuralError("SEQLOCAL_TOL is not a positive number");
    return v;
  }
  return kDefaultTol;
}

void emit(std::ostream& out, const Json& j, bool pretty) { out << (pretty ? j.dump(2) : j.dump()) << '\n'; }

Json constraint_json(const ConstraintReport& r) {
  return Json{{"ok", r.ok}, {"max_residual", r.max_residual}, {"worst", r.worst.empty() ? Json(nullptr) : Json(r.worst)}};
}

int cmd_validate(const Options& o, std::ostream& out) {
  const double tol = default_tol(o);
  const auto corr = io::correlation_from_json(io::read_file(o.file));
  const auto v = validate(corr, tol);
  const auto ns = check_same_step_no_signaling(corr, tol);
  const auto aot = check_arrow_of_time(corr, tol);
  const bool ok = v.ok && ns.ok && aot.ok;
  emit(out,
       Json{{"valid", ok},
            {"tol", tol},
            {"max_negativity", v.max_negativity},
            {"max_normalization_residual", v.max_normalization_residual},
            {"no_signaling", constraint_json(ns)},
            {"arrow_of_time", constraint_json(aot)}},
       o.pretty);
  return ok ? kOk : kFalse;
}

int cmd_member(const Options& o, std::ostream& out) {
  const double tol = default_tol(o);
  const auto corr = io::correlation_from_json(io::read_file(o.file));
  MembershipVerdict v;
  if (o.polytope == "P") {
    v = membership_P(corr, tol);
  } else if (o.polytope == "Q") {
    v = membership_Q(corr, tol);
  } else {
    GilbertOptions g;
    g.max_iters = o.max_iters;
    g.parallel_oracle = omp::max_threads() > 1;
    if (o.tol) g.tol = *o.tol;
    v = membership_TOL(corr, g);
  }
  auto j = io::to_json(v);
  j["polytope"] = o.polytope;
  emit(out, j, o.pretty);
  return v.member ? kOk : kFalse;
}

int cmd_extremal(const Options& o, std::ostream& out) {
  const double tol = default_tol(o);
  const auto spec = io::extreme_spec_from_json(io::read_file(o.file));
  const auto corr = compose_extreme_point(spec);
  const auto cert = is_extreme_in_P(corr, tol);
  emit(out, Json{{"certificate", io::to_json(cert)}, {"correlation", io::to_json(corr)}}, o.pretty);
  return cert.extreme() ? kOk : kFalse;
}

int cmd_witness(const Options& o, std::ostream& out) {
  const double tol = default_tol(o);
  const auto corr = io::correlation_from_json(io::read_file(o.file));
  if (o.L && *o.L != corr.scenario().steps)
    throw StructuralError("--L " + std::to_string(*o.L) + " does not match a " +
                          std::to_string(corr.scenario().steps) + "-step tensor");
  emit(out, io::to_json(evaluate_witness(corr, tol)), o.pretty);
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  if (o.file.empty() == !o.canonical) throw StructuralError("simulate needs exactly one of <strategy-file> or --canonical");
  const auto strategy = o.canonical ? canonical_strategy(*o.canonical) : io::strategy_from_json(io::read_file(o.file));
  emit(out, io::to_json(omp::simulate(strategy)), o.pretty);
  return kOk;
}

int cmd_seesaw(const Options& o, std::ostream& out) {
  const auto f = io::state_from_json(io::read_file(o.state_file));
  SeesawOptions opts;
  opts.seed = o.seed;
  opts.max_iters = o.iters;
  emit(out, io::to_json(seesaw_chsh(f.state, f.dims, opts), o.seed), o.pretty);
  return kOk;
}

int cmd_sample(const Options& o, std::ostream& out) {
  if (o.n == 0) throw StructuralError("--n must be at least 1");
  const auto corr = o.polytope == "Q" ? sample_Q(o.seed, o.n) : sample_TOL(o.seed, o.n);
  emit(out, Json{{"polytope", o.polytope}, {"seed", o.seed}, {"n", o.n}, {"correlation", io::to_json(corr)}}, o.pretty);
  return kOk;
}

int cmd_count(const Options& o, std::ostream& out) {
  const Scenario sc;
  emit(out, Json{{"scenario", io::to_json(sc)}, {"count", count_extreme_points(sc)}}, o.pretty);
  return kOk;
}

int cmd_demo(const Options& o, std::ostream& out) {
  if (o.demo_name != "hidden-nonlocality") throw StructuralError("unknown demo \"" + o.demo_name + "\"");
  const double mixing = o.mixing ? *o.mixing : werner_local_mixing(o.d);
  const auto demo = hidden_nonlocality_demo(o.d, mixing, o.seed);
  emit(out, io::to_json(demo), o.pretty);
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential Bell scenarios: membership, witnesses, simulation", "seqlocal"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--tol", o.tol, "numerical tolerance (default: $SEQLOCAL_TOL or 1e-9)")->check(CLI::PositiveNumber);
  app.add_flag("--pretty", o.pretty, "indented output");

  auto* validate_cmd = app.add_subcommand("validate", "positivity, normalization, no-signaling and arrow of time");
  validate_cmd->add_option("file", o.file, "correlation JSON")->required();

  auto* member = app.add_subcommand("member", "membership in P, Q or TOL");
  member->add_option("file", o.file, "correlation JSON")->required();
  member->add_option("--polytope", o.polytope, "P, Q or TOL")->check(CLI::IsMember({"P", "Q", "TOL"}));
  member->add_option("--max-iters", o.max_iters, "Gilbert iteration budget (TOL)")->check(CLI::PositiveNumber);

  auto* extremal = app.add_subcommand("extremal", "build an extreme point from a spec and certify it");
  extremal->add_option("spec", o.file, "extreme-point spec JSON")->required();

  auto* witness = app.add_subcommand("witness", "concatenated CHSH witness");
  witness->add_option("file", o.file, "correlation JSON")->required();
  witness->add_option("--L", o.L, "expected number of steps");

  auto* simulate_cmd = app.add_subcommand("simulate", "Born-rule statistics of a strategy");
  simulate_cmd->add_option("strategy", o.file, "strategy JSON");
  simulate_cmd->add_option("--canonical", o.canonical, "built-in optimal strategy for L = 2 or 3");

  auto* seesaw = app.add_subcommand("seesaw", "CHSH seesaw on a bipartite state");
  seesaw->add_option("--state", o.state_file, "state JSON")->required();
  seesaw->add_option("--seed", o.seed, "RNG seed");
  seesaw->add_option("--iters", o.iters, "iteration budget")->check(CLI::PositiveNumber);

  auto* sample = app.add_subcommand("sample", "random member of Q or TOL");
  sample->add_option("--polytope", o.polytope, "Q or TOL")->required()->check(CLI::IsMember({"Q", "TOL"}));
  sample->add_option("--n", o.n, "mixture size")->required();
  sample->add_option("--seed", o.seed, "RNG seed");

  auto* count = app.add_subcommand("count-extremal", "number of extreme points of P for two steps");

  auto* demo = app.add_subcommand("demo", "built-in demonstrations");
  demo->add_option("name", o.demo_name, "hidden-nonlocality")->required();
  demo->add_option("--d", o.d, "local dimension")->check(CLI::Range(3, 8));
  demo->add_option("--seed", o.seed, "RNG seed");
  demo->add_option("--mixing", o.mixing, "Werner mixing (default (d-1)/d)")->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (*validate_cmd) return cmd_validate(o, out);
    if (*member) return cmd_member(o, out);
    if (*extremal) return cmd_extremal(o, out);
    if (*witness) return cmd_witness(o, out);
    if (*simulate_cmd) return cmd_simulate(o, out);
    if (*seesaw) return cmd_seesaw(o, out);
    if (*sample) return cmd_sample(o, out);
    if (*count) return cmd_count(o, out);
    if (*demo) return cmd_demo(o, out);
  } catch (const std::exception& e) {
    err << "seqlocal: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace seqlocal
