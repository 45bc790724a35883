#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparsecut/errors.hpp"
#include "sparsecut/instances.hpp"
#include "sparsecut/io.hpp"
#include "sparsecut/oracle.hpp"
#include "sparsecut/relaxations.hpp"
#include "sparsecut/rounding.hpp"
#include "sparsecut/stcut.hpp"
#include "suites.hpp"

namespace fs = std::filesystem;
using namespace sparsecut;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitProperty = 3;

struct Common {
  std::string out = ".";
};

fs::path artifact(const Common& c, const std::string& name) {
  fs::create_directories(c.out);
  return fs::path(c.out) / name;
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

void print_cut(const char* label, const Cut& cut) {
  std::cout << label << " {" << format_cut(cut) << "}\n";
}

struct SolveArgs {
  std::vector<std::string> positional;
  std::string kind;
  double solver_tol = 1e-6;
  double metric_tol = 1e-6;
};

int run_solve(const Common& c, const SolveArgs& a) {
  std::string kind_name = a.kind;
  std::string path;
  if (a.positional.size() == 2) {
    if (!kind_name.empty() && kind_name != a.positional[0])
      throw InputError("conflicting relaxation kinds");
    kind_name = a.positional[0];
    path = a.positional[1];
  } else if (a.positional.size() == 1) {
    path = a.positional[0];
  } else {
    throw InputError("solve expects [kind] <instance>");
  }
  if (kind_name.empty()) throw InputError("relaxation kind missing (spectral, lr or sdp)");
  const RelaxationKind kind = parse_relaxation_kind(kind_name);
  const InstancePair pair = read_instance(path);
  RelaxationOptions options;
  options.solver_tol = a.solver_tol;
  options.metric_tol = a.metric_tol;
  const RelaxationValue rv = solve_relaxation(pair, kind, options);
  const fs::path out = artifact(c, stem(path) + "." + std::string(to_string(kind)) + ".witness");
  write_text(out, format_witness(rv));
  std::cout << "kind " << to_string(kind) << "\nvalue " << format_number(rv.value) << "\n";
  if (kind != RelaxationKind::kSpectral)
    std::cout << "rounds " << rv.diagnostics.rounds << "\ncuts " << rv.diagnostics.cuts << "\n";
  std::cout << "witness " << out.string() << "\n";
  return 0;
}

struct RoundArgs {
  std::string mode;
  std::string instance;
  std::string approx;
  std::optional<std::uint64_t> seed;
};

int run_round(const Common& c, const RoundArgs& a) {
  if (!a.seed) throw InputError("--seed is required");
  const InstancePair pair = read_instance(a.instance);
  RoundingCertificate cert;
  if (a.mode == "rank1") {
    cert = round_rank1(pair, *a.seed);
  } else if (a.mode == "rank1-approx") {
    if (a.approx.empty()) throw InputError("rank1-approx needs --approx <instance>");
    const InstancePair approx = read_instance(a.approx);
    if (approx.size() != pair.size()) throw InputError("approximation has a different size");
    cert = round_rank1_via_approx(pair, approx.h, *a.seed);
  } else {
    throw InputError("unknown rounding mode '" + a.mode + "'");
  }
  const fs::path out = artifact(c, stem(a.instance) + "." + a.mode + ".certificate");
  write_text(out, format_certificate(cert));
  std::cout << format_certificate(cert) << "certificate " << out.string() << "\n";
  return cert.bound_holds ? 0 : kExitProperty;
}

int run_oracle(const Common& c, const std::string& path) {
  const InstancePair pair = read_instance(path);
  const OracleResult r = brute_force_opt(pair);
  const std::string text = "cut " + format_cut(r.cut) + "\nsparsity " +
                           format_number(r.report.sigma) + "\n";
  write_text(artifact(c, stem(path) + ".oracle"), text);
  std::cout << text;
  return 0;
}

struct MincutArgs {
  std::string instance;
  int s = -1;
  int t = -1;
};

int run_mincut(const Common& c, const MincutArgs& a) {
  const InstancePair pair = read_instance(a.instance);
  const StCertificate cert = st_certificate(pair.g, a.s, a.t);
  const fs::path out = artifact(c, stem(a.instance) + ".flow");
  write_text(out, format_flow(cert));
  std::cout << "epsilon " << format_number(cert.potentials.energy) << "\n";
  print_cut("cut", cert.sweep.cut);
  std::cout << "cut_fraction " << format_number(cert.sweep.cut_fraction) << "\nratio "
            << format_number(cert.ratio) << "\nflow " << out.string() << "\n";
  if (cert.potentials.disconnected) std::cout << "note s and t are disconnected\n";
  const bool ok = cert.ratio_holds &&
                  cert.sweep.cut_fraction <= std::sqrt(cert.potentials.energy) + 1e-9;
  return ok ? 0 : kExitProperty;
}

struct MixArgs {
  std::string instance;
  double eps = 0.0;
  double delta = 0.0;
};

int run_mix(const Common& c, const MixArgs& a) {
  const InstancePair pair = read_instance(a.instance);
  const MixParams p{a.eps, a.delta};
  const InstancePair mixed = mix_instance(pair, p);
  const fs::path out = artifact(c, stem(a.instance) + ".mixed.gp");
  write_text(out, format_instance(mixed));
  std::cout << "mixed " << out.string() << "\n";
  if (pair.size() <= kExhaustiveLimit) {
    const OracleResult orig = brute_force_opt(pair);
    const OracleResult mix = brute_force_opt(mixed);
    const UnmixReport rep = unmix_cut_check(pair, p, mix.cut);
    std::cout << "original_opt " << format_number(orig.report.sigma) << "\nmixed_opt "
              << format_number(mix.report.sigma) << "\n";
    print_cut("mixed_cut", mix.cut);
    std::cout << "unmixed_sigma " << format_number(rep.original_sigma) << "\nimplication "
              << (rep.holds ? "holds" : "violated") << "\n";
    const bool ok = rep.holds && (orig.report.sigma > p.eps || mix.report.sigma <= p.delta + 1e-9);
    return ok ? 0 : kExitProperty;
  }
  return 0;
}

struct GenArgs {
  std::string kind;
  int k = 0;
  int n = 0;
  int d = 3;
  double density = 0.5;
  bool rank1 = false;
  std::optional<std::uint64_t> seed;
  std::string output;
};

int run_gen(const Common& c, const GenArgs& a) {
  if (!a.seed) throw InputError("--seed is required");
  const std::string seed = std::to_string(*a.seed);
  std::string name;
  std::optional<InstancePair> pair;
  if (a.kind == "lollipop") {
    const Lollipop l = gen_lollipop(a.k, *a.seed);
    name = "lollipop_k" + std::to_string(a.k) + "_s" + seed;
    RelaxationValue witness;
    witness.kind = RelaxationKind::kSpectral;
    witness.x = l.witness;
    const Eigen::MatrixXd lg = laplacian(l.pair.g), lh = laplacian(l.pair.h);
    witness.value = l.witness.dot(lg * l.witness) / l.witness.dot(lh * l.witness);
    witness.x /= std::sqrt(l.witness.dot(lh * l.witness));
    const std::string base = a.output.empty() ? name : fs::path(a.output).stem().string();
    write_text(artifact(c, base + ".witness"), format_witness(witness));
    pair = l.pair;
  } else if (a.kind == "expander-clique") {
    pair = gen_expander_clique(a.n, a.d, *a.seed);
    name = "expander_n" + std::to_string(a.n) + "_d" + std::to_string(a.d) + "_s" + seed;
  } else if (a.kind == "random") {
    RandomSpec spec{a.n, a.density, a.rank1, *a.seed};
    pair = gen_random(spec);
    name = "random_n" + std::to_string(a.n) + (a.rank1 ? "_r1" : "") + "_s" + seed;
  } else {
    throw InputError("unknown generator '" + a.kind + "'");
  }
  const fs::path out = artifact(c, a.output.empty() ? name + ".gp" : a.output);
  write_text(out, format_instance(*pair));
  std::cout << "instance " << out.string() << "\nn " << pair->size() << "\n";
  return 0;
}

int run_verify(const std::string& instance, const std::string& witness, double tol) {
  const InstancePair pair = read_instance(instance);
  const RelaxationValue rv = parse_witness(read_text(witness));
  const ResidualReport rep = verify_solution(pair, rv, tol);
  std::cout << "kind " << to_string(rv.kind) << "\nclaimed " << format_number(rv.value)
            << "\nobjective " << format_number(rep.objective) << "\nmax_residual "
            << format_number(rep.max_residual) << "\n";
  if (!rep.worst_constraint.empty()) std::cout << "worst " << rep.worst_constraint << "\n";
  std::cout << (rep.pass ? "pass" : "fail") << "\n";
  return rep.pass ? 0 : kExitProperty;
}

int run_suite_command(const Common& c, const std::string& name, std::optional<std::uint64_t> seed,
                      int count) {
  if (!seed) throw InputError("--seed is required");
  const auto rows = cli::run_suite(name, {*seed, count});
  const fs::path out = artifact(c, "suite_" + name + ".csv");
  write_text(out, cli::suite_csv(rows));
  int failures = 0;
  for (const auto& r : rows) {
    std::cout << r.id << (r.bound_holds ? " ok" : " FAIL");
    if (!r.note.empty()) std::cout << " (" << r.note << ")";
    std::cout << "\n";
    failures += r.bound_holds ? 0 : 1;
  }
  std::cout << rows.size() - failures << "/" << rows.size() << " passed\ncsv " << out.string()
            << "\n";
  return failures == 0 ? 0 : kExitProperty;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparsest cut relaxations, roundings and certificates"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--out", common.out, "Directory for artifacts")->capture_default_str();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a relaxation and write its witness");
  solve_cmd->add_option("args", solve.positional, "[spectral|lr|sdp] <instance>")->required();
  solve_cmd->add_option("--kind", solve.kind, "spectral, lr or sdp");
  solve_cmd->add_option("--solver-tol", solve.solver_tol)->capture_default_str();
  solve_cmd->add_option("--metric-tol", solve.metric_tol)->capture_default_str();

  RoundArgs round;
  auto* round_cmd = app.add_subcommand("round", "Round the SDP for a rank-1 demand graph");
  round_cmd->add_option("mode", round.mode, "rank1 or rank1-approx")->required();
  round_cmd->add_option("instance", round.instance)->required();
  round_cmd->add_option("--approx", round.approx, "Instance whose h lines give the rank-1 approximation");
  round_cmd->add_option("--seed", round.seed);

  std::string oracle_path;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact sparsest cut by enumeration");
  oracle_cmd->add_option("instance", oracle_path)->required();

  MincutArgs mincut;
  auto* mincut_cmd = app.add_subcommand("mincut", "Electrical s-t cut and flow certificate");
  mincut_cmd->add_option("instance", mincut.instance)->required();
  mincut_cmd->add_option("--s", mincut.s)->required();
  mincut_cmd->add_option("--t", mincut.t)->required();

  MixArgs mix;
  auto* mix_cmd = app.add_subcommand("mix", "Mix the demand graph with the capacity graph");
  mix_cmd->add_option("instance", mix.instance)->required();
  mix_cmd->add_option("--eps", mix.eps)->required();
  mix_cmd->add_option("--delta", mix.delta)->required();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance");
  gen_cmd->add_option("kind", gen.kind, "lollipop, expander-clique or random")->required();
  gen_cmd->add_option("--k", gen.k);
  gen_cmd->add_option("--n", gen.n);
  gen_cmd->add_option("--d", gen.d)->capture_default_str();
  gen_cmd->add_option("--density", gen.density)->capture_default_str();
  gen_cmd->add_flag("--rank1", gen.rank1);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("-o,--output", gen.output, "File name inside --out");

  std::string verify_instance, verify_witness;
  double verify_tol = 1e-6;
  auto* verify_cmd = app.add_subcommand("verify", "Recompute residuals of a witness");
  verify_cmd->add_option("instance", verify_instance)->required();
  verify_cmd->add_option("witness", verify_witness)->required();
  verify_cmd->add_option("--solver-tol", verify_tol)->capture_default_str();

  std::string suite_name;
  std::optional<std::uint64_t> suite_seed;
  int suite_count = 0;
  auto* suite_cmd = app.add_subcommand("suite", "Run a property suite and write CSV");
  suite_cmd->add_option("name", suite_name, "sandwich, rounding, stcut, mixing or lollipop")
      ->required();
  suite_cmd->add_option("--seed", suite_seed);
  suite_cmd->add_option("--count", suite_count, "Number of instances (0: suite default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*solve_cmd) return run_solve(common, solve);
    if (*round_cmd) return run_round(common, round);
    if (*oracle_cmd) return run_oracle(common, oracle_path);
    if (*mincut_cmd) return run_mincut(common, mincut);
    if (*mix_cmd) return run_mix(common, mix);
    if (*gen_cmd) return run_gen(common, gen);
    if (*verify_cmd) return run_verify(verify_instance, verify_witness, verify_tol);
    if (*suite_cmd) return run_suite_command(common, suite_name, suite_seed, suite_count);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
