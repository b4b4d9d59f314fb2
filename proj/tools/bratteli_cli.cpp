// Command-line surface over the library: ingest JSON specs, validate,
// compute partition tables / links / coherent systems, sample paths, run
// the convergence experiment, realize links, and emit catalog objects.
//
// Exit codes: 0 ok, 2 parse error, 3 validation failure, 4 numeric-mode
// conflict, 5 I/O error. Failures print {"error":{"code","message"}} on
// standard error. Outputs are deterministic for identical inputs and seed.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bratteli/catalog.hpp"
#include "bratteli/error.hpp"
#include "bratteli/flow_spec.hpp"
#include "bratteli/graded_graph.hpp"
#include "bratteli/harmonic.hpp"
#include "bratteli/json_io.hpp"
#include "bratteli/link_engine.hpp"
#include "bratteli/path_space.hpp"
#include "bratteli/realize.hpp"
#include "bratteli/scalar.hpp"

namespace {

using namespace bratteli;

struct Options {
  std::string input;
  std::string output;
  std::string mode = "float";
  double tol = 1e-9;
  std::uint64_t seed = 1;
  double beta = 0.0;
  int depth = -1;

  // subcommand-specific
  int upper = -1;
  int lower = -1;
  std::string format = "csv";
  std::string system_path;
  std::string measure_path;
  std::string path_file;
  std::vector<std::string> targets;
  int count = 1;
  int height = 0;
  std::string direction = "down";
  bool deviation = false;
  std::string style = "uniform";
  std::string catalog_name;
  std::string p_value = "1/2";
  std::string q_value = "1/2";
};

void emit(const Options& opt, const std::string& text) {
  if (opt.output.empty())
    std::cout << text;
  else
    write_text_file(opt.output, text);
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

template <class S>
S parse_scalar_arg(const std::string& text, const char* what) {
  try {
    return ScalarOps<S>::from_rational(parse_rational(text));
  } catch (const Error&) {
    fail(Errc::ParseError, std::string(what) + ": cannot parse '" + text + "'");
  }
}

template <class S>
FlowSpec<S> load_flow(const Options& opt) {
  if (opt.input.empty()) fail(Errc::InvalidArgument, "--input is required");
  return flow_from_json<S>(load_json_file(opt.input));
}

// ---------------------------------------------------------------------------

int run_validate(const Options& opt) {
  if (opt.input.empty()) fail(Errc::InvalidArgument, "--input is required");
  GraphPtr g = graph_from_json(load_json_file(opt.input));
  auto violations = validate_graph(*g);
  Json out;
  out["valid"] = violations.empty();
  out["violations"] = violations_to_json(violations);
  emit(opt, dump_json(out));
  return violations.empty() ? 0 : 3;
}

template <class S>
int run_partition(const Options& opt) {
  FlowSpec<S> f = load_flow<S>(opt);
  emit(opt, dump_json(partition_table_to_json(f)));
  return 0;
}

template <class S>
int run_link(const Options& opt) {
  FlowSpec<S> f = load_flow<S>(opt);
  if (opt.upper < 0 || opt.lower < 0)
    fail(Errc::InvalidArgument, "--upper and --lower are required");
  LinkMatrix<S> m = link_matrix(f, opt.upper, opt.lower);
  if (opt.format == "json")
    emit(opt, dump_json(link_matrix_to_json(m, f.graph())));
  else if (opt.format == "csv")
    emit(opt, link_matrix_to_csv(m, f.graph()));
  else
    fail(Errc::InvalidArgument, "--format must be 'csv' or 'json'");
  return 0;
}

template <class S>
int run_harmonic_check(const Options& opt) {
  FlowSpec<S> f = load_flow<S>(opt);
  if (opt.system_path.empty()) fail(Errc::InvalidArgument, "--system is required");
  CoherentSystem<S> nu = system_from_json<S>(load_json_file(opt.system_path), f.graph_ptr());
  HarmonicReport rep = check_harmonic(f, nu, opt.tol);
  Json out;
  out["pass"] = rep.pass;
  out["max_residual"] = rep.max_residual;
  out["root_deviation"] = rep.root_deviation;
  out["max_level_mass_deviation"] = rep.max_level_mass_deviation;
  out["infinite_mass"] = rep.infinite_mass;
  out["nonnegative"] = rep.nonnegative;
  emit(opt, dump_json(out));
  return rep.pass ? 0 : 3;
}

template <class S>
int run_harmonic_extend(const Options& opt) {
  FlowSpec<S> f = load_flow<S>(opt);
  if (opt.measure_path.empty()) fail(Errc::InvalidArgument, "--measure is required");
  LevelMeasure<S> mu = measure_from_json<S>(load_json_file(opt.measure_path), f.graph());
  emit(opt, dump_json(system_to_json(extend_down(f, mu))));
  return 0;
}

template <class S>
int run_sample(const Options& opt) {
  FlowSpec<S> f = load_flow<S>(opt);
  if (opt.system_path.empty()) fail(Errc::InvalidArgument, "--system is required");
  CoherentSystem<S> nu = system_from_json<S>(load_json_file(opt.system_path), f.graph_ptr());
  int n = opt.depth >= 0 ? opt.depth : nu.depth();
  if (opt.count < 1) fail(Errc::ParameterOutOfRange, "--count must be positive");
  bool down = opt.direction == "down";
  if (!down && opt.direction != "up")
    fail(Errc::InvalidArgument, "--direction must be 'down' or 'up'");
  Rng rng(opt.seed);
  std::string lines;
  for (int i = 0; i < opt.count; ++i) {
    SampledPath p = down ? sample_down(f, nu, n, rng) : sample_up(f, nu, n, rng);
    lines += sampled_path_to_json(p, f.graph()).dump();
    lines += "\n";
  }
  emit(opt, lines);
  return 0;
}

template <class S>
int run_converge(const Options& opt) {
  FlowSpec<S> f = load_flow<S>(opt);
  if (opt.system_path.empty()) fail(Errc::InvalidArgument, "--system is required");
  CoherentSystem<S> nu = system_from_json<S>(load_json_file(opt.system_path), f.graph_ptr());
  if (opt.targets.empty()) fail(Errc::InvalidArgument, "at least one --target is required");
  std::vector<VertexRef> targets;
  for (const std::string& t : opt.targets) targets.push_back(vertex_from_key(f.graph(), t));
  ErgodicTable<S> table;
  if (!opt.path_file.empty()) {
    auto path = path_from_json(load_json_file(opt.path_file), f.graph());
    table = ergodic_experiment(f, nu, targets, path);
  } else if (opt.height > 0) {
    Rng rng(opt.seed);
    table = ergodic_experiment(f, nu, targets, opt.height, rng);
  } else {
    fail(Errc::InvalidArgument, "need --path FILE or --height M");
  }
  emit(opt, ergodic_table_to_csv(table, f.graph(), opt.deviation ? &nu : nullptr));
  return 0;
}

template <class S>
int run_realize(const Options& opt) {
  if (opt.input.empty()) fail(Errc::InvalidArgument, "--input is required");
  AbstractLink<S> k = link_spec_from_json<S>(load_json_file(opt.input));
  SpectrumStyle style = SpectrumStyle::Uniform;
  S ratio = ScalarOps<S>::one();
  if (opt.style.rfind("geometric:", 0) == 0) {
    style = SpectrumStyle::Geometric;
    ratio = parse_scalar_arg<S>(opt.style.substr(10), "geometric ratio");
  } else if (opt.style != "uniform") {
    fail(Errc::InvalidArgument, "--style must be 'uniform' or 'geometric:R'");
  }
  FlowSpec<S> f = realize_link(k, opt.beta, style, ratio);
  emit(opt, dump_json(flow_to_json(f)));
  return 0;
}

template <class S>
int run_catalog(const Options& opt) {
  const std::string& name = opt.catalog_name;
  int N = opt.depth;
  if (N < 0) fail(Errc::InvalidArgument, "--depth is required");
  Json out;
  if (name == "pascal") {
    out = graph_to_json(*pascal(N));
  } else if (name == "young") {
    out = graph_to_json(*young(N));
  } else if (name == "pascal_flow") {
    out = flow_to_json(pascal_flow<S>(N, opt.beta));
  } else if (name == "young_flow") {
    out = flow_to_json(counting_flow<S>(young(N), opt.beta));
  } else if (name == "q_pascal") {
    out = flow_to_json(q_pascal<S>(N, parse_scalar_arg<S>(opt.q_value, "--q"), opt.beta));
  } else if (name == "bernoulli_system" || name == "bernoulli") {
    out = system_to_json(bernoulli_system<S>(N, parse_scalar_arg<S>(opt.p_value, "--p")));
  } else if (name == "plancherel_system" || name == "plancherel") {
    out = system_to_json(plancherel_system<S>(N));
  } else {
    fail(Errc::InvalidArgument,
         "unknown catalog object '" + name +
             "' (try pascal, young, pascal_flow, young_flow, q_pascal, "
             "bernoulli_system, plancherel_system)");
  }
  emit(opt, dump_json(out));
  return 0;
}

template <class Fn>
int with_mode(const std::string& mode, Fn&& fn) {
  if (mode == "exact") return fn(Rational());
  if (mode == "float") return fn(double());
  fail(Errc::InvalidArgument, "--mode must be 'exact' or 'float'");
}

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::ParseError:
      return 2;
    case Errc::NumericModeConflict:
      return 4;
    case Errc::IoError:
      return 5;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"thermodynamic formalism on graded branching graphs"};
  app.require_subcommand(1);
  app.add_option("--input", opt.input, "input JSON file");
  app.add_option("--output", opt.output, "output file (default: stdout)");
  app.add_option("--mode", opt.mode, "arithmetic mode: exact | float (default float)");
  app.add_option("--tol", opt.tol, "tolerance for float-mode checks");
  app.add_option("--seed", opt.seed, "RNG seed");
  app.add_option("--beta", opt.beta, "inverse temperature");
  app.add_option("--depth", opt.depth, "level / depth parameter");

  auto* c_validate = app.add_subcommand("validate", "check graph axioms, list violations");
  auto* c_partition = app.add_subcommand("partition", "partition functions of a flow");
  auto* c_link = app.add_subcommand("link", "link matrix between two levels");
  c_link->add_option("--upper", opt.upper, "upper level");
  c_link->add_option("--lower", opt.lower, "lower level");
  c_link->add_option("--format", opt.format, "csv | json (default csv)");
  auto* c_harmonic = app.add_subcommand("harmonic", "coherent-system operations");
  c_harmonic->require_subcommand(1);
  auto* c_hcheck = c_harmonic->add_subcommand("check", "verify harmonicity of a system");
  c_hcheck->add_option("--system", opt.system_path, "coherent system JSON");
  auto* c_hextend = c_harmonic->add_subcommand("extend", "push a top-level measure down");
  c_hextend->add_option("--measure", opt.measure_path, "level measure JSON");
  auto* c_sample = app.add_subcommand("sample", "sample paths (JSON lines)");
  c_sample->add_option("--system", opt.system_path, "coherent system JSON");
  c_sample->add_option("--count", opt.count, "number of paths");
  c_sample->add_option("--direction", opt.direction, "down | up (default down)");
  auto* c_converge = app.add_subcommand("converge", "ergodic link table along a path (CSV)");
  c_converge->add_option("--system", opt.system_path, "coherent system JSON");
  c_converge->add_option("--target", opt.targets,
                         "target vertex as level,label e.g. 1,1 (repeatable)");
  c_converge->add_option("--path", opt.path_file, "explicit path JSON");
  c_converge->add_option("--height", opt.height, "sample a path up to this level instead");
  c_converge->add_flag("--deviation", opt.deviation, "append |value - nu(target)| columns");
  auto* c_realize = app.add_subcommand("realize", "build a flow realizing an abstract link");
  c_realize->add_option("--style", opt.style, "uniform | geometric:R (default uniform)");
  auto* c_catalog = app.add_subcommand("catalog", "emit a named catalog object");
  c_catalog->add_option("name", opt.catalog_name, "catalog object name")->required();
  c_catalog->add_option("--p", opt.p_value, "success probability (bernoulli_system)");
  c_catalog->add_option("--q", opt.q_value, "deformation parameter (q_pascal)");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();
  c_hcheck->fallthrough();
  c_hextend->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c_validate->parsed()) return run_validate(opt);
    auto dispatch = [&](auto tag) -> int {
      using S = decltype(tag);
      if (c_partition->parsed()) return run_partition<S>(opt);
      if (c_link->parsed()) return run_link<S>(opt);
      if (c_harmonic->parsed())
        return c_hcheck->parsed() ? run_harmonic_check<S>(opt) : run_harmonic_extend<S>(opt);
      if (c_sample->parsed()) return run_sample<S>(opt);
      if (c_converge->parsed()) return run_converge<S>(opt);
      if (c_realize->parsed()) return run_realize<S>(opt);
      if (c_catalog->parsed()) return run_catalog<S>(opt);
      fail(Errc::InvalidArgument, "no subcommand");
    };
    return with_mode(opt.mode, dispatch);
  } catch (const bratteli::Error& e) {
    Json err;
    err["error"]["code"] = errc_name(e.code());
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    Json err;
    err["error"]["code"] = "internal";
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 3;
  }
}
