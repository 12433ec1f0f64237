// swarmlab command-line front end: simulate, analyze, compare, validate.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "swarmlab/consensus.hpp"
#include "swarmlab/errors.hpp"
#include "swarmlab/matrix_analysis.hpp"
#include "swarmlab/matrix_io.hpp"
#include "swarmlab/rng.hpp"
#include "swarmlab/scenario_io.hpp"
#include "swarmlab/sim.hpp"
#include "swarmlab/svg.hpp"

namespace fs = std::filesystem;
using namespace swarmlab;

namespace {

enum Exit { kOk = 0, kVerdictFalse = 1, kSchema = 2, kScenario = 3, kOutDir = 4 };

struct OutDirError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path default_out_dir() {
  const char* env = std::getenv("SWARMLAB_OUT");
  return env && *env ? fs::path(env) : fs::path("out");
}

fs::path prepare_out_dir(const std::string& flag) {
  const fs::path dir = flag.empty() ? default_out_dir() : fs::path(flag);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw OutDirError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".swarmlab_probe";
  {
    std::ofstream f(probe);
    if (!f) throw OutDirError("output directory is not writable: " + dir.string());
  }
  fs::remove(probe, ec);
  return dir;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw OutDirError("cannot write " + p.string());
  f << content;
  if (!f) throw OutDirError("cannot write " + p.string());
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_steps;
  std::string controller;
};

void apply(const Overrides& o, Scenario& s) {
  if (o.seed) s.seed = *o.seed;
  if (o.max_steps) s.max_steps = *o.max_steps;
  if (!o.controller.empty()) s.controller = parse_controller(o.controller);
}

int cmd_simulate(const std::string& path, const std::string& out, const Overrides& ov) {
  Scenario s = load_scenario(path);
  apply(ov, s);
  const fs::path dir = prepare_out_dir(out);
  const SimTrace trace = run(s);

  std::ostringstream csv;
  write_trace_csv(csv, trace);
  write_file(dir / "trace.csv", csv.str());
  write_file(dir / "summary.json", summary_json(trace).dump(2) + "\n");
  const BoundaryChain chain = s.sweep ? s.sweep->chain() : BoundaryChain{};
  write_file(dir / "trajectory.svg", render_svg(trace, chain));
  if (!trace.sweep.empty()) {
    std::ostringstream sw;
    write_sweep_csv(sw, trace);
    write_file(dir / "sweep.csv", sw.str());
  }
  if (!trace.weight_matrices.empty()) {
    auto arr = nlohmann::json::array();
    for (const auto& w : trace.weight_matrices) arr.push_back(matrix_to_json(w.matrix()));
    write_file(dir / "weights.json", arr.dump() + "\n");
  }
  for (const auto& w : trace.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << summary_json(trace).dump() << '\n';
  return kOk;
}

// W for a linear controller at the given adjacency.
WeightMatrix scenario_weights(const Scenario& s, const AdjacencyMatrix& a) {
  if (s.controller == Controller::simple) return equal_weight_matrix(a);
  WeightMatrix w = similarity_matrix(a, true);
  return s.weights.guard ? apply_aperiodicity_guard(w, s.weights.guard_epsilon) : w;
}

int cmd_analyze(const std::string& path, double tol, bool guard, double eps, std::size_t draws) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  nlohmann::json extra;
  Eigen::MatrixXd m;
  bool is_scenario = false;
  {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    is_scenario = !j.is_discarded() && j.is_object() && j.contains("controller");
  }
  if (is_scenario) {
    const Scenario s = parse_scenario_text(text, fs::path(path).parent_path());
    s.validate();
    if (!is_linear(s.controller)) {
      throw ScenarioError("analyze needs a linear controller (simple or similarity_weighted)");
    }
    const auto e = expected_weight_matrix(
        [&](std::size_t k) {
          if (s.adjacency) return scenario_weights(s, *s.adjacency);
          Scenario draw = s;
          draw.seed = s.seed + k;
          std::vector<Vec2> pos;
          for (const auto& r : initial_states(draw)) pos.push_back(r.position);
          return scenario_weights(s, build_adjacency(pos, s.params.comm_range));
        },
        s.adjacency.has_value() || std::holds_alternative<std::vector<RobotState>>(s.initial) ||
            std::holds_alternative<PolygonInit>(s.initial),
        draws);
    m = e.mean;
    extra["estimator"] = e.estimator;
    extra["samples"] = e.samples;
  } else {
    m = load_matrix_file(path);
  }
  // a sample mean of stochastic matrices drifts off 1 by rounding only
  WeightMatrix w(m, is_scenario ? 1e-9 : kRowSumTolerance);
  if (guard) w = apply_aperiodicity_guard(w, eps);
  auto report = to_json(analyze(w, tol));
  for (auto& [k, v] : extra.items()) report[k] = v;
  std::cout << report.dump(2) << '\n';
  return report["verdict"].get<bool>() ? kOk : kVerdictFalse;
}

int cmd_compare(const std::string& path, const std::vector<std::string>& names, std::size_t seeds,
                std::optional<std::uint64_t> first, const std::string& out, unsigned threads,
                const Overrides& ov) {
  Scenario s = load_scenario(path);
  apply(ov, s);
  std::vector<Controller> cs;
  for (const auto& n : names) cs.push_back(parse_controller(n));
  if (cs.empty()) throw SchemaError("--controllers", "at least one controller is required");
  const fs::path dir = prepare_out_dir(out);
  const auto table = compare_controllers(s, cs, seeds, first, threads);
  std::ostringstream csv;
  write_comparison_csv(csv, table);
  write_file(dir / "comparison.csv", csv.str());
  nlohmann::json summary = nlohmann::json::object();
  for (std::size_t c = 0; c < cs.size(); ++c) {
    std::size_t converged = 0;
    for (const auto& r : table.rows) {
      if (r.controller == cs[c] && r.consensus_step) ++converged;
    }
    summary[to_string(cs[c])] = {{"median_consensus_step", table.medians[c].second},
                                 {"converged", converged},
                                 {"runs", seeds}};
  }
  write_file(dir / "comparison_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

int cmd_validate(const std::string& path) {
  const Scenario s = load_scenario(path);
  s.validate();
  if (is_sweep(s.controller)) {
    for (const auto& w : s.params.sweep_assumption_warnings()) std::cerr << "warning: " << w << '\n';
  }
  std::cout << "ok\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarmlab: heading consensus and sweep coverage simulator"};
  app.require_subcommand(1);

  Overrides ov;
  std::string scenario_path, out_dir;
  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--seed", ov.seed, "Override the scenario seed");
    sub->add_option("--max-steps", ov.max_steps, "Override max_steps");
    sub->add_option("--controller", ov.controller, "Override the controller");
  };

  auto* sim = app.add_subcommand("simulate", "Run a scenario; write trace.csv, summary.json, trajectory.svg");
  sim->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  sim->add_option("-o,--out", out_dir, "Output directory (default $SWARMLAB_OUT or ./out)");
  add_overrides(sim);

  std::string matrix_path;
  double tol = kDefaultVerdictTolerance;
  bool guard = false;
  double eps = kDefaultGuardEpsilon;
  std::size_t draws = kDefaultExpectationDraws;
  auto* ana = app.add_subcommand("analyze", "Ergodicity report of a weight matrix or scenario");
  ana->add_option("input", matrix_path, "Matrix (JSON or text) or scenario JSON")->required();
  ana->add_option("--tol", tol, "Verdict tolerance on slem < 1 - tol");
  ana->add_flag("--guard", guard, "Apply the aperiodicity guard before analysis");
  ana->add_option("--epsilon", eps, "Guard self-weight");
  ana->add_option("--draws", draws, "Sample draws for moving-graph scenarios");

  std::vector<std::string> controllers;
  std::size_t seeds = 100;
  std::optional<std::uint64_t> first_seed;
  unsigned threads = 0;
  auto* cmp = app.add_subcommand("compare", "Consensus steps of several controllers over many seeds");
  cmp->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  cmp->add_option("--controllers", controllers, "Controllers to compare")->delimiter(',')->required();
  cmp->add_option("--seeds", seeds, "Number of seeds");
  cmp->add_option("--first-seed", first_seed, "First seed (default: scenario seed)");
  cmp->add_option("-o,--out", out_dir, "Output directory (default $SWARMLAB_OUT or ./out)");
  cmp->add_option("--threads", threads, "Worker threads (0: all cores)");
  add_overrides(cmp);

  auto* val = app.add_subcommand("validate", "Schema and consistency check only");
  val->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kSchema;
  }

  try {
    if (sim->parsed()) return cmd_simulate(scenario_path, out_dir, ov);
    if (ana->parsed()) return cmd_analyze(matrix_path, tol, guard, eps, draws);
    if (cmp->parsed()) return cmd_compare(scenario_path, controllers, seeds, first_seed, out_dir, threads, ov);
    if (val->parsed()) return cmd_validate(scenario_path);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kSchema;
  } catch (const InvalidWeights& e) {
    std::cerr << "invalid weights: " << e.what() << " (max row-sum deviation " << e.max_row_deviation() << ")\n";
    return kSchema;
  } catch (const OutDirError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOutDir;
  } catch (const SwarmError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kScenario;
  }
  return kOk;
}
