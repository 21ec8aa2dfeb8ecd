// drsubmax command line: instance generation, experiment runs, property
// verification, and SVG trajectory plots.
//
// Exit codes: 0 success, 1 validation error, 2 runtime error,
// 3 verification failure.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "drsm/instances.hpp"
#include "drsm/meanfield.hpp"
#include "drsm/multilinear.hpp"
#include "drsm/plot.hpp"
#include "drsm/rng.hpp"
#include "drsm/solvers.hpp"
#include "drsm/verify.hpp"

namespace fs = std::filesystem;
using drsm::Instance;
using drsm::SolverConfig;
using drsm::Trajectory;
using nlohmann::json;

namespace {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

uint64_t env_seed_override(uint64_t fallback) {
  if (const char* env = std::getenv("DRSUBMAX_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ValidationError("DRSUBMAX_SEED is not an unsigned integer");
    }
  }
  return fallback;
}

drsm::StepRule parse_step_rule(const std::string& name) {
  if (name == "default") return drsm::StepRule::kDefault;
  if (name == "oblivious") return drsm::StepRule::kOblivious;
  if (name == "constant") return drsm::StepRule::kConstant;
  if (name == "lipschitz") return drsm::StepRule::kLipschitz;
  if (name == "adaptive") return drsm::StepRule::kAdaptive;
  if (name == "line_search") return drsm::StepRule::kLineSearch;
  throw ValidationError("unknown step rule: " + name);
}

SolverConfig solver_config_from_json(const json& j) {
  SolverConfig cfg;
  cfg.iterations = j.value("iterations", 100);
  cfg.iterations_phase1 = j.value("iterations_phase1", 0);
  cfg.iterations_phase2 = j.value("iterations_phase2", 0);
  cfg.step_rule = parse_step_rule(j.value("step_rule", std::string("default")));
  cfg.alpha = j.value("alpha", 1.0);
  cfg.delta = j.value("delta", 0.0);
  cfg.eps = j.value("eps", 1e-6);
  cfg.eps1 = j.value("eps1", 0.0);
  cfg.eps2 = j.value("eps2", 0.0);
  if (j.contains("adaptive_c")) cfg.adaptive_c = j.at("adaptive_c").get<double>();
  if (j.contains("lipschitz")) cfg.lipschitz = j.at("lipschitz").get<double>();
  cfg.seed = j.value("seed", 0ull);
  cfg.force = j.value("force", false);
  if (cfg.iterations < 1) throw ValidationError("solver_config.iterations must be >= 1");
  if (!(cfg.alpha > 0 && cfg.alpha <= 1))
    throw ValidationError("solver_config.alpha must be in (0,1]");
  if (cfg.delta < 0) throw ValidationError("solver_config.delta must be >= 0");
  return cfg;
}

Instance generated_instance(const json& gen, uint64_t seed) {
  std::string family = gen.at("family").get<std::string>();
  if (family == "softmax") return drsm::gen_softmax_instance(gen.at("n").get<int>(), seed);
  if (family == "quadratic")
    return drsm::gen_quadratic_instance(gen.at("n").get<int>(),
                                        gen.value("monotone", true), seed);
  if (family == "influence") {
    drsm::BipartiteGraph g = drsm::gen_bipartite_graph(
        gen.at("n").get<int>(), gen.value("forums", 10), gen.value("max_degree", 4), seed);
    Instance inst;
    inst.name = "influence_n" + std::to_string(g.users);
    inst.seed = seed;
    double u_cap = gen.value("u_cap", 1.0);
    inst.objective = drsm::build_influence_objective(g, u_cap);
    inst.constraint = std::make_shared<drsm::CardinalityPolytope>(
        g.users, u_cap, 0.5 * g.users * u_cap);
    return inst;
  }
  throw ValidationError("unknown generate family: " + family);
}

Instance resolve_instance(const json& spec, const std::string& config_dir,
                          uint64_t run_seed) {
  if (spec.is_string()) {
    fs::path p = fs::path(config_dir) / spec.get<std::string>();
    return drsm::load_instance(p.string());
  }
  if (spec.contains("generate")) return generated_instance(spec.at("generate"), run_seed);
  return drsm::instance_from_json(spec.dump(), config_dir);
}

Trajectory dispatch_solver(const std::string& name, const drsm::Objective& obj,
                           const drsm::Constraint& region, const SolverConfig& cfg) {
  drsm::Vec zero(static_cast<size_t>(obj.dim()), 0.0);
  if (name == "submodular_fw") return drsm::submodular_fw(obj, region, cfg);
  if (name == "shrunken_fw") return drsm::shrunken_fw(obj, region, cfg);
  if (name == "nonconvex_fw") return drsm::nonconvex_fw(obj, region, cfg, zero);
  if (name == "pga") return drsm::pga(obj, region, cfg, zero);
  if (name == "two_phase") return drsm::two_phase(obj, region, cfg);
  throw ValidationError("unknown solver: " + name);
}

int cmd_run(const std::string& config_path, std::string outdir_override) {
  std::ifstream in(config_path);
  if (!in) throw ValidationError("cannot open config: " + config_path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config JSON: ") + e.what());
  }
  std::string config_dir = fs::path(config_path).parent_path().string();
  if (config_dir.empty()) config_dir = ".";

  std::vector<std::string> solvers;
  if (cfg.contains("solvers"))
    solvers = cfg.at("solvers").get<std::vector<std::string>>();
  else if (cfg.contains("solver"))
    solvers.push_back(cfg.at("solver").get<std::string>());
  else
    throw ValidationError("config needs \"solver\" or \"solvers\"");
  static const std::vector<std::string> known = {"submodular_fw", "shrunken_fw",
                                                 "nonconvex_fw", "pga", "two_phase"};
  for (const auto& s : solvers)
    if (std::find(known.begin(), known.end(), s) == known.end())
      throw ValidationError("config.solver: unknown solver " + s);

  SolverConfig base = solver_config_from_json(cfg.value("solver_config", json::object()));
  base.seed = env_seed_override(base.seed);
  int repeat = cfg.value("repeat", 1);
  int parallelism = std::max(1, cfg.value("parallelism", 1));
  bool timings = cfg.value("timings", false);
  if (repeat < 1) throw ValidationError("config.repeat must be >= 1");
  if (!cfg.contains("instance")) throw ValidationError("config needs \"instance\"");

  std::string outdir = !outdir_override.empty()
                           ? outdir_override
                           : cfg.value("output_dir", std::string("."));
  fs::create_directories(outdir);

  struct Task {
    int run;
    std::string solver;
  };
  std::vector<Task> tasks;
  for (int run = 0; run < repeat; ++run)
    for (const auto& s : solvers) tasks.push_back({run, s});

  std::vector<json> entries(tasks.size());
  std::atomic<size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& task = tasks[idx];
      try {
        uint64_t run_seed = base.seed + static_cast<uint64_t>(task.run);
        Instance inst = resolve_instance(cfg.at("instance"), config_dir, run_seed);
        SolverConfig scfg = base;
        scfg.seed = run_seed;
        Trajectory traj =
            dispatch_solver(task.solver, *inst.objective, *inst.constraint, scfg);
        fs::path csv = fs::path(outdir) / ("trajectory_" + task.solver + "_" +
                                           std::to_string(task.run) + ".csv");
        drsm::write_trajectory_csv(csv.string(), traj, timings);
        json entry = json::parse(drsm::summary_json(traj, task.solver, run_seed));
        entry["run"] = task.run;
        entry["instance"] = inst.name;
        entries[idx] = std::move(entry);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  // parallelism over independent runs only; a single run stays sequential
  std::vector<std::thread> pool;
  int nthreads = std::min<int>(parallelism, static_cast<int>(tasks.size()));
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  json summary;
  summary["runs"] = entries;
  std::ofstream sout(fs::path(outdir) / "summary.json");
  sout << summary.dump(2) << '\n';
  return 0;
}

int cmd_verify(const std::string& instance_path, const std::vector<std::string>& checks,
               const std::string& outdir, int samples, double tol, uint64_t seed) {
  Instance inst = drsm::load_instance(instance_path);
  const drsm::Objective& obj = *inst.objective;
  seed = env_seed_override(seed);
  fs::create_directories(outdir);
  bool all_pass = true;
  for (const std::string& name : checks) {
    drsm::CheckReport rep;
    if (name == "weak_dr")
      rep = drsm::check_weak_dr(obj, samples, tol, seed);
    else if (name == "dr")
      rep = drsm::check_dr(obj, samples, tol, seed);
    else if (name == "antitone")
      rep = drsm::check_antitone(obj, samples, tol, false, seed);
    else if (name == "weak_antitone")
      rep = drsm::check_antitone(obj, samples, tol, true, seed);
    else if (name == "cross_partials")
      rep = drsm::check_cross_partials(obj, samples, tol, false, seed);
    else if (name == "cross_partials_offdiag")
      rep = drsm::check_cross_partials(obj, samples, tol, true, seed);
    else if (name == "directional_concavity")
      rep = drsm::check_directional_concavity(obj, samples, tol, seed);
    else if (name == "join_meet")
      rep = drsm::check_join_meet_bound(obj, samples, tol, seed);
    else
      throw ValidationError("unknown check: " + name);
    fs::path out = fs::path(outdir) / ("check_" + name + ".json");
    std::ofstream o(out);
    o << rep.to_json() << '\n';
    std::cout << (rep.pass ? "pass " : "FAIL ") << name << " (worst margin "
              << rep.worst_margin << ")\n";
    all_pass = all_pass && rep.pass;
  }
  return all_pass ? 0 : 3;
}

int cmd_gen(const std::string& family, int n, uint64_t seed, const std::string& out,
            bool monotone, int forums, double q, double u, double budget_fraction) {
  seed = env_seed_override(seed);
  if (family == "softmax") {
    drsm::save_instance(out, drsm::gen_softmax_instance(n, seed));
  } else if (family == "quadratic") {
    drsm::save_instance(out, drsm::gen_quadratic_instance(n, monotone, seed));
  } else if (family == "influence") {
    drsm::BipartiteGraph g = drsm::gen_bipartite_graph(n, forums, 4, seed);
    fs::path edges = fs::path(out).replace_extension(".edges");
    {
      std::ofstream eo(edges);
      eo << "# user forum weight\n";
      for (const auto& e : g.edges)
        eo << e.user << ' ' << e.forum << ' ' << e.weight << '\n';
    }
    json j;
    j["name"] = "influence_n" + std::to_string(n);
    j["seed"] = seed;
    j["objective"] = {{"family", "influence"},
                      {"graph", edges.filename().string()},
                      {"u_cap", 1.0}};
    j["constraint"] = {{"type", "cardinality"}, {"n", n}, {"u", 1.0}, {"b", 0.5 * n}};
    std::ofstream o(out);
    o << j.dump(2) << '\n';
  } else if (family == "revenue") {
    // synthetic symmetric contact graph
    drsm::CounterRng rng = drsm::CounterRng(seed).split(0x9e7);
    fs::path edges = fs::path(out).replace_extension(".edges");
    {
      std::ofstream eo(edges);
      eo << "# src dst contacts\n";
      for (int i = 0; i < n; ++i)
        for (int r = 0; r < 3; ++r) {
          int jdx = rng.next_int(0, n - 1);
          if (jdx == i) continue;
          double w = 1.0 + static_cast<double>(rng.next_int(0, 49));
          eo << i << ' ' << jdx << ' ' << w << '\n';
          eo << jdx << ' ' << i << ' ' << w << '\n';
        }
    }
    json j;
    j["name"] = "revenue_n" + std::to_string(n);
    j["seed"] = seed;
    j["objective"] = {{"family", "revenue"},
                      {"graph", edges.filename().string()},
                      {"q", q},
                      {"u", u}};
    j["constraint"] = {{"type", "cardinality"},
                       {"n", n},
                       {"u", u},
                       {"b", budget_fraction * n * u}};
    std::ofstream o(out);
    o << j.dump(2) << '\n';
  } else {
    throw ValidationError("unknown family: " + family);
  }
  std::cout << "wrote " << out << '\n';
  return 0;
}

int cmd_plot(const std::vector<std::string>& csvs, const std::string& out) {
  std::vector<drsm::TrajectorySeries> series;
  for (const auto& path : csvs) series.push_back(drsm::read_trajectory_csv(path));
  drsm::write_svg(out, series);
  std::cout << "wrote " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous DR-submodular maximization toolkit"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run solvers from a config file");
  std::string run_config, run_outdir;
  run->add_option("-c,--config", run_config, "run config JSON")->required();
  run->add_option("-o,--output", run_outdir, "output directory override");

  auto* verify = app.add_subcommand("verify", "run property checks on an instance");
  std::string verify_instance, verify_outdir = ".", checks_csv;
  int verify_samples = drsm::kDefaultSamples;
  double verify_tol = drsm::kDefaultCheckTol;
  uint64_t verify_seed = 7;
  verify->add_option("-i,--instance", verify_instance, "instance JSON")->required();
  verify->add_option("--checks", checks_csv, "comma-separated check names")->required();
  verify->add_option("-o,--output", verify_outdir, "report directory");
  verify->add_option("--samples", verify_samples, "samples per check");
  verify->add_option("--tol", verify_tol, "violation tolerance");
  verify->add_option("--seed", verify_seed, "sampling seed");

  auto* gen = app.add_subcommand("gen", "generate a synthetic instance");
  std::string gen_family, gen_out = "instance.json";
  int gen_n = 10, gen_forums = 10;
  uint64_t gen_seed = 7;
  bool gen_monotone = false;
  double gen_q = 0.75, gen_u = 10.0, gen_fraction = 0.2;
  gen->add_option("--family", gen_family, "softmax|quadratic|influence|revenue")
      ->required();
  gen->add_option("-n", gen_n, "dimension / node count")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("-o,--output", gen_out, "instance JSON path");
  gen->add_flag("--monotone", gen_monotone, "monotone variant (quadratic)");
  gen->add_option("--forums", gen_forums, "forum count (influence)");
  gen->add_option("--q", gen_q, "advocacy decay q (revenue)");
  gen->add_option("--u", gen_u, "box cap u (revenue)");
  gen->add_option("--budget-fraction", gen_fraction, "budget fraction (revenue)");

  auto* plot = app.add_subcommand("plot", "render trajectory CSVs as an SVG");
  std::vector<std::string> plot_csvs;
  std::string plot_out = "plot.svg";
  plot->add_option("csvs", plot_csvs, "trajectory CSV files")->required();
  plot->add_option("-o,--output", plot_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_config, run_outdir);
    if (verify->parsed()) {
      std::vector<std::string> checks;
      std::stringstream ss(checks_csv);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) checks.push_back(item);
      if (checks.empty()) throw ValidationError("--checks is empty");
      return cmd_verify(verify_instance, checks, verify_outdir, verify_samples,
                        verify_tol, verify_seed);
    }
    if (gen->parsed())
      return cmd_gen(gen_family, gen_n, gen_seed, gen_out, gen_monotone, gen_forums,
                     gen_q, gen_u, gen_fraction);
    if (plot->parsed()) return cmd_plot(plot_csvs, plot_out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const drsm::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
