// plantutor command line: serve, check, gen, export.

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "plantutor/plantutor.hpp"

namespace pt = plantutor;

namespace {

constexpr int kSolved = 0;
constexpr int kValidNotSolved = 1;
constexpr int kInvalid = 2;

struct Loaded {
  pt::Domain domain;
  std::string problem_text;
  std::shared_ptr<pt::GroundedTask> task;
  pt::SemanticMap semantics;
};

Loaded load_task(const std::string& domain_file, const std::string& problem_file,
                 const std::optional<std::string>& semantics_file) {
  Loaded l;
  l.domain = pt::parse_domain(pt::read_file(domain_file), domain_file);
  l.problem_text = pt::read_file(problem_file);
  l.task = std::make_shared<pt::GroundedTask>(l.domain, pt::parse_problem(l.problem_text, l.domain, problem_file));
  std::filesystem::path beside = std::filesystem::path(domain_file).parent_path() / "semantics.map";
  if (semantics_file) {
    l.semantics = pt::SemanticMap::load(*semantics_file);
    l.semantics.check_against(l.domain);
  } else if (std::filesystem::exists(beside)) {
    l.semantics = pt::SemanticMap::load(beside.string());
    l.semantics.check_against(l.domain);
  } else {
    l.semantics = pt::SemanticMap::fallback(l.domain);
  }
  return l;
}

int run_check(const std::string& domain_file, const std::string& problem_file, const std::string& plan_file,
              const std::optional<std::string>& semantics_file, bool json) {
  Loaded l;
  pt::ValidationReport r;
  std::vector<pt::GroundAction> steps;
  try {
    l = load_task(domain_file, problem_file, semantics_file);
    steps = pt::resolve_plan(*l.task, pt::parse_plan(pt::read_file(plan_file)));
    r = pt::validate(*l.task, steps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  auto explanations = pt::explanations_for_report(*l.task, r, l.semantics);
  int code = !r.is_valid ? kInvalid : r.goal_achieved ? kSolved : kValidNotSolved;
  const char* verdict = !r.is_valid ? "invalid" : r.goal_achieved ? "solved" : "valid, goal not reached";

  if (json) {
    pt::Json out{{"is_valid", r.is_valid}, {"goal_achieved", r.goal_achieved}, {"result", verdict}};
    pt::Json st = pt::Json::array();
    for (std::size_t i = 0; i < steps.size(); ++i)
      st.push_back({{"step", i + 1},
                    {"action", l.task->action_text(steps[i])},
                    {"status", r.step_status[i] == pt::StepStatus::valid ? "ok" : "failed"}});
    out["steps"] = st;
    pt::Json ex = pt::Json::array();
    for (std::size_t i = 0; i < explanations.size(); ++i)
      ex.push_back({{"step", explanations[i].step},
                    {"unmet", l.task->state_text(r.failures[i].unmet)},
                    {"tldr", explanations[i].tldr}});
    out["explanations"] = ex;
    pt::Json trace = pt::Json::array();
    for (const auto& s : r.trace) trace.push_back(l.task->state_text(s));
    out["trace"] = trace;
    std::cout << out.dump(2) << "\n";
    return code;
  }
  for (std::size_t i = 0; i < steps.size(); ++i)
    std::cout << "step " << i + 1 << ": " << l.task->action_text(steps[i]) << " "
              << (r.step_status[i] == pt::StepStatus::valid ? "ok" : "FAILED") << "\n";
  for (const auto& e : explanations) std::cout << e.tldr << "\n";
  std::cout << "state after " << r.valid_prefix_length() << " valid step(s):";
  for (const auto& atom : l.task->state_text(r.trace.back())) std::cout << " " << atom;
  std::cout << "\nresult: " << verdict << "\n";
  return code;
}

int run_gen(const std::string& domain_file, const std::string& problem_file, const std::string& mode,
            std::size_t depth, std::uint64_t seed, const std::optional<std::string>& costs_file, bool json) {
  Loaded l;
  pt::PerformanceMap cu;
  try {
    l = load_task(domain_file, problem_file, std::nullopt);
    cu = pt::PerformanceMap::cold_start(l.domain);
    if (costs_file) {
      auto j = pt::Json::parse(pt::read_file(*costs_file));
      for (const auto& [schema, cost] : j.items()) {
        if (!cu.contains(schema)) throw pt::ConfigError("costs file names unknown schema '" + schema + "'");
        cu.set(schema, cost.get<int>());
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  pt::GeneratedTask g;
  try {
    g = mode == "adaptive" ? pt::generate_adaptive_task(cu, *l.task, depth) : pt::generate_random_task(*l.task, depth, seed);
  } catch (const pt::GenerationError& e) {
    if (json) {
      pt::Json out{{"error", e.what()}};
      if (e.max_depth()) out["max_depth"] = *e.max_depth();
      std::cout << out.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
      if (e.max_depth()) std::cout << "max_depth: " << *e.max_depth() << "\n";
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  auto goal = l.task->state_text(g.goal);
  std::vector<std::string> witness;
  for (const auto& a : g.witness) witness.push_back(l.task->action_text(a));
  if (json) {
    pt::Json out{{"provenance", pt::to_string(g.provenance)},
                 {"goal", goal},
                 {"reference_plan_length", g.reference_plan_length},
                 {"witness", witness}};
    out["trigger"] = g.trigger ? pt::Json{{"schema", g.trigger->schema}, {"depth", g.trigger->depth}} : pt::Json(nullptr);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  for (const auto& atom : goal) std::cout << "goal: " << atom << "\n";
  if (g.trigger) std::cout << "trigger: " << g.trigger->schema << " " << g.trigger->depth << "\n";
  for (const auto& w : witness) std::cout << "witness: " << w << "\n";
  return 0;
}

int run_export(const std::string& data_dir, bool summary) {
  try {
    pt::SessionStore store(data_dir, std::make_shared<pt::Registry>());
    auto sessions = store.all();
    if (!summary) {
      std::cout << pt::export_csv(sessions);
      return 0;
    }
    std::cout << "task,solved,unsolved,mean_seconds,median_seconds\n";
    for (const auto& s : pt::solve_time_report(sessions))
      std::cout << s.task_id << ',' << s.durations.size() << ',' << s.unsolved << ',' << s.mean << ',' << s.median
                << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_serve(const std::optional<std::string>& config_file) {
  pt::ServiceConfig cfg;
  std::shared_ptr<pt::Registry> registry;
  try {
    if (config_file) {
      cfg = pt::load_config(*config_file);
    } else {
      pt::apply_env_overrides(cfg);
      pt::check_config(cfg);
    }
    registry = std::make_shared<pt::Registry>(pt::Registry::load_directory(cfg.env_dir));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  // Block the shutdown signals before any thread starts so only sigwait
  // below receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    auto tutor = std::make_shared<pt::Tutor>(cfg, registry);
    pt::Server server(tutor);
    int port = server.start(cfg.host, cfg.port);
    std::cout << "plantutor listening on http://" << cfg.host << ":" << port << " (" << registry->list().size()
              << " domains, data in " << cfg.data_dir.string() << ")" << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive task-planning tutor"};
  app.require_subcommand(1);

  std::optional<std::string> config_file;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", config_file, "JSON config file");

  std::string domain_file, problem_file, plan_file;
  std::optional<std::string> semantics_file;
  bool json = false;
  auto* check = app.add_subcommand("check", "Validate a plan file (exit 0 solved, 1 valid but unsolved, 2 invalid)");
  check->add_option("domain", domain_file)->required()->check(CLI::ExistingFile);
  check->add_option("problem", problem_file)->required()->check(CLI::ExistingFile);
  check->add_option("plan", plan_file)->required()->check(CLI::ExistingFile);
  check->add_option("--semantics", semantics_file, "semantics map (default: semantics.map next to the domain)");
  check->add_flag("--json", json);

  std::string mode = "adaptive";
  std::size_t depth = pt::kDefaultMaxDepth;
  std::uint64_t seed = 0;
  std::optional<std::string> costs_file;
  auto* gen = app.add_subcommand("gen", "Generate a task goal");
  gen->add_option("domain", domain_file)->required()->check(CLI::ExistingFile);
  gen->add_option("problem", problem_file)->required()->check(CLI::ExistingFile);
  gen->add_option("--mode", mode)->check(CLI::IsMember({"adaptive", "random"}));
  gen->add_option("--depth", depth, "maximum depth (adaptive) or exact depth (random)")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed);
  gen->add_option("--costs-file", costs_file, "JSON object of schema costs; default cold start");
  gen->add_flag("--json", json);

  std::string data_dir = "data";
  bool summary = false;
  auto* exp = app.add_subcommand("export", "Write solve times as CSV");
  exp->add_option("--data-dir", data_dir);
  exp->add_flag("--summary", summary, "per-task mean and median instead of one row per task attempt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (*serve) return run_serve(config_file);
  if (*check) return run_check(domain_file, problem_file, plan_file, semantics_file, json);
  if (*gen) return run_gen(domain_file, problem_file, mode, depth, seed, costs_file, json);
  return run_export(data_dir, summary);
}
