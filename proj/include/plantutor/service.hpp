#pragma once
//
// HTTP/JSON service. Tutor holds the request logic and is usable without a
// socket; Server maps routes onto it.
//
//   GET  /api/domains
//   POST /api/sessions                    {"domain"}
//   POST /api/sessions/{id}/task          {"mode": adaptive|random|preset, "preset"?, "depth"?, "seed"?}
//   POST /api/sessions/{id}/validate      {"plan"}
//   POST /api/sessions/{id}/hint          {}
//   POST /api/sessions/{id}/execute       {"plan"}
//   GET  /api/sessions/{id}/report
//
// Errors come back as {"error": {"code", "message", "details"?}}.
//

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "plantutor/curriculum.hpp"
#include "plantutor/environment.hpp"
#include "plantutor/explainer.hpp"
#include "plantutor/hinter.hpp"
#include "plantutor/llm.hpp"
#include "plantutor/session_store.hpp"
#include "plantutor/validator.hpp"

namespace plantutor {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = "data";
  std::filesystem::path env_dir = "env";
  std::optional<std::filesystem::path> static_dir;
  LlmConfig llm;
  std::size_t max_depth = kDefaultMaxDepth;
  std::size_t random_depth = kDefaultMaxDepth;
  double hint_reveal_probability = 0.5;
  std::chrono::milliseconds hint_timeout{5000};
  // When set, the n-th hint of a session uses seed + n.
  std::optional<std::uint64_t> hint_seed;
};

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

template <class T>
void read_opt(const Json& j, const char* key, T& out, const std::string& file) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(file + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace detail

// Known keys: host, port, data_dir, env_dir, static_dir, max_depth,
// random_depth, hint_reveal_probability, hint_timeout_ms, hint_seed and an
// "llm" object with enabled, endpoint, model, api_key_env, timeout_ms,
// temperature, system_message.
inline ServiceConfig parse_config(const std::string& text, const std::string& file = "<config>") {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(file + ":" + detail::line_col(text, e.byte) + ": malformed JSON");
  }
  if (!j.is_object()) throw ConfigError(file + ": top level must be an object");
  static const std::vector<std::string> known{"host",         "port",        "data_dir",       "env_dir",
                                              "static_dir",   "max_depth",   "random_depth",   "hint_reveal_probability",
                                              "hint_timeout_ms", "hint_seed", "llm"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError(file + ": unknown field '" + key + "'");

  ServiceConfig c;
  detail::read_opt(j, "host", c.host, file);
  detail::read_opt(j, "port", c.port, file);
  std::string path;
  if (j.contains("data_dir")) detail::read_opt(j, "data_dir", path, file), c.data_dir = path;
  if (j.contains("env_dir")) detail::read_opt(j, "env_dir", path, file), c.env_dir = path;
  if (j.contains("static_dir")) detail::read_opt(j, "static_dir", path, file), c.static_dir = path;
  detail::read_opt(j, "max_depth", c.max_depth, file);
  detail::read_opt(j, "random_depth", c.random_depth, file);
  detail::read_opt(j, "hint_reveal_probability", c.hint_reveal_probability, file);
  std::int64_t ms = c.hint_timeout.count();
  detail::read_opt(j, "hint_timeout_ms", ms, file);
  c.hint_timeout = std::chrono::milliseconds(ms);
  if (j.contains("hint_seed")) {
    std::uint64_t seed = 0;
    detail::read_opt(j, "hint_seed", seed, file);
    c.hint_seed = seed;
  }
  if (j.contains("llm")) {
    const Json& l = j["llm"];
    if (!l.is_object()) throw ConfigError(file + ": field 'llm' must be an object");
    detail::read_opt(l, "enabled", c.llm.enabled, file);
    detail::read_opt(l, "endpoint", c.llm.endpoint, file);
    detail::read_opt(l, "model", c.llm.model, file);
    detail::read_opt(l, "api_key_env", c.llm.api_key_env, file);
    detail::read_opt(l, "temperature", c.llm.temperature, file);
    std::int64_t llm_ms = c.llm.timeout.count();
    detail::read_opt(l, "timeout_ms", llm_ms, file);
    c.llm.timeout = std::chrono::milliseconds(llm_ms);
    if (l.contains("system_message")) {
      std::string sm;
      detail::read_opt(l, "system_message", sm, file);
      c.llm.system_message = sm;
    }
  }
  return c;
}

using EnvLookup = std::function<const char*(const char*)>;

// PLANTUTOR_* variables override the file.
inline void apply_env_overrides(ServiceConfig& c, const EnvLookup& env = [](const char* k) { return std::getenv(k); }) {
  auto num = [](const char* name, const char* v) {
    try {
      std::size_t used = 0;
      double d = std::stod(v, &used);
      if (used != std::string(v).size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError(std::string("environment variable ") + name + " is not a number: '" + v + "'");
    }
  };
  auto flag = [](const char* name, const char* v) {
    std::string s = v;
    if (s == "1" || s == "true" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "no") return false;
    throw ConfigError(std::string("environment variable ") + name + " is not a boolean: '" + v + "'");
  };
  if (auto v = env("PLANTUTOR_HOST")) c.host = v;
  if (auto v = env("PLANTUTOR_PORT")) c.port = static_cast<int>(num("PLANTUTOR_PORT", v));
  if (auto v = env("PLANTUTOR_DATA_DIR")) c.data_dir = v;
  if (auto v = env("PLANTUTOR_ENV_DIR")) c.env_dir = v;
  if (auto v = env("PLANTUTOR_STATIC_DIR")) c.static_dir = std::filesystem::path(v);
  if (auto v = env("PLANTUTOR_MAX_DEPTH")) c.max_depth = static_cast<std::size_t>(num("PLANTUTOR_MAX_DEPTH", v));
  if (auto v = env("PLANTUTOR_HINT_P")) c.hint_reveal_probability = num("PLANTUTOR_HINT_P", v);
  if (auto v = env("PLANTUTOR_HINT_TIMEOUT_MS"))
    c.hint_timeout = std::chrono::milliseconds(static_cast<std::int64_t>(num("PLANTUTOR_HINT_TIMEOUT_MS", v)));
  if (auto v = env("PLANTUTOR_LLM_ENABLED")) c.llm.enabled = flag("PLANTUTOR_LLM_ENABLED", v);
  if (auto v = env("PLANTUTOR_LLM_ENDPOINT")) c.llm.endpoint = v;
  if (auto v = env("PLANTUTOR_LLM_MODEL")) c.llm.model = v;
}

inline void check_config(const ServiceConfig& c) {
  if (c.port < 0 || c.port > 65535) throw ConfigError("port out of range: " + std::to_string(c.port));
  if (c.max_depth == 0) throw ConfigError("max_depth must be at least 1");
  if (c.random_depth == 0) throw ConfigError("random_depth must be at least 1");
  try {
    HintConfig{c.hint_reveal_probability, c.hint_timeout, c.hint_seed}.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

inline ServiceConfig load_config(const std::filesystem::path& path) {
  ServiceConfig c = parse_config(read_file(path), path.string());
  apply_env_overrides(c);
  check_config(c);
  return c;
}

class ApiError : public std::runtime_error {
 public:
  ApiError(std::string code, const std::string& message, Json details = nullptr)
      : std::runtime_error(message), code_(std::move(code)), details_(std::move(details)) {}

  const std::string& code() const { return code_; }
  const Json& details() const { return details_; }

  int http_status() const {
    static const std::map<std::string, int> status{
        {"unknown_session", 404}, {"unknown_domain", 404},        {"unknown_preset", 404},
        {"bad_request", 400},     {"unresolvable_step", 422},     {"generation_impossible", 422},
        {"plan_invalid", 409},    {"no_task", 409},               {"clock_regression", 409},
    };
    auto it = status.find(code_);
    return it == status.end() ? 500 : it->second;
  }

  Json to_json() const {
    Json e{{"code", code_}, {"message", what()}};
    if (!details_.is_null()) e["details"] = details_;
    return {{"error", e}};
  }

 private:
  std::string code_;
  Json details_;
};

using Translator = std::function<std::optional<std::string>(const PromptBundle&)>;

class Tutor {
 public:
  Tutor(ServiceConfig cfg, std::shared_ptr<const Registry> registry, Clock clock = system_clock_ms,
        Translator translator = {})
      : cfg_(std::move(cfg)),
        registry_(std::move(registry)),
        store_(cfg_.data_dir, registry_, std::move(clock)),
        translator_(std::move(translator)) {
    if (!translator_) translator_ = [llm = cfg_.llm](const PromptBundle& b) { return translate(b, llm); };
  }

  const ServiceConfig& config() const { return cfg_; }
  SessionStore& store() { return store_; }

  Json list_domains() const {
    Json out = Json::array();
    for (const auto& b : registry_->list()) {
      Json instructions = Json::array();
      for (const auto& s : b->domain.schemas) {
        Json params = Json::array();
        for (const auto& p : s.params) params.push_back({{"name", p.name}, {"type", p.type}});
        instructions.push_back({{"schema", s.name}, {"parameters", params}, {"label", b->semantics.action_template(s.name)}});
      }
      Json presets = Json::array();
      for (const auto& p : b->presets) presets.push_back({{"id", p.id}, {"goal_nl", goal_nl(*p.task, *b)}});
      Json objects = Json::array();
      const GroundedTask& base = *b->base().task;
      for (std::size_t i = 0; i < base.objects().size(); ++i)
        objects.push_back({{"name", base.objects()[i]},
                           {"type", base.object_type(static_cast<ObjectId>(i))},
                           {"display", b->semantics.display(base.objects()[i])}});
      out.push_back({{"name", b->name},
                     {"description", b->description},
                     {"instructions", instructions},
                     {"objects", objects},
                     {"presets", presets}});
    }
    return out;
  }

  Json create_session(const Json& body) {
    std::string domain = body.is_object() ? body.value("domain", std::string()) : std::string();
    if (domain.empty()) throw ApiError("bad_request", "field 'domain' is required");
    try {
      Session s = store_.create_session(domain);
      return {{"session_id", s.id}, {"domain", s.domain_name}, {"performance", s.performance.costs()}};
    } catch (const UnknownDomain& e) {
      throw ApiError("unknown_domain", e.what());
    }
  }

  Json next_task(const std::string& id, const Json& body) {
    std::string mode = body.value("mode", std::string("adaptive"));
    return guarded(id, [&](Session& s) {
      auto bundle = bundle_of(s);
      TaskRecord rec;
      std::shared_ptr<const GroundedTask> base = bundle->base().task;
      rec.base_preset = bundle->base().id;
      if (mode == "preset") {
        std::string preset_id = body.value("preset", std::string());
        const Preset* p = bundle->find_preset(preset_id);
        if (!p) throw ApiError("unknown_preset", "unknown preset '" + preset_id + "'");
        rec.base_preset = p->id;
        rec.provenance = Provenance::preset;
        rec.goal = p->task->state_text(p->task->goal());
        rec.reference_plan_length = p->reference_plan.size();
        rec.witness = p->reference_plan;
        rec.task_id = "preset-" + p->id;
        ++s.tasks_generated;
      } else if (mode == "adaptive" || mode == "random") {
        GeneratedTask g;
        try {
          if (mode == "adaptive") {
            g = generate_adaptive_task(s.performance, *base, cfg_.max_depth);
          } else {
            std::size_t depth = body.value("depth", cfg_.random_depth);
            std::uint64_t seed = body.contains("seed") ? body["seed"].get<std::uint64_t>() : std::random_device{}();
            g = generate_random_task(*base, depth, seed);
          }
        } catch (const GenerationError& e) {
          Json details = nullptr;
          if (e.max_depth()) details = {{"max_depth", *e.max_depth()}};
          throw ApiError("generation_impossible", e.what(), details);
        } catch (const std::invalid_argument& e) {
          throw ApiError("bad_request", e.what());
        }
        rec.provenance = g.provenance;
        rec.goal = base->state_text(g.goal);
        rec.trigger = g.trigger;
        rec.reference_plan_length = g.reference_plan_length;
        for (const auto& a : g.witness) rec.witness.push_back(to_step(*base, a));
        rec.task_id = std::string(to_string(g.provenance)) + "-" + std::to_string(++s.tasks_generated);
      } else {
        throw ApiError("bad_request", "mode must be adaptive, random or preset");
      }
      s.current_task = rec;
      s.last_plan.clear();
      Json task = task_json(*bundle, rec);
      s.append({EventKind::task_generated, store_.now(), task});
      return task;
    });
  }

  Json validate(const std::string& id, const Json& body) {
    Plan plan = plan_of(body);
    return guarded(id, [&](Session& s) {
      auto bundle = bundle_of(s);
      const TaskRecord& rec = require_task(s);
      GroundedTask task = grounded(*bundle, rec);
      auto steps = resolve(task, plan);
      ValidationReport r = validate_steps(task, steps);
      record_edit(s, steps, plan, r);
      const GroundedTask* tp = &task;
      auto detail = [&](const Explanation& e) -> std::optional<std::string> {
        auto prompt = build_explanation_prompt(bundle->name, bundle->domain_text, to_pddl(tp->problem()), e.tldr,
                                               join(tp->state_text(r.trace.back()), " "));
        return translator_(prompt);
      };
      auto explanations = explanations_for_report(task, r, bundle->semantics, detail);
      Json out = report_json(task, *bundle, steps, r);
      Json ex = Json::array();
      for (const auto& e : explanations) ex.push_back(explanation_json(e));
      out["explanations"] = ex;
      s.append({EventKind::validation,
                store_.now(),
                {{"task_id", rec.task_id}, {"is_valid", r.is_valid}, {"goal_achieved", r.goal_achieved},
                 {"failures", r.failures.size()}}});
      return out;
    });
  }

  Json hint(const std::string& id) {
    return guarded(id, [&](Session& s) {
      auto bundle = bundle_of(s);
      const TaskRecord& rec = require_task(s);
      GroundedTask task = grounded(*bundle, rec);
      ValidationReport r = validate_steps(task, resolve(task, s.last_plan));
      std::size_t n = 0;
      for (const auto& e : s.history)
        if (e.kind == EventKind::hint_requested) ++n;
      s.append({EventKind::hint_requested, store_.now(), {{"task_id", rec.task_id}}});
      HintConfig hc{cfg_.hint_reveal_probability, cfg_.hint_timeout, cfg_.hint_seed};
      std::mt19937_64 rng(cfg_.hint_seed ? *cfg_.hint_seed + n : std::random_device{}());
      HintResult h = next_hint(task, r.trace.back(), bundle->semantics, hc, rng);
      Json out{{"status", status_code(h.status)}, {"message", status_message(h.status)}};
      if (h.hint) {
        Json hj{{"text", h.hint->text}, {"schema", h.hint->action.schema}, {"visible", h.hint->visible}};
        Json args = Json::array();
        for (std::size_t i = 0; i < h.hint->action.args.size(); ++i)
          args.push_back(h.hint->visible[i] ? Json(task.object_name(h.hint->action.args[i])) : Json(nullptr));
        hj["args"] = args;
        auto prompt = build_hint_prompt(bundle->name, bundle->domain_text, to_pddl(task.problem()), h.hint->text,
                                        join(task.state_text(r.trace.back()), " "));
        if (auto text = translator_(prompt)) hj["detailed"] = *text;
        out["hint"] = hj;
        s.append({EventKind::hint_shown,
                  store_.now(),
                  {{"task_id", rec.task_id}, {"schema", h.hint->action.schema}, {"text", h.hint->text}}});
      }
      return out;
    });
  }

  Json execute(const std::string& id, const Json& body) {
    Plan plan = plan_of(body);
    return guarded(id, [&](Session& s) {
      auto bundle = bundle_of(s);
      const TaskRecord rec = require_task(s);
      GroundedTask task = grounded(*bundle, rec);
      auto steps = resolve(task, plan);
      ValidationReport r = validate_steps(task, steps);
      if (!r.is_valid) {
        Json failing = Json::array();
        for (const auto& f : r.failures) failing.push_back(f.step_index);
        throw ApiError("plan_invalid", "the plan has steps that cannot be performed", {{"failing_steps", failing}});
      }
      record_edit(s, steps, plan, r);
      Json frames = Json::array();
      auto trace = state_trace(task, steps);
      for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& t = trace[i];
        frames.push_back({{"label", t.label},
                          {"label_nl", i == 0 ? std::string("Initial state")
                                              : render_action_nl(task, steps[i - 1], bundle->semantics)},
                          {"state", task.state_text(t.state)},
                          {"added", task.state_text(t.added)},
                          {"removed", task.state_text(t.removed)}});
      }
      s.append({EventKind::execute,
                store_.now(),
                {{"task_id", rec.task_id}, {"steps", steps.size()}, {"goal_achieved", r.goal_achieved}}});
      bool solved_now = false;
      if (r.goal_achieved && !already_solved(s, rec.task_id)) {
        s.append({EventKind::task_solved, store_.now(), {{"task_id", rec.task_id}}});
        solved_now = true;
      }
      return Json{{"frames", frames}, {"goal_achieved", r.goal_achieved}, {"task_solved", solved_now}};
    });
  }

  Json report(const std::string& id) {
    Session s = snapshot(id);
    Json tasks = Json::array();
    for (const auto& t : task_timings({s})) {
      tasks.push_back({{"task_id", t.task_id},
                       {"solve_seconds", t.solve_seconds ? Json(*t.solve_seconds) : Json(nullptr)},
                       {"hints_used", t.hints_used}});
    }
    std::map<std::string, std::size_t> counts;
    for (const auto& e : s.history) counts[to_string(e.kind)]++;
    return {{"session_id", s.id},
            {"domain", s.domain_name},
            {"performance", s.performance.costs()},
            {"current_task", s.current_task ? to_json(*s.current_task) : Json(nullptr)},
            {"event_counts", counts},
            {"tasks", tasks}};
  }

 private:
  template <class Fn>
  Json guarded(const std::string& id, Fn&& fn) {
    try {
      return store_.update(id, std::forward<Fn>(fn));
    } catch (const UnknownSession& e) {
      throw ApiError("unknown_session", e.what());
    } catch (const ClockRegression& e) {
      throw ApiError("clock_regression", e.what());
    }
  }

  Session snapshot(const std::string& id) const {
    try {
      return store_.get(id);
    } catch (const UnknownSession& e) {
      throw ApiError("unknown_session", e.what());
    }
  }

  std::shared_ptr<const EnvironmentBundle> bundle_of(const Session& s) const {
    auto b = registry_->find(s.domain_name);
    if (!b) throw ApiError("unknown_domain", "domain '" + s.domain_name + "' is no longer registered");
    return b;
  }

  static const TaskRecord& require_task(const Session& s) {
    if (!s.current_task) throw ApiError("no_task", "request a task first");
    return *s.current_task;
  }

  static GroundedTask grounded(const EnvironmentBundle& b, const TaskRecord& rec) {
    const Preset* p = b.find_preset(rec.base_preset);
    if (!p) throw ApiError("unknown_preset", "unknown preset '" + rec.base_preset + "'");
    std::vector<Atom> goal;
    for (const auto& g : rec.goal) goal.push_back(p->task->parse_atom(g));
    return p->task->with_goal(goal);
  }

  static Plan plan_of(const Json& body) {
    if (!body.is_object() || !body.contains("plan")) throw ApiError("bad_request", "field 'plan' is required");
    try {
      return plan_from_json(body["plan"]);
    } catch (const std::exception& e) {
      throw ApiError("bad_request", e.what());
    }
  }

  static std::vector<GroundAction> resolve(const GroundedTask& task, const Plan& plan) {
    try {
      return resolve_plan(task, plan);
    } catch (const ResolveError& e) {
      Json details = nullptr;
      if (e.step_index()) details = {{"step", *e.step_index()}};
      throw ApiError("unresolvable_step", e.what(), details);
    }
  }

  static ValidationReport validate_steps(const GroundedTask& task, const std::vector<GroundAction>& steps) {
    return plantutor::validate(task, steps);
  }

  static bool already_solved(const Session& s, const std::string& task_id) {
    for (const auto& e : s.history)
      if (e.kind == EventKind::task_solved && e.payload.value("task_id", std::string()) == task_id) return true;
    return false;
  }

  // Steps of `plan` not present in the previous plan (multiset difference)
  // count as new and feed the performance map.
  void record_edit(Session& s, const std::vector<GroundAction>& steps, const Plan& plan, const ValidationReport& r) {
    std::map<std::string, int> previous;
    for (const auto& step : s.last_plan) previous[to_text(step)]++;
    Json fresh = Json::array();
    for (std::size_t i = 0; i < plan.size(); ++i) {
      auto& count = previous[to_text(plan[i])];
      if (count > 0) {
        --count;
        continue;
      }
      fresh.push_back({{"index", i},
                       {"schema", steps[i].schema},
                       {"applicable", r.step_status[i] == StepStatus::valid}});
    }
    bool changed = plan != s.last_plan;
    s.last_plan = plan;
    if (changed) {
      Json steps = Json::array();
      for (const auto& step : plan) steps.push_back(to_text(step));
      s.append({EventKind::plan_edit, store_.now(), {{"plan", steps}, {"new_steps", fresh}}});
    }
  }

  static std::vector<std::string> goal_nl(const GroundedTask& task, const EnvironmentBundle& b) {
    std::vector<std::string> out;
    for (const auto& g : task.goal()) out.push_back(render_atom_nl(task, g, b.semantics, true));
    return out;
  }

  static Json task_json(const EnvironmentBundle& b, const TaskRecord& rec) {
    Json j = to_json(rec);
    GroundedTask task = grounded(b, rec);
    j["goal_nl"] = goal_nl(task, b);
    j["init"] = task.state_text(task.init());
    return j;
  }

  static Json explanation_json(const Explanation& e) {
    return {{"step", e.step},
            {"action_nl", e.action_nl},
            {"reasons", e.reasons},
            {"tldr", e.tldr},
            {"detailed", e.detailed ? Json(*e.detailed) : Json(nullptr)},
            {"source", e.source == ExplanationSource::llm ? "llm" : "template"}};
  }

  static Json report_json(const GroundedTask& task, const EnvironmentBundle& b, const std::vector<GroundAction>& steps,
                          const ValidationReport& r) {
    Json step_json = Json::array();
    for (std::size_t i = 0; i < steps.size(); ++i) {
      Json sj{{"index", i},
              {"action", task.action_text(steps[i])},
              {"label_nl", render_action_nl(task, steps[i], b.semantics)},
              {"status", r.step_status[i] == StepStatus::valid ? "valid" : "invalid"}};
      step_json.push_back(sj);
    }
    Json failures = Json::array();
    for (const auto& f : r.failures) failures.push_back({{"step", f.step_index}, {"unmet", task.state_text(f.unmet)}});
    Json trace = Json::array();
    for (const auto& st : r.trace) trace.push_back(task.state_text(st));
    return {{"is_valid", r.is_valid},
            {"goal_achieved", r.goal_achieved},
            {"execute_enabled", r.is_valid},
            {"steps", step_json},
            {"failures", failures},
            {"trace", trace},
            {"valid_prefix_length", r.valid_prefix_length()},
            {"final_state", task.state_text(r.final_state)}};
  }

  ServiceConfig cfg_;
  std::shared_ptr<const Registry> registry_;
  SessionStore store_;
  Translator translator_;
};

class Server {
 public:
  explicit Server(std::shared_ptr<Tutor> tutor) : tutor_(std::move(tutor)) { routes(); }
  ~Server() { stop(); }

  // Binds (port 0 picks a free port) and serves on a background thread.
  int start(const std::string& host, int port) {
    int bound = port == 0 ? http_.bind_to_any_port(host) : (http_.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { http_.listen_after_bind(); });
    http_.wait_until_ready();
    return bound;
  }

  // Blocks until stop() is called from elsewhere.
  void run(const std::string& host, int port, const std::function<void(int)>& on_ready = {}) {
    int bound = port == 0 ? http_.bind_to_any_port(host) : (http_.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    if (on_ready) on_ready(bound);
    http_.listen_after_bind();
  }

  void stop() {
    http_.stop();
    if (thread_.joinable()) thread_.join();
  }

 private:
  using Handler = std::function<Json(const httplib::Request&)>;

  void routes() {
    http_.Get("/api/domains", wrap([this](const httplib::Request&) { return tutor_->list_domains(); }));
    http_.Post("/api/sessions", wrap([this](const httplib::Request& req) { return tutor_->create_session(body(req)); }));
    http_.Post(R"(/api/sessions/([0-9a-f]+)/task)",
               wrap([this](const httplib::Request& req) { return tutor_->next_task(req.matches[1], body(req)); }));
    http_.Post(R"(/api/sessions/([0-9a-f]+)/validate)",
               wrap([this](const httplib::Request& req) { return tutor_->validate(req.matches[1], body(req)); }));
    http_.Post(R"(/api/sessions/([0-9a-f]+)/hint)",
               wrap([this](const httplib::Request& req) { return tutor_->hint(req.matches[1]); }));
    http_.Post(R"(/api/sessions/([0-9a-f]+)/execute)",
               wrap([this](const httplib::Request& req) { return tutor_->execute(req.matches[1], body(req)); }));
    http_.Get(R"(/api/sessions/([0-9a-f]+)/report)",
              wrap([this](const httplib::Request& req) { return tutor_->report(req.matches[1]); }));
    const auto& static_dir = tutor_->config().static_dir;
    if (static_dir && std::filesystem::is_directory(*static_dir)) http_.set_mount_point("/", static_dir->string());
  }

  static Json body(const httplib::Request& req) {
    if (req.body.empty()) return Json::object();
    auto j = Json::parse(req.body, nullptr, false);
    if (j.is_discarded()) throw ApiError("bad_request", "request body is not valid JSON");
    return j;
  }

  static httplib::Server::Handler wrap(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        res.set_content(h(req).dump(), "application/json");
      } catch (const ApiError& e) {
        res.status = e.http_status();
        res.set_content(e.to_json().dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(ApiError("internal", e.what()).to_json().dump(), "application/json");
      }
    };
  }

  std::shared_ptr<Tutor> tutor_;
  httplib::Server http_;
  std::thread thread_;
};

}  // namespace plantutor
