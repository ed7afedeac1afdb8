#pragma once
//
// Per-learner sessions persisted as one JSON document per session under
// <data_dir>/sessions/<id>.json, written with write-then-rename. Each session
// carries an append-only event log; the performance map is a fold over that
// log, so replaying the log reproduces it exactly.
//

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "plantutor/curriculum.hpp"
#include "plantutor/environment.hpp"
#include "plantutor/validator.hpp"

namespace plantutor {

using Json = nlohmann::json;

enum class EventKind { plan_edit, validation, hint_requested, hint_shown, execute, task_solved, task_generated };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::plan_edit: return "plan_edit";
    case EventKind::validation: return "validation";
    case EventKind::hint_requested: return "hint_requested";
    case EventKind::hint_shown: return "hint_shown";
    case EventKind::execute: return "execute";
    case EventKind::task_solved: return "task_solved";
    case EventKind::task_generated: return "task_generated";
  }
  return "unknown";
}

inline EventKind event_kind_from(const std::string& s) {
  for (auto k : {EventKind::plan_edit, EventKind::validation, EventKind::hint_requested, EventKind::hint_shown,
                 EventKind::execute, EventKind::task_solved, EventKind::task_generated})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown event kind '" + s + "'");
}

// Payload conventions:
//   plan_edit       {"plan": [...], "new_steps": [{"index", "schema", "applicable"}]}
//   hint_shown      {"task_id", "schema", "text"}
//   task_generated  {"task_id", ...}
//   task_solved     {"task_id"}
struct Event {
  EventKind kind = EventKind::validation;
  std::int64_t timestamp_ms = 0;
  Json payload = Json::object();

  bool operator==(const Event&) const = default;
};

struct TaskRecord {
  std::string task_id;
  std::string base_preset;
  Provenance provenance = Provenance::preset;
  std::vector<std::string> goal;  // atom texts
  std::optional<Trigger> trigger;
  std::size_t reference_plan_length = 0;
  Plan witness;

  bool operator==(const TaskRecord&) const = default;
};

class ClockRegression : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownSession : public std::runtime_error {
 public:
  explicit UnknownSession(const std::string& id) : std::runtime_error("unknown session '" + id + "'") {}
};

class UnknownDomain : public std::runtime_error {
 public:
  explicit UnknownDomain(const std::string& name) : std::runtime_error("unknown domain '" + name + "'") {}
};

// Folds one event into the performance map. `pending_hints` holds schemas
// that were hinted and not yet used; a hint is consumed by the next new step
// of that schema.
inline void fold_event(PerformanceMap& cu, std::multiset<std::string>& pending_hints, const Event& e) {
  switch (e.kind) {
    case EventKind::task_generated:
      pending_hints.clear();
      break;
    case EventKind::hint_shown:
      if (e.payload.contains("schema")) pending_hints.insert(e.payload["schema"].get<std::string>());
      break;
    case EventKind::plan_edit:
      if (e.payload.contains("new_steps")) {
        for (const auto& step : e.payload["new_steps"]) {
          auto schema = step.at("schema").get<std::string>();
          bool hinted = false;
          if (auto it = pending_hints.find(schema); it != pending_hints.end()) {
            pending_hints.erase(it);
            hinted = true;
          }
          cu = update_performance(std::move(cu), schema, step.at("applicable").get<bool>(), hinted);
        }
      }
      break;
    default:
      break;
  }
}

struct Session {
  std::string id;
  std::string domain_name;
  std::int64_t created_at = 0;
  std::int64_t updated_at = 0;
  PerformanceMap initial_performance;
  PerformanceMap performance;
  std::optional<TaskRecord> current_task;
  Plan last_plan;
  std::size_t tasks_generated = 0;
  std::vector<Event> history;
  std::multiset<std::string> pending_hints;

  bool operator==(const Session&) const = default;

  // Appends an event and applies it to the performance map.
  void append(Event e) {
    std::int64_t last = history.empty() ? created_at : history.back().timestamp_ms;
    if (e.timestamp_ms < last)
      throw ClockRegression("event timestamp " + std::to_string(e.timestamp_ms) + " precedes " + std::to_string(last));
    fold_event(performance, pending_hints, e);
    updated_at = e.timestamp_ms;
    history.push_back(std::move(e));
  }

  PerformanceMap replay_performance() const {
    PerformanceMap cu = initial_performance;
    std::multiset<std::string> pending;
    for (const auto& e : history) fold_event(cu, pending, e);
    return cu;
  }
};

inline Json to_json(const Plan& plan) {
  Json j = Json::array();
  for (const auto& s : plan) j.push_back({{"action", s.schema}, {"args", s.args}});
  return j;
}

// Accepts [{"action": "move", "args": [...]}] or ["(move a b)", ...].
inline Plan plan_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("plan must be an array");
  Plan plan;
  for (const auto& item : j) {
    if (item.is_string()) {
      Plan one = parse_plan(item.get<std::string>());
      if (one.size() != 1) throw std::invalid_argument("each plan string must contain one step");
      plan.push_back(one.front());
    } else if (item.is_object()) {
      PlanStep step;
      step.schema = item.at("action").get<std::string>();
      if (item.contains("args")) step.args = item["args"].get<std::vector<std::string>>();
      plan.push_back(std::move(step));
    } else {
      throw std::invalid_argument("plan steps must be objects or strings");
    }
  }
  return plan;
}

inline Json to_json(const TaskRecord& t) {
  Json j{{"task_id", t.task_id},
         {"base_preset", t.base_preset},
         {"provenance", to_string(t.provenance)},
         {"goal", t.goal},
         {"reference_plan_length", t.reference_plan_length},
         {"witness", to_json(t.witness)}};
  j["trigger"] = t.trigger ? Json{{"schema", t.trigger->schema}, {"depth", t.trigger->depth}} : Json(nullptr);
  return j;
}

inline TaskRecord task_record_from_json(const Json& j) {
  TaskRecord t;
  t.task_id = j.at("task_id").get<std::string>();
  t.base_preset = j.at("base_preset").get<std::string>();
  auto p = j.at("provenance").get<std::string>();
  t.provenance = p == "adaptive" ? Provenance::adaptive : p == "random" ? Provenance::random : Provenance::preset;
  t.goal = j.at("goal").get<std::vector<std::string>>();
  t.reference_plan_length = j.at("reference_plan_length").get<std::size_t>();
  t.witness = plan_from_json(j.at("witness"));
  if (!j.at("trigger").is_null())
    t.trigger = Trigger{j["trigger"].at("schema").get<std::string>(), j["trigger"].at("depth").get<std::size_t>()};
  return t;
}

inline Json to_json(const Event& e) {
  return {{"kind", to_string(e.kind)}, {"timestamp_ms", e.timestamp_ms}, {"payload", e.payload}};
}

inline Event event_from_json(const Json& j) {
  return {event_kind_from(j.at("kind").get<std::string>()), j.at("timestamp_ms").get<std::int64_t>(),
          j.value("payload", Json::object())};
}

inline Json to_json(const Session& s) {
  Json history = Json::array();
  for (const auto& e : s.history) history.push_back(to_json(e));
  return {{"id", s.id},
          {"domain", s.domain_name},
          {"created_at", s.created_at},
          {"updated_at", s.updated_at},
          {"initial_performance", s.initial_performance.costs()},
          {"performance", s.performance.costs()},
          {"current_task", s.current_task ? to_json(*s.current_task) : Json(nullptr)},
          {"last_plan", to_json(s.last_plan)},
          {"tasks_generated", s.tasks_generated},
          {"pending_hints", s.pending_hints},
          {"history", history}};
}

inline Session session_from_json(const Json& j) {
  Session s;
  s.id = j.at("id").get<std::string>();
  s.domain_name = j.at("domain").get<std::string>();
  s.created_at = j.at("created_at").get<std::int64_t>();
  s.updated_at = j.at("updated_at").get<std::int64_t>();
  s.initial_performance = PerformanceMap(j.at("initial_performance").get<std::map<std::string, int>>());
  s.performance = PerformanceMap(j.at("performance").get<std::map<std::string, int>>());
  if (!j.at("current_task").is_null()) s.current_task = task_record_from_json(j["current_task"]);
  s.last_plan = plan_from_json(j.at("last_plan"));
  s.tasks_generated = j.at("tasks_generated").get<std::size_t>();
  s.pending_hints = j.at("pending_hints").get<std::multiset<std::string>>();
  for (const auto& e : j.at("history")) s.history.push_back(event_from_json(e));
  return s;
}

// 128 random bits as 32 hex characters.
inline std::string new_session_id() {
  static thread_local std::random_device rd;
  std::string id;
  static constexpr char kHex[] = "0123456789abcdef";
  for (int i = 0; i < 4; ++i) {
    std::uint32_t word = rd();
    for (int k = 0; k < 8; ++k) {
      id.push_back(kHex[word & 0xF]);
      word >>= 4;
    }
  }
  return id;
}

using Clock = std::function<std::int64_t()>;

inline std::int64_t system_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

class SessionStore {
 public:
  SessionStore(std::filesystem::path data_dir, std::shared_ptr<const Registry> registry, Clock clock = system_clock_ms)
      : dir_(std::move(data_dir) / "sessions"), registry_(std::move(registry)), clock_(std::move(clock)) {
    std::filesystem::create_directories(dir_);
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
      if (entry.path().extension() != ".json") continue;
      try {
        Session s = session_from_json(Json::parse(read_file(entry.path())));
        auto e = std::make_shared<Entry>();
        std::string id = s.id;
        e->session = std::move(s);
        entries_[id] = std::move(e);
      } catch (const std::exception& ex) {
        throw ConfigError("corrupt session file '" + entry.path().string() + "': " + ex.what());
      }
    }
  }

  std::int64_t now() const { return clock_(); }
  const Registry& registry() const { return *registry_; }

  Session create_session(const std::string& domain_name) {
    auto bundle = registry_->find(domain_name);
    if (!bundle) throw UnknownDomain(domain_name);
    auto e = std::make_shared<Entry>();
    Session& s = e->session;
    s.id = new_session_id();
    s.domain_name = domain_name;
    s.created_at = s.updated_at = now();
    s.initial_performance = PerformanceMap::cold_start(bundle->domain);
    s.performance = s.initial_performance;
    {
      std::unique_lock lock(map_mutex_);
      while (entries_.count(s.id)) s.id = new_session_id();
      entries_[s.id] = e;
    }
    std::lock_guard guard(e->mutex);
    persist(s);
    return s;
  }

  Session get(const std::string& id) const {
    auto e = entry(id);
    std::lock_guard guard(e->mutex);
    return e->session;
  }

  // Runs `fn` on a copy of the session under the session's lock, then
  // persists and publishes the copy. If `fn` throws nothing is kept.
  template <class Fn>
  auto update(const std::string& id, Fn&& fn) -> decltype(fn(std::declval<Session&>())) {
    auto e = entry(id);
    std::lock_guard guard(e->mutex);
    Session working = e->session;
    if constexpr (std::is_void_v<decltype(fn(working))>) {
      fn(working);
      commit(*e, std::move(working));
    } else {
      auto result = fn(working);
      commit(*e, std::move(working));
      return result;
    }
  }

  Session record_event(const std::string& id, Event event) {
    return update(id, [&](Session& s) {
      s.append(std::move(event));
      return s;
    });
  }

  std::vector<Session> all() const {
    std::vector<std::shared_ptr<Entry>> snapshot;
    {
      std::shared_lock lock(map_mutex_);
      for (const auto& [_, e] : entries_) snapshot.push_back(e);
    }
    std::vector<Session> out;
    for (const auto& e : snapshot) {
      std::lock_guard guard(e->mutex);
      out.push_back(e->session);
    }
    return out;
  }

  std::filesystem::path path_of(const std::string& id) const { return dir_ / (id + ".json"); }

  // Reads a persisted session straight from disk.
  Session load_from_disk(const std::string& id) const {
    return session_from_json(Json::parse(read_file(path_of(id))));
  }

 private:
  struct Entry {
    std::mutex mutex;
    Session session;
  };

  std::shared_ptr<Entry> entry(const std::string& id) const {
    std::shared_lock lock(map_mutex_);
    auto it = entries_.find(id);
    if (it == entries_.end()) throw UnknownSession(id);
    return it->second;
  }

  void commit(Entry& e, Session s) {
    persist(s);
    e.session = std::move(s);
  }

  void persist(const Session& s) const {
    auto target = path_of(s.id);
    auto tmp = target;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
      out << to_json(s).dump(1);
      if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, target);
  }

  std::filesystem::path dir_;
  std::shared_ptr<const Registry> registry_;
  Clock clock_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> entries_;
};

// --- analytics -------------------------------------------------------------

struct TaskTiming {
  std::string session_id;
  std::string task_id;
  std::optional<double> solve_seconds;
  int hints_used = 0;
};

inline std::vector<TaskTiming> task_timings(const std::vector<Session>& sessions) {
  std::vector<TaskTiming> out;
  for (const auto& s : sessions) {
    std::map<std::string, std::size_t> open;  // task id -> index into out
    std::optional<std::string> active;
    for (const auto& e : s.history) {
      if (e.kind == EventKind::task_generated) {
        TaskTiming t{s.id, e.payload.value("task_id", std::string()), std::nullopt, 0};
        out.push_back(t);
        open[t.task_id] = out.size() - 1;
        active = t.task_id;
        // Keep the generation time until the task is solved.
        out.back().solve_seconds = -static_cast<double>(e.timestamp_ms) / 1000.0;
      } else if (e.kind == EventKind::hint_shown && active) {
        out[open[*active]].hints_used++;
      } else if (e.kind == EventKind::task_solved) {
        auto id = e.payload.value("task_id", std::string());
        auto it = open.find(id);
        if (it == open.end()) continue;
        auto& t = out[it->second];
        t.solve_seconds = *t.solve_seconds + static_cast<double>(e.timestamp_ms) / 1000.0;
        open.erase(it);
        if (active == id) active.reset();
      }
    }
    for (const auto& [_, idx] : open) out[idx].solve_seconds.reset();
  }
  return out;
}

struct SolveSummary {
  std::string task_id;
  std::vector<double> durations;
  std::size_t unsolved = 0;
  double mean = 0;
  double median = 0;
};

inline std::vector<SolveSummary> solve_time_report(const std::vector<Session>& sessions) {
  std::map<std::string, SolveSummary> by_task;
  for (const auto& t : task_timings(sessions)) {
    auto& s = by_task[t.task_id];
    s.task_id = t.task_id;
    if (t.solve_seconds)
      s.durations.push_back(*t.solve_seconds);
    else
      s.unsolved++;
  }
  std::vector<SolveSummary> out;
  for (auto& [_, s] : by_task) {
    std::sort(s.durations.begin(), s.durations.end());
    if (!s.durations.empty()) {
      s.mean = std::accumulate(s.durations.begin(), s.durations.end(), 0.0) / static_cast<double>(s.durations.size());
      std::size_t n = s.durations.size();
      s.median = n % 2 ? s.durations[n / 2] : (s.durations[n / 2 - 1] + s.durations[n / 2]) / 2.0;
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::string export_csv(const std::vector<Session>& sessions) {
  std::ostringstream os;
  os << "session,task,solve_seconds,hints_used\n";
  for (const auto& t : task_timings(sessions)) {
    os << t.session_id << ',' << t.task_id << ',';
    if (t.solve_seconds) os << *t.solve_seconds;
    os << ',' << t.hints_used << '\n';
  }
  return os.str();
}

}  // namespace plantutor
