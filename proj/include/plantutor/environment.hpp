#pragma once
//
// Environment bundles on disk:
//
//   <root>/<name>/domain.pddl
//   <root>/<name>/problems/<id>.pddl     preset tasks
//   <root>/<name>/problems/<id>.plan     reference plan for each preset
//   <root>/<name>/semantics.map
//   <root>/<name>/description.md
//   <root>/<name>/assets/                optional goal illustrations
//
// Everything is parsed and cross-checked at load time; a bundle that fails
// any check is not registered.
//

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "plantutor/error.hpp"
#include "plantutor/pddl.hpp"
#include "plantutor/semantics.hpp"
#include "plantutor/task.hpp"
#include "plantutor/validator.hpp"

namespace plantutor {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Preset {
  std::string id;
  std::string text;
  std::shared_ptr<const GroundedTask> task;
  Plan reference_plan;
};

struct EnvironmentBundle {
  std::string name;
  std::filesystem::path root;
  std::string domain_text;
  Domain domain;
  SemanticMap semantics;
  std::string description;
  std::vector<Preset> presets;  // sorted by id; the first one is the base task for generated tasks

  const Preset& base() const { return presets.front(); }

  const Preset* find_preset(const std::string& id) const {
    for (const auto& p : presets)
      if (p.id == id) return &p;
    return nullptr;
  }
};

inline EnvironmentBundle load_bundle(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::vector<std::string> problems;
  EnvironmentBundle b;
  b.root = root;
  b.name = root.filename().string();
  auto fail_now = [&](const std::string& msg) { throw ConfigError("environment '" + b.name + "': " + msg); };

  if (!fs::is_directory(root)) fail_now("not a directory: " + root.string());
  for (const char* required : {"domain.pddl", "semantics.map", "description.md"})
    if (!fs::exists(root / required)) fail_now(std::string("missing ") + required);

  try {
    b.domain_text = read_file(root / "domain.pddl");
    b.domain = parse_domain(b.domain_text, (root / "domain.pddl").string());
    b.semantics = SemanticMap::load((root / "semantics.map").string());
    b.description = read_file(root / "description.md");
  } catch (const std::exception& e) {
    fail_now(e.what());
  }
  if (b.domain.name != b.name)
    problems.push_back("domain is named '" + b.domain.name + "' but the bundle directory is '" + b.name + "'");
  try {
    b.semantics.check_against(b.domain);
  } catch (const ConfigError& e) {
    problems.push_back(e.what());
  }

  std::vector<fs::path> files;
  if (fs::is_directory(root / "problems"))
    for (const auto& entry : fs::directory_iterator(root / "problems"))
      if (entry.path().extension() == ".pddl") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) problems.push_back("no preset problems in problems/");

  for (const auto& file : files) {
    Preset p;
    p.id = file.stem().string();
    try {
      p.text = read_file(file);
      Problem problem = parse_problem(p.text, b.domain, file.string());
      p.task = std::make_shared<const GroundedTask>(b.domain, std::move(problem));
      fs::path plan_file = file;
      plan_file.replace_extension(".plan");
      if (!fs::exists(plan_file)) {
        problems.push_back("preset '" + p.id + "' has no reference plan " + plan_file.filename().string());
        continue;
      }
      p.reference_plan = parse_plan(read_file(plan_file));
      ValidationReport r = validate(*p.task, p.reference_plan);
      if (!r.is_valid)
        problems.push_back("reference plan for '" + p.id + "' fails at step " +
                           std::to_string(r.failures.front().step_index + 1));
      else if (!r.goal_achieved)
        problems.push_back("reference plan for '" + p.id + "' does not reach the goal");
    } catch (const std::exception& e) {
      problems.push_back(e.what());
      continue;
    }
    b.presets.push_back(std::move(p));
  }
  if (!problems.empty()) {
    std::string msg = "environment '" + b.name + "' failed validation:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  return b;
}

class Registry {
 public:
  void add(EnvironmentBundle bundle) {
    std::string name = bundle.name;
    bundles_[name] = std::make_shared<const EnvironmentBundle>(std::move(bundle));
  }

  // Loads every subdirectory of `env_root`. Throws on the first bad bundle.
  static Registry load_directory(const std::filesystem::path& env_root) {
    Registry r;
    if (!std::filesystem::is_directory(env_root))
      throw ConfigError("environment directory '" + env_root.string() + "' does not exist");
    std::vector<std::filesystem::path> dirs;
    for (const auto& entry : std::filesystem::directory_iterator(env_root))
      if (entry.is_directory()) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) r.add(load_bundle(d));
    return r;
  }

  std::shared_ptr<const EnvironmentBundle> find(const std::string& name) const {
    auto it = bundles_.find(name);
    return it == bundles_.end() ? nullptr : it->second;
  }

  std::vector<std::shared_ptr<const EnvironmentBundle>> list() const {
    std::vector<std::shared_ptr<const EnvironmentBundle>> out;
    for (const auto& [_, b] : bundles_) out.push_back(b);
    return out;
  }

  bool empty() const { return bundles_.empty(); }

 private:
  std::map<std::string, std::shared_ptr<const EnvironmentBundle>> bundles_;
};

}  // namespace plantutor
