#pragma once
//
// Per-domain natural-language mapping for actions, predicates and objects.
//
// File format, one entry per line ('#' starts a comment):
//
//   action <schema>: <pattern>      e.g.  action move: Move the robot {0} from the {1} to the {2}
//   true <predicate>: <pattern>     used when listing true atoms
//   false <predicate>: <pattern>    used for unmet preconditions
//   object <name>: <display name>
//
// Patterns refer to arguments by position with {0}, {1}, ...
//

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "plantutor/error.hpp"
#include "plantutor/pddl.hpp"
#include "plantutor/state.hpp"
#include "plantutor/task.hpp"

namespace plantutor {

// Substitutes {i} slots. Unknown escapes are copied verbatim.
inline std::string fill_pattern(std::string_view pattern, std::span<const std::string> values) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '{') {
      auto close = pattern.find('}', i);
      if (close != std::string_view::npos && close > i + 1) {
        auto digits = pattern.substr(i + 1, close - i - 1);
        if (digits.find_first_not_of("0123456789") == std::string_view::npos) {
          std::size_t slot = std::stoul(std::string(digits));
          if (slot < values.size()) {
            out += values[slot];
            i = close;
            continue;
          }
        }
      }
    }
    out.push_back(pattern[i]);
  }
  return out;
}

// Largest {i} index used in a pattern, or nullopt when there are no slots.
inline std::optional<std::size_t> max_slot(std::string_view pattern) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != '{') continue;
    auto close = pattern.find('}', i);
    if (close == std::string_view::npos || close == i + 1) continue;
    auto digits = pattern.substr(i + 1, close - i - 1);
    if (digits.find_first_not_of("0123456789") != std::string_view::npos) continue;
    std::size_t slot = std::stoul(std::string(digits));
    if (!best || slot > *best) best = slot;
  }
  return best;
}

class SemanticMap {
 public:
  std::map<std::string, std::string> action_templates;
  std::map<std::string, std::string> true_templates;
  std::map<std::string, std::string> false_templates;
  std::map<std::string, std::string> object_names;

  static SemanticMap parse(std::string_view text, const std::string& file = "<semantics>") {
    SemanticMap m;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      auto colon = line.find(':');
      auto fail = [&](const std::string& msg) {
        throw ConfigError(file + ":" + std::to_string(line_no) + ": " + msg);
      };
      if (colon == std::string::npos) fail("expected '<kind> <name>: <pattern>'");
      std::istringstream head(line.substr(first, colon - first));
      std::string kind, name, extra;
      head >> kind >> name;
      if (kind.empty() || name.empty() || (head >> extra)) fail("expected '<kind> <name>' before ':'");
      std::string pattern = line.substr(colon + 1);
      auto ps = pattern.find_first_not_of(" \t");
      pattern = ps == std::string::npos ? std::string() : pattern.substr(ps);
      std::map<std::string, std::string>* target = nullptr;
      if (kind == "action")
        target = &m.action_templates;
      else if (kind == "true")
        target = &m.true_templates;
      else if (kind == "false")
        target = &m.false_templates;
      else if (kind == "object")
        target = &m.object_names;
      else
        fail("unknown entry kind '" + kind + "'");
      if (!target->emplace(name, pattern).second) fail("duplicate entry for " + kind + " '" + name + "'");
    }
    return m;
  }

  static SemanticMap load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read semantic map '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
  }

  // Generic map for domains without a hand-written one: actions render as
  // "move d1 d2 peg3", atoms as "(on d1 d2)".
  static SemanticMap fallback(const Domain& d) {
    SemanticMap m;
    for (const auto& s : d.schemas) {
      std::string p = s.name;
      for (std::size_t i = 0; i < s.arity(); ++i) p += " {" + std::to_string(i) + "}";
      m.action_templates[s.name] = p;
    }
    for (const auto& pr : d.predicates) {
      std::string p = "(" + pr.name;
      for (std::size_t i = 0; i < pr.arity(); ++i) p += " {" + std::to_string(i) + "}";
      m.true_templates[pr.name] = p + ")";
    }
    return m;
  }

  // Every schema and predicate needs a template whose slots fit the arity.
  // `false` templates are optional. Throws ConfigError listing all problems.
  void check_against(const Domain& d) const {
    std::vector<std::string> problems;
    auto check = [&](const std::map<std::string, std::string>& table, std::string_view kind, const std::string& name,
                     std::size_t arity, bool required) {
      auto it = table.find(name);
      if (it == table.end()) {
        if (required) problems.push_back("missing " + std::string(kind) + " template for '" + name + "'");
        return;
      }
      if (auto slot = max_slot(it->second); slot && *slot >= arity)
        problems.push_back(std::string(kind) + " template for '" + name + "' uses {" + std::to_string(*slot) +
                           "} but arity is " + std::to_string(arity));
    };
    for (const auto& s : d.schemas) check(action_templates, "action", s.name, s.arity(), true);
    for (const auto& p : d.predicates) {
      check(true_templates, "true", p.name, p.arity(), true);
      check(false_templates, "false", p.name, p.arity(), false);
    }
    for (const auto& [name, _] : action_templates)
      if (!d.find_schema(name)) problems.push_back("action template for undeclared schema '" + name + "'");
    for (const auto* table : {&true_templates, &false_templates})
      for (const auto& [name, _] : *table)
        if (!d.find_predicate(name)) problems.push_back("template for undeclared predicate '" + name + "'");
    if (!problems.empty()) {
      std::string msg = "semantic map does not match domain '" + d.name + "':";
      for (const auto& p : problems) msg += "\n  " + p;
      throw ConfigError(msg);
    }
  }

  std::string display(const std::string& object) const {
    auto it = object_names.find(object);
    return it == object_names.end() ? object : it->second;
  }

  std::vector<std::string> display(std::span<const std::string> objects) const {
    std::vector<std::string> out;
    for (const auto& o : objects) out.push_back(display(o));
    return out;
  }

  const std::string& action_template(const std::string& schema) const {
    auto it = action_templates.find(schema);
    if (it == action_templates.end()) throw ConfigError("no action template for '" + schema + "'");
    return it->second;
  }

  std::string render_action(const std::string& schema, std::span<const std::string> args) const {
    return fill_pattern(action_template(schema), display(args));
  }

  std::string render_true(const std::string& predicate, std::span<const std::string> args) const {
    auto it = true_templates.find(predicate);
    if (it == true_templates.end()) return generic_atom(predicate, args);
    return fill_pattern(it->second, display(args));
  }

  std::string render_false(const std::string& predicate, std::span<const std::string> args) const {
    auto it = false_templates.find(predicate);
    if (it == false_templates.end()) return "precondition " + generic_atom(predicate, args) + " is false";
    return fill_pattern(it->second, display(args));
  }

 private:
  static std::string generic_atom(const std::string& predicate, std::span<const std::string> args) {
    std::string s = "(" + predicate;
    for (const auto& a : args) s += " " + a;
    return s + ")";
  }
};

inline std::string render_action_nl(const GroundedTask& task, const GroundAction& a, const SemanticMap& m) {
  auto names = task.object_names(a.args);
  return m.render_action(a.schema, names);
}

inline std::string render_atom_nl(const GroundedTask& task, const Atom& a, const SemanticMap& m, bool truth) {
  auto names = task.object_names(a.args);
  const auto& pred = task.predicate_name(a.predicate);
  return truth ? m.render_true(pred, names) : m.render_false(pred, names);
}

}  // namespace plantutor
