#pragma once
//
// STRIPS + typing subset of PDDL: reader, model types, and pretty printer.
//
// Supported: (:requirements :strips :typing), single-parent type hierarchies,
// typed predicates, actions with conjunctive positive preconditions and
// add/delete effects, problems with typed objects, ground init facts and a
// conjunctive positive goal. Everything else is rejected with a ParseError
// naming the construct. Identifiers are case-insensitive and normalized to
// lower case.
//

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plantutor/error.hpp"

namespace plantutor {

inline constexpr std::string_view kRootType = "object";

struct TypedName {
  std::string name;
  std::string type{kRootType};

  bool operator==(const TypedName&) const = default;
};

struct TypeDecl {
  std::string name;
  std::string parent{kRootType};

  bool operator==(const TypeDecl&) const = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;

  std::size_t arity() const { return params.size(); }
  bool operator==(const PredicateDecl&) const = default;
};

// A predicate applied to arguments. In schemas the arguments are variables
// ("?x"); in problems they are object names.
struct Literal {
  std::string predicate;
  std::vector<std::string> args;

  auto operator<=>(const Literal&) const = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Literal> precondition;
  std::vector<Literal> add_effects;
  std::vector<Literal> del_effects;

  std::size_t arity() const { return params.size(); }
  bool operator==(const ActionSchema&) const = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypeDecl> types;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> schemas;

  bool operator==(const Domain&) const = default;

  const PredicateDecl* find_predicate(std::string_view name) const {
    for (const auto& p : predicates)
      if (p.name == name) return &p;
    return nullptr;
  }

  const ActionSchema* find_schema(std::string_view name) const {
    for (const auto& s : schemas)
      if (s.name == name) return &s;
    return nullptr;
  }

  bool has_type(std::string_view type) const {
    if (type == kRootType) return true;
    return std::any_of(types.begin(), types.end(), [&](const TypeDecl& t) { return t.name == type; });
  }

  // True iff `type` equals `ancestor` or lies below it in the hierarchy.
  bool is_subtype(std::string_view type, std::string_view ancestor) const {
    if (ancestor == kRootType) return true;
    std::string_view current = type;
    for (std::size_t guard = 0; guard <= types.size(); ++guard) {
      if (current == ancestor) return true;
      if (current == kRootType) return false;
      auto it = std::find_if(types.begin(), types.end(), [&](const TypeDecl& t) { return t.name == current; });
      if (it == types.end()) return false;
      current = it->parent;
    }
    return false;
  }
};

struct Problem {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Literal> init;
  std::vector<Literal> goal;

  bool operator==(const Problem&) const = default;

  const TypedName* find_object(std::string_view name) const {
    for (const auto& o : objects)
      if (o.name == name) return &o;
    return nullptr;
  }
};

namespace detail {

struct SExpr {
  bool is_list = false;
  std::string symbol;
  std::vector<SExpr> items;
  SourceLocation location;

  bool is_symbol() const { return !is_list; }
  bool is_symbol(std::string_view s) const { return !is_list && symbol == s; }
  bool head_is(std::string_view s) const { return is_list && !items.empty() && items.front().is_symbol(s); }
};

class SExprReader {
 public:
  SExprReader(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  SExpr read_document() {
    skip_space();
    if (at_end()) fail(here(), "empty input");
    SExpr root = read(0);
    skip_space();
    if (!at_end()) fail(here(), "unexpected trailing input after top-level expression");
    return root;
  }

 private:
  static constexpr int kMaxDepth = 256;

  [[noreturn]] void fail(SourceLocation at, const std::string& message) const {
    throw ParseError(file_, at, message);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  SourceLocation here() const { return {line_, column_}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end()) {
      char c = text_[pos_];
      if (c == ';') {
        while (!at_end() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read(int depth) {
    if (depth > kMaxDepth) fail(here(), "expression nested too deeply");
    skip_space();
    if (at_end()) fail(here(), "unexpected end of input");
    SExpr out;
    out.location = here();
    char c = text_[pos_];
    if (c == ')') fail(here(), "unexpected ')'");
    if (c == '(') {
      out.is_list = true;
      advance();
      for (;;) {
        skip_space();
        if (at_end()) fail(out.location, "unbalanced '(': missing ')'");
        if (text_[pos_] == ')') {
          advance();
          return out;
        }
        out.items.push_back(read(depth + 1));
      }
    }
    while (!at_end()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      out.symbol.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(d))));
      advance();
    }
    return out;
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

inline bool is_variable(std::string_view s) { return !s.empty() && s.front() == '?'; }

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

class Interpreter {
 public:
  explicit Interpreter(std::string file) : file_(std::move(file)) {}

  [[noreturn]] void fail(const SExpr& at, const std::string& message) const {
    throw ParseError(file_, at.location, message);
  }

  const std::string& symbol(const SExpr& e, std::string_view what) const {
    if (!e.is_symbol()) fail(e, "expected " + std::string(what) + ", found a list");
    return e.symbol;
  }

  std::string identifier(const SExpr& e, std::string_view what) const {
    const std::string& s = symbol(e, what);
    if (!is_identifier(s)) fail(e, "invalid " + std::string(what) + " '" + s + "'");
    return s;
  }

  std::string variable(const SExpr& e) const {
    const std::string& s = symbol(e, "variable");
    if (!is_variable(s) || !is_identifier(std::string_view(s).substr(1)))
      fail(e, "invalid variable '" + s + "'");
    return s;
  }

  // Parses `a b - t c - u d` style lists. Untyped trailing names get `object`.
  std::vector<TypedName> typed_list(const std::vector<SExpr>& items, std::size_t first, bool variables) const {
    std::vector<TypedName> out;
    std::vector<std::pair<std::string, const SExpr*>> pending;
    for (std::size_t i = first; i < items.size(); ++i) {
      const SExpr& e = items[i];
      if (e.is_symbol("-")) {
        if (pending.empty()) fail(e, "type marker '-' without preceding names");
        if (i + 1 >= items.size()) fail(e, "missing type after '-'");
        const SExpr& t = items[i + 1];
        if (t.head_is("either")) fail(t, "unsupported construct: either-type");
        std::string type = identifier(t, "type name");
        for (auto& [name, where] : pending) out.push_back({std::move(name), type});
        pending.clear();
        ++i;
        continue;
      }
      pending.emplace_back(variables ? variable(e) : identifier(e, "name"), &e);
    }
    for (auto& [name, where] : pending) out.push_back({std::move(name), std::string(kRootType)});
    return out;
  }

 private:
  std::string file_;
};

inline const std::set<std::string, std::less<>>& unsupported_requirements() {
  static const std::set<std::string, std::less<>> flags = {
      ":negative-preconditions", ":disjunctive-preconditions", ":equality",
      ":existential-preconditions", ":universal-preconditions", ":quantified-preconditions",
      ":conditional-effects", ":fluents", ":numeric-fluents", ":object-fluents", ":adl",
      ":durative-actions", ":duration-inequalities", ":continuous-effects",
      ":derived-predicates", ":timed-initial-literals", ":preferences", ":constraints",
      ":action-costs"};
  return flags;
}

inline std::string unsupported_condition_head(std::string_view head, bool goal) {
  if (head == "not") return goal ? "negative goal" : "negated precondition";
  if (head == "or") return "disjunction";
  if (head == "imply") return "implication";
  if (head == "exists") return "existential quantifier";
  if (head == "forall") return "universal quantifier";
  if (head == "=") return "equality";
  if (head == "<" || head == ">" || head == "<=" || head == ">=") return "numeric comparison";
  if (head == "preference") return "preference";
  return {};
}

class DomainInterpreter : Interpreter {
 public:
  explicit DomainInterpreter(std::string file) : Interpreter(std::move(file)) {}

  Domain run(const SExpr& root) {
    if (!root.head_is("define")) fail(root, "expected (define (domain <name>) ...)");
    if (root.items.size() < 2 || !root.items[1].head_is("domain") || root.items[1].items.size() != 2)
      fail(root, "expected (domain <name>) after define");
    domain_.name = identifier(root.items[1].items[1], "domain name");

    std::set<std::string> seen_sections;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const SExpr& section = root.items[i];
      if (!section.is_list || section.items.empty()) fail(section, "expected a domain section");
      const std::string& key = symbol(section.items.front(), "section keyword");
      if (key != ":action" && !seen_sections.insert(key).second)
        fail(section, "duplicate declaration: " + key + " section");
      if (key == ":requirements") {
        requirements(section);
      } else if (key == ":types") {
        types(section);
      } else if (key == ":predicates") {
        predicates(section);
      } else if (key == ":action") {
        action(section);
      } else if (key == ":constants") {
        fail(section, "unsupported construct: constants");
      } else if (key == ":functions") {
        fail(section, "unsupported construct: functions");
      } else if (key == ":durative-action") {
        fail(section, "unsupported construct: durative action");
      } else if (key == ":derived") {
        fail(section, "unsupported construct: derived predicate");
      } else if (key == ":constraints") {
        fail(section, "unsupported construct: constraints");
      } else {
        fail(section, "unknown domain section " + key);
      }
    }
    return std::move(domain_);
  }

 private:
  void requirements(const SExpr& section) {
    for (std::size_t i = 1; i < section.items.size(); ++i) {
      const std::string& flag = symbol(section.items[i], "requirement flag");
      if (flag == ":strips" || flag == ":typing") {
        if (std::find(domain_.requirements.begin(), domain_.requirements.end(), flag) == domain_.requirements.end())
          domain_.requirements.push_back(flag);
      } else if (unsupported_requirements().count(flag)) {
        fail(section.items[i], "unsupported construct: requirement " + flag);
      } else {
        fail(section.items[i], "unknown requirement flag " + flag);
      }
    }
  }

  void types(const SExpr& section) {
    auto decls = typed_list(section.items, 1, false);
    std::set<std::string> declared;
    for (std::size_t i = 0; i < decls.size(); ++i) {
      const auto& d = decls[i];
      if (d.name == kRootType) continue;
      if (!declared.insert(d.name).second) fail(section, "duplicate declaration: type '" + d.name + "'");
      domain_.types.push_back({d.name, d.type});
    }
    // Parents that are only mentioned after '-' are implicitly declared.
    std::vector<TypeDecl> implicit;
    for (const auto& t : domain_.types) {
      if (t.parent != kRootType && !declared.count(t.parent)) {
        declared.insert(t.parent);
        implicit.push_back({t.parent, std::string(kRootType)});
      }
    }
    domain_.types.insert(domain_.types.end(), implicit.begin(), implicit.end());
    for (const auto& t : domain_.types) {
      std::string current = t.name;
      for (std::size_t steps = 0; current != kRootType; ++steps) {
        if (steps > domain_.types.size()) fail(section, "cyclic type hierarchy through '" + t.name + "'");
        auto it = std::find_if(domain_.types.begin(), domain_.types.end(),
                               [&](const TypeDecl& x) { return x.name == current; });
        current = it->parent;
      }
    }
  }

  void check_type(const SExpr& at, const std::string& type) const {
    if (!domain_.has_type(type)) fail(at, "undeclared type '" + type + "'");
  }

  void predicates(const SExpr& section) {
    for (std::size_t i = 1; i < section.items.size(); ++i) {
      const SExpr& e = section.items[i];
      if (!e.is_list || e.items.empty()) fail(e, "expected predicate declaration (<name> ?x - type ...)");
      PredicateDecl p;
      p.name = identifier(e.items.front(), "predicate name");
      if (domain_.find_predicate(p.name)) fail(e, "duplicate declaration: predicate '" + p.name + "'");
      p.params = typed_list(e.items, 1, true);
      std::set<std::string> names;
      for (const auto& param : p.params) {
        check_type(e, param.type);
        if (!names.insert(param.name).second) fail(e, "duplicate declaration: parameter '" + param.name + "'");
      }
      domain_.predicates.push_back(std::move(p));
    }
  }

  Literal lifted_atom(const SExpr& e, const ActionSchema& schema) const {
    Literal lit;
    lit.predicate = identifier(e.items.front(), "predicate name");
    const PredicateDecl* decl = domain_.find_predicate(lit.predicate);
    if (!decl) fail(e, "undeclared predicate '" + lit.predicate + "'");
    if (e.items.size() - 1 != decl->arity())
      fail(e, "arity mismatch: '" + lit.predicate + "' takes " + std::to_string(decl->arity()) +
                  " arguments, got " + std::to_string(e.items.size() - 1));
    for (std::size_t k = 1; k < e.items.size(); ++k) {
      const SExpr& arg = e.items[k];
      const std::string& name = symbol(arg, "argument");
      if (!is_variable(name)) fail(arg, "unsupported construct: constant '" + name + "' in action");
      auto it = std::find_if(schema.params.begin(), schema.params.end(),
                             [&](const TypedName& p) { return p.name == name; });
      if (it == schema.params.end()) fail(arg, "undeclared variable '" + name + "'");
      const std::string& expected = decl->params[k - 1].type;
      if (!domain_.is_subtype(it->type, expected))
        fail(arg, "type mismatch: '" + name + "' is '" + it->type + "' but '" + lit.predicate + "' expects '" +
                      expected + "'");
      lit.args.push_back(name);
    }
    return lit;
  }

  void condition(const SExpr& e, const ActionSchema& schema, std::vector<Literal>& out) const {
    if (!e.is_list) fail(e, "expected a condition, found symbol '" + e.symbol + "'");
    if (e.items.empty()) return;
    const SExpr& head = e.items.front();
    if (head.is_symbol("and")) {
      for (std::size_t i = 1; i < e.items.size(); ++i) condition(e.items[i], schema, out);
      return;
    }
    if (head.is_list) fail(e, "expected a predicate name");
    if (auto what = unsupported_condition_head(head.symbol, false); !what.empty())
      fail(e, "unsupported construct: " + what);
    Literal lit = lifted_atom(e, schema);
    if (std::find(out.begin(), out.end(), lit) == out.end()) out.push_back(std::move(lit));
  }

  void effect(const SExpr& e, ActionSchema& schema) const {
    if (!e.is_list) fail(e, "expected an effect, found symbol '" + e.symbol + "'");
    if (e.items.empty()) return;
    const SExpr& head = e.items.front();
    if (head.is_symbol("and")) {
      for (std::size_t i = 1; i < e.items.size(); ++i) effect(e.items[i], schema);
      return;
    }
    if (head.is_list) fail(e, "expected a predicate name");
    const std::string& h = head.symbol;
    if (h == "when") fail(e, "unsupported construct: conditional effect");
    if (h == "forall") fail(e, "unsupported construct: universal effect");
    if (h == "increase" || h == "decrease" || h == "assign" || h == "scale-up" || h == "scale-down")
      fail(e, "unsupported construct: numeric effect");
    if (h == "not") {
      if (e.items.size() != 2 || !e.items[1].is_list || e.items[1].items.empty())
        fail(e, "expected (not (<predicate> ...))");
      Literal lit = lifted_atom(e.items[1], schema);
      if (std::find(schema.del_effects.begin(), schema.del_effects.end(), lit) == schema.del_effects.end())
        schema.del_effects.push_back(std::move(lit));
      return;
    }
    Literal lit = lifted_atom(e, schema);
    if (std::find(schema.add_effects.begin(), schema.add_effects.end(), lit) == schema.add_effects.end())
      schema.add_effects.push_back(std::move(lit));
  }

  void action(const SExpr& section) {
    if (section.items.size() < 2) fail(section, "expected action name");
    ActionSchema schema;
    schema.name = identifier(section.items[1], "action name");
    if (domain_.find_schema(schema.name)) fail(section, "duplicate declaration: action '" + schema.name + "'");
    const SExpr* pre = nullptr;
    const SExpr* eff = nullptr;
    bool have_params = false;
    for (std::size_t i = 2; i < section.items.size(); i += 2) {
      const std::string& key = symbol(section.items[i], "action keyword");
      if (i + 1 >= section.items.size()) fail(section.items[i], "missing value for " + key);
      const SExpr& value = section.items[i + 1];
      if (key == ":parameters") {
        if (have_params) fail(section.items[i], "duplicate declaration: :parameters");
        if (!value.is_list) fail(value, "expected parameter list");
        schema.params = typed_list(value.items, 0, true);
        std::set<std::string> names;
        for (const auto& p : schema.params) {
          check_type(value, p.type);
          if (!names.insert(p.name).second) fail(value, "duplicate declaration: parameter '" + p.name + "'");
        }
        have_params = true;
      } else if (key == ":precondition") {
        if (pre) fail(section.items[i], "duplicate declaration: :precondition");
        pre = &value;
      } else if (key == ":effect") {
        if (eff) fail(section.items[i], "duplicate declaration: :effect");
        eff = &value;
      } else if (key == ":duration") {
        fail(section.items[i], "unsupported construct: duration");
      } else {
        fail(section.items[i], "unknown action keyword " + key);
      }
    }
    if (pre) condition(*pre, schema, schema.precondition);
    if (eff) effect(*eff, schema);
    for (const auto& a : schema.add_effects) {
      if (std::find(schema.del_effects.begin(), schema.del_effects.end(), a) != schema.del_effects.end())
        fail(eff ? *eff : section, "contradictory effect: '" + a.predicate + "' is both added and deleted");
    }
    domain_.schemas.push_back(std::move(schema));
  }

  Domain domain_;
};

class ProblemInterpreter : Interpreter {
 public:
  ProblemInterpreter(std::string file, const Domain& domain) : Interpreter(std::move(file)), domain_(domain) {}

  Problem run(const SExpr& root) {
    if (!root.head_is("define")) fail(root, "expected (define (problem <name>) ...)");
    if (root.items.size() < 2 || !root.items[1].head_is("problem") || root.items[1].items.size() != 2)
      fail(root, "expected (problem <name>) after define");
    problem_.name = identifier(root.items[1].items[1], "problem name");

    std::set<std::string> seen;
    const SExpr* init = nullptr;
    const SExpr* goal = nullptr;
    bool have_domain = false;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const SExpr& section = root.items[i];
      if (!section.is_list || section.items.empty()) fail(section, "expected a problem section");
      const std::string& key = symbol(section.items.front(), "section keyword");
      if (!seen.insert(key).second) fail(section, "duplicate declaration: " + key + " section");
      if (key == ":domain") {
        if (section.items.size() != 2) fail(section, "expected (:domain <name>)");
        problem_.domain_name = identifier(section.items[1], "domain name");
        if (problem_.domain_name != domain_.name)
          fail(section.items[1], "domain-name mismatch: problem refers to '" + problem_.domain_name +
                                     "' but the domain is '" + domain_.name + "'");
        have_domain = true;
      } else if (key == ":requirements") {
        // Accepted for compatibility; the domain's requirements govern.
      } else if (key == ":objects") {
        objects(section);
      } else if (key == ":init") {
        init = &section;
      } else if (key == ":goal") {
        goal = &section;
      } else if (key == ":metric") {
        fail(section, "unsupported construct: metric");
      } else if (key == ":constraints") {
        fail(section, "unsupported construct: constraints");
      } else {
        fail(section, "unknown problem section " + key);
      }
    }
    if (!have_domain) fail(root, "missing (:domain <name>) section");
    if (init) {
      for (std::size_t i = 1; i < init->items.size(); ++i) {
        const SExpr& e = init->items[i];
        if (e.head_is("not")) fail(e, "unsupported construct: negative initial fact");
        if (e.head_is("=")) fail(e, "unsupported construct: numeric initial value");
        if (e.head_is("at") && e.items.size() == 3 && e.items[1].is_symbol() && !e.items[1].symbol.empty() &&
            (std::isdigit(static_cast<unsigned char>(e.items[1].symbol[0])) || e.items[1].symbol[0] == '.'))
          fail(e, "unsupported construct: timed initial literal");
        add_unique(problem_.init, ground_atom(e));
      }
    }
    if (goal) {
      if (goal->items.size() != 2) fail(*goal, "expected (:goal <condition>)");
      goal_condition(goal->items[1]);
    }
    return std::move(problem_);
  }

 private:
  static void add_unique(std::vector<Literal>& out, Literal lit) {
    if (std::find(out.begin(), out.end(), lit) == out.end()) out.push_back(std::move(lit));
  }

  void objects(const SExpr& section) {
    auto objs = typed_list(section.items, 1, false);
    for (auto& o : objs) {
      if (!domain_.has_type(o.type)) fail(section, "undeclared type '" + o.type + "' for object '" + o.name + "'");
      if (problem_.find_object(o.name)) fail(section, "duplicate declaration: object '" + o.name + "'");
      problem_.objects.push_back(std::move(o));
    }
  }

  Literal ground_atom(const SExpr& e) const {
    if (!e.is_list || e.items.empty()) fail(e, "expected a ground atom (<predicate> <object> ...)");
    Literal lit;
    lit.predicate = identifier(e.items.front(), "predicate name");
    const PredicateDecl* decl = domain_.find_predicate(lit.predicate);
    if (!decl) fail(e, "undeclared predicate '" + lit.predicate + "'");
    if (e.items.size() - 1 != decl->arity())
      fail(e, "arity mismatch: '" + lit.predicate + "' takes " + std::to_string(decl->arity()) +
                  " arguments, got " + std::to_string(e.items.size() - 1));
    for (std::size_t k = 1; k < e.items.size(); ++k) {
      const SExpr& arg = e.items[k];
      const std::string& name = symbol(arg, "object name");
      const TypedName* obj = problem_.find_object(name);
      if (!obj) fail(arg, "undeclared object '" + name + "'");
      const std::string& expected = decl->params[k - 1].type;
      if (!domain_.is_subtype(obj->type, expected))
        fail(arg, "type mismatch: object '" + name + "' is '" + obj->type + "' but '" + lit.predicate +
                      "' expects '" + expected + "'");
      lit.args.push_back(name);
    }
    return lit;
  }

  void goal_condition(const SExpr& e) {
    if (!e.is_list) fail(e, "expected a goal condition");
    if (e.items.empty()) return;
    const SExpr& head = e.items.front();
    if (head.is_symbol("and")) {
      for (std::size_t i = 1; i < e.items.size(); ++i) goal_condition(e.items[i]);
      return;
    }
    if (head.is_symbol() )
      if (auto what = unsupported_condition_head(head.symbol, true); !what.empty())
        fail(e, "unsupported construct: " + what);
    add_unique(problem_.goal, ground_atom(e));
  }

  const Domain& domain_;
  Problem problem_;
};

inline void write_typed_list(std::ostream& os, const std::vector<TypedName>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) os << ' ';
    os << names[i].name;
    bool last_of_type = i + 1 == names.size() || names[i + 1].type != names[i].type;
    if (last_of_type) os << " - " << names[i].type;
  }
}

inline void write_literal(std::ostream& os, const Literal& lit) {
  os << '(' << lit.predicate;
  for (const auto& a : lit.args) os << ' ' << a;
  os << ')';
}

inline void write_conjunction(std::ostream& os, const std::vector<Literal>& lits, std::string_view indent) {
  os << "(and";
  for (const auto& l : lits) {
    os << '\n' << indent;
    write_literal(os, l);
  }
  os << ')';
}

}  // namespace detail

inline Domain parse_domain(std::string_view text, std::string file = "<domain>") {
  detail::SExprReader reader(text, file);
  auto root = reader.read_document();
  return detail::DomainInterpreter(std::move(file)).run(root);
}

inline Problem parse_problem(std::string_view text, const Domain& domain, std::string file = "<problem>") {
  detail::SExprReader reader(text, file);
  auto root = reader.read_document();
  return detail::ProblemInterpreter(std::move(file), domain).run(root);
}

inline std::string to_pddl(const Literal& lit) {
  std::ostringstream os;
  detail::write_literal(os, lit);
  return os.str();
}

inline std::string to_pddl(const Domain& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : d.requirements) os << ' ' << r;
    os << ")\n";
  }
  if (!d.types.empty()) {
    os << "  (:types";
    for (const auto& t : d.types) os << ' ' << t.name << " - " << t.parent;
    os << ")\n";
  }
  if (!d.predicates.empty()) {
    os << "  (:predicates";
    for (const auto& p : d.predicates) {
      os << "\n    (" << p.name;
      if (!p.params.empty()) {
        os << ' ';
        detail::write_typed_list(os, p.params);
      }
      os << ')';
    }
    os << ")\n";
  }
  for (const auto& s : d.schemas) {
    os << "\n  (:action " << s.name << "\n    :parameters (";
    detail::write_typed_list(os, s.params);
    os << ")\n    :precondition ";
    detail::write_conjunction(os, s.precondition, "      ");
    os << "\n    :effect (and";
    for (const auto& a : s.add_effects) {
      os << "\n      ";
      detail::write_literal(os, a);
    }
    for (const auto& a : s.del_effects) {
      os << "\n      (not ";
      detail::write_literal(os, a);
      os << ')';
    }
    os << "))\n";
  }
  os << ")\n";
  return os.str();
}

inline std::string to_pddl(const Problem& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n  (:domain " << p.domain_name << ")\n  (:objects";
  if (!p.objects.empty()) {
    os << ' ';
    detail::write_typed_list(os, p.objects);
  }
  os << ")\n  (:init";
  for (const auto& l : p.init) {
    os << "\n    ";
    detail::write_literal(os, l);
  }
  os << ")\n  (:goal ";
  detail::write_conjunction(os, p.goal, "    ");
  os << "))\n";
  return os.str();
}

}  // namespace plantutor
