#pragma once
//
// Grounding: instantiate every schema with every type-compatible object tuple
// and attach name tables so atoms and actions can be rendered back to text.
//

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "plantutor/error.hpp"
#include "plantutor/pddl.hpp"
#include "plantutor/state.hpp"

namespace plantutor {

class GroundedTask {
 public:
  GroundedTask(Domain domain, Problem problem) : domain_(std::move(domain)), problem_(std::move(problem)) {
    build_tables();
    init_ = State(atoms_of(problem_.init));
    goal_ = canonical(atoms_of(problem_.goal));
    ground_all();
  }

  const Domain& domain() const { return domain_; }
  const Problem& problem() const { return problem_; }
  const std::vector<GroundAction>& actions() const { return actions_; }
  const State& init() const { return init_; }
  const std::vector<Atom>& goal() const { return goal_; }

  // Objects in canonical (lexicographic) order; ObjectId indexes this list.
  const std::vector<std::string>& objects() const { return objects_; }
  const std::string& object_type(ObjectId id) const { return object_types_[id]; }
  bool is_static(PredicateId p) const { return static_[p]; }

  std::optional<ObjectId> object_id(std::string_view name) const {
    auto it = std::lower_bound(objects_.begin(), objects_.end(), name);
    if (it == objects_.end() || *it != name) return std::nullopt;
    return static_cast<ObjectId>(it - objects_.begin());
  }

  std::optional<PredicateId> predicate_id(std::string_view name) const {
    for (std::size_t i = 0; i < domain_.predicates.size(); ++i)
      if (domain_.predicates[i].name == name) return static_cast<PredicateId>(i);
    return std::nullopt;
  }

  const std::string& predicate_name(PredicateId p) const { return domain_.predicates[p].name; }
  const std::string& object_name(ObjectId o) const { return objects_[o]; }

  std::vector<std::string> object_names(std::span<const ObjectId> ids) const {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (auto id : ids) out.push_back(objects_[id]);
    return out;
  }

  // "(pred obj1 obj2)"
  std::string atom_text(const Atom& a) const {
    std::string s = "(" + predicate_name(a.predicate);
    for (auto o : a.args) s += " " + objects_[o];
    return s + ")";
  }

  std::string action_text(const GroundAction& a) const {
    std::string s = "(" + a.schema;
    for (auto o : a.args) s += " " + objects_[o];
    return s + ")";
  }

  Literal atom_literal(const Atom& a) const { return {predicate_name(a.predicate), object_names(a.args)}; }

  // Sorted list of atom strings, the serialized form of a state.
  std::vector<std::string> state_text(std::span<const Atom> atoms) const {
    std::vector<std::string> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) out.push_back(atom_text(a));
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<std::string> state_text(const State& s) const { return state_text(s.atoms()); }

  // Parses "(pred a b)" against this task. Throws ResolveError.
  Atom parse_atom(std::string_view text) const {
    auto tokens = tokenize(text);
    if (tokens.empty()) throw ResolveError("empty atom");
    auto pid = predicate_id(tokens.front());
    if (!pid) throw ResolveError("unknown predicate '" + tokens.front() + "'");
    const auto& decl = domain_.predicates[*pid];
    if (tokens.size() - 1 != decl.arity())
      throw ResolveError("arity mismatch for '" + decl.name + "'");
    Atom a{*pid, {}};
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      auto oid = object_id(tokens[i]);
      if (!oid) throw ResolveError("unknown object '" + tokens[i] + "'");
      if (!domain_.is_subtype(object_types_[*oid], decl.params[i - 1].type))
        throw ResolveError("type mismatch: '" + tokens[i] + "' is not a " + decl.params[i - 1].type);
      a.args.push_back(*oid);
    }
    return a;
  }

  // Builds the ground action for `schema(args...)`, including instantiations
  // removed by static filtering (their static preconditions are then unmet).
  // Throws ResolveError for unknown schemas, objects, or ill-typed arguments.
  GroundAction instantiate(std::string_view schema_name, std::span<const std::string> args) const {
    const ActionSchema* schema = domain_.find_schema(schema_name);
    if (!schema) throw ResolveError("unknown action '" + std::string(schema_name) + "'");
    if (args.size() != schema->arity())
      throw ResolveError("action '" + schema->name + "' takes " + std::to_string(schema->arity()) +
                         " arguments, got " + std::to_string(args.size()));
    std::vector<ObjectId> ids;
    for (std::size_t i = 0; i < args.size(); ++i) {
      auto oid = object_id(args[i]);
      if (!oid) throw ResolveError("unknown object '" + args[i] + "'");
      if (!domain_.is_subtype(object_types_[*oid], schema->params[i].type))
        throw ResolveError("type mismatch: '" + args[i] + "' is not a " + schema->params[i].type + " (argument " +
                           std::to_string(i + 1) + " of '" + schema->name + "')");
      ids.push_back(*oid);
    }
    std::size_t schema_index = static_cast<std::size_t>(schema - domain_.schemas.data());
    if (auto it = index_.find(key(schema_index, ids)); it != index_.end()) return actions_[it->second];
    return make_action(schema_index, ids, kNotGrounded);
  }

  const GroundAction* find_action(std::size_t schema_index, std::span<const ObjectId> args) const {
    auto it = index_.find(key(schema_index, args));
    return it == index_.end() ? nullptr : &actions_[it->second];
  }

  // Same objects, schemas and init; a different goal.
  GroundedTask with_goal(std::span<const Atom> goal) const {
    GroundedTask copy = *this;
    copy.goal_ = canonical(std::vector<Atom>(goal.begin(), goal.end()));
    copy.problem_.goal.clear();
    for (const auto& a : copy.goal_) copy.problem_.goal.push_back(atom_literal(a));
    return copy;
  }

 private:
  static std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
      if (c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
  }

  static std::string key(std::size_t schema, std::span<const ObjectId> args) {
    std::string k = std::to_string(schema);
    for (auto a : args) k += "," + std::to_string(a);
    return k;
  }

  void build_tables() {
    std::vector<std::pair<std::string, std::string>> objs;
    for (const auto& o : problem_.objects) objs.emplace_back(o.name, o.type);
    std::sort(objs.begin(), objs.end());
    for (auto& [n, t] : objs) {
      objects_.push_back(n);
      object_types_.push_back(t);
    }
    static_.assign(domain_.predicates.size(), true);
    for (const auto& s : domain_.schemas) {
      for (const auto& l : s.add_effects) static_[*predicate_id(l.predicate)] = false;
      for (const auto& l : s.del_effects) static_[*predicate_id(l.predicate)] = false;
    }
  }

  std::vector<Atom> atoms_of(const std::vector<Literal>& lits) const {
    std::vector<Atom> out;
    for (const auto& l : lits) {
      Atom a{*predicate_id(l.predicate), {}};
      for (const auto& n : l.args) a.args.push_back(*object_id(n));
      out.push_back(std::move(a));
    }
    return out;
  }

  Atom lift(const Literal& l, const ActionSchema& s, std::span<const ObjectId> binding) const {
    Atom a{*predicate_id(l.predicate), {}};
    for (const auto& var : l.args) {
      auto it = std::find_if(s.params.begin(), s.params.end(), [&](const TypedName& p) { return p.name == var; });
      a.args.push_back(binding[static_cast<std::size_t>(it - s.params.begin())]);
    }
    return a;
  }

  GroundAction make_action(std::size_t schema_index, std::span<const ObjectId> binding, std::size_t index) const {
    const ActionSchema& s = domain_.schemas[schema_index];
    GroundAction g;
    g.schema = s.name;
    g.schema_index = schema_index;
    g.args.assign(binding.begin(), binding.end());
    for (const auto& l : s.precondition) g.pre.push_back(lift(l, s, binding));
    for (const auto& l : s.add_effects) g.add.push_back(lift(l, s, binding));
    for (const auto& l : s.del_effects) g.del.push_back(lift(l, s, binding));
    g.pre = canonical(std::move(g.pre));
    g.add = canonical(std::move(g.add));
    // Delete-then-add: an atom both deleted and added (e.g. when two
    // parameters bind the same object) stays true.
    g.del = set_difference(canonical(std::move(g.del)), g.add);
    g.index = index;
    return g;
  }

  // Depth-first enumeration in lexicographic argument order; a static
  // precondition is checked as soon as all of its variables are bound.
  void ground_all() {
    for (std::size_t si = 0; si < domain_.schemas.size(); ++si) {
      const ActionSchema& s = domain_.schemas[si];
      std::vector<std::vector<ObjectId>> candidates(s.arity());
      for (std::size_t p = 0; p < s.arity(); ++p)
        for (ObjectId o = 0; o < objects_.size(); ++o)
          if (domain_.is_subtype(object_types_[o], s.params[p].type)) candidates[p].push_back(o);

      // For each static precondition, the highest parameter position it uses.
      std::vector<std::vector<const Literal*>> checks(s.arity() + 1);
      for (const auto& l : s.precondition) {
        if (!static_[*predicate_id(l.predicate)]) continue;
        std::size_t last = 0;
        for (const auto& var : l.args) {
          auto it = std::find_if(s.params.begin(), s.params.end(), [&](const TypedName& p) { return p.name == var; });
          last = std::max(last, static_cast<std::size_t>(it - s.params.begin()) + 1);
        }
        checks[last].push_back(&l);
      }

      std::vector<ObjectId> binding(s.arity());
      auto static_ok = [&](std::size_t bound) {
        for (const Literal* l : checks[bound])
          if (!init_.contains(lift(*l, s, binding))) return false;
        return true;
      };
      auto recurse = [&](auto&& self, std::size_t depth) -> void {
        if (depth == s.arity()) {
          index_.emplace(key(si, binding), actions_.size());
          actions_.push_back(make_action(si, binding, actions_.size()));
          return;
        }
        for (ObjectId o : candidates[depth]) {
          binding[depth] = o;
          if (static_ok(depth + 1)) self(self, depth + 1);
        }
      };
      if (static_ok(0)) recurse(recurse, 0);
    }
  }

  Domain domain_;
  Problem problem_;
  std::vector<std::string> objects_;
  std::vector<std::string> object_types_;
  std::vector<bool> static_;
  State init_;
  std::vector<Atom> goal_;
  std::vector<GroundAction> actions_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline GroundedTask ground(const Domain& domain, const Problem& problem) { return GroundedTask(domain, problem); }

}  // namespace plantutor
