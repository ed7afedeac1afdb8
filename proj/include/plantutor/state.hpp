#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace plantutor {

using PredicateId = std::uint32_t;
using ObjectId = std::uint32_t;

// Canonical ground atom: predicate index (domain declaration order) plus
// object indices (objects sorted by name). Ordering is lexicographic on
// (predicate, args), which is the canonical atom order used everywhere.
struct Atom {
  PredicateId predicate = 0;
  std::vector<ObjectId> args;

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct AtomHash {
  std::size_t operator()(const Atom& a) const noexcept {
    std::size_t h = std::hash<std::uint32_t>{}(a.predicate);
    for (auto o : a.args) h = hash_combine(h, o);
    return h;
  }
};

// Sorts and deduplicates in place, giving the canonical set representation.
inline std::vector<Atom> canonical(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

inline std::vector<Atom> set_difference(std::span<const Atom> a, std::span<const Atom> b) {
  std::vector<Atom> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool includes(std::span<const Atom> super, std::span<const Atom> sub) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

// Closed-world state: the sorted set of true ground atoms. Immutable value.
class State {
 public:
  State() = default;
  explicit State(std::vector<Atom> atoms) : atoms_(canonical(std::move(atoms))) {}

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  bool contains(const Atom& a) const { return std::binary_search(atoms_.begin(), atoms_.end(), a); }

  bool operator==(const State&) const = default;

  std::size_t hash() const noexcept {
    std::size_t h = atoms_.size();
    AtomHash ah;
    for (const auto& a : atoms_) h = hash_combine(h, ah(a));
    return h;
  }

 private:
  friend State apply_unchecked(const State&, std::span<const Atom>, std::span<const Atom>);
  struct Sorted {};
  State(Sorted, std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}

  std::vector<Atom> atoms_;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept { return s.hash(); }
};

inline constexpr std::size_t kNotGrounded = std::numeric_limits<std::size_t>::max();

struct GroundAction {
  std::string schema;
  std::size_t schema_index = 0;
  std::vector<ObjectId> args;
  // Canonical (sorted) atom sets; add and del are disjoint.
  std::vector<Atom> pre;
  std::vector<Atom> add;
  std::vector<Atom> del;
  // Position in GroundedTask::actions(), or kNotGrounded for an instantiation
  // that static filtering removed (it can never be applicable).
  std::size_t index = kNotGrounded;

  bool operator==(const GroundAction&) const = default;
};

class InapplicableAction : public std::logic_error {
 public:
  explicit InapplicableAction(const std::string& schema)
      : std::logic_error("action '" + schema + "' is not applicable in this state") {}
};

inline bool is_applicable(const State& s, const GroundAction& a) { return includes(s.atoms(), a.pre); }

inline std::vector<Atom> unmet_preconditions(const State& s, const GroundAction& a) {
  return set_difference(a.pre, s.atoms());
}

inline State apply_unchecked(const State& s, std::span<const Atom> add, std::span<const Atom> del) {
  std::vector<Atom> kept;
  kept.reserve(s.size());
  std::set_difference(s.atoms().begin(), s.atoms().end(), del.begin(), del.end(), std::back_inserter(kept));
  std::vector<Atom> out;
  out.reserve(kept.size() + add.size());
  std::set_union(kept.begin(), kept.end(), add.begin(), add.end(), std::back_inserter(out));
  return State(State::Sorted{}, std::move(out));
}

// Progression: (s \ del) ∪ add. Throws InapplicableAction when pre ⊄ s.
inline State apply(const State& s, const GroundAction& a) {
  if (!is_applicable(s, a)) throw InapplicableAction(a.schema);
  return apply_unchecked(s, a.add, a.del);
}

inline bool satisfies(const State& s, std::span<const Atom> goal) { return includes(s.atoms(), goal); }

}  // namespace plantutor
