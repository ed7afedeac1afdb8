#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plantutor/semantics.hpp"
#include "plantutor/task.hpp"
#include "plantutor/validator.hpp"

namespace plantutor {

enum class ExplanationSource { template_text, llm };

struct Explanation {
  std::size_t step = 0;  // 1-based
  std::string action_nl;
  std::vector<std::string> reasons;  // one per unmet atom, canonical order
  std::string tldr;
  std::optional<std::string> detailed;
  ExplanationSource source = ExplanationSource::template_text;
};

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Template ("TLDR") explanation of one failing step. Requires f.unmet to be
// nonempty: a step without unmet preconditions did not fail.
inline Explanation explain_failure(const GroundedTask& task, const Failure& f, const SemanticMap& m) {
  if (f.unmet.empty()) throw std::invalid_argument("explain_failure: failure has no unmet preconditions");
  Explanation e;
  e.step = f.step_index + 1;
  e.action_nl = render_action_nl(task, f.action, m);
  for (const auto& atom : f.unmet) e.reasons.push_back(render_atom_nl(task, atom, m, false));
  e.tldr = "The action at step " + std::to_string(e.step) + " (" + e.action_nl + ") could not be performed because " +
           join(e.reasons, " and ") + ".";
  return e;
}

// Produces the long-form text for one explanation, or nullopt to fall back
// to the template text.
using DetailFn = std::function<std::optional<std::string>(const Explanation&)>;

inline constexpr std::size_t kDetailedExplanations = 2;

// Template explanations for every failure; `detail` is consulted for the
// first `k` only.
inline std::vector<Explanation> explanations_for_report(const GroundedTask& task, const ValidationReport& r,
                                                        const SemanticMap& m, const DetailFn& detail = {},
                                                        std::size_t k = kDetailedExplanations) {
  std::vector<Explanation> out;
  out.reserve(r.failures.size());
  for (const auto& f : r.failures) out.push_back(explain_failure(task, f, m));
  if (detail) {
    for (std::size_t i = 0; i < out.size() && i < k; ++i) {
      if (auto text = detail(out[i])) {
        out[i].detailed = std::move(*text);
        out[i].source = ExplanationSource::llm;
      }
    }
  }
  return out;
}

}  // namespace plantutor
