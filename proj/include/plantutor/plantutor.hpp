#pragma once

#include "plantutor/curriculum.hpp"
#include "plantutor/environment.hpp"
#include "plantutor/error.hpp"
#include "plantutor/explainer.hpp"
#include "plantutor/hinter.hpp"
#include "plantutor/llm.hpp"
#include "plantutor/pddl.hpp"
#include "plantutor/search.hpp"
#include "plantutor/semantics.hpp"
#include "plantutor/service.hpp"
#include "plantutor/session_store.hpp"
#include "plantutor/state.hpp"
#include "plantutor/task.hpp"
#include "plantutor/validator.hpp"
