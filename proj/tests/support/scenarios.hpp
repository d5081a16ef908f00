#pragma once

#include <string>
#include <vector>

#include "trace_builder.hpp"

namespace gazectl::testing {

struct Scenario {
  std::string name;
  TraceBuilder trace;
};

// All scenarios target profiles/wukong.yaml with scenario_model().
TraceBuilder perspective_change();
TraceBuilder cursor_select_click();
TraceBuilder direct_triggers();
TraceBuilder wheel_skill_selection();
TraceBuilder eight_for_two();
TraceBuilder session_900();

std::vector<Scenario> all_scenarios();

}  // namespace gazectl::testing
