#include <algorithm>
#include <deque>
#include <set>

#include "gazectl/profile.hpp"

namespace gazectl {

CoverageReport validate_coverage(const Profile& profile, std::span<const std::string> required) {
  std::set<std::string> producible;
  std::set<std::string> visited;
  std::deque<std::string> queue;
  if (!profile.modes.empty()) {
    queue.push_back(profile.modes.front().name);
    visited.insert(profile.modes.front().name);
  }

  while (!queue.empty()) {
    const Keymap* keymap = profile.find_mode(queue.front());
    queue.pop_front();
    if (keymap == nullptr) continue;
    for (const auto& spec : keymap->bindings) {
      for (const auto& item : spec.items) {
        switch (item.kind) {
          case Action::Kind::kKey:
            producible.insert(item.key);
            break;
          case Action::Kind::kChord:
            producible.insert(item.token);
            producible.insert(item.key);
            producible.insert(item.modifiers.begin(), item.modifiers.end());
            break;
          case Action::Kind::kMouse:
          case Action::Kind::kScroll:
            producible.insert(item.token);
            break;
          case Action::Kind::kMode:
            if (visited.insert(item.mode).second) queue.push_back(item.mode);
            break;
          case Action::Kind::kNone:
          case Action::Kind::kMeta:
            break;
        }
      }
    }
  }

  CoverageReport report;
  for (const auto& key : required) {
    (producible.contains(key) ? report.reachable : report.unreachable).push_back(key);
  }
  return report;
}

}  // namespace gazectl
