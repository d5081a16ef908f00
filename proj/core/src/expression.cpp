#include "gazectl/expression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gazectl {

std::optional<Operator> parse_operator(std::string_view text) {
  if (text == ">") return Operator::kGreater;
  if (text == "<") return Operator::kLess;
  if (text == "BETWEEN") return Operator::kBetween;
  if (text == "DIFF>") return Operator::kDiffGreater;
  if (text == "DIFF<") return Operator::kDiffLess;
  return std::nullopt;
}

std::string_view to_string(Operator op) {
  switch (op) {
    case Operator::kGreater: return ">";
    case Operator::kLess: return "<";
    case Operator::kBetween: return "BETWEEN";
    case Operator::kDiffGreater: return "DIFF>";
    case Operator::kDiffLess: return "DIFF<";
  }
  return "?";
}

namespace {

bool compare(Operator op, double value, double other, double threshold, double min, double max) {
  switch (op) {
    case Operator::kGreater: return value > threshold;
    case Operator::kLess: return value < threshold;
    case Operator::kBetween: return min <= value && value <= max;
    case Operator::kDiffGreater: return (value - other) > threshold;
    case Operator::kDiffLess: return std::abs(value - other) < threshold;
  }
  return false;
}

bool is_diff(Operator op) { return op == Operator::kDiffGreater || op == Operator::kDiffLess; }

}  // namespace

std::optional<std::string> validate_condition(const Condition& c) {
  if (!blendshape_index(c.feature)) return "unknown blendshape '" + c.feature + "'";
  if (c.op == Operator::kBetween && !(c.min < c.max)) {
    return "BETWEEN on '" + c.feature + "' needs min < max";
  }
  if (is_diff(c.op)) {
    if (c.compare_to.empty()) return std::string(to_string(c.op)) + " on '" + c.feature + "' needs compare_to";
    if (!blendshape_index(c.compare_to)) return "unknown blendshape '" + c.compare_to + "'";
  }
  return std::nullopt;
}

bool eval_condition(const Condition& condition, const BlendShapeVector& blend) {
  const double value = blend.at(condition.feature);
  const double other = is_diff(condition.op) ? blend.at(condition.compare_to) : 0.0;
  return compare(condition.op, value, other, condition.threshold, condition.min, condition.max);
}

IntentionSet eval_intentions(std::span<const IntentionSpec> specs, const BlendShapeVector& blend) {
  IntentionSet active;
  for (const auto& spec : specs) {
    const bool on = !spec.conditions.empty() &&
                    std::all_of(spec.conditions.begin(), spec.conditions.end(),
                                [&](const Condition& c) { return eval_condition(c, blend); });
    if (on) active.insert(spec.name);
  }
  return active;
}

IntentionSet apply_priority_rules(std::span<const PriorityRule> rules, IntentionSet active) {
  // Every productive pass removes at least one name, so this terminates.
  for (;;) {
    const std::size_t before = active.size();
    for (const auto& rule : rules) {
      bool fires = false;
      if (rule.when) {
        fires = active.contains(*rule.when);
      } else {
        fires = std::any_of(active.begin(), active.end(), [&](const std::string& name) {
          return std::find(rule.except.begin(), rule.except.end(), name) == rule.except.end();
        });
      }
      if (!fires) continue;
      for (const auto& name : rule.disable) active.erase(name);
    }
    if (active.size() == before) return active;
  }
}

ExpressionEngine::ExpressionEngine(std::vector<IntentionSpec> specs, std::vector<PriorityRule> rules,
                                   int debounce_frames)
    : specs_(std::move(specs)), rules_(std::move(rules)), debounce_frames_(std::max(1, debounce_frames)) {
  compiled_.reserve(specs_.size());
  for (const auto& spec : specs_) {
    if (spec.conditions.empty()) throw std::invalid_argument("intention '" + spec.name + "' has no conditions");
    std::vector<Compiled> conditions;
    for (const auto& c : spec.conditions) {
      if (auto error = validate_condition(c)) throw std::invalid_argument(spec.name + ": " + *error);
      conditions.push_back({*blendshape_index(c.feature), c.op, c.threshold, c.min, c.max,
                            is_diff(c.op) ? *blendshape_index(c.compare_to) : 0});
    }
    compiled_.push_back(std::move(conditions));
    status_[spec.name] = {};
  }
}

IntentionSet ExpressionEngine::evaluate(const BlendShapeVector& blend) const {
  IntentionSet raw;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const bool on = std::all_of(compiled_[i].begin(), compiled_[i].end(), [&](const Compiled& c) {
      return compare(c.op, blend[c.feature], blend[c.compare_to], c.threshold, c.min, c.max);
    });
    if (on) raw.insert(specs_[i].name);
  }
  return raw;
}

ExpressionStep ExpressionEngine::step(const BlendShapeVector& blend, std::int64_t t_ms) {
  ExpressionStep out;
  out.raw = apply_priority_rules(rules_, evaluate(blend));
  for (auto& [name, st] : status_) {
    st.raw = out.raw.contains(name);
    if (st.raw == st.active) {
      st.streak = 0;
      continue;
    }
    if (++st.streak < debounce_frames_) continue;
    st.streak = 0;
    st.active = st.raw;
    if (st.active) {
      st.last_rise_ms = t_ms;
      out.rising.insert(name);
      active_.insert(name);
    } else {
      st.last_fall_ms = t_ms;
      out.falling.insert(name);
      active_.erase(name);
    }
  }
  out.active = active_;
  return out;
}

void ExpressionEngine::reset() {
  for (auto& [name, st] : status_) {
    st.raw = false;
    st.active = false;
    st.streak = 0;
  }
  active_.clear();
}

const IntentionStatus& ExpressionEngine::status(const std::string& name) const {
  const auto it = status_.find(name);
  if (it == status_.end()) throw std::out_of_range("unknown intention: " + name);
  return it->second;
}

}  // namespace gazectl
