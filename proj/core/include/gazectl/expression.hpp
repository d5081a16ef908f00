#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gazectl/blendshapes.hpp"

namespace gazectl {

enum class Operator { kGreater, kLess, kBetween, kDiffGreater, kDiffLess };

std::optional<Operator> parse_operator(std::string_view text);
std::string_view to_string(Operator op);

/// One thresholded test on a blendshape.
///   >, <        strict comparison against `threshold`
///   BETWEEN     min <= v <= max
///   DIFF>       (v - v[compare_to]) > threshold
///   DIFF<       |v - v[compare_to]| < threshold
struct Condition {
  std::string feature;
  Operator op = Operator::kGreater;
  double threshold = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::string compare_to;

  bool operator==(const Condition&) const = default;
};

enum class Combine { kAnd };

struct IntentionSpec {
  std::string name;
  std::vector<Condition> conditions;
  Combine combine = Combine::kAnd;

  bool operator==(const IntentionSpec&) const = default;
};

/// Suppression rule. `when` empty means "any": the rule fires whenever some
/// active intention is outside `except`.
struct PriorityRule {
  std::optional<std::string> when;
  std::vector<std::string> disable;
  std::vector<std::string> except;

  bool operator==(const PriorityRule&) const = default;
};

using IntentionSet = std::set<std::string>;

/// Throws std::out_of_range for unknown blendshape names.
bool eval_condition(const Condition& condition, const BlendShapeVector& blend);

IntentionSet eval_intentions(std::span<const IntentionSpec> specs, const BlendShapeVector& blend);

/// Applies rules in declaration order, repeating the pass until the set
/// stops changing.
IntentionSet apply_priority_rules(std::span<const PriorityRule> rules, IntentionSet active);

/// Returns an error message, or nothing when the spec is well formed.
std::optional<std::string> validate_condition(const Condition& condition);

struct IntentionStatus {
  bool raw = false;
  bool active = false;
  int streak = 0;  // consecutive frames where raw disagreed with active
  std::optional<std::int64_t> last_rise_ms;
  std::optional<std::int64_t> last_fall_ms;
};

struct ExpressionStep {
  IntentionSet raw;  // after priority rules
  IntentionSet active;
  IntentionSet rising;
  IntentionSet falling;
};

/// Per-stream temporal layer: raw evaluation, priority filtering, then
/// debouncing. A debounced state flips only after `debounce_frames`
/// consecutive raw frames disagree with it.
class ExpressionEngine {
 public:
  ExpressionEngine(std::vector<IntentionSpec> specs, std::vector<PriorityRule> rules,
                   int debounce_frames = 2);

  ExpressionStep step(const BlendShapeVector& blend, std::int64_t t_ms);

  /// Drops all activations without emitting edges.
  void reset();

  const IntentionSet& active() const { return active_; }
  const IntentionStatus& status(const std::string& name) const;
  const std::vector<IntentionSpec>& specs() const { return specs_; }
  int debounce_frames() const { return debounce_frames_; }

 private:
  struct Compiled {
    std::size_t feature;
    Operator op;
    double threshold;
    double min;
    double max;
    std::size_t compare_to;
  };

  IntentionSet evaluate(const BlendShapeVector& blend) const;

  std::vector<IntentionSpec> specs_;
  std::vector<PriorityRule> rules_;
  std::vector<std::vector<Compiled>> compiled_;
  int debounce_frames_;
  std::map<std::string, IntentionStatus> status_;
  IntentionSet active_;
};

}  // namespace gazectl
