#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <yaml-cpp/yaml.h>

namespace gazectl::testing {

ReferenceEvaluator::ReferenceEvaluator(const std::string& profile_path) {
  const YAML::Node root = YAML::LoadFile(profile_path)["expression_evaluator_config"];
  for (const auto& entry : root["expressions"]) {
    const auto name = entry.first.as<std::string>();
    names_.push_back(name);
    auto& conds = specs_[name];
    for (const auto& c : entry.second["conditions"]) {
      Cond cond;
      cond.feature = c["feature"].as<std::string>();
      cond.op = c["operator"].as<std::string>();
      if (c["threshold"]) cond.threshold = c["threshold"].as<double>();
      if (c["min"]) cond.min = c["min"].as<double>();
      if (c["max"]) cond.max = c["max"].as<double>();
      if (c["compare_to"]) cond.compare_to = c["compare_to"].as<std::string>();
      conds.push_back(cond);
    }
  }
  for (const auto& r : root["priority_rules"]) {
    Rule rule;
    rule.when = r["when"].as<std::string>();
    for (const auto& d : r["disable"]) rule.disable.push_back(d.as<std::string>());
    if (r["except"])
      for (const auto& e : r["except"]) rule.except.push_back(e.as<std::string>());
    rules_.push_back(rule);
  }
}

std::set<std::string> ReferenceEvaluator::intentions(const BlendShapeVector& blend) const {
  std::set<std::string> out;
  for (const auto& [name, conds] : specs_) {
    bool all = true;
    for (const auto& c : conds) {
      const double v = blend.at(c.feature);
      bool ok = false;
      if (c.op == ">") ok = v > c.threshold;
      else if (c.op == "<") ok = v < c.threshold;
      else if (c.op == "BETWEEN") ok = c.min <= v && v <= c.max;
      else if (c.op == "DIFF>") ok = v - blend.at(c.compare_to) > c.threshold;
      else if (c.op == "DIFF<") ok = std::fabs(v - blend.at(c.compare_to)) < c.threshold;
      all = all && ok;
    }
    if (all) out.insert(name);
  }
  return out;
}

std::set<std::string> ReferenceEvaluator::prioritized(std::set<std::string> active) const {
  for (const auto& rule : rules_) {
    bool fires;
    if (rule.when == "any") {
      std::set<std::string> rest = active;
      for (const auto& e : rule.except) rest.erase(e);
      fires = !rest.empty();
    } else {
      fires = active.count(rule.when) > 0;
    }
    if (fires)
      for (const auto& d : rule.disable) active.erase(d);
  }
  return active;
}

BlendShapeVector random_blend(std::uint64_t seed) {
  // Mix of uniform values and values clustered near the wukong profile thresholds so
  // that every branch of every condition is exercised.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 9);
  static constexpr double kEdges[] = {0.05, 0.1, 0.2, 0.25, 0.3, 0.4, 0.45, 0.5, 0.6, 0.8, 0.97};
  BlendShapeVector blend;
  for (std::size_t i = 0; i < kBlendShapeCount; ++i) {
    const int mode = pick(rng);
    double v;
    if (mode < 4) v = unit(rng);
    else if (mode < 7) v = unit(rng) * 0.1;
    else if (mode < 9) v = kEdges[pick(rng)] + (unit(rng) - 0.5) * 0.02;
    else v = kEdges[pick(rng)];
    blend.set(i, std::clamp(v, 0.0, 1.0));
  }
  return blend;
}

}  // namespace gazectl::testing
