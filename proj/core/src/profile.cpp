#include "gazectl/profile.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace gazectl {

bool is_head_pseudo_intention(std::string_view name) {
  return std::find(std::begin(kHeadPseudoIntentions), std::end(kHeadPseudoIntentions), name) !=
         std::end(kHeadPseudoIntentions);
}

const Keymap* Profile::find_mode(const std::string& name) const {
  const auto it = std::find_if(modes.begin(), modes.end(), [&](const Keymap& k) { return k.name == name; });
  return it == modes.end() ? nullptr : &*it;
}

std::vector<std::string> Profile::mode_names() const {
  std::vector<std::string> names;
  for (const auto& m : modes) names.push_back(m.name);
  return names;
}

std::string ConfigError::describe() const {
  return line > 0 ? "line " + std::to_string(line) + ": " + message : message;
}

namespace {

struct ConfigFailure {
  ConfigError error;
};

int line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.is_null() ? 0 : mark.line + 1;
}

[[noreturn]] void fail(const YAML::Node& node, std::string message) {
  throw ConfigFailure{{line_of(node), std::move(message)}};
}

void require_map(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) fail(node, "'" + path + "' must be a mapping");
}

void check_keys(const YAML::Node& node, const std::string& path, std::initializer_list<std::string_view> allowed) {
  require_map(node, path);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(kv.first, "unknown field '" + key + "' in '" + path + "'");
    }
  }
}

double as_double(const YAML::Node& node, const std::string& path) {
  double value = 0.0;
  if (!node.IsScalar() || !YAML::convert<double>::decode(node, value)) fail(node, "'" + path + "' must be a number");
  return value;
}

int as_int(const YAML::Node& node, const std::string& path) {
  int value = 0;
  if (!node.IsScalar() || !YAML::convert<int>::decode(node, value)) fail(node, "'" + path + "' must be an integer");
  return value;
}

std::string as_string(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) fail(node, "'" + path + "' must be a scalar");
  return node.Scalar();
}

std::vector<std::string> as_string_list(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) fail(node, "'" + path + "' must be a list");
  std::vector<std::string> out;
  for (const auto& item : node) out.push_back(as_string(item, path));
  return out;
}

HeadAngles parse_angles(const YAML::Node& node, const std::string& path, HeadAngles defaults) {
  check_keys(node, path, {"yaw", "pitch", "roll"});
  if (node["yaw"]) defaults.yaw = as_double(node["yaw"], path + ".yaw");
  if (node["pitch"]) defaults.pitch = as_double(node["pitch"], path + ".pitch");
  if (node["roll"]) defaults.roll = as_double(node["roll"], path + ".roll");
  return defaults;
}

Condition parse_condition(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"feature", "operator", "threshold", "min", "max", "compare_to"});
  Condition c;
  if (!node["feature"]) fail(node, "'" + path + "' is missing 'feature'");
  c.feature = as_string(node["feature"], path + ".feature");
  if (!blendshape_index(c.feature)) fail(node["feature"], "unknown blendshape '" + c.feature + "'");
  if (!node["operator"]) fail(node, "'" + path + "' is missing 'operator'");
  const auto op_text = as_string(node["operator"], path + ".operator");
  const auto op = parse_operator(op_text);
  if (!op) fail(node["operator"], "invalid operator '" + op_text + "'");
  c.op = *op;

  if (c.op == Operator::kBetween) {
    if (!node["min"] || !node["max"]) fail(node, "BETWEEN in '" + path + "' needs min and max");
    c.min = as_double(node["min"], path + ".min");
    c.max = as_double(node["max"], path + ".max");
    if (!(c.min < c.max)) fail(node, "BETWEEN in '" + path + "' needs min < max");
  } else {
    if (!node["threshold"]) fail(node, "'" + path + "' is missing 'threshold'");
    c.threshold = as_double(node["threshold"], path + ".threshold");
  }
  if (c.op == Operator::kDiffGreater || c.op == Operator::kDiffLess) {
    if (!node["compare_to"]) fail(node, std::string(to_string(c.op)) + " in '" + path + "' needs compare_to");
    c.compare_to = as_string(node["compare_to"], path + ".compare_to");
    if (!blendshape_index(c.compare_to)) fail(node["compare_to"], "unknown blendshape '" + c.compare_to + "'");
  }
  return c;
}

void parse_expressions(const YAML::Node& node, Profile& profile) {
  check_keys(node, "expression_evaluator_config", {"expressions", "priority_rules", "debounce_frames"});
  if (node["debounce_frames"]) {
    profile.debounce_frames = as_int(node["debounce_frames"], "debounce_frames");
    if (profile.debounce_frames < 1) fail(node["debounce_frames"], "debounce_frames must be >= 1");
  }
  if (const auto exprs = node["expressions"]) {
    require_map(exprs, "expressions");
    for (const auto& kv : exprs) {
      IntentionSpec spec;
      spec.name = kv.first.as<std::string>();
      const std::string path = "expressions." + spec.name;
      if (is_head_pseudo_intention(spec.name)) {
        fail(kv.first, "'" + spec.name + "' is reserved for head pose and cannot be an expression");
      }
      check_keys(kv.second, path, {"conditions", "combine"});
      const auto conds = kv.second["conditions"];
      if (!conds || !conds.IsSequence() || conds.size() == 0) fail(kv.second, "'" + path + "' needs a non-empty conditions list");
      for (std::size_t i = 0; i < conds.size(); ++i) {
        spec.conditions.push_back(parse_condition(conds[i], path + ".conditions[" + std::to_string(i) + "]"));
      }
      if (const auto combine = kv.second["combine"]) {
        const auto text = as_string(combine, path + ".combine");
        if (text != "AND") fail(combine, "unsupported combine '" + text + "' (only AND)");
      }
      profile.intentions.push_back(std::move(spec));
    }
  }
  if (const auto rules = node["priority_rules"]) {
    if (!rules.IsSequence()) fail(rules, "'priority_rules' must be a list");
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const auto r = rules[i];
      const std::string path = "priority_rules[" + std::to_string(i) + "]";
      check_keys(r, path, {"when", "disable", "except"});
      PriorityRule rule;
      if (!r["when"]) fail(r, "'" + path + "' is missing 'when'");
      const auto when = as_string(r["when"], path + ".when");
      if (when != "any") rule.when = when;
      if (!r["disable"]) fail(r, "'" + path + "' is missing 'disable'");
      rule.disable = as_string_list(r["disable"], path + ".disable");
      if (r["except"]) rule.except = as_string_list(r["except"], path + ".except");
      profile.priority_rules.push_back(std::move(rule));
    }
  }
}

bool is_modifier(const Action& a) {
  static const std::set<std::string> kModifiers{"shift", "ctrl", "alt", "win", "fn"};
  return a.kind == Action::Kind::kKey && kModifiers.contains(a.key);
}

void parse_key_config(const YAML::Node& node, Profile& profile, std::vector<std::string>& warnings) {
  require_map(node, "key_config");
  std::vector<std::string> mode_names;
  for (const auto& kv : node) mode_names.push_back(kv.first.as<std::string>());

  for (const auto& mode_kv : node) {
    Keymap keymap;
    keymap.name = mode_kv.first.as<std::string>();
    require_map(mode_kv.second, "key_config." + keymap.name);
    for (const auto& kv : mode_kv.second) {
      WheelSpec spec;
      spec.owner = kv.first.as<std::string>();
      const std::string path = "key_config." + keymap.name + "." + spec.owner;
      check_keys(kv.second, path, {"wheel", "layout_type", "induce"});
      const auto wheel = kv.second["wheel"];
      if (!wheel || !wheel.IsSequence() || wheel.size() == 0) fail(kv.second, "'" + path + "' needs a non-empty wheel list");

      bool names_mode = false;
      for (const auto& item : wheel) {
        if (item.IsScalar() && std::find(mode_names.begin(), mode_names.end(), item.Scalar()) != mode_names.end()) {
          names_mode = true;
        }
      }
      for (const auto& item : wheel) {
        if (!item.IsNull() && !item.IsScalar()) fail(item, "wheel items in '" + path + "' must be scalars");
        const std::string token = item.IsNull() ? std::string("null") : item.Scalar();
        auto action = parse_action(token, mode_names);
        if (!action) {
          if (names_mode) fail(item, "dangling mode reference '" + token + "' in '" + path + "'");
          fail(item, action.error() + " in '" + path + "'");
        }
        if (action->kind == Action::Kind::kMeta) {
          warnings.push_back(path + ": '" + token + "' is recognized but unbound");
        }
        spec.items.push_back(std::move(*action));
      }
      if (spec.items.size() > 1) {
        for (const auto& a : spec.items) {
          if (is_modifier(a)) warnings.push_back(path + ": modifier '" + a.key + "' in a multi-item wheel acts as a tap");
        }
      }

      if (const auto layout = kv.second["layout_type"]) {
        const auto text = as_string(layout, path + ".layout_type");
        if (text == "square") spec.layout = LayoutType::kSquare;
        else if (text == "radial") spec.layout = LayoutType::kRadial;
        else fail(layout, "unknown layout_type '" + text + "'");
      }
      if (const auto induce = kv.second["induce"]) {
        check_keys(induce, path + ".induce", {"lock_mouse_move"});
        if (const auto lock = induce["lock_mouse_move"]) {
          check_keys(lock, path + ".induce.lock_mouse_move", {"duration"});
          if (!lock["duration"]) fail(lock, "lock_mouse_move needs a duration");
          const double seconds = as_double(lock["duration"], path + ".induce.lock_mouse_move.duration");
          if (!(seconds > 0.0)) fail(lock["duration"], "induce durations must be > 0");
          spec.lock_mouse_move_s = seconds;
        }
      }
      keymap.bindings.push_back(std::move(spec));
    }
    profile.modes.push_back(std::move(keymap));
  }
}

void parse_cursor(const YAML::Node& node, CursorConfig& c) {
  check_keys(node, "cursor",
             {"smoothing_window", "edge_band", "relative_gain", "fine_gain", "deadzone", "release", "dwell_ms",
              "stillness_eps", "scroll_threshold_deg", "scroll_gain", "face_loss_ms", "relative_modes"});
  if (node["smoothing_window"]) c.smoothing_window = as_int(node["smoothing_window"], "cursor.smoothing_window");
  const std::pair<const char*, double*> numbers[] = {
      {"edge_band", &c.edge_band},     {"relative_gain", &c.relative_gain},
      {"fine_gain", &c.fine_gain},     {"deadzone", &c.deadzone},
      {"release", &c.release},         {"dwell_ms", &c.dwell_ms},
      {"stillness_eps", &c.stillness_eps}, {"scroll_threshold_deg", &c.scroll_threshold_deg},
      {"scroll_gain", &c.scroll_gain}, {"face_loss_ms", &c.face_loss_ms},
  };
  for (const auto& [key, out] : numbers) {
    if (node[key]) *out = as_double(node[key], std::string("cursor.") + key);
  }
  if (node["relative_modes"]) c.relative_modes = as_string_list(node["relative_modes"], "cursor.relative_modes");
  if (c.smoothing_window < 1) fail(node, "cursor.smoothing_window must be >= 1");
  if (!(c.edge_band > 0.0 && c.edge_band < 0.5)) fail(node, "cursor.edge_band must be in (0, 0.5)");
  if (!(c.release > 0.0 && c.release <= c.deadzone)) fail(node, "cursor.release must be in (0, deadzone]");
}

void parse_wheel_settings(const YAML::Node& node, WheelSettings& w) {
  check_keys(node, "wheel", {"overlay_size", "gaze_deadzone", "head_deadzone", "head_span"});
  if (node["overlay_size"]) w.overlay_size = as_double(node["overlay_size"], "wheel.overlay_size");
  if (node["gaze_deadzone"]) w.gaze_deadzone = as_double(node["gaze_deadzone"], "wheel.gaze_deadzone");
  if (node["head_deadzone"]) w.head_deadzone = as_double(node["head_deadzone"], "wheel.head_deadzone");
  if (node["head_span"]) w.head_span = as_double(node["head_span"], "wheel.head_span");
  if (!(w.overlay_size > 0.0 && w.overlay_size <= 1.0)) fail(node, "wheel.overlay_size must be in (0, 1]");
  if (!(w.head_span > 0.0)) fail(node, "wheel.head_span must be > 0");
}

void cross_check(const YAML::Node& root, const Profile& profile) {
  std::set<std::string> intentions;
  for (const auto& spec : profile.intentions) intentions.insert(spec.name);

  const auto key_config = root["key_config"];
  for (const auto& keymap : profile.modes) {
    for (const auto& spec : keymap.bindings) {
      if (!intentions.contains(spec.owner) && !is_head_pseudo_intention(spec.owner)) {
        fail(key_config[keymap.name][spec.owner], "key_config." + keymap.name + " references unknown intention '" +
                                                      spec.owner + "'");
      }
    }
  }
  const auto rules = root["expression_evaluator_config"]["priority_rules"];
  for (std::size_t i = 0; i < profile.priority_rules.size(); ++i) {
    const auto& rule = profile.priority_rules[i];
    auto check = [&](const std::string& name) {
      if (!intentions.contains(name)) fail(rules[i], "priority rule references unknown intention '" + name + "'");
    };
    if (rule.when) check(*rule.when);
    for (const auto& n : rule.disable) check(n);
    for (const auto& n : rule.except) check(n);
  }
  for (const auto& m : profile.cursor.relative_modes) {
    if (!profile.modes.empty() && profile.find_mode(m) == nullptr) {
      fail(root["cursor"], "cursor.relative_modes names unknown mode '" + m + "'");
    }
  }
  for (const HeadAngles* scale : {&profile.head_angles_scale}) {
    if (!(scale->yaw > 0.0 && scale->pitch > 0.0 && scale->roll > 0.0)) {
      fail(root["head_angles_scale"], "head_angles_scale entries must be > 0");
    }
  }
}

}  // namespace

Expected<LoadedProfile, ConfigError> parse_profile(std::string_view text) {
  LoadedProfile loaded;
  Profile& profile = loaded.profile;
  try {
    const YAML::Node root = YAML::Load(std::string(text));
    if (root.IsNull()) return loaded;
    check_keys(root, "<root>",
               {"head_angles_center", "head_angles_scale", "key_config", "expression_evaluator_config", "cursor", "wheel"});
    if (root["head_angles_center"]) {
      profile.head_angles_center = parse_angles(root["head_angles_center"], "head_angles_center", profile.head_angles_center);
    }
    if (root["head_angles_scale"]) {
      profile.head_angles_scale = parse_angles(root["head_angles_scale"], "head_angles_scale", profile.head_angles_scale);
    }
    if (root["expression_evaluator_config"]) parse_expressions(root["expression_evaluator_config"], profile);
    if (root["key_config"]) parse_key_config(root["key_config"], profile, loaded.warnings);
    if (root["cursor"]) parse_cursor(root["cursor"], profile.cursor);
    if (root["wheel"]) parse_wheel_settings(root["wheel"], profile.wheel);
    cross_check(root, profile);
  } catch (const ConfigFailure& failure) {
    return unexpected(failure.error);
  } catch (const YAML::ParserException& e) {
    return unexpected(ConfigError{e.mark.line + 1, "parse error: " + e.msg});
  } catch (const YAML::Exception& e) {
    return unexpected(ConfigError{e.mark.is_null() ? 0 : e.mark.line + 1, e.msg});
  }
  return loaded;
}

Expected<LoadedProfile, ConfigError> load_profile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return unexpected(ConfigError{0, "cannot open " + path});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_profile(ss.str());
}

namespace {

std::string number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(value);
}

std::string quoted(std::string_view text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') out += "''";
    else out += c;
  }
  out += '\'';
  return out;
}

std::string quoted_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += quoted(items[i]);
  }
  return out + "]";
}

void write_angles(std::ostream& out, const char* name, const HeadAngles& a) {
  out << name << ":\n  yaw: " << number(a.yaw) << "\n  pitch: " << number(a.pitch) << "\n  roll: " << number(a.roll)
      << "\n\n";
}

}  // namespace

std::string serialize_profile(const Profile& profile) {
  std::ostringstream out;
  write_angles(out, "head_angles_center", profile.head_angles_center);
  write_angles(out, "head_angles_scale", profile.head_angles_scale);

  if (!profile.modes.empty()) {
    out << "key_config:\n";
    for (const auto& keymap : profile.modes) {
      out << "  " << quoted(keymap.name) << ":\n";
      for (const auto& spec : keymap.bindings) {
        out << "    " << quoted(spec.owner) << ":\n      wheel: [";
        for (std::size_t i = 0; i < spec.items.size(); ++i) {
          if (i) out << ", ";
          const auto& item = spec.items[i];
          out << (item.kind == Action::Kind::kNone ? std::string("null") : quoted(item.token));
        }
        out << "]\n";
        if (spec.layout == LayoutType::kSquare) out << "      layout_type: square\n";
        if (spec.lock_mouse_move_s) {
          out << "      induce:\n        lock_mouse_move:\n          duration: " << number(*spec.lock_mouse_move_s)
              << "\n";
        }
      }
    }
    out << "\n";
  }

  out << "expression_evaluator_config:\n  debounce_frames: " << profile.debounce_frames << "\n";
  if (!profile.intentions.empty()) {
    out << "  expressions:\n";
    for (const auto& spec : profile.intentions) {
      out << "    " << quoted(spec.name) << ":\n      conditions:\n";
      for (const auto& c : spec.conditions) {
        out << "        - feature: " << c.feature << "\n          operator: " << quoted(to_string(c.op)) << "\n";
        if (c.op == Operator::kBetween) {
          out << "          min: " << number(c.min) << "\n          max: " << number(c.max) << "\n";
        } else {
          out << "          threshold: " << number(c.threshold) << "\n";
        }
        if (!c.compare_to.empty()) out << "          compare_to: " << c.compare_to << "\n";
      }
      out << "      combine: \"AND\"\n";
    }
  }
  if (!profile.priority_rules.empty()) {
    out << "  priority_rules:\n";
    for (const auto& rule : profile.priority_rules) {
      out << "    - when: " << (rule.when ? quoted(*rule.when) : std::string("any")) << "\n";
      out << "      disable: " << quoted_list(rule.disable) << "\n";
      if (!rule.except.empty()) out << "      except: " << quoted_list(rule.except) << "\n";
    }
  }
  out << "\n";

  const auto& c = profile.cursor;
  out << "cursor:\n"
      << "  smoothing_window: " << c.smoothing_window << "\n"
      << "  edge_band: " << number(c.edge_band) << "\n"
      << "  relative_gain: " << number(c.relative_gain) << "\n"
      << "  fine_gain: " << number(c.fine_gain) << "\n"
      << "  deadzone: " << number(c.deadzone) << "\n"
      << "  release: " << number(c.release) << "\n"
      << "  dwell_ms: " << number(c.dwell_ms) << "\n"
      << "  stillness_eps: " << number(c.stillness_eps) << "\n"
      << "  scroll_threshold_deg: " << number(c.scroll_threshold_deg) << "\n"
      << "  scroll_gain: " << number(c.scroll_gain) << "\n"
      << "  face_loss_ms: " << number(c.face_loss_ms) << "\n"
      << "  relative_modes: " << quoted_list(c.relative_modes) << "\n\n";

  const auto& w = profile.wheel;
  out << "wheel:\n"
      << "  overlay_size: " << number(w.overlay_size) << "\n"
      << "  gaze_deadzone: " << number(w.gaze_deadzone) << "\n"
      << "  head_deadzone: " << number(w.head_deadzone) << "\n"
      << "  head_span: " << number(w.head_span) << "\n";
  return out.str();
}

}  // namespace gazectl
