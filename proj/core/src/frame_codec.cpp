#include "gazectl/frame_codec.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace gazectl {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Unexpected<DecodeError> fail(std::string field, std::string message) {
  return unexpected(DecodeError{std::move(field), std::move(message)});
}

// Reads a finite number from obj[key]; `path` names the field in errors.
Expected<double, DecodeError> number_field(const json& obj, const char* key,
                                           const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fail(path, "missing field \"" + path + "\"");
  if (!it->is_number()) return fail(path, "field \"" + path + "\" is not a number");
  const double value = it->get<double>();
  if (!std::isfinite(value)) return fail(path, "field \"" + path + "\" is not finite");
  return value;
}

Expected<const json*, DecodeError> object_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fail(key, std::string("missing field \"") + key + "\"");
  if (!it->is_object()) return fail(key, std::string("field \"") + key + "\" is not an object");
  return &*it;
}

Unexpected<DecodeError> out_of_range(const std::string& path, double value) {
  return fail(path, "field \"" + path + "\" out of range: " + json(value).dump());
}

}  // namespace

std::string DecodeError::describe() const { return message; }

double normalize_gaze_angle(double degrees) {
  return degrees >= 180.0 ? degrees - 360.0 : degrees;
}

std::string encode_frame(const FeatureFrame& frame) {
  ordered_json j;
  j["t_ms"] = frame.t_ms;
  j["face_present"] = frame.face_present;
  if (frame.face_present) {
    ordered_json blend = ordered_json::object();
    const auto& names = blendshape_names();
    for (std::size_t i = 0; i < kBlendShapeCount; ++i) {
      blend[std::string(names[i])] = frame.blend[i];
    }
    j["blend"] = std::move(blend);
    j["head"] = {{"yaw", frame.head.yaw}, {"pitch", frame.head.pitch}, {"roll", frame.head.roll}};
    j["gaze"] = {{"yaw", frame.gaze.yaw}, {"pitch", frame.gaze.pitch}};
    j["box"] = {{"x0", frame.box.x0}, {"y0", frame.box.y0}, {"x1", frame.box.x1}, {"y1", frame.box.y1}};
  }
  return j.dump();
}

Expected<FeatureFrame, DecodeError> decode_frame(std::string_view line) {
  const json j = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return fail("", "malformed record");
  if (!j.is_object()) return fail("", "record is not an object");

  FeatureFrame frame;

  const auto t = j.find("t_ms");
  if (t == j.end()) return fail("t_ms", "missing field \"t_ms\"");
  if (!t->is_number_integer()) return fail("t_ms", "field \"t_ms\" is not an integer");
  frame.t_ms = t->get<std::int64_t>();
  if (t->is_number_unsigned() && frame.t_ms < 0) return out_of_range("t_ms", t->get<double>());

  const auto present = j.find("face_present");
  if (present == j.end()) return fail("face_present", "missing field \"face_present\"");
  if (!present->is_boolean()) return fail("face_present", "field \"face_present\" is not a boolean");
  frame.face_present = present->get<bool>();
  if (!frame.face_present) return frame;

  const auto blend = object_field(j, "blend");
  if (!blend) return unexpected(blend.error());
  for (const auto& [name, value] : (*blend)->items()) {
    const auto index = blendshape_index(name);
    if (!index) return fail("blend." + name, "unknown blendshape name \"" + name + "\"");
    if (!value.is_number()) return fail("blend." + name, "field \"blend." + name + "\" is not a number");
    const double v = value.get<double>();
    if (!(v >= 0.0 && v <= 1.0)) return out_of_range("blend." + name, v);
    frame.blend.set(*index, v);
  }
  if ((*blend)->size() != kBlendShapeCount) {
    for (const auto name : blendshape_names()) {
      if (!(*blend)->contains(std::string(name))) {
        const std::string path = "blend." + std::string(name);
        return fail(path, "missing field \"" + path + "\"");
      }
    }
  }

  const auto head = object_field(j, "head");
  if (!head) return unexpected(head.error());
  struct AngleField {
    const char* key;
    double* out;
  };
  for (const AngleField f : {AngleField{"yaw", &frame.head.yaw}, AngleField{"pitch", &frame.head.pitch},
                             AngleField{"roll", &frame.head.roll}}) {
    const std::string path = std::string("head.") + f.key;
    const auto v = number_field(**head, f.key, path);
    if (!v) return unexpected(v.error());
    if (*v < -90.0 || *v > 90.0) return out_of_range(path, *v);
    *f.out = *v;
  }

  const auto gaze = object_field(j, "gaze");
  if (!gaze) return unexpected(gaze.error());
  for (const AngleField f : {AngleField{"yaw", &frame.gaze.yaw}, AngleField{"pitch", &frame.gaze.pitch}}) {
    const std::string path = std::string("gaze.") + f.key;
    const auto v = number_field(**gaze, f.key, path);
    if (!v) return unexpected(v.error());
    if (*v < -180.0 || *v >= 360.0) return out_of_range(path, *v);
    *f.out = normalize_gaze_angle(*v);
  }

  const auto box = object_field(j, "box");
  if (!box) return unexpected(box.error());
  for (const AngleField f : {AngleField{"x0", &frame.box.x0}, AngleField{"y0", &frame.box.y0},
                             AngleField{"x1", &frame.box.x1}, AngleField{"y1", &frame.box.y1}}) {
    const std::string path = std::string("box.") + f.key;
    const auto v = number_field(**box, f.key, path);
    if (!v) return unexpected(v.error());
    if (*v < 0.0 || *v > 1.0) return out_of_range(path, *v);
    *f.out = *v;
  }
  if (!(frame.box.x0 < frame.box.x1)) return fail("box", "box requires x0 < x1");
  if (!(frame.box.y0 < frame.box.y1)) return fail("box", "box requires y0 < y1");

  return frame;
}

}  // namespace gazectl
