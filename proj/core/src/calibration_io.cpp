#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gazectl/calibration.hpp"
#include "gazectl/frame_codec.hpp"

namespace gazectl {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Expected<std::string, std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return unexpected("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool read_number(const json& obj, const char* key, double& out) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) return false;
  out = it->get<double>();
  return std::isfinite(out);
}

bool read_vector(const json& obj, const char* key, std::vector<double>& out) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_array() || it->size() != kFeatureCount) return false;
  out.clear();
  for (const auto& v : *it) {
    if (!v.is_number()) return false;
    out.push_back(v.get<double>());
    if (!std::isfinite(out.back())) return false;
  }
  return true;
}

}  // namespace

std::string serialize_model(const CalibrationModel& model) {
  ordered_json j;
  j["coef_x"] = model.coef_x;
  j["coef_y"] = model.coef_y;
  j["intercept_x"] = model.intercept_x;
  j["intercept_y"] = model.intercept_y;
  j["feat_mean"] = model.feat_mean;
  j["feat_std"] = model.feat_std;
  j["lambda"] = model.lambda;
  j["cv_mse"] = model.cv_mse;
  return j.dump(2) + "\n";
}

Expected<CalibrationModel, std::string> parse_model(std::string_view text) {
  const json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) return unexpected(std::string("malformed model file"));
  CalibrationModel m;
  for (const auto& [key, out] : {std::pair{"coef_x", &m.coef_x}, std::pair{"coef_y", &m.coef_y},
                                 std::pair{"feat_mean", &m.feat_mean}, std::pair{"feat_std", &m.feat_std}}) {
    if (!read_vector(j, key, *out)) {
      return unexpected("model field '" + std::string(key) + "' must be an array of 6 finite numbers");
    }
  }
  for (const auto& [key, out] : {std::pair{"intercept_x", &m.intercept_x}, std::pair{"intercept_y", &m.intercept_y},
                                 std::pair{"lambda", &m.lambda}, std::pair{"cv_mse", &m.cv_mse}}) {
    if (!read_number(j, key, *out)) return unexpected("model field '" + std::string(key) + "' missing or not finite");
  }
  for (double s : m.feat_std) {
    if (!(s > 0.0)) return unexpected(std::string("model feat_std entries must be > 0"));
  }
  return m;
}

Expected<CalibrationModel, std::string> load_model(const std::string& path) {
  auto text = read_file(path);
  if (!text) return unexpected(text.error());
  auto model = parse_model(*text);
  if (!model) return unexpected(path + ": " + model.error());
  return model;
}

void save_model(const CalibrationModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CalibrationError("cannot write " + path);
  out << serialize_model(model);
}

std::string serialize_samples(const CalibrationSampleSet& set) {
  ordered_json j;
  j["screen"] = {{"width", set.screen.width}, {"height", set.screen.height}};
  j["complete"] = set.complete;
  ordered_json samples = ordered_json::array();
  for (const auto& s : set.samples) {
    samples.push_back({
        {"gaze", {{"yaw", s.gaze.yaw}, {"pitch", s.gaze.pitch}}},
        {"box", {{"x0", s.box.x0}, {"y0", s.box.y0}, {"x1", s.box.x1}, {"y1", s.box.y1}}},
        {"target", {{"x", s.target.x}, {"y", s.target.y}}},
    });
  }
  j["samples"] = std::move(samples);
  return j.dump(2) + "\n";
}

Expected<CalibrationSampleSet, std::string> parse_samples(std::string_view text) {
  const json j = json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) return unexpected(std::string("malformed samples file"));

  CalibrationSampleSet set;
  const auto screen = j.find("screen");
  if (screen == j.end() || !screen->is_object()) return unexpected(std::string("missing 'screen'"));
  const auto w = screen->find("width");
  const auto h = screen->find("height");
  if (w == screen->end() || h == screen->end() || !w->is_number_integer() || !h->is_number_integer()) {
    return unexpected(std::string("'screen' needs integer width and height"));
  }
  set.screen = {w->get<int>(), h->get<int>()};
  if (set.screen.width <= 0 || set.screen.height <= 0) return unexpected(std::string("screen size must be positive"));

  const auto complete = j.find("complete");
  if (complete != j.end()) {
    if (!complete->is_boolean()) return unexpected(std::string("'complete' must be a boolean"));
    set.complete = complete->get<bool>();
  }

  const auto samples = j.find("samples");
  if (samples == j.end() || !samples->is_array()) return unexpected(std::string("missing 'samples' array"));
  for (std::size_t i = 0; i < samples->size(); ++i) {
    const auto& s = (*samples)[i];
    const std::string where = "sample " + std::to_string(i) + ": ";
    if (!s.is_object()) return unexpected(where + "not an object");
    const auto gaze = s.find("gaze");
    const auto box = s.find("box");
    const auto target = s.find("target");
    if (gaze == s.end() || box == s.end() || target == s.end()) {
      return unexpected(where + "needs gaze, box and target");
    }
    CalibrationSample out;
    if (!read_number(*gaze, "yaw", out.gaze.yaw) || !read_number(*gaze, "pitch", out.gaze.pitch)) {
      return unexpected(where + "bad gaze");
    }
    if (out.gaze.yaw < -180.0 || out.gaze.yaw >= 360.0 || out.gaze.pitch < -180.0 || out.gaze.pitch >= 360.0) {
      return unexpected(where + "gaze out of range");
    }
    out.gaze.yaw = normalize_gaze_angle(out.gaze.yaw);
    out.gaze.pitch = normalize_gaze_angle(out.gaze.pitch);
    if (!read_number(*box, "x0", out.box.x0) || !read_number(*box, "y0", out.box.y0) ||
        !read_number(*box, "x1", out.box.x1) || !read_number(*box, "y1", out.box.y1)) {
      return unexpected(where + "bad box");
    }
    if (!(out.box.x0 < out.box.x1 && out.box.y0 < out.box.y1)) return unexpected(where + "box needs x0<x1, y0<y1");
    if (!read_number(*target, "x", out.target.x) || !read_number(*target, "y", out.target.y)) {
      return unexpected(where + "bad target");
    }
    if (out.target.x < 0.0 || out.target.x >= set.screen.width || out.target.y < 0.0 ||
        out.target.y >= set.screen.height) {
      return unexpected(where + "target outside screen bounds");
    }
    set.samples.push_back(out);
  }
  return set;
}

Expected<CalibrationSampleSet, std::string> load_samples(const std::string& path) {
  auto text = read_file(path);
  if (!text) return unexpected(text.error());
  auto set = parse_samples(*text);
  if (!set) return unexpected(path + ": " + set.error());
  return set;
}

}  // namespace gazectl
