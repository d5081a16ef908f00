#include <gtest/gtest.h>

#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "gazectl/blendshapes.hpp"
#include "gazectl/events.hpp"
#include "gazectl/frame_codec.hpp"

namespace gazectl {
namespace {

FeatureFrame neutral_frame(std::int64_t t = 0) {
  FeatureFrame f;
  f.t_ms = t;
  f.face_present = true;
  f.box = {0.2, 0.2, 0.8, 0.8};
  return f;
}

FeatureFrame random_frame(std::mt19937_64& rng, std::int64_t t) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> head(-90.0, 90.0);
  std::uniform_real_distribution<double> gaze(-180.0, 179.999);
  FeatureFrame f;
  f.t_ms = t;
  f.face_present = unit(rng) > 0.1;
  if (!f.face_present) return f;
  for (std::size_t i = 0; i < kBlendShapeCount; ++i) f.blend.set(i, unit(rng));
  f.head = {head(rng), head(rng), head(rng)};
  f.gaze = {gaze(rng), gaze(rng)};
  const double x0 = unit(rng) * 0.5, y0 = unit(rng) * 0.5;
  f.box = {x0, y0, x0 + 0.01 + unit(rng) * 0.49, y0 + 0.01 + unit(rng) * 0.49};
  return f;
}

nlohmann::json record(const FeatureFrame& f) { return nlohmann::json::parse(encode_frame(f)); }

TEST(BlendShapes, CanonicalSetHas52UniqueNames) {
  const auto names = blendshape_names();
  ASSERT_EQ(names.size(), 52u);
  std::set<std::string_view> unique(names.begin(), names.end());
  EXPECT_EQ(unique.size(), 52u);
  for (const char* name : {"jawOpen", "mouthSmileLeft", "mouthPucker", "browInnerUp", "eyeBlinkLeft", "_neutral"}) {
    EXPECT_TRUE(blendshape_index(name).has_value()) << name;
  }
}

TEST(BlendShapes, UnknownNameIsAnErrorNotZero) {
  BlendShapeVector v;
  EXPECT_THROW(v.at("jawOpened"), std::out_of_range);
  EXPECT_THROW(v.set("notABlendshape", 0.5), std::out_of_range);
  EXPECT_FALSE(blendshape_index("JawOpen").has_value());
}

TEST(BlendShapes, ValuesOutsideUnitIntervalRejected) {
  BlendShapeVector v;
  EXPECT_THROW(v.set("jawOpen", 1.5), std::invalid_argument);
  EXPECT_THROW(v.set("jawOpen", -0.01), std::invalid_argument);
  v.set("jawOpen", 1.0);
  EXPECT_EQ(v.at("jawOpen"), 1.0);
}

TEST(FrameCodec, NeutralFrameRoundTrips) {
  const auto f = neutral_frame(42);
  const auto decoded = decode_frame(encode_frame(f));
  ASSERT_TRUE(decoded) << decoded.error().describe();
  EXPECT_EQ(*decoded, f);
}

TEST(FrameCodec, FieldRoundTrip) {
  auto f = neutral_frame();
  f.blend.set("jawOpen", 0.5);
  const auto decoded = decode_frame(encode_frame(f));
  ASSERT_TRUE(decoded);
  EXPECT_EQ(decoded->blend.at("jawOpen"), 0.5);
}

TEST(FrameCodec, EncodingIsOneLineWithExactFieldNames) {
  const auto line = encode_frame(neutral_frame());
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const auto j = nlohmann::json::parse(line);
  for (const char* key : {"t_ms", "face_present", "blend", "head", "gaze", "box"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["blend"].size(), 52u);
  for (const char* key : {"yaw", "pitch", "roll"}) EXPECT_TRUE(j["head"].contains(key));
  for (const char* key : {"yaw", "pitch"}) EXPECT_TRUE(j["gaze"].contains(key));
  for (const char* key : {"x0", "y0", "x1", "y1"}) EXPECT_TRUE(j["box"].contains(key));
}

TEST(FrameCodec, AbsentFaceCarriesOnlyTimestampAndFlag) {
  FeatureFrame f;
  f.t_ms = 7;
  f.face_present = false;
  const auto j = record(f);
  EXPECT_EQ(j.size(), 2u);
  const auto decoded = decode_frame(R"({"t_ms":7,"face_present":false,"head":{"yaw":500}})");
  ASSERT_TRUE(decoded);
  EXPECT_FALSE(decoded->face_present);
  EXPECT_EQ(*decoded, f);
}

TEST(FrameCodec, RandomFramesRoundTripAgainstIndependentReader) {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 1000; ++i) {
    const auto f = random_frame(rng, i * 33);
    const std::string line = encode_frame(f);
    const auto decoded = decode_frame(line);
    ASSERT_TRUE(decoded) << decoded.error().describe();
    ASSERT_EQ(*decoded, f);

    // Second path: read the record with a plain JSON parser.
    const auto j = nlohmann::json::parse(line);
    ASSERT_EQ(j["t_ms"].get<std::int64_t>(), f.t_ms);
    ASSERT_EQ(j["face_present"].get<bool>(), f.face_present);
    if (!f.face_present) continue;
    const auto names = blendshape_names();
    for (std::size_t k = 0; k < names.size(); ++k) {
      ASSERT_EQ(j["blend"][std::string(names[k])].get<double>(), f.blend[k]);
    }
    ASSERT_EQ(j["head"]["yaw"].get<double>(), f.head.yaw);
    ASSERT_EQ(j["head"]["roll"].get<double>(), f.head.roll);
    ASSERT_EQ(j["gaze"]["pitch"].get<double>(), f.gaze.pitch);
    ASSERT_EQ(j["box"]["y1"].get<double>(), f.box.y1);
  }
}

TEST(FrameCodec, GazeInZeroTo360IsNormalizedToSigned) {
  auto j = record(neutral_frame());
  j["gaze"]["yaw"] = 350.0;
  j["gaze"]["pitch"] = 10.0;
  const auto decoded = decode_frame(j.dump());
  ASSERT_TRUE(decoded);
  EXPECT_DOUBLE_EQ(decoded->gaze.yaw, -10.0);
  EXPECT_DOUBLE_EQ(decoded->gaze.pitch, 10.0);

  EXPECT_DOUBLE_EQ(normalize_gaze_angle(180.0), -180.0);
  EXPECT_DOUBLE_EQ(normalize_gaze_angle(179.5), 179.5);
  EXPECT_DOUBLE_EQ(normalize_gaze_angle(-180.0), -180.0);

  j["gaze"]["yaw"] = 360.0;
  EXPECT_FALSE(decode_frame(j.dump()));
}

TEST(FrameCodec, MissingHeadNamesTheField) {
  auto j = record(neutral_frame());
  j.erase("head");
  const auto decoded = decode_frame(j.dump());
  ASSERT_FALSE(decoded);
  EXPECT_EQ(decoded.error().field, "head");
  EXPECT_NE(decoded.error().describe().find("missing"), std::string::npos);
}

TEST(FrameCodec, OutOfRangeBlendshapeRejected) {
  auto j = record(neutral_frame());
  j["blend"]["jawOpen"] = 1.5;
  const auto decoded = decode_frame(j.dump());
  ASSERT_FALSE(decoded);
  EXPECT_EQ(decoded.error().field, "blend.jawOpen");
  EXPECT_NE(decoded.error().describe().find("out of range"), std::string::npos);
}

TEST(FrameCodec, StructuralErrors) {
  auto base = record(neutral_frame());

  auto unknown = base;
  unknown["blend"]["jawOpened"] = 0.1;
  EXPECT_FALSE(decode_frame(unknown.dump()));

  auto missing_shape = base;
  missing_shape["blend"].erase("mouthPucker");
  EXPECT_FALSE(decode_frame(missing_shape.dump()));

  auto head = base;
  head["head"]["pitch"] = 91.0;
  EXPECT_FALSE(decode_frame(head.dump()));

  auto box = base;
  box["box"]["x0"] = 0.9;
  const auto bad_box = decode_frame(box.dump());
  ASSERT_FALSE(bad_box);
  EXPECT_EQ(bad_box.error().field, "box");

  auto t = base;
  t["t_ms"] = 1.5;
  EXPECT_FALSE(decode_frame(t.dump()));

  EXPECT_FALSE(decode_frame(""));
  EXPECT_FALSE(decode_frame("[1,2,3]"));
  EXPECT_FALSE(decode_frame("{\"t_ms\":"));
}

TEST(FrameCodec, DecoderIsTotalOnArbitraryInput) {
  std::mt19937_64 rng(99);
  const std::string valid = encode_frame(neutral_frame());
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 3000; ++i) {
    std::string line = valid;
    std::uniform_int_distribution<std::size_t> pos(0, line.size() - 1);
    const int edits = 1 + static_cast<int>(rng() % 8);
    for (int e = 0; e < edits; ++e) {
      switch (rng() % 3) {
        case 0: line[pos(rng) % line.size()] = static_cast<char>(byte(rng)); break;
        case 1: line.erase(pos(rng) % line.size(), 1 + rng() % 20); break;
        default: line.insert(pos(rng) % line.size(), 1, static_cast<char>(byte(rng))); break;
      }
      if (line.empty()) line = "x";
    }
    EXPECT_NO_THROW({ (void)decode_frame(line); });
  }
  for (int i = 0; i < 500; ++i) {
    std::string junk(rng() % 200, '\0');
    for (auto& c : junk) c = static_cast<char>(byte(rng));
    EXPECT_NO_THROW({ (void)decode_frame(junk); });
  }
}

TEST(Events, LogLinesRoundTrip) {
  const std::vector<InputEvent> events{
      InputEvent::key_down(10, "shift"), InputEvent::key_up(11, "shift"), InputEvent::key_press(12, "ctrl+c"),
      InputEvent::move_abs(13, 960, 540), InputEvent::move_rel(14, -6, 3), InputEvent::click(15, MouseButton::kRight),
      InputEvent::scroll(16, -2),
  };
  const std::vector<std::string> expected{
      "10 key_down shift",   "11 key_up shift",    "12 key_press ctrl+c", "13 mouse_move_abs 960,540",
      "14 mouse_move_rel -6,3", "15 mouse_click right", "16 scroll -2",
  };
  for (std::size_t i = 0; i < events.size(); ++i) {
    EXPECT_EQ(format_event(events[i]), expected[i]);
    const auto parsed = parse_event(expected[i]);
    ASSERT_TRUE(parsed) << expected[i];
    EXPECT_EQ(*parsed, events[i]);
  }
  EXPECT_FALSE(parse_event("12 teleport 3"));
  EXPECT_FALSE(parse_event("x key_down a"));
}

TEST(ScreenPoint, ClampIsHalfOpen) {
  const ScreenSize screen{1920, 1080};
  EXPECT_EQ(clamp_to_screen({-50, 3000}, screen), (ScreenPoint{0, 1079}));
  EXPECT_EQ(clamp_to_screen({5000, -1}, screen), (ScreenPoint{1919, 0}));
  EXPECT_EQ(clamp_to_screen({100.5, 200.25}, screen), (ScreenPoint{100.5, 200.25}));
}

}  // namespace
}  // namespace gazectl
