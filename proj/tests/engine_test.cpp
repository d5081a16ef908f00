#include <gtest/gtest.h>

#include <random>

#include "gazectl/engine.hpp"
#include "scenarios.hpp"

namespace gazectl {
namespace {

using testing::TraceBuilder;

Profile load(const char* name) {
  auto loaded = load_profile(std::string(GAZECTL_PROFILES_DIR "/") + name);
  if (!loaded) throw std::runtime_error(loaded.error().message);
  return loaded->profile;
}

std::vector<InputEvent> run(Engine& engine, const TraceBuilder& trace) {
  std::vector<InputEvent> out;
  for (const auto& f : trace.frames()) {
    auto events = engine.step(f);
    out.insert(out.end(), events.begin(), events.end());
  }
  return out;
}

std::vector<std::string> lines(const std::vector<InputEvent>& events) {
  std::vector<std::string> out;
  for (const auto& e : events) out.push_back(format_event(e));
  return out;
}

std::vector<std::string> key_events(const std::vector<InputEvent>& events) {
  std::vector<std::string> out;
  for (const auto& e : events) {
    if (e.kind == EventKind::kKeyDown || e.kind == EventKind::kKeyUp || e.kind == EventKind::kKeyPress)
      out.push_back(std::string(to_string(e.kind)) + " " + e.key);
  }
  return out;
}

// Makes an expression, points with the head, lets go of the expression while
// still pointing, then returns the head to rest.
TraceBuilder& wheel_by_head(TraceBuilder& t, std::initializer_list<std::pair<std::string_view, double>> expression,
                            double yaw, double pitch) {
  t.set(expression).hold(4).head(yaw, 3.0 + pitch).hold(3).neutral().hold(3).head(0, 3).hold(3);
  return t;
}

TEST(Engine, NeutralSessionEmitsNothing) {
  Engine engine(load("wukong.yaml"), testing::scenario_model());
  TraceBuilder t;
  t.hold(300);
  EXPECT_TRUE(run(engine, t).empty());
  EXPECT_TRUE(engine.finish(t.next_t_ms()).empty());
}

TEST(Engine, BrowRaiseHoldsSpace) {
  Engine engine(load("wukong.yaml"));
  TraceBuilder t;
  t.set("browInnerUp", 0.9).hold(3).neutral().hold(3);
  const auto events = run(engine, t);
  EXPECT_EQ(lines(events), (std::vector<std::string>{"33 key_down space", "133 key_up space"}));
}

TEST(Engine, StartsInFirstModeWithRelativeCursor) {
  Engine engine(load("wukong.yaml"));
  EXPECT_EQ(engine.mode(), "game");
  EXPECT_EQ(engine.cursor_mode(), CursorMode::kRelative);
  EXPECT_FALSE(engine.wheel_open());
}

TEST(Engine, ReplayIsDeterministic) {
  const auto profile = load("wukong.yaml");
  const auto trace = testing::session_900();
  Engine a(profile, testing::scenario_model());
  Engine b(profile, testing::scenario_model());
  EXPECT_EQ(run(a, trace), run(b, trace));
  EXPECT_EQ(a.snapshot().mode, b.snapshot().mode);
}

TEST(Engine, FaceLossReleasesAfterGrace) {
  Engine engine(load("wukong.yaml"));
  TraceBuilder t;
  t.set("mouthRollLower", 0.6).set("mouthRollUpper", 0.6).hold(3);
  const auto start = t.next_t_ms();
  t.absent(30);
  const auto events = run(engine, t);
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(format_event(events[0]), "33 key_down e");
  EXPECT_EQ(events[1].kind, EventKind::kKeyUp);
  EXPECT_EQ(events[1].key, "e");
  EXPECT_GE(events[1].t_ms - start, 500);
  EXPECT_LT(events[1].t_ms - start, 534);
  EXPECT_TRUE(engine.held_keys().empty());
}

TEST(Engine, ShortDropoutKeepsKeysHeld) {
  Engine engine(load("wukong.yaml"));
  TraceBuilder t;
  t.set("browInnerUp", 0.9).hold(3).absent(10).hold(3);
  EXPECT_EQ(key_events(run(engine, t)), std::vector<std::string>{"key_down space"});
  EXPECT_EQ(engine.held_keys(), std::vector<std::string>{"space"});
}

TEST(Engine, FaceLossCancelsOpenWheel) {
  Engine engine(load("wukong.yaml"));
  TraceBuilder t;
  t.set("mouthLeft", 0.5).hold(4).head(12, 3).hold(2).absent(20).neutral().head(0, 3).hold(5);
  EXPECT_TRUE(key_events(run(engine, t)).empty());
  EXPECT_FALSE(engine.wheel_open());
}

TEST(Engine, HeadWheelSelectsSkill) {
  Engine engine(load("wukong.yaml"));
  TraceBuilder t;
  wheel_by_head(t, {{"mouthLeft", 0.5}}, 12, 0);
  // The head is still turned right after the confirm, but d is not pressed.
  EXPECT_EQ(key_events(run(engine, t)), std::vector<std::string>{"key_press 2"});
  TraceBuilder more(t.next_t_ms());
  more.head(12, 3).hold(3);
  EXPECT_EQ(key_events(run(engine, more)), std::vector<std::string>{"key_down d"});
}

TEST(Engine, ModeSwitchReleasesAndResets) {
  Engine engine(load("wukong.yaml"));
  TraceBuilder t;
  t.set("browInnerUp", 0.9).hold(3);
  t.set("jawOpen", 0.6).hold(4).head(12, 3).hold(3).set("jawOpen", 0).hold(3);
  const auto events = key_events(run(engine, t));
  EXPECT_EQ(events, (std::vector<std::string>{"key_down space", "key_up space"}));
  EXPECT_EQ(engine.mode(), "type");
  EXPECT_EQ(engine.cursor_mode(), CursorMode::kAbsolute);
  EXPECT_TRUE(engine.held_keys().empty());

  // Expressions restart from idle, so a brow that stays raised triggers again
  // under the new keymap.
  TraceBuilder more(t.next_t_ms());
  more.set("browInnerUp", 0.9).head(0, 3).hold(5).neutral().hold(3);
  EXPECT_EQ(key_events(run(engine, more)), (std::vector<std::string>{"key_down space", "key_up space"}));
}

TEST(Engine, ChordWrapsModifiers) {
  Engine engine(load("wukong.yaml"));
  TraceBuilder t;
  wheel_by_head(t, {{"jawOpen", 0.6}}, 12, 0);
  ASSERT_TRUE(key_events(run(engine, t)).empty());
  ASSERT_EQ(engine.mode(), "type");
  TraceBuilder t2(t.next_t_ms());
  wheel_by_head(t2, {{"mouthSmileRight", 0.35}}, 0, 12);
  const auto events = key_events(run(engine, t2));
  EXPECT_EQ(events, (std::vector<std::string>{"key_down ctrl", "key_press c", "key_up ctrl"}));
}

TEST(Engine, OpenWheelSuppressesHeadKeysAndMotion) {
  Engine engine(load("wukong.yaml"), testing::scenario_model());
  TraceBuilder t;
  t.head(-12, 3).look_at(20, 540).hold(4);
  auto before = run(engine, t);
  EXPECT_EQ(key_events(before), std::vector<std::string>{"key_down a"});

  TraceBuilder open(t.next_t_ms());
  open.head(-12, 3).look_at(20, 540).set("mouthRight", 0.5).hold(10);
  const auto during = run(engine, open);
  const auto up = std::find_if(during.begin(), during.end(),
                               [](const InputEvent& e) { return e.kind == EventKind::kKeyUp && e.key == "a"; });
  ASSERT_NE(up, during.end());
  // Debouncing keeps the wheel closed for one frame; after that nothing moves.
  for (auto it = up + 1; it != during.end(); ++it) {
    EXPECT_NE(it->kind, EventKind::kMouseMoveRel);
    EXPECT_NE(it->kind, EventKind::kKeyDown);
  }
  EXPECT_EQ(std::count_if(during.begin(), up, [](const InputEvent& e) { return e.kind == EventKind::kMouseMoveRel; }), 1);
  EXPECT_TRUE(engine.wheel_open());
}

TEST(Engine, FinishReleasesEverything) {
  Engine engine(load("wukong.yaml"));
  TraceBuilder t;
  t.set("browInnerUp", 0.9).set("mouthPressLeft", 0.6).set("mouthPressRight", 0.6).head(0, -10).hold(5);
  const auto down = key_events(run(engine, t));
  EXPECT_EQ(down.size(), 3u);
  const auto up = engine.finish(t.next_t_ms());
  EXPECT_EQ(key_events(up), (std::vector<std::string>{"key_up g", "key_up space", "key_up w"}));
  EXPECT_TRUE(engine.held_keys().empty());
}

TEST(Engine, ReplaceProfileReleasesHeldKeys) {
  Engine engine(load("wukong.yaml"));
  TraceBuilder t;
  t.set("browInnerUp", 0.9).hold(3);
  run(engine, t);
  const auto released = engine.replace_profile(load("desktop.yaml"), t.next_t_ms());
  EXPECT_EQ(key_events(released), std::vector<std::string>{"key_up space"});
  EXPECT_EQ(engine.mode(), "desktop");
  EXPECT_EQ(engine.cursor_mode(), CursorMode::kAbsolute);
}

TEST(Engine, ReplaceProfileKeepsExistingMode) {
  Engine engine(load("wukong.yaml"));
  EXPECT_TRUE(engine.replace_profile(load("wukong.yaml"), 0).empty());
  EXPECT_EQ(engine.mode(), "game");
}

TEST(HeldKeys, SharedKeyGoesUpWithLastHolder) {
  HeldKeys held;
  EXPECT_TRUE(held.press("num9", "ctrl", 0));
  EXPECT_FALSE(held.press("num3", "ctrl", 1));
  EXPECT_FALSE(held.release("num9", 2));
  const auto up = held.release("num3", 3);
  ASSERT_TRUE(up);
  EXPECT_EQ(up->kind, EventKind::kKeyUp);
  EXPECT_FALSE(held.release("num3", 4));
  EXPECT_TRUE(held.empty());
}

// Random expression and head sequences: every key_down is paired with a
// key_up, and finish leaves nothing held and no wheel open.
TEST(EngineSafety, RandomSessionsEndClean) {
  const auto profile = load("wukong.yaml");
  const char* features[] = {"jawOpen", "browInnerUp", "mouthLeft", "mouthRight", "mouthPucker", "jawLeft",
                            "mouthSmileLeft", "mouthPressLeft", "mouthPressRight", "eyeBlinkLeft"};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, 9), len(1, 12);
    std::uniform_real_distribution<double> unit(0, 1), angle(-25, 25);
    TraceBuilder t;
    for (int segment = 0; segment < 60; ++segment) {
      if (unit(rng) < 0.05) {
        t.absent(len(rng) * 3);
        continue;
      }
      t.neutral();
      for (int k = 0; k < 2; ++k) t.set(features[pick(rng)], unit(rng));
      t.head(angle(rng), 3 + angle(rng), angle(rng)).look_at(unit(rng) * 1920, unit(rng) * 1080).hold(len(rng));
    }
    Engine engine(profile, testing::scenario_model());
    auto events = run(engine, t);
    const auto tail = engine.finish(t.next_t_ms());
    events.insert(events.end(), tail.begin(), tail.end());
    EXPECT_TRUE(engine.held_keys().empty());
    EXPECT_FALSE(engine.wheel_open());
    std::map<std::string, int> down;
    std::int64_t last_t = 0;
    for (const auto& e : events) {
      ASSERT_GE(e.t_ms, last_t);
      last_t = e.t_ms;
      if (e.kind == EventKind::kKeyDown) ASSERT_EQ(down[e.key]++, 0) << "seed " << seed << " " << e.key;
      if (e.kind == EventKind::kKeyUp) ASSERT_EQ(down[e.key]--, 1) << "seed " << seed << " " << e.key;
    }
    for (const auto& [key, n] : down) EXPECT_EQ(n, 0) << "seed " << seed << " " << key;
  }
}

}  // namespace
}  // namespace gazectl
