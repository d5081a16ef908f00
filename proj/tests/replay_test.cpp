#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <sstream>
#include <thread>

#include "files.hpp"
#include "gazectl/replay.hpp"
#include "scenarios.hpp"

namespace gazectl {
namespace {

using testing::kScenarioDir;

Profile wukong() {
  auto loaded = load_profile(testing::kWukongProfile);
  if (!loaded) throw std::runtime_error(loaded.error().message);
  return loaded->profile;
}

CalibrationModel committed_model() {
  auto model = load_model(kScenarioDir + "/model.json");
  if (!model) throw std::runtime_error(model.error());
  return *model;
}

std::string replay_text(const std::string& trace) {
  Engine engine(wukong(), committed_model());
  std::istringstream in(trace);
  return run_replay(in, engine).to_text();
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

TEST(Replay, EmptyTraceGivesEmptyLog) { EXPECT_EQ(replay_text(""), ""); }

TEST(Replay, CorruptLineBecomesOneDiagnostic) {
  testing::TraceBuilder t;
  t.set("browInnerUp", 0.9).hold(3).neutral().hold(3);
  std::string text = t.text();
  const auto cut = text.find('\n', text.find('\n') + 1) + 1;
  text.insert(cut, "{\"t_ms\": 40, \"face\": tru\n\n");
  Engine engine(wukong());
  std::istringstream in(text);
  StreamStats stats;
  const auto log = run_replay(in, engine, {}, &stats);
  EXPECT_EQ(log.diagnostic_count(), 1u);
  EXPECT_EQ(log.event_count(), 2u);
  EXPECT_EQ(stats.frames, 6u);
  EXPECT_EQ(stats.rejected, 1u);
  EXPECT_NE(log.to_text().find(" diag rejected frame: "), std::string::npos);
}

TEST(Replay, BackwardsTimestampIsRejected) {
  testing::TraceBuilder a(1000), b(500);
  a.hold(2);
  b.hold(1);
  Engine engine(wukong());
  std::istringstream in(a.text() + b.text());
  StreamStats stats;
  const auto log = run_replay(in, engine, {}, &stats);
  EXPECT_EQ(stats.frames, 2u);
  EXPECT_EQ(log.diagnostic_count(), 1u);
  EXPECT_EQ(engine.frame_count(), 2);
}

TEST(Replay, RegeneratedTracesMatchCommittedFiles) {
  for (const auto& s : testing::all_scenarios()) {
    EXPECT_EQ(s.trace.text(), testing::read_text(kScenarioDir + "/" + s.name + ".trace")) << s.name;
  }
  EXPECT_EQ(serialize_model(testing::scenario_model()), serialize_model(committed_model()));
}

TEST(Replay, SessionHasNineHundredFrames) {
  EXPECT_EQ(testing::session_900().frames().size(), 900u);
  EXPECT_EQ(count_lines(testing::read_text(kScenarioDir + "/session_900.trace")), 900u);
}

class Golden : public ::testing::TestWithParam<std::string> {};

TEST_P(Golden, LogMatchesAndRepeats) {
  const auto trace = testing::read_text(kScenarioDir + "/" + GetParam() + ".trace");
  const auto golden = testing::read_text(kScenarioDir + "/" + GetParam() + ".log");
  ASSERT_FALSE(trace.empty());
  const auto first = replay_text(trace);
  EXPECT_EQ(first, golden);
  EXPECT_EQ(replay_text(trace), first);
}

INSTANTIATE_TEST_SUITE_P(Scenarios, Golden,
                         ::testing::Values("perspective_change", "cursor_select_click", "direct_triggers",
                                           "wheel_skill_selection", "eight_for_two", "session_900"));

TEST(Replay, EightForTwoKeySet) {
  const auto log = testing::read_text(kScenarioDir + "/eight_for_two.log");
  std::set<std::string> keys;
  std::istringstream in(log);
  for (std::string line; std::getline(in, line);) {
    const auto e = parse_event(line);
    ASSERT_TRUE(e) << line;
    if (e->kind == EventKind::kKeyPress) keys.insert(e->key);
  }
  EXPECT_EQ(keys, (std::set<std::string>{"1", "2", "3", "4", "q", "r", "f", "t"}));
}

TEST(Replay, RealtimePacingFollowsTimestamps) {
  testing::TraceBuilder t;
  t.hold(10);  // 0 .. 300 ms
  Engine engine(wukong());
  std::istringstream in(t.text());
  const auto start = std::chrono::steady_clock::now();
  run_replay(in, engine, {ReplaySpeed::kRealtime, {}});
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_GE(elapsed, std::chrono::milliseconds(290));
  EXPECT_LT(elapsed, std::chrono::milliseconds(2000));
}

TEST(Live, StdinMatchesReplay) {
  const auto trace = testing::read_text(kScenarioDir + "/session_900.trace");
  Engine engine(wukong(), committed_model());
  std::istringstream in(trace);
  StreamLineSource source(in);
  LiveOptions options;
  options.queue_capacity = 1024;
  std::ostringstream recorded;
  options.record_to = &recorded;
  const auto log = run_live(source, engine, options);
  EXPECT_EQ(log.to_text(), testing::read_text(kScenarioDir + "/session_900.log"));
  EXPECT_EQ(count_lines(recorded.str()), 900u);
  EXPECT_EQ(replay_text(recorded.str()), log.to_text());
}

// A sink that stalls the engine so the reader overruns a tiny queue.
class SlowSink : public EventSink {
 public:
  void send(const InputEvent&) override { std::this_thread::sleep_for(std::chrono::milliseconds(2)); }
};

TEST(Live, OverrunDropsOldestWithDiagnostic) {
  const auto trace = testing::read_text(kScenarioDir + "/perspective_change.trace");
  Engine engine(wukong(), committed_model());
  std::istringstream in(trace);
  StreamLineSource source(in);
  SlowSink sink;
  LiveOptions options;
  options.queue_capacity = 1;
  options.stream.sink = &sink;
  const auto log = run_live(source, engine, options);
  EXPECT_NE(log.to_text().find("engine behind source"), std::string::npos);
  EXPECT_LT(engine.frame_count(), 200);
  EXPECT_TRUE(engine.held_keys().empty());
}

int connect_to(int port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  for (int attempt = 0; attempt < 100; ++attempt) {
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0) return fd;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ::close(fd);
  return -1;
}

void send_all(int fd, const std::string& text) {
  std::size_t sent = 0;
  while (sent < text.size()) {
    const auto n = ::send(fd, text.data() + sent, text.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) return;
    sent += static_cast<std::size_t>(n);
  }
}

TEST(Live, TcpSourceMatchesReplay) {
  auto source = TcpLineSource::listen("127.0.0.1", 0);
  ASSERT_TRUE(source) << source.error();
  const int port = (*source)->port();
  ASSERT_GT(port, 0);
  std::string trace = testing::read_text(kScenarioDir + "/direct_triggers.trace");
  std::string crlf;
  for (char c : trace) crlf += (c == '\n') ? std::string("\r\n") : std::string(1, c);
  std::thread client([&] {
    const int fd = connect_to(port);
    if (fd < 0) return;
    // Uneven chunks exercise line reassembly.
    for (std::size_t i = 0; i < crlf.size(); i += 777) send_all(fd, crlf.substr(i, 777));
    ::close(fd);
  });
  Engine engine(wukong(), committed_model());
  LiveOptions options;
  options.queue_capacity = 1024;
  const auto log = run_live(**source, engine, options);
  client.join();
  EXPECT_EQ(log.to_text(), testing::read_text(kScenarioDir + "/direct_triggers.log"));
}

TEST(Record, KeepsOnlyDecodableLines) {
  const auto trace = testing::read_text(kScenarioDir + "/session_900.trace");
  std::istringstream in("garbage\n" + trace + "{\"t_ms\": 1}\n");
  StreamLineSource source(in);
  std::ostringstream out;
  EXPECT_EQ(record(source, out), 900u);
  EXPECT_EQ(out.str(), trace);
}

TEST(Sources, EndpointParsing) {
  const auto ep = parse_tcp_endpoint("tcp:127.0.0.1:7001");
  ASSERT_TRUE(ep);
  EXPECT_EQ(ep->host, "127.0.0.1");
  EXPECT_EQ(ep->port, 7001);
  EXPECT_FALSE(parse_tcp_endpoint("tcp:host"));
  EXPECT_FALSE(parse_tcp_endpoint("udp:h:1"));
  EXPECT_FALSE(parse_tcp_endpoint("tcp:h:99999"));
  std::istringstream in;
  EXPECT_TRUE(open_source("stdin", in));
  EXPECT_FALSE(open_source("file.txt", in));
}

TEST(Sources, BoundedQueueDropsOldest) {
  BoundedQueue<int> q(2);
  EXPECT_FALSE(q.push(1));
  EXPECT_FALSE(q.push(2));
  EXPECT_TRUE(q.push(3));
  EXPECT_EQ(q.take_dropped(), 1u);
  EXPECT_EQ(q.take_dropped(), 0u);
  q.close();
  EXPECT_EQ(q.pop(), 2);
  EXPECT_EQ(q.pop(), 3);
  EXPECT_EQ(q.pop(), std::nullopt);
}

}  // namespace
}  // namespace gazectl
