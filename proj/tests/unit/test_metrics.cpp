#include <doctest.h>

#include <string>
#include <vector>

#include "glassmsg/metrics.hpp"
#include "glassmsg/utf8.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace glassmsg;
namespace fx = glassmsg::effect;

namespace {

LoggedEffect note(std::int64_t t, std::string sender, std::int64_t id = 1) {
  return {t, fx::ShowNotification{Notification{id, std::move(sender), t, "p"}}};
}

LoggedEffect send(std::int64_t t, std::string to, std::string body = "ok") {
  return {t, fx::SendMessage{Message{"local", "self", std::move(to), std::move(body), t}}};
}

LoggedEffect start(std::int64_t t) { return {t, fx::StartDictationFeedback{}}; }

}  // namespace

TEST_CASE("response time from notification to reply") {
  const auto r = response_time({note(2000, "Bob"), send(10000, "Bob")});
  CHECK(r.durations_ms == std::vector<std::int64_t>{8000});
  CHECK(r.unanswered == 0);

  const auto none = response_time({note(2000, "Bob")});
  CHECK(none.durations_ms.empty());
  CHECK(none.unanswered == 1);
}

TEST_CASE("one send answers only the earliest pending notification") {
  const auto r = response_time({note(2000, "Bob"), note(3000, "Bob"), send(10000, "Bob")});
  CHECK(r.durations_ms == std::vector<std::int64_t>{8000});
  CHECK(r.unanswered == 1);
}

TEST_CASE("sends before a notification do not answer it") {
  const auto r = response_time({send(1000, "Bob"), note(2000, "Bob"), send(2500, "Mary")});
  CHECK(r.durations_ms.empty());
  CHECK(r.unanswered == 1);
}

TEST_CASE("response matching agrees with the scan oracle and is stable") {
  gen::Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    EffectLog log;
    std::int64_t t = 0;
    for (int i = 0, n = static_cast<int>(gen::uniform(rng, 0, 30)); i < n; ++i) {
      t += gen::uniform(rng, 0, 1000);
      const auto who = gen::pick(rng, std::vector<std::string>{"Bob", "Mary", "Peter"});
      log.push_back(gen::chance(rng, 0.5) ? note(t, who) : send(t, who));
    }
    const auto got = response_time(log);
    const auto want = oracle::match_responses(log);
    CHECK(got.durations_ms == want.durations);
    CHECK(got.unanswered == want.unanswered);

    // An unrelated sender's notification leaves existing matches alone.
    auto noisy = log;
    const auto at = static_cast<std::size_t>(gen::uniform(rng, 0, static_cast<std::int64_t>(log.size())));
    const std::int64_t when = at < log.size() ? log[at].t : t;
    noisy.insert(noisy.begin() + static_cast<std::ptrdiff_t>(at), note(when, "Zed"));
    const auto with_noise = response_time(noisy);
    CHECK(with_noise.durations_ms == got.durations_ms);
    CHECK(with_noise.unanswered == got.unanswered + 1);
  }
}

TEST_CASE("entry speed examples") {
  const auto one = entry_speed({start(0), send(12000, "Bob", "hello world")});
  REQUIRE(one.has_value());
  CHECK(*one == Rational(11));

  const auto two = entry_speed({start(0), send(10000, "Bob", std::string(10, 'a')), start(20000),
                                send(40000, "Bob", std::string(15, 'b'))});
  REQUIRE(two.has_value());
  CHECK(*two == Rational(10));

  CHECK_FALSE(entry_speed({}).has_value());
  CHECK_FALSE(entry_speed({start(5), send(5, "Bob")}).has_value());
}

TEST_CASE("keyboard composition starts at the first typed text") {
  const EffectLog log = {
      {0, fx::DraftUpdated{InputFocus::Voice, "x"}},
      {1000, fx::DraftUpdated{InputFocus::Keyboard, "a"}},
      {2000, fx::DraftUpdated{InputFocus::Keyboard, "ab"}},
      send(13000, "Bob", "hello world"),
  };
  CHECK(entry_speed(log) == Rational(11));
}

TEST_CASE("entry speed matches direct arithmetic on synthetic logs") {
  gen::Rng rng(29);
  for (int i = 0; i < 100; ++i) {
    const auto s = gen::synthetic_log(rng, static_cast<std::size_t>(gen::uniform(rng, 1, 6)));
    const auto got = entry_speed(s.log);
    REQUIRE(got.has_value());
    // (chars / 5) words over (ms / 60000) minutes
    const Rational want = Rational(s.total_chars, 5) / Rational(s.total_ms, 60000);
    CHECK(*got == want);
  }
}

TEST_CASE("error rate examples") {
  CHECK(error_rate("hello world", "hello world") == Rational(0));
  CHECK(error_rate("helo wrld", "hello world") == Rational(2, 11));
  CHECK(error_rate("", "abc") == Rational(1));
  CHECK(error_rate("caf\xC3\xA9", "cafe") == Rational(1, 4));
  CHECK_THROWS_AS(error_rate("x", ""), std::invalid_argument);
}

TEST_CASE("edit distance agrees with the full-table oracle") {
  gen::Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const auto a = gen::code_points(rng, 30);
    const auto b = gen::chance(rng, 0.5) ? gen::code_points(rng, 30) : a.substr(0, a.size() / 2) + U"x";
    CHECK(edit_distance(a, b) == oracle::levenshtein(a, b));
  }
}

TEST_CASE("error rate is symmetric, bounded and obeys the triangle inequality") {
  gen::Rng rng(37);
  for (int i = 0; i < 300; ++i) {
    const auto a = gen::valid_utf8(rng, 20) + "a";
    const auto b = gen::valid_utf8(rng, 20) + "b";
    const auto c = gen::valid_utf8(rng, 20) + "c";
    CHECK(error_rate(a, b) == error_rate(b, a));
    CHECK(error_rate(a, b) >= Rational(0));
    CHECK(error_rate(a, b) <= Rational(1));
    const auto ua = utf8::decode(a);
    const auto ub = utf8::decode(b);
    const auto uc = utf8::decode(c);
    CHECK(edit_distance(ua, uc) <= edit_distance(ua, ub) + edit_distance(ub, uc));
  }
}

TEST_CASE("report aggregates error rate over referenced sends") {
  TraceHeader h;
  h.session_id = "s";
  h.references = {"hello world", "abc"};
  const EffectLog log = {start(0), send(12000, "Bob", "helo wrld"), start(13000), send(14000, "Bob", "abc")};
  const auto r = compute_report(log, h);
  CHECK(r.messages_sent == 2);
  REQUIRE(r.error_rate.has_value());
  CHECK(*r.error_rate == Rational(2, 14));
  const auto j = to_json(r);
  CHECK(j["error_rate"]["num"] == 1);
  CHECK(j["error_rate"]["den"] == 7);
  CHECK(j["session_id"] == "s");
  CHECK(format_report_table(r).find("messages sent") != std::string::npos);
}

TEST_CASE("an empty report") {
  const auto r = compute_report({}, TraceHeader{});
  CHECK(r.messages_sent == 0);
  CHECK(r.response_times_ms.empty());
  CHECK_FALSE(r.entry_speed_wpm.has_value());
  CHECK_FALSE(r.error_rate.has_value());
  CHECK(to_json(r)["entry_speed_wpm"].is_null());
}
