#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "glassmsg/session.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace glassmsg;
namespace fx = glassmsg::effect;

namespace {

const std::vector<std::string> kContacts = {"Peter", "Mary", "Bob"};

SessionState visible_state() {
  auto s = make_session(kContacts);
  s.visible = true;
  return s;
}

Message msg(std::string from, std::string body, std::int64_t ts, std::string id = {}) {
  if (id.empty()) id = from + "-" + std::to_string(ts);
  return Message{std::move(id), std::move(from), "self", std::move(body), ts};
}

template <typename E>
std::size_t count(const std::vector<Effect>& effects) {
  std::size_t n = 0;
  for (const auto& e : effects) n += std::holds_alternative<E>(e) ? 1 : 0;
  return n;
}

std::vector<Effect> only_error(std::string code) { return {fx::Error{std::move(code)}}; }

}  // namespace

TEST_CASE("reveal shows the interface without other effects") {
  const auto s = make_session(kContacts);
  const auto r = handle_command(s, Command::of(CommandKind::RevealInterface), 5000);
  CHECK(r.state.visible);
  CHECK(r.effects.empty());
}

TEST_CASE("send emits the draft and clears it") {
  auto s = visible_state();
  s.focused_contact = "Peter";
  s.draft = "ok see you";
  const auto r = handle_command(s, Command::of(CommandKind::Send), 9000);
  REQUIRE(r.effects.size() == 1);
  const auto& sent = std::get<fx::SendMessage>(r.effects[0]).message;
  CHECK(sent.recipient == "Peter");
  CHECK(sent.sender == "self");
  CHECK(sent.body == "ok see you");
  CHECK(sent.ts_ms == 9000);
  CHECK(r.state.draft.empty());
  CHECK(r.state.history.at("Peter").back() == sent);
  CHECK(r.state.contacts.front().name == "Peter");
}

TEST_CASE("errors leave the state unchanged") {
  auto s = visible_state();
  s.focused_contact = "Peter";
  s.clock_ms = 100;

  auto r = handle_command(s, Command::of(CommandKind::Send), 9000);
  CHECK(r.effects == only_error("empty_draft"));
  CHECK(r.state == s);

  r = handle_command(s, Command::of(CommandKind::OpenNotification), 9000);
  CHECK(r.effects == only_error("no_notification"));
  CHECK(r.state == s);

  r = handle_command(s, Command::select_contact("Zed"), 9000);
  CHECK(r.effects == only_error("unknown_contact"));
  CHECK(r.state == s);

  auto hidden = s;
  hidden.visible = false;
  for (int k = 0; k < static_cast<int>(CommandKind::NoCommand); ++k) {
    const auto kind = static_cast<CommandKind>(k);
    if (kind == CommandKind::RevealInterface) continue;
    r = handle_command(hidden, Command::of(kind), 9000);
    CHECK(r.effects == only_error("hidden"));
    CHECK(r.state == hidden);
  }
}

TEST_CASE("reply opens the notification and starts dictation") {
  auto s = visible_state();
  s = handle_incoming(s, msg("Bob", "where are you", 2000), 2000).state;
  REQUIRE(s.notifications.size() == 1);
  const auto r = handle_command(s, Command::of(CommandKind::Reply), 7000);
  CHECK(r.state.focused_contact == "Bob");
  CHECK(r.state.notifications.empty());
  CHECK(r.state.dictating);
  CHECK(r.effects == std::vector<Effect>{fx::StartDictationFeedback{}});
  CHECK(r.state.find_contact("Bob")->unread_count == 0);
}

TEST_CASE("reply without notifications does not start dictation") {
  const auto s = visible_state();
  const auto r = handle_command(s, Command::of(CommandKind::Reply), 7000);
  CHECK(r.effects == only_error("no_notification"));
  CHECK_FALSE(r.state.dictating);
}

TEST_CASE("opening a specific notification") {
  auto s = make_session(kContacts);
  s = handle_incoming(s, msg("Bob", "one", 100), 100).state;
  s = handle_incoming(s, msg("Mary", "two", 200), 200).state;
  s = handle_command(s, Command::of(CommandKind::RevealInterface), 300).state;
  const auto bob_id = s.notifications.back().id;
  const auto r = handle_command(s, Command::open_notification(bob_id), 400);
  CHECK(r.state.focused_contact == "Bob");
  REQUIRE(r.state.notifications.size() == 1);
  CHECK(r.state.notifications[0].sender == "Mary");
  CHECK(handle_command(s, Command::open_notification(999), 400).effects == only_error("no_notification"));
}

TEST_CASE("incoming while hidden notifies") {
  const auto s = make_session(kContacts);
  const auto r = handle_incoming(s, msg("Bob", "hi", 2000), 2000);
  REQUIRE(r.effects.size() == 3);
  const auto& n = std::get<fx::ShowNotification>(r.effects[0]).notification;
  CHECK(n.sender == "Bob");
  CHECK(n.arrived_ms == 2000);
  CHECK(n.preview == "hi");
  CHECK(std::holds_alternative<fx::Beep>(r.effects[1]));
  CHECK(std::get<fx::OpacityBoost>(r.effects[2]) == fx::OpacityBoost{"Bob", 7000});
  CHECK(r.state.find_contact("Bob")->unread_count == 1);
  CHECK(r.state.contacts.front().name == "Bob");
  CHECK(r.state.history.at("Bob").size() == 1);
}

TEST_CASE("incoming in the focused visible chat is not a notification") {
  auto s = visible_state();
  s.focused_contact = "Bob";
  const auto r = handle_incoming(s, msg("Bob", "hi", 2000), 2000);
  CHECK(count<fx::ShowNotification>(r.effects) == 0);
  CHECK(r.effects == std::vector<Effect>{fx::Beep{}, fx::OpacityBoost{"Bob", 7000}});
  CHECK(r.state.find_contact("Bob")->unread_count == 0);
  CHECK(r.state.notifications.empty());
  CHECK(render(r.state).chat_panel.back().body == "hi");
}

TEST_CASE("a fourth notification evicts the oldest") {
  auto s = make_session(kContacts);
  for (int i = 0; i < 4; ++i) s = handle_incoming(s, msg("Bob", "m" + std::to_string(i), 100 * i), 100 * i).state;
  REQUIRE(s.notifications.size() == 3);
  CHECK(s.notifications[0].preview == "m3");
  CHECK(s.notifications[2].preview == "m1");
  CHECK(s.find_contact("Bob")->unread_count == 4);
}

TEST_CASE("unknown senders are added at the top; duplicates are ignored") {
  auto s = make_session(kContacts);
  s = handle_incoming(s, msg("Zoe", "hello", 10, "z1"), 10).state;
  CHECK(s.contacts.front().name == "Zoe");
  CHECK(s.contacts.size() == 4);
  const auto again = handle_incoming(s, msg("Zoe", "hello", 10, "z1"), 20);
  CHECK(again.effects.empty());
  CHECK(again.state.history.at("Zoe").size() == 1);
  CHECK(handle_incoming(s, Message{"x", "self", "self", "loop", 30}, 30).effects == only_error("bad_message"));
}

TEST_CASE("tick ends dictation at the silence gap") {
  auto s = visible_state();
  s.focused_contact = "Peter";
  s.dictating = true;
  s.last_speech_ms = 4000;
  s.clock_ms = 4000;

  auto r = tick(s, 5500);
  CHECK(r.state.dictating);
  CHECK(r.effects.empty());

  r = tick(s, 6000);
  CHECK_FALSE(r.state.dictating);
  CHECK(r.effects == std::vector<Effect>{fx::StopDictationFeedback{}});

  s.dictating = false;
  s.opacity_boost["Bob"] = 5000;
  s.opacity_boost["Mary"] = 9000;
  r = tick(s, 5000);
  CHECK(r.effects.empty());
  CHECK(r.state.opacity_boost == std::map<std::string, std::int64_t>{{"Mary", 9000}});
}

TEST_CASE("session fires timers at their exact deadlines") {
  Session session({}, kContacts, 0);
  session.utterance("show chat", 1000);
  session.utterance("Peter", 1500);
  session.utterance("voice message", 2000);
  session.utterance("see you", 2500);
  session.utterance("at five", 3100);
  session.tick(9000);
  const auto& log = session.log();
  auto it = std::find_if(log.begin(), log.end(),
                         [](const LoggedEffect& e) { return std::holds_alternative<fx::StopDictationFeedback>(e.effect); });
  REQUIRE(it != log.end());
  CHECK(it->t == 5100);
  CHECK(session.state().draft == "see you at five");
}

TEST_CASE("a clock earlier than the last event is rejected") {
  Session session({}, kContacts, 0);
  session.utterance("show chat", 1000);
  const auto before = session.state();
  CHECK(session.tick(500) == only_error("clock_regression"));
  CHECK(session.command(Command::of(CommandKind::HideInterface), 999) == only_error("clock_regression"));
  CHECK(session.incoming(msg("Bob", "x", 10), 10) == only_error("clock_regression"));
  CHECK(session.state() == before);
}

TEST_CASE("hide then reveal restores everything but visibility") {
  auto s = visible_state();
  s = handle_incoming(s, msg("Bob", "hi", 100), 100).state;
  s = handle_command(s, Command::select_contact("Mary"), 200).state;
  s = handle_command(s, Command::of(CommandKind::OpenKeyboard), 300).state;
  s = handle_command(s, Command::append_transcript("typed"), 400).state;
  s = handle_command(s, Command::of(CommandKind::CloseKeyboard), 500).state;

  const auto hidden = handle_command(s, Command::of(CommandKind::HideInterface), 600).state;
  const auto back = handle_command(hidden, Command::of(CommandKind::RevealInterface), 700).state;
  CHECK(back.focused_contact == s.focused_contact);
  CHECK(back.draft == "typed");
  CHECK(back.history == s.history);
  CHECK(back.notifications == s.notifications);
  CHECK(back.visible);

  auto expected = s;
  expected.clock_ms = 700;
  CHECK(back == expected);
}

TEST_CASE("hiding while dictating stops dictation and keeps the draft") {
  Session session({}, kContacts, 0);
  session.utterance("show chat", 10);
  session.utterance("text Mary", 20);
  session.utterance("running late", 30);
  const auto fx_hide = session.utterance("", 40);
  CHECK(fx_hide.empty());
  const auto effects = session.ring(RingEvent::hold(RingButton::Center, 1200), 50);
  CHECK(effects == std::vector<Effect>{fx::StopDictationFeedback{}});
  CHECK_FALSE(session.state().visible);
  CHECK(session.state().draft == "running late");
  CHECK(render(session.state()) == RenderModel{});
}

TEST_CASE("composites equal their expansions on random reachable states") {
  gen::Rng rng(11);
  const auto states = gen::reachable_states(rng, 2000);
  std::size_t reply_ok = 0;
  std::size_t text_ok = 0;
  for (const auto& s : states) {
    const std::int64_t now = s.clock_ms + gen::uniform(rng, 0, 50);
    const auto reply = handle_command(s, Command::of(CommandKind::Reply), now);
    const auto reply_seq = oracle::sequential(
        s, {Command::of(CommandKind::OpenNotification), Command::of(CommandKind::StartDictation)}, now);
    CHECK(reply.state == reply_seq.state);
    CHECK(reply.effects == reply_seq.effects);
    reply_ok += reply.effects.empty() || !std::holds_alternative<fx::Error>(reply.effects[0]) ? 1 : 0;

    const auto name = gen::pick(rng, gen::contact_pool());
    const auto text = handle_command(s, Command::text_to(name), now);
    const auto text_seq =
        oracle::sequential(s, {Command::select_contact(name), Command::of(CommandKind::StartDictation)}, now);
    CHECK(text.state == text_seq.state);
    CHECK(text.effects == text_seq.effects);
    text_ok += text.effects.empty() || !std::holds_alternative<fx::Error>(text.effects[0]) ? 1 : 0;
  }
  // Both the success and the error paths must be exercised.
  CHECK(reply_ok > 50);
  CHECK(reply_ok < states.size());
  CHECK(text_ok > 50);
  CHECK(text_ok < states.size());
}

TEST_CASE("random walks keep the state invariants") {
  gen::Rng rng(23);
  for (int walk = 0; walk < 100; ++walk) {
    Session session({}, gen::initial_contacts(rng), 0);
    std::int64_t now = 0;
    std::int64_t counter = 0;
    for (int step = 0; step < 300; ++step) {
      const auto before = session.state();
      const auto log_before = session.log().size();
      gen::random_step(rng, session, now, counter);
      const auto& s = session.state();

      CHECK_FALSE((s.dictating && s.keyboard_open));
      if (s.dictating) {
        CHECK(s.visible);
        CHECK(s.focused_contact.has_value());
      }
      CHECK(s.scroll_offset < std::max<std::size_t>(s.contacts.size(), 1));
      CHECK(s.notifications.size() <= 3);

      const auto r = session.render();
      CHECK(r.chat_panel.size() <= 3);
      CHECK(r.contact_panel.size() <= 3);
      CHECK(r.notification_panel.size() <= 3);

      // Unread counts rise only with notifications and fall only to zero
      // when that chat is the one focused.
      std::map<std::string, std::int64_t> notified;
      for (std::size_t i = log_before; i < session.log().size(); ++i) {
        if (const auto* n = std::get_if<fx::ShowNotification>(&session.log()[i].effect)) {
          ++notified[n->notification.sender];
        }
      }
      for (const auto& c : s.contacts) {
        const auto* old = before.find_contact(c.name);
        const std::int64_t prev = old ? old->unread_count : 0;
        if (c.unread_count != prev + notified[c.name]) {
          CHECK(c.unread_count == 0);
          CHECK(s.focused_contact == c.name);
        }
      }
    }
  }
}

TEST_CASE("render windows") {
  auto s = visible_state();
  s.focused_contact = "Peter";
  for (int i = 1; i <= 5; ++i) s.history["Peter"].push_back(Message{std::to_string(i), "Peter", "self", "b", i});
  auto r = render(s);
  REQUIRE(r.chat_panel.size() == 3);
  CHECK(r.chat_panel[0].id == "3");
  CHECK(r.chat_panel[2].id == "5");

  s.history["Peter"].resize(2);
  CHECK(render(s).chat_panel.size() == 2);

  for (const auto* extra : {"Ann", "Zed", "Kai"}) s.contacts.push_back(Contact{extra, 0, 0});
  s.scroll_offset = 4;
  r = render(s);
  REQUIRE(r.contact_panel.size() == 2);
  CHECK(r.contact_panel[0].name == "Zed");
  CHECK(r.chat_opacity == doctest::Approx(0.70));

  s.opacity_boost["Peter"] = 100;
  CHECK(render(s).chat_opacity == doctest::Approx(0.95));
  CHECK(RenderModel::kCanvasWidth == 2048);
  CHECK(RenderModel::kCanvasHeight == 1080);
}

TEST_CASE("scrolling clamps and opens the chat under the cursor") {
  auto s = visible_state();
  s = handle_command(s, Command::of(CommandKind::ScrollUp), 1).state;
  CHECK(s.scroll_offset == 0);
  for (int i = 0; i < 5; ++i) s = handle_command(s, Command::of(CommandKind::ScrollDown), 2).state;
  CHECK(s.scroll_offset == 2);
  CHECK(s.focused_contact == "Bob");
  s = handle_command(s, Command::of(CommandKind::ScrollToTop), 3).state;
  CHECK(s.scroll_offset == 0);
  CHECK(s.focused_contact == "Peter");
}

TEST_CASE("input focus cycles and activates") {
  auto s = visible_state();
  s.focused_contact = "Mary";
  s = handle_command(s, Command::of(CommandKind::FocusNext), 1).state;
  CHECK(s.input_focus == InputFocus::Keyboard);
  s = handle_command(s, Command::of(CommandKind::ActivateFocused), 2).state;
  CHECK(s.keyboard_open);
  s = handle_command(s, Command::append_transcript("yo"), 3).state;
  s = handle_command(s, Command::of(CommandKind::FocusNext), 4).state;
  CHECK(s.input_focus == InputFocus::Send);
  const auto r = handle_command(s, Command::of(CommandKind::ActivateFocused), 5);
  CHECK(count<fx::SendMessage>(r.effects) == 1);
  s = handle_command(r.state, Command::of(CommandKind::FocusNext), 6).state;
  CHECK(s.input_focus == InputFocus::Voice);
}

TEST_CASE("starting dictation closes the keyboard") {
  auto s = visible_state();
  s.focused_contact = "Mary";
  s = handle_command(s, Command::of(CommandKind::OpenKeyboard), 1).state;
  const auto r = handle_command(s, Command::of(CommandKind::StartDictation), 2);
  CHECK(r.state.dictating);
  CHECK_FALSE(r.state.keyboard_open);
  CHECK(r.state.last_speech_ms == 2);
  CHECK(r.effects == std::vector<Effect>{fx::StartDictationFeedback{}});
  CHECK(handle_command(visible_state(), Command::of(CommandKind::StartDictation), 2).effects ==
        only_error("no_contact"));
}

TEST_CASE("identical inputs give identical sessions") {
  auto run = [] {
    gen::Rng rng(99);
    Session session({}, kContacts, 0);
    std::int64_t now = 0;
    std::int64_t counter = 0;
    for (int i = 0; i < 2000; ++i) gen::random_step(rng, session, now, counter);
    return std::make_pair(session.state(), session.log());
  };
  CHECK(run() == run());
}
