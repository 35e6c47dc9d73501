#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "doctest.h"
#include "pour/dialogue.hpp"

using namespace pour;

namespace {

Observation obs(bool present, bool transparent, double liquid = 0.0,
                double foam = 0.0) {
  Observation o;
  o.c_e = present;
  o.c_t = transparent;
  o.liquid_pct = liquid;
  o.foam_pct = foam;
  return o;
}

struct Script {
  DialogueSession session;
  DialogueContext ctx;

  Action see(const Observation& o) {
    return dialogue_step(session, ObservationEvent{o}, ctx);
  }
  Action hear(const std::string& text) {
    return dialogue_step(session, UtteranceEvent{text}, ctx);
  }
  Action finished(double pct, const std::string& reason) {
    return dialogue_step(session, PourCompleteEvent{pct, reason}, ctx);
  }
};

}  // namespace

TEST_CASE("one full session, from empty table to goodbye") {
  Script s;

  auto a = s.see(obs(false, false));
  CHECK(a.kind == ActionKind::Prompt);
  CHECK(a.text == "Please place a cup on the table.");

  // the same blocking condition stays quiet on repeat
  CHECK(s.see(obs(false, false)).kind == ActionKind::None);
  CHECK(s.see(obs(false, false)).kind == ActionKind::None);

  a = s.see(obs(true, false));
  CHECK(a.kind == ActionKind::Prompt);
  CHECK(a.text == "I can't see through that cup. Please use a transparent "
                  "one.");
  CHECK(s.session.phase == DialoguePhase::AwaitingTransparent);
  CHECK(s.see(obs(true, false)).kind == ActionKind::None);

  a = s.see(obs(true, true));
  CHECK(a.kind == ActionKind::Prompt);
  CHECK(a.text == "What would you like me to pour?");
  CHECK(s.session.phase == DialoguePhase::AwaitingTarget);
  CHECK(s.see(obs(true, true)).kind == ActionKind::None);

  a = s.hear("pour coke to 60 percent");
  CHECK(a.kind == ActionKind::StartPour);
  CHECK(a.text == "Pouring coke to 60.0 percent.");
  CHECK(a.l_target_pct == 60.0);
  CHECK(a.beverage == "coke");
  CHECK(s.session.phase == DialoguePhase::Pouring);

  a = s.finished(60.3, "TargetReached");
  CHECK(a.kind == ActionKind::Exit);
  CHECK(a.text == "Done. The cup is at 60.3 percent. Enjoy! Goodbye.");
  CHECK(s.session.phase == DialoguePhase::Done);

  a = s.hear("pour more");
  CHECK(a.kind == ActionKind::Prompt);
  CHECK(a.text == "This session is finished.");

  // transcript kept both sides in order
  const auto& t = s.session.transcript;
  REQUIRE(t.size() >= 4);
  CHECK(t.front() == "robot: Please place a cup on the table.");
  bool saw_user = false;
  for (const auto& line : t) {
    if (line == "you: pour coke to 60 percent") saw_user = true;
  }
  CHECK(saw_user);
}

TEST_CASE("requests made too early run once the cup is ready") {
  SUBCASE("no cup yet") {
    Script s;
    CHECK(s.see(obs(false, false)).kind == ActionKind::Prompt);
    auto a = s.hear("pour water to 50 percent");
    CHECK(a.kind == ActionKind::Prompt);
    CHECK(a.text == "Will do, as soon as a cup is on the table.");
    a = s.see(obs(true, true));
    CHECK(a.kind == ActionKind::StartPour);
    CHECK(a.l_target_pct == 50.0);
    CHECK(a.beverage == "water");
  }
  SUBCASE("opaque cup") {
    Script s;
    CHECK(s.see(obs(true, false)).kind == ActionKind::Prompt);
    auto a = s.hear("fill the cup halfway");
    CHECK(a.kind == ActionKind::Prompt);
    CHECK(a.text == "Will do, as soon as I can see through the cup.");
    a = s.see(obs(true, true));
    CHECK(a.kind == ActionKind::StartPour);
    CHECK(a.l_target_pct == 50.0);
    CHECK_FALSE(a.beverage.has_value());
  }
  SUBCASE("an abort while waiting clears the queued request") {
    Script s;
    CHECK(s.see(obs(false, false)).kind == ActionKind::Prompt);
    CHECK(s.hear("pour water to 50 percent").kind == ActionKind::Prompt);
    auto a = s.hear("cancel that");
    CHECK(a.kind == ActionKind::Prompt);
    CHECK(a.text == "Nothing is pouring.");
    a = s.see(obs(true, true));
    CHECK(a.kind == ActionKind::Prompt);
    CHECK(a.text == "What would you like me to pour?");
  }
}

TEST_CASE("aborting a running pour") {
  Script s;
  s.see(obs(true, true));
  CHECK(s.hear("pour sprite to 70 percent").kind == ActionKind::StartPour);
  auto a = s.hear("ok stop");
  CHECK(a.kind == ActionKind::AbortPour);
  CHECK(a.text == "Stopping the pour.");
  a = s.finished(23.1, "Aborted");
  CHECK(a.kind == ActionKind::Exit);
  CHECK(a.text == "Stopped at 23.1 percent. Goodbye.");
}

TEST_CASE("completion messages name the stop reason") {
  auto run = [](const std::string& reason) {
    Script s;
    s.see(obs(true, true));
    s.hear("pour water to 90 percent");
    return s.finished(88.0, reason).text;
  };
  CHECK(run("TargetFull") == "I stopped at 88.0 percent; the cup is full. "
                             "Goodbye.");
  CHECK(run("SourceEmpty") == "I ran out; the cup is at 88.0 percent. "
                              "Goodbye.");
  CHECK(run("TimedOut") == "The pour ended (TimedOut) at 88.0 percent. "
                           "Goodbye.");
}

TEST_CASE("status answers from the latest observation") {
  Script s;
  auto a = s.hear("status");
  CHECK(a.text == "I can't see into a cup right now.");
  s.see(obs(true, true, 45.5, 0.0));
  a = s.hear("how full is it");
  CHECK(a.text == "The cup is at 45.5 percent.");
  s.see(obs(true, true, 45.5, 2.0));
  a = s.hear("status");
  CHECK(a.text == "The cup is at 45.5 percent with 2.0 percent of foam on "
                  "top.");
}

TEST_CASE("over-capacity requests are refused without starting") {
  Script s;  // default cup holds ~381 ml
  s.see(obs(true, true));
  auto a = s.hear("pour 500 ml of water");
  CHECK(a.kind == ActionKind::Prompt);
  CHECK(a.text == "I can't pour that much; the cup holds only 381 ml.");
  CHECK(s.session.phase == DialoguePhase::AwaitingTarget);
  // a pourable volume still works afterwards
  CHECK(s.hear("pour 100 ml of water").kind == ActionKind::StartPour);
}

TEST_CASE("cup removal mid-conversation restarts the gating") {
  Script s;
  s.see(obs(true, true));
  auto a = s.see(obs(false, false));
  CHECK(a.kind == ActionKind::Prompt);
  CHECK(a.text == "The cup is gone. Please place a cup on the table.");
  CHECK(s.session.phase == DialoguePhase::AwaitingContainer);
  CHECK(s.see(obs(false, false)).kind == ActionKind::None);
  a = s.see(obs(true, true));
  CHECK(a.kind == ActionKind::Prompt);
  CHECK(a.text == "What would you like me to pour?");
}

TEST_CASE("only one pour at a time") {
  Script s;
  s.see(obs(true, true));
  s.hear("pour coke to 60 percent");
  auto a = s.hear("pour water to 30 percent");
  CHECK(a.kind == ActionKind::Prompt);
  CHECK(a.text == "A pour is already running. Say \"stop\" to cancel it "
                  "first.");
}

TEST_CASE("parse problems surface as clarification prompts") {
  Script s;
  s.see(obs(true, true));
  auto a = s.hear("pour some");
  CHECK(a.kind == ActionKind::Prompt);
  CHECK(a.text.find("How much") != std::string::npos);
  CHECK(s.session.phase == DialoguePhase::AwaitingTarget);
  a = s.hear("help");
  CHECK(a.kind == ActionKind::Prompt);
  CHECK(a.text.find("pour water, coke, sprite or mtn dew") !=
        std::string::npos);
}

TEST_CASE("a session produces exactly one exit") {
  Script s;
  int exits = 0;
  auto count = [&](const Action& a) {
    if (a.kind == ActionKind::Exit) ++exits;
  };
  count(s.see(obs(false, false)));
  count(s.hear("pour water to 40 percent"));
  count(s.see(obs(true, true)));
  count(s.finished(40.2, "TargetReached"));
  count(s.hear("status"));
  CHECK(exits == 1);
  CHECK(s.session.phase == DialoguePhase::Done);
}
