#include "pour/dialogue.hpp"

#include <cstdio>
#include <stdexcept>

namespace pour {
namespace {

std::string fmt_pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

Action say(DialogueSession& session, ActionKind kind, const std::string& text) {
  if (!text.empty()) session.transcript.push_back("robot: " + text);
  Action a;
  a.kind = kind;
  a.text = text;
  return a;
}

Action prompt(DialogueSession& session, const std::string& text) {
  return say(session, ActionKind::Prompt, text);
}

std::string help_text(const DialogueContext& ctx) {
  std::string bevs;
  for (size_t i = 0; i < ctx.vocab.beverages.size(); ++i) {
    if (i > 0) bevs += i + 1 == ctx.vocab.beverages.size() ? " or " : ", ";
    bevs += ctx.vocab.beverages[i];
  }
  return "I pour " + bevs +
         ". Ask for a level (\"pour coke to 60 percent\"), a volume (\"120 "
         "ml of water\"), or a fraction (\"half a cup\"). Say \"status\" for "
         "the current level or \"stop\" to cancel.";
}

Action begin_pour(DialogueSession& session, const Intent& intent,
                  const DialogueContext& ctx) {
  double l_target;
  try {
    l_target = resolve_target(intent, ctx.target, ctx.full_threshold_pct);
  } catch (const CapacityExceeded& e) {
    return prompt(session, std::string("I can't pour that much; ") + e.what() +
                               ".");
  } catch (const std::domain_error&) {
    return prompt(session, "I need a level above zero to pour to.");
  }
  session.phase = DialoguePhase::Pouring;
  std::string what = intent.beverage ? *intent.beverage : "";
  std::string text = "Pouring" + (what.empty() ? "" : " " + what) + " to " +
                     fmt_pct(l_target) + " percent.";
  Action a = say(session, ActionKind::StartPour, text);
  a.l_target_pct = l_target;
  a.beverage = intent.beverage;
  return a;
}

Action became_ready(DialogueSession& session, const DialogueContext& ctx) {
  session.phase = DialoguePhase::AwaitingTarget;
  session.prompted_container = false;
  session.prompted_transparent = false;
  if (session.pending_intent) {
    Intent intent = *session.pending_intent;
    session.pending_intent.reset();
    return begin_pour(session, intent, ctx);
  }
  return prompt(session, "What would you like me to pour?");
}

Action on_observation(DialogueSession& session, const Observation& obs,
                      const DialogueContext& ctx) {
  session.last_obs = obs;
  switch (session.phase) {
    case DialoguePhase::AwaitingContainer:
      if (!obs.c_e) {
        if (session.prompted_container) return {};
        session.prompted_container = true;
        return prompt(session, "Please place a cup on the table.");
      }
      if (!obs.c_t) {
        session.phase = DialoguePhase::AwaitingTransparent;
        session.prompted_transparent = true;
        return prompt(session,
                      "I can't see through that cup. Please use a "
                      "transparent one.");
      }
      return became_ready(session, ctx);
    case DialoguePhase::AwaitingTransparent:
      if (!obs.c_e) {
        session.phase = DialoguePhase::AwaitingContainer;
        session.prompted_container = true;
        return prompt(session, "The cup is gone. Please place a cup on the "
                               "table.");
      }
      if (!obs.c_t) {
        if (session.prompted_transparent) return {};
        session.prompted_transparent = true;
        return prompt(session,
                      "I can't see through that cup. Please use a "
                      "transparent one.");
      }
      return became_ready(session, ctx);
    case DialoguePhase::AwaitingTarget:
      if (!obs.c_e) {
        session.phase = DialoguePhase::AwaitingContainer;
        session.prompted_container = true;
        return prompt(session, "The cup is gone. Please place a cup on the "
                               "table.");
      }
      if (!obs.c_t) {
        session.phase = DialoguePhase::AwaitingTransparent;
        session.prompted_transparent = true;
        return prompt(session,
                      "I can't see through that cup. Please use a "
                      "transparent one.");
      }
      return {};
    case DialoguePhase::Pouring:
    case DialoguePhase::Done:
      return {};
  }
  return {};
}

Action on_utterance(DialogueSession& session, const std::string& text,
                    const DialogueContext& ctx) {
  session.transcript.push_back("you: " + text);
  if (session.phase == DialoguePhase::Done) {
    return prompt(session, "This session is finished.");
  }
  ParseResult parsed = parse(text, ctx.vocab);
  if (const auto* err = std::get_if<ParseError>(&parsed)) {
    return prompt(session, err->clarification);
  }
  const Intent& intent = std::get<Intent>(parsed);
  switch (intent.kind) {
    case IntentKind::Abort:
      if (session.phase == DialoguePhase::Pouring) {
        return say(session, ActionKind::AbortPour, "Stopping the pour.");
      }
      session.pending_intent.reset();
      return prompt(session, "Nothing is pouring.");
    case IntentKind::Help:
      return prompt(session, help_text(ctx));
    case IntentKind::QueryStatus: {
      const auto& obs = session.last_obs;
      if (!obs || !obs->c_e || !obs->c_t) {
        return prompt(session, "I can't see into a cup right now.");
      }
      std::string msg = "The cup is at " + fmt_pct(obs->liquid_pct) +
                        " percent";
      if (obs->foam_pct > 0.0) {
        msg += " with " + fmt_pct(obs->foam_pct) + " percent of foam on top";
      }
      return prompt(session, msg + ".");
    }
    case IntentKind::PourToPercent:
    case IntentKind::PourVolume:
    case IntentKind::PourFraction:
      if (session.phase == DialoguePhase::Pouring) {
        return prompt(session,
                      "A pour is already running. Say \"stop\" to cancel it "
                      "first.");
      }
      if (session.phase == DialoguePhase::AwaitingContainer) {
        session.pending_intent = intent;
        return prompt(session,
                      "Will do, as soon as a cup is on the table.");
      }
      if (session.phase == DialoguePhase::AwaitingTransparent) {
        session.pending_intent = intent;
        return prompt(session,
                      "Will do, as soon as I can see through the cup.");
      }
      return begin_pour(session, intent, ctx);
  }
  return {};
}

Action on_pour_complete(DialogueSession& session,
                        const PourCompleteEvent& done) {
  session.phase = DialoguePhase::Done;
  std::string msg;
  if (done.reason == "TargetReached") {
    msg = "Done. The cup is at " + fmt_pct(done.final_pct) +
          " percent. Enjoy!";
  } else if (done.reason == "TargetFull") {
    msg = "I stopped at " + fmt_pct(done.final_pct) +
          " percent; the cup is full.";
  } else if (done.reason == "SourceEmpty") {
    msg = "I ran out; the cup is at " + fmt_pct(done.final_pct) +
          " percent.";
  } else if (done.reason == "Aborted") {
    msg = "Stopped at " + fmt_pct(done.final_pct) + " percent.";
  } else {
    msg = "The pour ended (" + done.reason + ") at " +
          fmt_pct(done.final_pct) + " percent.";
  }
  return say(session, ActionKind::Exit, msg + " Goodbye.");
}

}  // namespace

const char* phase_name(DialoguePhase p) {
  switch (p) {
    case DialoguePhase::AwaitingContainer:
      return "AwaitingContainer";
    case DialoguePhase::AwaitingTransparent:
      return "AwaitingTransparent";
    case DialoguePhase::AwaitingTarget:
      return "AwaitingTarget";
    case DialoguePhase::Pouring:
      return "Pouring";
    case DialoguePhase::Done:
      return "Done";
  }
  return "?";
}

Action dialogue_step(DialogueSession& session, const DialogueEvent& event,
                     const DialogueContext& ctx) {
  if (const auto* obs = std::get_if<ObservationEvent>(&event)) {
    return on_observation(session, obs->obs, ctx);
  }
  if (const auto* utt = std::get_if<UtteranceEvent>(&event)) {
    return on_utterance(session, utt->text, ctx);
  }
  return on_pour_complete(session, std::get<PourCompleteEvent>(event));
}

}  // namespace pour
