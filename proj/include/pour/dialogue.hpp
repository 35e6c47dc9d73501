#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pour/intent.hpp"
#include "pour/perception.hpp"

namespace pour {

enum class DialoguePhase {
  AwaitingContainer,
  AwaitingTransparent,
  AwaitingTarget,
  Pouring,
  Done,
};

const char* phase_name(DialoguePhase p);

enum class ActionKind {
  None,
  Prompt,      // say text, keep listening
  StartPour,   // begin a pour to l_target_pct
  AbortPour,   // stop an active pour
  Exit,        // say text and end the session
};

struct Action {
  ActionKind kind = ActionKind::None;
  std::string text;
  double l_target_pct = 0.0;
  std::optional<std::string> beverage;
};

/// Events fed to the session: a user utterance, a perception frame, or
/// the end of a pour (final level and the reason the pour stopped).
struct UtteranceEvent {
  std::string text;
};
struct ObservationEvent {
  Observation obs;
};
struct PourCompleteEvent {
  double final_pct = 0.0;
  std::string reason;
};
using DialogueEvent =
    std::variant<UtteranceEvent, ObservationEvent, PourCompleteEvent>;

struct DialogueContext {
  TargetContainer target;
  Vocabulary vocab;
  double full_threshold_pct = 97.0;
};

struct DialogueSession {
  DialoguePhase phase = DialoguePhase::AwaitingContainer;
  std::optional<Intent> pending_intent;
  std::optional<Observation> last_obs;
  bool prompted_container = false;
  bool prompted_transparent = false;
  std::vector<std::string> transcript;
};

/// Advance the session by one event and return the action to take.
/// Prompts repeat only when the blocking condition first appears, so a
/// stream of identical observations stays quiet.
Action dialogue_step(DialogueSession& session, const DialogueEvent& event,
                     const DialogueContext& ctx);

}  // namespace pour
