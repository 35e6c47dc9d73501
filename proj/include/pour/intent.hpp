#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pour/geometry.hpp"

namespace pour {

enum class IntentKind {
  PourToPercent,
  PourVolume,
  PourFraction,
  QueryStatus,
  Abort,
  Help,
};

enum class FractionWord { Half, Third, Quarter, Full };

double fraction_percent(FractionWord f);

struct Intent {
  IntentKind kind;
  std::optional<std::string> beverage;
  double value = 0.0;  // percent or ml depending on kind
  std::optional<FractionWord> fraction;
};

struct ParseError {
  std::string clarification;
};

using ParseResult = std::variant<Intent, ParseError>;

/// Known beverage names (plus common aliases) used to recognize
/// beverage mentions; defaults to the bundled presets.
struct Vocabulary {
  std::vector<std::string> beverages = {"water", "coke", "sprite", "mtn dew"};
};

/// Deterministic grammar over tokenized lowercase input. Total: every
/// string maps to an Intent or a ParseError with a clarification.
ParseResult parse(const std::string& utterance,
                  const Vocabulary& vocab = Vocabulary{});

class CapacityExceeded : public std::runtime_error {
 public:
  explicit CapacityExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

/// Convert a pour intent to a target level percent for the given
/// container; clamped to (0, full_threshold].
double resolve_target(const Intent& intent, const TargetContainer& target,
                      double full_threshold_pct = 97.0);

}  // namespace pour
