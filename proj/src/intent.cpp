#include "pour/intent.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pour {
namespace {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  for (char raw : text) {
    unsigned char c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == '.' && !cur.empty() &&
               std::isdigit(static_cast<unsigned char>(cur.back()))) {
      cur.push_back('.');  // decimal point inside a number
    } else if (c == '%') {
      flush();
      out.push_back("%");
    } else if (c == '\'') {
      // joins contractions: "that's" -> "thats"
    } else {
      flush();
    }
  }
  flush();
  // trailing '.' from sentence-final numbers ("60.")
  for (auto& t : out) {
    while (!t.empty() && t.back() == '.') t.pop_back();
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const std::string& t) { return t.empty(); }),
            out.end());
  return out;
}

bool is_numeric(const std::string& t) {
  if (t.empty()) return false;
  bool dot = false;
  for (char c : t) {
    if (c == '.') {
      if (dot) return false;
      dot = true;
    } else if (!std::isdigit(static_cast<unsigned char>(c))) {
      return false;
    }
  }
  return std::isdigit(static_cast<unsigned char>(t[0])) ||
         (t.size() > 1 && t[0] == '.');
}

const std::map<std::string, int>& small_numbers() {
  static const std::map<std::string, int> m = {
      {"one", 1},      {"two", 2},       {"three", 3},    {"four", 4},
      {"five", 5},     {"six", 6},       {"seven", 7},    {"eight", 8},
      {"nine", 9},     {"ten", 10},      {"eleven", 11},  {"twelve", 12},
      {"thirteen", 13}, {"fourteen", 14}, {"fifteen", 15}, {"sixteen", 16},
      {"seventeen", 17}, {"eighteen", 18}, {"nineteen", 19},
  };
  return m;
}

const std::map<std::string, int>& tens_numbers() {
  static const std::map<std::string, int> m = {
      {"twenty", 20}, {"thirty", 30}, {"forty", 40},  {"fifty", 50},
      {"sixty", 60},  {"seventy", 70}, {"eighty", 80}, {"ninety", 90},
  };
  return m;
}

/// First number in the token stream, written as digits ("62", "33.3")
/// or words ("sixty five", "a hundred").
std::optional<double> find_number(const std::vector<std::string>& toks) {
  for (size_t i = 0; i < toks.size(); ++i) {
    const std::string& t = toks[i];
    if (is_numeric(t)) return std::strtod(t.c_str(), nullptr);
    if (t == "hundred") return 100.0;
    if ((t == "a" || t == "an" || t == "one") && i + 1 < toks.size() &&
        toks[i + 1] == "hundred") {
      return 100.0;
    }
    auto tens = tens_numbers().find(t);
    if (tens != tens_numbers().end()) {
      double v = tens->second;
      if (i + 1 < toks.size()) {
        auto ones = small_numbers().find(toks[i + 1]);
        if (ones != small_numbers().end() && ones->second < 10) {
          v += ones->second;
        }
      }
      return v;
    }
    auto small = small_numbers().find(t);
    if (small != small_numbers().end()) return double(small->second);
  }
  return std::nullopt;
}

bool has_any(const std::vector<std::string>& toks,
             std::initializer_list<const char*> words) {
  for (const auto& t : toks)
    for (const char* w : words)
      if (t == w) return true;
  return false;
}

std::string canonical_beverage(const std::string& tok) {
  if (tok == "mountain") return "mtn";
  return tok;
}

/// Beverage mention anywhere in the utterance, matched against the
/// vocabulary (multi-word names match as consecutive tokens).
std::optional<std::string> find_beverage(const std::vector<std::string>& toks,
                                         const Vocabulary& vocab) {
  for (size_t i = 0; i < toks.size(); ++i) {
    std::string uni = canonical_beverage(toks[i]);
    std::string bi =
        i + 1 < toks.size() ? uni + " " + canonical_beverage(toks[i + 1]) : "";
    for (const auto& name : vocab.beverages) {
      if (name == bi) return name;
      if (name == uni) return name;
    }
  }
  return std::nullopt;
}

std::string known_beverage_list(const Vocabulary& vocab) {
  std::string out;
  for (size_t i = 0; i < vocab.beverages.size(); ++i) {
    if (i > 0) out += i + 1 == vocab.beverages.size() ? " or " : ", ";
    out += vocab.beverages[i];
  }
  return out;
}

bool is_filler(const std::string& t) {
  return has_any({t}, {"the", "a", "an", "some", "my", "me", "that", "this",
                       "it", "please"});
}

}  // namespace

double fraction_percent(FractionWord f) {
  switch (f) {
    case FractionWord::Half:
      return 50.0;
    case FractionWord::Third:
      return 33.3;
    case FractionWord::Quarter:
      return 25.0;
    case FractionWord::Full:
      return 95.0;
  }
  throw std::logic_error("unreachable fraction word");
}

ParseResult parse(const std::string& utterance, const Vocabulary& vocab) {
  std::vector<std::string> toks = tokenize(utterance);
  if (toks.empty()) {
    return ParseError{
        "I didn't catch that. Try something like \"pour water to 60 "
        "percent\"."};
  }

  if (has_any(toks, {"stop", "cancel", "abort", "halt", "enough",
                     "nevermind"})) {
    return Intent{IntentKind::Abort, std::nullopt, 0.0, std::nullopt};
  }
  if (has_any(toks, {"help", "commands", "usage"})) {
    return Intent{IntentKind::Help, std::nullopt, 0.0, std::nullopt};
  }
  if (has_any(toks, {"status", "level"}) ||
      (has_any(toks, {"how"}) && has_any(toks, {"much", "full"}))) {
    return Intent{IntentKind::QueryStatus, std::nullopt, 0.0, std::nullopt};
  }

  std::optional<std::string> beverage = find_beverage(toks, vocab);

  // "of <x>" with an unrecognized <x> reads as a beverage we don't know
  for (size_t i = 0; i + 1 < toks.size(); ++i) {
    if (toks[i] != "of") continue;
    size_t j = i + 1;
    while (j < toks.size() && is_filler(toks[j])) ++j;
    if (j >= toks.size()) break;
    const std::string& cand = toks[j];
    bool known = false;
    std::string uni = canonical_beverage(cand);
    std::string bi =
        j + 1 < toks.size() ? uni + " " + canonical_beverage(toks[j + 1]) : "";
    for (const auto& name : vocab.beverages) {
      if (name == uni || name == bi) known = true;
    }
    if (!known && !is_numeric(cand) && cand != "%" &&
        !has_any({cand}, {"cup", "glass", "bowl", "percent", "pct", "ml",
                          "milliliters", "milliliter", "millilitres",
                          "millilitre", "water"})) {
      return ParseError{"I don't know \"" + cand + "\". I can pour " +
                        known_beverage_list(vocab) + "."};
    }
  }

  std::optional<double> number = find_number(toks);
  bool pct_unit = has_any(toks, {"percent", "pct", "%"});
  bool ml_unit = has_any(toks, {"ml", "milliliters", "milliliter",
                                "millilitres", "millilitre", "mls"});

  if (number && pct_unit) {
    if (*number <= 0.0) {
      return ParseError{"I can't pour to " + std::to_string(int(*number)) +
                        " percent. Give me a level above zero."};
    }
    return Intent{IntentKind::PourToPercent, beverage, *number, std::nullopt};
  }
  if (number && ml_unit) {
    if (*number <= 0.0) {
      return ParseError{"I need a volume above zero milliliters."};
    }
    return Intent{IntentKind::PourVolume, beverage, *number, std::nullopt};
  }

  std::optional<FractionWord> fraction;
  if (has_any(toks, {"half", "halfway"})) fraction = FractionWord::Half;
  else if (has_any(toks, {"third"})) fraction = FractionWord::Third;
  else if (has_any(toks, {"quarter"})) fraction = FractionWord::Quarter;
  else if (has_any(toks, {"full", "fully", "top"})) fraction = FractionWord::Full;
  if (fraction) {
    return Intent{IntentKind::PourFraction, beverage,
                  fraction_percent(*fraction), fraction};
  }

  if (number) {
    return ParseError{
        "Is that in percent or milliliters? Say e.g. \"to 60 percent\" or "
        "\"120 ml\"."};
  }

  bool pour_verb = has_any(toks, {"pour", "fill", "give", "get", "make",
                                  "want", "top"});
  if (pour_verb || beverage) {
    std::string lead = beverage ? "How much " + *beverage + "?" : "How much?";
    return ParseError{lead +
                      " Tell me a percent, milliliters, or a fraction like "
                      "\"half\"."};
  }

  return ParseError{
      "I pour drinks. Try \"pour water to 60 percent\" or say \"help\"."};
}

double resolve_target(const Intent& intent, const TargetContainer& target,
                      double full_threshold_pct) {
  double pct = 0.0;
  switch (intent.kind) {
    case IntentKind::PourToPercent:
    case IntentKind::PourFraction:
      pct = intent.value;
      break;
    case IntentKind::PourVolume: {
      double cap = target.capacity_ml();
      if (intent.value > cap) {
        std::ostringstream msg;
        msg << "the " << target.name << " holds only " << int(cap + 0.5)
            << " ml";
        throw CapacityExceeded(msg.str());
      }
      double level = level_at_volume(target, intent.value);
      pct = level / target.height_cm() * 100.0;
      break;
    }
    default:
      throw std::domain_error("intent has no pour target");
  }
  if (pct <= 0.0) throw std::domain_error("target percent must be positive");
  return std::min(pct, full_threshold_pct);
}

}  // namespace pour
