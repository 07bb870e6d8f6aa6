// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "shotad/util.hpp"

namespace shotad {
namespace {

const std::unordered_set<std::string>& verb_lexicon() {
  static const std::unordered_set<std::string> lex = {
      // Profile priority verbs.
      "look", "turn", "take", "hold", "pull", "walk", "run", "watch", "stare",
      "grab", "fall", "get", "go", "open", "smile", "leave", "step", "enter",
      "sit", "stand", "see",
      // Common audio-description verbs.
      "have", "dial", "hang", "lean", "bounce", "kick", "swing", "pass",
      "wait", "comb", "twitch", "saunter", "slam", "stride", "glance", "slip",
      "roll", "duck", "study", "count", "wheel", "stir", "exchange", "drop",
      "peer", "trot", "hum", "press", "streak", "close", "shut", "climb",
      "jump", "throw", "catch", "pour", "drink", "eat", "carry", "lift",
      "push", "shove", "nod", "shake", "smirk", "frown", "laugh", "shout",
      "whisper", "point", "reach", "pick", "place", "set", "put", "move",
      "rush", "hurry", "dash", "sprint", "crawl", "kneel", "bend", "rise",
      "raise", "lower", "spin", "twist", "approach", "retreat", "follow",
      "chase", "escape", "flee", "hide", "reveal", "wave", "clap", "grip",
      "clutch", "release", "toss", "fling", "snatch", "tug", "drag", "haul",
      "sweep", "wipe", "fold", "unfold", "tear", "rip", "slice", "stab",
      "shoot", "fire", "aim", "drive", "steer", "park", "ride", "board",
      "depart", "arrive", "return", "stay", "linger", "pause", "stop",
      "start", "begin", "continue", "finish", "write", "read", "type",
      "scan", "search", "examine", "inspect", "observe", "gaze", "glare",
      "squint", "blink", "wink", "sigh", "gasp", "pant", "yawn", "stretch",
      "shrug", "flinch", "shiver", "tremble", "dodge", "stumble", "trip",
      "slide", "glide", "drift", "float", "swim", "dive", "sink", "plunge",
      "hop", "skip", "leap", "vault", "descend", "ascend", "kiss", "hand",
      "nurse", "sputter", "stroll", "march", "wander", "scramble", "clamber",
      "topple", "collapse", "crouch", "settle", "perch", "sprawl", "recline",
      "swivel", "pivot", "gesture", "beckon", "salute", "bow", "curtsy",
      "embrace", "hug", "pat", "stroke", "poke", "prod", "nudge", "elbow",
      "shove", "yank", "wrench", "pry", "unlock", "lock", "knock", "tap",
      "bang", "pound", "hammer", "light", "extinguish", "ignite", "smoke",
      "sip", "gulp", "swallow", "chew", "bite", "lick", "spit", "cough",
      "sneeze", "wince", "grimace", "scowl", "beam", "grin", "chuckle",
      "giggle", "weep", "sob", "mourn", "cheer", "applaud", "dance", "sway",
      "twirl", "stagger", "limp", "hobble", "pace", "tiptoe", "sneak",
      "creep", "lurk", "vanish", "appear", "emerge", "surface", "disappear",
  };
  return lex;
}

const std::unordered_map<std::string, std::string>& irregular_verbs() {
  static const std::unordered_map<std::string, std::string> map = {
      {"ran", "run"},       {"sat", "sit"},       {"stood", "stand"},
      {"saw", "see"},       {"seen", "see"},      {"went", "go"},
      {"gone", "go"},       {"goes", "go"},       {"got", "get"},
      {"gotten", "get"},    {"took", "take"},     {"taken", "take"},
      {"held", "hold"},     {"fell", "fall"},     {"fallen", "fall"},
      {"left", "leave"},    {"has", "have"},      {"had", "have"},
      {"swung", "swing"},   {"hung", "hang"},     {"strode", "stride"},
      {"drove", "drive"},   {"driven", "drive"},  {"rode", "ride"},
      {"ridden", "ride"},   {"wrote", "write"},   {"written", "write"},
      {"said", "say"},      {"told", "tell"},     {"spoke", "speak"},
      {"spoken", "speak"},  {"caught", "catch"},  {"threw", "throw"},
      {"thrown", "throw"},  {"flew", "fly"},      {"flown", "fly"},
      {"ate", "eat"},       {"eaten", "eat"},     {"drank", "drink"},
      {"drunk", "drink"},   {"came", "come"},     {"gave", "give"},
      {"given", "give"},    {"shot", "shoot"},    {"shook", "shake"},
      {"shaken", "shake"},  {"tore", "tear"},     {"torn", "tear"},
      {"slid", "slide"},    {"crept", "creep"},   {"knelt", "kneel"},
      {"leapt", "leap"},    {"fled", "flee"},     {"hid", "hide"},
      {"hidden", "hide"},   {"rose", "rise"},     {"risen", "rise"},
      {"began", "begin"},   {"begun", "begin"},   {"brought", "bring"},
      {"bought", "buy"},    {"did", "do"},        {"does", "do"},
      {"done", "do"},       {"made", "make"},     {"found", "find"},
      {"stuck", "stick"},   {"struck", "strike"}, {"swam", "swim"},
      {"swum", "swim"},     {"sank", "sink"},     {"sunk", "sink"},
      {"dove", "dive"},     {"wore", "wear"},     {"worn", "wear"},
  };
  return map;
}

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() &&
         s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

// Doubled consonants produced by gemination (running -> runn). ll/ss/zz
// commonly end base verbs, so they are left alone.
bool has_geminate_tail(const std::string& s) {
  if (s.size() < 2) return false;
  const char a = s[s.size() - 2];
  const char b = s[s.size() - 1];
  if (a != b) return false;
  static const std::string doubling = "bdgmnprt";
  return doubling.find(b) != std::string::npos;
}

// Resolve a suffix-stripped stem against the lexicon: as-is, undoubled, or
// with a restored final e.
std::optional<std::string> resolve_stem(const std::string& stem) {
  if (verb_lexicon().count(stem)) return stem;
  if (has_geminate_tail(stem)) {
    const std::string un = stem.substr(0, stem.size() - 1);
    if (verb_lexicon().count(un)) return un;
  }
  const std::string withe = stem + "e";
  if (verb_lexicon().count(withe)) return withe;
  return std::nullopt;
}

}  // namespace

std::vector<std::string> split_sentences(const std::string& text) {
  static const std::unordered_set<std::string> abbrev = {
      "mr", "mrs", "ms", "dr", "st", "jr", "sr", "prof", "e.g", "i.e",
      "etc", "vs", "no",
  };
  std::vector<std::string> out;
  std::string cur;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    cur += c;
    if (c != '.' && c != '?' && c != '!') continue;
    // Swallow runs like "..." or "?!".
    while (i + 1 < n &&
           (text[i + 1] == '.' || text[i + 1] == '?' || text[i + 1] == '!')) {
      cur += text[++i];
    }
    if (c == '.') {
      // Abbreviation / initial guard: look back at the word before the dot.
      std::size_t e = cur.size() - 1;
      while (e > 0 && (cur[e] == '.' || cur[e] == '?' || cur[e] == '!')) --e;
      std::size_t b = e + 1;
      while (b > 0 && (std::isalpha(static_cast<unsigned char>(cur[b - 1])) ||
                       cur[b - 1] == '.'))
        --b;
      std::string word = lowercase(cur.substr(b, e - b + 1));
      while (!word.empty() && word.back() == '.') word.pop_back();
      const bool initial = word.size() == 1;
      if (initial || abbrev.count(word)) continue;
    }
    // A terminator only ends the sentence before whitespace or EOT.
    if (i + 1 < n && !std::isspace(static_cast<unsigned char>(text[i + 1])))
      continue;
    const std::string trimmed = trim(cur);
    if (!trimmed.empty()) out.push_back(trimmed);
    cur.clear();
  }
  const std::string rest = trim(cur);
  if (!rest.empty()) out.push_back(rest);
  return out;
}

std::vector<std::string> tokenize_words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    while (!cur.empty() && cur.front() == '\'') cur.erase(cur.begin());
    while (!cur.empty() && cur.back() == '\'') cur.pop_back();
    if (!cur.empty()) out.push_back(cur);
    cur.clear();
  };
  for (char raw : text) {
    const char c =
        static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'')
      cur += c;
    else
      flush();
  }
  flush();
  return out;
}

bool is_known_verb(const std::string& lemma) {
  return verb_lexicon().count(lemma) > 0;
}

bool is_copula(const std::string& word) {
  static const std::unordered_set<std::string> cop = {
      "is", "are", "was", "were", "be", "been", "being", "am",
  };
  return cop.count(lowercase(word)) > 0;
}

std::string lemmatize_verb(const std::string& word) {
  const std::string w = lowercase(word);
  if (w.empty()) return w;
  const auto& irr = irregular_verbs();
  if (auto it = irr.find(w); it != irr.end()) return it->second;
  if (verb_lexicon().count(w)) return w;

  if (ends_with(w, "ies") && w.size() > 3)
    return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "ied") && w.size() > 3)
    return w.substr(0, w.size() - 3) + "y";

  struct Rule {
    const char* suffix;
    bool try_lexicon;
  };
  static const Rule rules[] = {{"ing", true}, {"ed", true}, {"es", true},
                               {"s", true}};
  for (const auto& r : rules) {
    const std::string suf = r.suffix;
    if (!ends_with(w, suf) || w.size() <= suf.size()) continue;
    if (suf == "s" && ends_with(w, "ss")) continue;
    const std::string stem = w.substr(0, w.size() - suf.size());
    if (auto hit = resolve_stem(stem)) return *hit;
  }

  // Mechanical fallback for words outside the lexicon.
  if (ends_with(w, "ing") && w.size() > 4) {
    std::string stem = w.substr(0, w.size() - 3);
    if (has_geminate_tail(stem)) stem.pop_back();
    return stem;
  }
  if (ends_with(w, "ed") && w.size() > 3) {
    std::string stem = w.substr(0, w.size() - 2);
    if (has_geminate_tail(stem)) stem.pop_back();
    return stem;
  }
  if (ends_with(w, "es") && w.size() > 3 &&
      (ends_with(w, "ses") || ends_with(w, "xes") || ends_with(w, "zes") ||
       ends_with(w, "ches") || ends_with(w, "shes")))
    return w.substr(0, w.size() - 2);
  if (ends_with(w, "s") && !ends_with(w, "ss") && w.size() > 2)
    return w.substr(0, w.size() - 1);
  return w;
}

std::vector<ActionPhrase> extract_action_phrases(const std::string& sentence) {
  static const std::unordered_set<std::string> determiners = {
      "a", "an", "the", "his", "her", "their", "my", "your", "its", "our",
      "this", "that", "these", "those", "each", "every", "some", "any",
  };
  static const std::unordered_set<std::string> trailing_conj = {
      "and", "then", "as", "while", "but", "or", "before", "after",
  };

  // Keep raw tokens for phrase text; classify on cleaned lowercase forms.
  std::vector<std::string> raw = split_whitespace(sentence);
  std::vector<std::string> clean;
  clean.reserve(raw.size());
  for (const auto& t : raw) {
    std::string c;
    for (char ch : t) {
      if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '\'')
        c += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    clean.push_back(c);
  }

  std::vector<std::size_t> verb_idx;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const std::string& word = clean[i];
    if (word.empty() || is_copula(word)) continue;
    if (i > 0 && determiners.count(clean[i - 1])) continue;
    const std::string lemma = lemmatize_verb(word);
    if (!is_known_verb(lemma)) continue;
    // The bare lemma form right after a determiner gap is still a noun in
    // phrases like "a brief look"; adjectives between are rare in ADs.
    verb_idx.push_back(i);
  }

  std::vector<ActionPhrase> out;
  for (std::size_t v = 0; v < verb_idx.size(); ++v) {
    const std::size_t begin = verb_idx[v];
    std::size_t end = (v + 1 < verb_idx.size()) ? verb_idx[v + 1] : raw.size();
    while (end > begin + 1 && trailing_conj.count(clean[end - 1])) --end;
    std::string phrase;
    for (std::size_t i = begin; i < end; ++i) {
      if (!phrase.empty()) phrase += ' ';
      phrase += raw[i];
    }
    while (!phrase.empty() &&
           (phrase.back() == '.' || phrase.back() == ',' ||
            phrase.back() == ';' || phrase.back() == '!' ||
            phrase.back() == '?'))
      phrase.pop_back();
    if (phrase.empty()) continue;
    ActionPhrase ap;
    ap.phrase = phrase;
    ap.lemma = lemmatize_verb(clean[begin]);
    out.push_back(ap);
  }
  return out;
}

}  // namespace shotad
