#include "artlang/lexicon.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "artlang/rng.hpp"

namespace artlang {

std::string_view pos_name(Pos p) {
  switch (p) {
    case Pos::Noun: return "noun";
    case Pos::Verb: return "verb";
    case Pos::Adjective: return "adjective";
    case Pos::Pronoun: return "pronoun";
    case Pos::Preposition: return "preposition";
    case Pos::Particle: return "particle";
  }
  return "?";
}

std::string_view number_name(Number n) {
  switch (n) {
    case Number::None: return "na";
    case Number::Sg: return "sg";
    case Number::Pl: return "pl";
  }
  return "?";
}

std::string_view tense_name(Tense t) {
  switch (t) {
    case Tense::None: return "na";
    case Tense::Present: return "present";
    case Tense::Past: return "past";
  }
  return "?";
}

namespace {

std::string_view role_name(ParticleRole r) {
  switch (r) {
    case ParticleRole::SubjectMarker: return "subject_marker";
    case ParticleRole::ObjectMarker: return "object_marker";
    case ParticleRole::Relativizer: return "relativizer";
    case ParticleRole::Complementizer: return "complementizer";
    case ParticleRole::None: break;
  }
  return "?";
}

constexpr std::array<ParticleRole, 4> kRoles = {
    ParticleRole::SubjectMarker, ParticleRole::ObjectMarker,
    ParticleRole::Relativizer, ParticleRole::Complementizer};

// Required form set per POS; nouns and verbs fill every number (x tense)
// cell, everything else has exactly one form.
void check_entry_shape(const LexEntry& e) {
  auto require = [&](std::initializer_list<FeatureBundle> bundles) {
    if (e.forms.size() != bundles.size())
      throw LexiconError("entry '" + e.lemma + "' (" +
                         std::string(pos_name(e.pos)) + ") must have " +
                         std::to_string(bundles.size()) + " forms, has " +
                         std::to_string(e.forms.size()));
    for (FeatureBundle b : bundles)
      if (!e.form(b))
        throw LexiconError("entry '" + e.lemma + "' missing form for " +
                           std::string(number_name(b.number)) + "." +
                           std::string(tense_name(b.tense)));
  };
  switch (e.pos) {
    case Pos::Noun:
      require({{Number::Sg, Tense::None}, {Number::Pl, Tense::None}});
      break;
    case Pos::Verb:
      require({{Number::Sg, Tense::Present},
               {Number::Pl, Tense::Present},
               {Number::Sg, Tense::Past},
               {Number::Pl, Tense::Past}});
      break;
    case Pos::Pronoun:
      if (e.forms.size() != 1 || e.forms[0].first.tense != Tense::None ||
          e.forms[0].first.number == Number::None)
        throw LexiconError("pronoun '" + e.lemma +
                           "' must have exactly one tenseless numbered form");
      break;
    case Pos::Adjective:
    case Pos::Preposition:
      if (e.forms.size() != 1 || e.forms[0].first != FeatureBundle{})
        throw LexiconError("entry '" + e.lemma +
                           "' must have exactly one featureless form");
      break;
    case Pos::Particle:
      throw LexiconError("particles are set via set_particle, not entries");
  }
}

}  // namespace

const std::string* LexEntry::form(FeatureBundle b) const {
  for (const auto& [bundle, surface] : forms)
    if (bundle == b) return &surface;
  return nullptr;
}

void Lexicon::add_entry(LexEntry e) {
  check_entry_shape(e);
  for (const auto& [bundle, surface] : e.forms) {
    if (surface.empty())
      throw LexiconError("entry '" + e.lemma + "' has an empty surface form");
    if (surface_index_.count(surface))
      throw LexiconError("surface form '" + surface +
                         "' already maps to another token");
  }
  for (const auto& [bundle, surface] : e.forms) {
    TokenFeatures f;
    f.pos = e.pos;
    f.number = bundle.number;
    f.tense = bundle.tense;
    f.lemma = e.lemma;
    surface_index_.emplace(surface, std::move(f));
  }
  entries_.push_back(std::move(e));
}

void Lexicon::set_particle(ParticleRole role, std::string surface) {
  if (role == ParticleRole::None)
    throw LexiconError("cannot set a particle with no role");
  if (surface.empty()) throw LexiconError("empty particle surface");
  if (surface_index_.count(surface))
    throw LexiconError("particle '" + surface +
                       "' collides with another token");
  if (particles_.count(static_cast<int>(role)))
    throw LexiconError("particle role '" +
                       std::string(role_name(role)) + "' set twice");
  TokenFeatures f;
  f.pos = Pos::Particle;
  f.role = role;
  f.lemma = surface;
  surface_index_.emplace(surface, std::move(f));
  particles_.emplace(static_cast<int>(role), std::move(surface));
}

const std::string& Lexicon::particle(ParticleRole role) const {
  auto it = particles_.find(static_cast<int>(role));
  if (it == particles_.end())
    throw LexiconError("particle role '" + std::string(role_name(role)) +
                       "' is not set");
  return it->second;
}

std::vector<const LexEntry*> Lexicon::entries_with_pos(Pos p) const {
  std::vector<const LexEntry*> out;
  for (const LexEntry& e : entries_)
    if (e.pos == p) out.push_back(&e);
  return out;
}

std::optional<TokenFeatures> Lexicon::find_features(
    std::string_view token) const {
  auto it = surface_index_.find(std::string(token));
  if (it == surface_index_.end()) return std::nullopt;
  return it->second;
}

TokenFeatures features_of(std::string_view token, const Lexicon& lex) {
  std::optional<TokenFeatures> f = lex.find_features(token);
  if (!f)
    throw LexiconError("token '" + std::string(token) +
                       "' is not in the lexicon");
  return *f;
}

namespace {

bool sibilant_ending(std::string_view s) {
  if (s.empty()) return false;
  char last = s.back();
  if (last == 's' || last == 'x' || last == 'z') return true;
  if (s.size() >= 2 && s[s.size() - 2] == 'c' && last == 'h') return true;
  if (s.size() >= 2 && s[s.size() - 2] == 's' && last == 'h') return true;
  return false;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool consonant_y_ending(std::string_view s) {
  return s.size() >= 2 && s.back() == 'y' && !is_vowel(s[s.size() - 2]);
}

std::string s_suffix(std::string_view lemma) {
  std::string out(lemma);
  if (sibilant_ending(lemma)) {
    out += "es";
  } else if (consonant_y_ending(lemma)) {
    out.back() = 'i';
    out += "es";
  } else {
    out += 's';
  }
  return out;
}

}  // namespace

std::string noun_plural(std::string_view lemma) { return s_suffix(lemma); }

std::string verb_present_sg(std::string_view lemma) {
  return s_suffix(lemma);
}

std::string verb_past_sg(std::string_view lemma) {
  std::string out(lemma);
  if (!out.empty() && out.back() == 'e') {
    out += 'd';
  } else if (consonant_y_ending(out)) {
    out.back() = 'i';
    out += "ed";
  } else {
    out += "ed";
  }
  return out;
}

std::string verb_past_pl(std::string_view lemma) {
  return std::string(lemma) + "da";
}

LexEntry make_noun(std::string lemma) {
  LexEntry e;
  e.pos = Pos::Noun;
  e.forms.push_back({{Number::Sg, Tense::None}, lemma});
  e.forms.push_back({{Number::Pl, Tense::None}, noun_plural(lemma)});
  e.lemma = std::move(lemma);
  return e;
}

LexEntry make_verb(std::string lemma) {
  LexEntry e;
  e.pos = Pos::Verb;
  e.forms.push_back({{Number::Sg, Tense::Present}, verb_present_sg(lemma)});
  e.forms.push_back({{Number::Pl, Tense::Present}, lemma});
  e.forms.push_back({{Number::Sg, Tense::Past}, verb_past_sg(lemma)});
  e.forms.push_back({{Number::Pl, Tense::Past}, verb_past_pl(lemma)});
  e.lemma = std::move(lemma);
  return e;
}

LexEntry make_single_form(std::string lemma, Pos pos, Number number) {
  LexEntry e;
  e.pos = pos;
  e.forms.push_back({{number, Tense::None}, lemma});
  e.lemma = std::move(lemma);
  return e;
}

namespace {

// Pseudoword template: words are 1-3 syllables of onset + vowel [+ coda],
// sampled uniformly from the tables below; verbs append a Latinate suffix
// to a short stem. Everything downstream of the fixed seed is pure table
// lookup, so the builtin lexicon is byte-identical across platforms.
constexpr uint64_t kLexiconSeed = 0x6E5EED01;

const char* const kOnsets[] = {
    "b",  "d",  "f",  "g",  "k",  "l",  "m",  "n",  "p",  "r",  "s",
    "t",  "v",  "z",  "bl", "br", "dr", "fl", "fr", "gl", "gr", "kl",
    "kr", "pl", "pr", "sk", "sl", "sm", "sn", "sp", "st", "tr"};
const char* const kVowels[] = {"a", "e", "i", "o", "u"};
const char* const kCodas[] = {"b", "d", "f", "g",  "k",  "l",  "m",  "n",
                              "p", "r", "s", "t",  "nd", "rd", "st", "lk",
                              "mp", "nt", "rn", "sk"};
const char* const kVerbSuffixes[] = {"ify", "ate", "icate", "ize", "icize"};

template <size_t N>
const char* pick(SplitMix64& rng, const char* const (&table)[N]) {
  return table[rng.next_below(N)];
}

std::string syllable(SplitMix64& rng, bool allow_coda) {
  std::string s = pick(rng, kOnsets);
  s += pick(rng, kVowels);
  if (allow_coda && rng.next_double() < 0.55) s += pick(rng, kCodas);
  return s;
}

std::string pseudo_stem(SplitMix64& rng, int min_syll, int max_syll) {
  int n = min_syll +
          static_cast<int>(rng.next_below(
              static_cast<uint64_t>(max_syll - min_syll + 1)));
  std::string s;
  for (int i = 0; i < n; ++i) s += syllable(rng, /*allow_coda=*/i + 1 == n);
  return s;
}

}  // namespace

Lexicon builtin_lexicon() {
  Lexicon lex;
  lex.set_particle(ParticleRole::SubjectMarker, "sub");
  lex.set_particle(ParticleRole::ObjectMarker, "ob");
  lex.set_particle(ParticleRole::Relativizer, "rel");
  lex.set_particle(ParticleRole::Complementizer, "sa");

  // Fixed lemmas come first so the shipped corpora contain them verbatim.
  lex.add_entry(make_noun("fusbender"));
  lex.add_entry(make_noun("serd"));
  lex.add_entry(make_verb("povify"));
  lex.add_entry(make_verb("povicate"));
  lex.add_entry(make_verb("strovokicize"));
  lex.add_entry(make_single_form("me", Pos::Pronoun, Number::Sg));

  SplitMix64 rng(kLexiconSeed);
  auto grow = [&](Pos pos, size_t target, auto gen) {
    size_t have = lex.entries_with_pos(pos).size();
    int guard = 0;
    while (have < target) {
      if (++guard > 200000)
        throw LexiconError("pseudoword generator failed to fill POS " +
                           std::string(pos_name(pos)));
      LexEntry e = gen();
      bool clash = false;
      for (const auto& [bundle, surface] : e.forms)
        if (lex.has_token(surface)) clash = true;
      if (clash) continue;
      lex.add_entry(std::move(e));
      ++have;
    }
  };

  grow(Pos::Noun, 120, [&] { return make_noun(pseudo_stem(rng, 2, 3)); });
  grow(Pos::Verb, 80, [&] {
    return make_verb(pseudo_stem(rng, 1, 2) + pick(rng, kVerbSuffixes));
  });
  grow(Pos::Adjective, 40, [&] {
    return make_single_form(pseudo_stem(rng, 2, 3), Pos::Adjective);
  });
  grow(Pos::Preposition, 10, [&] {
    return make_single_form(pseudo_stem(rng, 1, 1), Pos::Preposition);
  });
  grow(Pos::Pronoun, 3, [&] {
    return make_single_form(syllable(rng, /*allow_coda=*/false), Pos::Pronoun,
                            Number::Sg);
  });
  grow(Pos::Pronoun, 6, [&] {
    return make_single_form(syllable(rng, /*allow_coda=*/false), Pos::Pronoun,
                            Number::Pl);
  });
  return lex;
}

std::string serialize_lexicon(const Lexicon& lex) {
  std::ostringstream out;
  for (ParticleRole role : kRoles)
    out << "particle\t" << role_name(role) << '\t' << lex.particle(role)
        << '\n';
  for (const LexEntry& e : lex.entries()) {
    out << e.lemma << '\t' << pos_name(e.pos) << '\t';
    bool first = true;
    for (const auto& [bundle, surface] : e.forms) {
      if (!first) out << ';';
      first = false;
      out << surface << '=' << number_name(bundle.number) << '.'
          << tense_name(bundle.tense);
    }
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

Pos parse_pos(const std::string& s, int lineno) {
  for (Pos p : {Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Pronoun,
                Pos::Preposition})
    if (s == pos_name(p)) return p;
  throw LexiconError("line " + std::to_string(lineno) + ": unknown pos '" +
                     s + "'");
}

Number parse_number(const std::string& s, int lineno) {
  if (s == "sg") return Number::Sg;
  if (s == "pl") return Number::Pl;
  if (s == "na") return Number::None;
  throw LexiconError("line " + std::to_string(lineno) +
                     ": unknown number '" + s + "'");
}

Tense parse_tense(const std::string& s, int lineno) {
  if (s == "present") return Tense::Present;
  if (s == "past") return Tense::Past;
  if (s == "na") return Tense::None;
  throw LexiconError("line " + std::to_string(lineno) + ": unknown tense '" +
                     s + "'");
}

ParticleRole parse_role(const std::string& s, int lineno) {
  for (ParticleRole r : kRoles)
    if (s == role_name(r)) return r;
  throw LexiconError("line " + std::to_string(lineno) +
                     ": unknown particle role '" + s + "'");
}

}  // namespace

Lexicon parse_lexicon(std::string_view text) {
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 3)
      throw LexiconError("line " + std::to_string(lineno) +
                         ": expected 3 tab-separated columns, got " +
                         std::to_string(cols.size()));
    if (cols[0] == "particle") {
      lex.set_particle(parse_role(cols[1], lineno), cols[2]);
      continue;
    }
    LexEntry e;
    e.lemma = cols[0];
    e.pos = parse_pos(cols[1], lineno);
    for (const std::string& item : split(cols[2], ';')) {
      size_t eq = item.find('=');
      size_t dot = item.rfind('.');
      if (eq == std::string::npos || dot == std::string::npos || dot < eq)
        throw LexiconError("line " + std::to_string(lineno) +
                           ": malformed form '" + item +
                           "', expected surface=number.tense");
      FeatureBundle b;
      b.number = parse_number(item.substr(eq + 1, dot - eq - 1), lineno);
      b.tense = parse_tense(item.substr(dot + 1), lineno);
      e.forms.push_back({b, item.substr(0, eq)});
    }
    try {
      lex.add_entry(std::move(e));
    } catch (const LexiconError& err) {
      throw LexiconError("line " + std::to_string(lineno) + ": " +
                         err.what());
    }
  }
  return lex;
}

Lexicon parse_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LexiconError("cannot open lexicon file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lexicon(buf.str());
}

}  // namespace artlang
