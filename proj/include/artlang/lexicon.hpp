#ifndef ARTLANG_LEXICON_HPP
#define ARTLANG_LEXICON_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace artlang {

enum class Pos { Noun, Verb, Adjective, Pronoun, Preposition, Particle };
enum class Number { None, Sg, Pl };
enum class Tense { None, Present, Past };
enum class ParticleRole {
  None,
  SubjectMarker,
  ObjectMarker,
  Relativizer,
  Complementizer,
};

std::string_view pos_name(Pos p);
std::string_view number_name(Number n);
std::string_view tense_name(Tense t);

struct FeatureBundle {
  Number number = Number::None;
  Tense tense = Tense::None;
  bool operator==(const FeatureBundle&) const = default;
};

// Nouns carry {sg, pl}; verbs the four number x tense cells; every other
// POS exactly one form. Pronouns put their inherent number in that one
// form's bundle. Forms stay in canonical bundle order for serialization.
struct LexEntry {
  std::string lemma;
  Pos pos = Pos::Noun;
  std::vector<std::pair<FeatureBundle, std::string>> forms;

  const std::string* form(FeatureBundle b) const;
};

struct TokenFeatures {
  Pos pos = Pos::Noun;
  Number number = Number::None;
  Tense tense = Tense::None;
  ParticleRole role = ParticleRole::None;
  std::string lemma;
};

struct LexiconError : std::runtime_error {
  explicit LexiconError(const std::string& msg) : std::runtime_error(msg) {}
};

// Surface forms are globally unique across entries and particles, so every
// token resolves to exactly one feature annotation.
class Lexicon {
 public:
  // Throws LexiconError when any surface form of e collides with an
  // already-registered token.
  void add_entry(LexEntry e);
  void set_particle(ParticleRole role, std::string surface);

  const std::vector<LexEntry>& entries() const { return entries_; }
  const std::string& particle(ParticleRole role) const;
  std::vector<const LexEntry*> entries_with_pos(Pos p) const;

  std::optional<TokenFeatures> find_features(std::string_view token) const;
  bool has_token(std::string_view token) const {
    return find_features(token).has_value();
  }

 private:
  std::vector<LexEntry> entries_;
  std::unordered_map<int, std::string> particles_;
  std::unordered_map<std::string, TokenFeatures> surface_index_;
};

// Lookup that is total on the lexicon's surface vocabulary; throws
// LexiconError for unknown tokens.
TokenFeatures features_of(std::string_view token, const Lexicon& lex);

// Regular inflection used by the builtin lexicon and documented in the
// README: plural and present-singular add s (es after a sibilant ending,
// consonant+y becomes ies); past singular adds ed (d after e, consonant+y
// becomes ied); past plural is lemma + "da".
std::string noun_plural(std::string_view lemma);
std::string verb_present_sg(std::string_view lemma);
std::string verb_past_sg(std::string_view lemma);
std::string verb_past_pl(std::string_view lemma);

LexEntry make_noun(std::string lemma);
LexEntry make_verb(std::string lemma);
LexEntry make_single_form(std::string lemma, Pos pos,
                          Number number = Number::None);

// The shipped vocabulary: 120 nouns, 80 verbs, 40 adjectives, 10
// prepositions, 6 pronouns (3 sg, 3 pl), particles sub/ob/rel/sa.
// Pseudowords come from a seeded syllable generator; the handful of fixed
// lemmas the golden sentences depend on are inserted first. Byte-identical
// across runs.
Lexicon builtin_lexicon();

// Line format, one entry per line, canonical form order:
//   <lemma>\t<pos>\t<surface>=<number>.<tense>;<surface>=<number>.<tense>...
//   particle\t<role>\t<surface>
std::string serialize_lexicon(const Lexicon& lex);
Lexicon parse_lexicon(std::string_view text);
Lexicon parse_lexicon_file(const std::string& path);

}  // namespace artlang

#endif  // ARTLANG_LEXICON_HPP
