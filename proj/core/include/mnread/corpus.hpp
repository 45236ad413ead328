#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mnread/rules.hpp"

namespace mnread {

struct RawSentence {
  std::string text;
  std::string source_id;
  std::size_t index = 0;
};

struct Token {
  std::string surface;
  std::size_t char_len = 0;

  explicit Token(std::string s);
  friend bool operator==(const Token& a, const Token& b) { return a.surface == b.surface; }
  friend auto operator<=>(const Token& a, const Token& b) { return a.surface <=> b.surface; }
};

enum class Position { kInitial, kMiddle, kFinal };

std::string_view to_string(Position p);
std::optional<Position> parse_position(std::string_view s);

struct NGram {
  std::vector<Token> words;
  Position position = Position::kMiddle;

  std::size_t order() const noexcept { return words.size(); }
  std::vector<std::string> surfaces() const;

  friend bool operator==(const NGram&, const NGram&) = default;
  friend bool operator<(const NGram& a, const NGram& b) {
    if (a.position != b.position) return a.position < b.position;
    return a.words < b.words;
  }
};

enum class CasePolicy { kLowercase, kExact };

/// Allowed lemmas plus an optional surface-form to lemma map.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::set<std::string> lemmas, std::unordered_map<std::string, std::string> inflections,
          CasePolicy policy = CasePolicy::kLowercase);

  const std::set<std::string>& allowed_lemmas() const noexcept { return lemmas_; }
  const std::unordered_map<std::string, std::string>& inflections() const noexcept {
    return inflections_;
  }
  CasePolicy case_policy() const noexcept { return policy_; }

  /// Lemma of `surface` when it is in the lexicon.
  std::optional<std::string> resolve(std::string_view surface) const;
  /// Like `resolve`, but a token with apostrophes also passes when every
  /// apostrophe-separated piece resolves on its own.
  bool covers(std::string_view surface) const;

 private:
  std::set<std::string> lemmas_;
  std::unordered_map<std::string, std::string> inflections_;
  CasePolicy policy_ = CasePolicy::kLowercase;
};

/// One lemma per line; optional TSV "surface<TAB>lemma". Throws IoError or
/// FormatError with the offending line.
Lexicon build_lexicon(const std::filesystem::path& lemma_file,
                      const std::optional<std::filesystem::path>& inflection_file = std::nullopt,
                      CasePolicy policy = CasePolicy::kLowercase);

enum class FilterReason {
  kOk,
  kNotDeclarative,
  kForbiddenPunctuation,
  kProperNoun,
  kOutOfLexicon,
  kTooShort,
};

inline constexpr std::array kAllFilterReasons{
    FilterReason::kOk,           FilterReason::kNotDeclarative, FilterReason::kForbiddenPunctuation,
    FilterReason::kProperNoun,   FilterReason::kOutOfLexicon,   FilterReason::kTooShort,
};

std::string_view to_string(FilterReason r);

struct FilterReport {
  bool accepted = false;
  FilterReason reason = FilterReason::kNotDeclarative;
  /// A capitalized non-initial word that is also a lexicon word ("Rose"):
  /// accepted, but worth a look.
  bool ambiguous_capital = false;
};

/// Splits NFC text after '.', '?' or '!' runs. An ellipsis followed by a
/// lowercase word does not end the sentence; unterminated fragments and
/// closing quotes between sentences are dropped.
std::vector<RawSentence> segment_sentences(std::string_view text, std::string_view source_id = "");

FilterReport filter_sentence(const RawSentence& s, const Lexicon& lex, const RuleConfig& cfg,
                             std::size_t min_tokens = 1);

/// Whitespace tokens with the terminal period stripped. Throws
/// TokenizationError when a token keeps a forbidden character.
std::vector<Token> tokenize(const RawSentence& s, const RuleConfig& cfg);

/// Sliding windows of `n` tokens typed by position. A sentence of exactly
/// `n` tokens yields the same window twice, as initial and as final.
std::vector<NGram> extract_ngrams(const std::vector<Token>& tokens, std::size_t n);

struct ExtractionReport {
  std::size_t files = 0;
  std::size_t sentences = 0;
  std::size_t accepted = 0;
  std::size_t ambiguous_capitals = 0;
  std::map<FilterReason, std::size_t> rejected;
  std::array<std::size_t, 3> distinct_ngrams{};  // by Position
};

struct Extraction {
  std::size_t order = 0;
  std::vector<NGram> ngrams;                     // sorted, distinct
  std::vector<std::vector<Token>> sentences;     // accepted, in corpus order
  ExtractionReport report;
};

/// Runs segment/filter/tokenize/extract over every *.txt file of `dir`
/// (sorted by name). Files are processed on up to `jobs` threads; the merge
/// is ordered, so the result does not depend on `jobs`.
Extraction extract_corpus(const std::filesystem::path& dir, const Lexicon& lex,
                          const RuleConfig& cfg, std::size_t n, std::size_t jobs = 1);

/// Same pipeline over in-memory documents (source id, text).
Extraction extract_documents(const std::vector<std::pair<std::string, std::string>>& docs,
                             const Lexicon& lex, const RuleConfig& cfg, std::size_t n,
                             std::size_t jobs = 1);

/// "position<TAB>w1 w2 ... wn", one n-gram per line.
void write_ngram_file(const std::vector<NGram>& ngrams, const std::filesystem::path& path);
std::vector<NGram> read_ngram_file(const std::filesystem::path& path);

}  // namespace mnread
