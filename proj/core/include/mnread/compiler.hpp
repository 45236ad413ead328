#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mnread/corpus.hpp"
#include "mnread/mdd.hpp"
#include "mnread/ngram_trie.hpp"
#include "mnread/rules.hpp"

namespace mnread {

/// Outcome of checking one sentence against the length and display rules.
struct SentenceVerdict {
  bool word_count_ok = false;   // min_words <= words <= max_words
  bool char_budget_ok = false;  // characters + spaces == char_budget
  bool display_ok = false;      // some split into n_lines justifiable lines
  std::size_t char_count = 0;
  /// Index of the first word of each line, when display_ok.
  std::vector<std::size_t> line_starts;

  bool pass() const noexcept { return word_count_ok && char_budget_ok && display_ok; }
};

/// Direct evaluation of the rules; the display rule is decided by dynamic
/// programming over break positions. Shares no code with the MDD compiler.
SentenceVerdict check_sentence(std::span<const std::string> words, const RuleConfig& cfg,
                               const FontMetrics& font);
SentenceVerdict check_sentence(std::span<const Token> words, const RuleConfig& cfg,
                               const FontMetrics& font);

struct UnfoldStats {
  std::vector<std::size_t> states_per_layer;
  std::size_t successor_queries = 0;
  std::size_t distinct_suffixes = 0;
};

/// Unfolds the trie bundle into the solution MDD: max_words layers, words
/// padded with epsilon arcs. A path (epsilons stripped) is exactly a
/// sentence whose n-gram windows are stored with the right position, whose
/// word count, character budget and three-line justification satisfy `cfg`,
/// and whose last word is not a non-terminal word. The result is reduced.
///
/// Throws ConfigError when `cfg` is inconsistent or `font` misses a
/// character of the vocabulary.
Mdd unfold(const NgramTrie& trie, const RuleConfig& cfg, const FontMetrics& font,
           UnfoldStats* stats = nullptr);

/// The modular route: the unfolded succession MDD intersected with the
/// character-budget and word-count MDDs, then filtered by the display
/// automaton (the product with `display_mdd`, built over the running
/// result only). Same path set as `unfold`, at higher cost.
Mdd compile_via_intersection(const NgramTrie& trie, const RuleConfig& cfg,
                             const FontMetrics& font);

/// Succession constraint alone: n-gram chaining with position typing,
/// epsilon padding and the non-terminal rule, over max_words layers.
Mdd succession_mdd(const NgramTrie& trie, const RuleConfig& cfg);

/// Word count in [min_words, max_words]; words weigh 1, epsilon 0.
Mdd word_count_mdd(std::span<const LabelId> alphabet, const RuleConfig& cfg,
                   std::shared_ptr<LabelTable> labels);

/// Sum of (characters + 1) per word equals char_budget + 1.
Mdd char_budget_mdd(std::span<const LabelId> alphabet, const RuleConfig& cfg,
                    std::shared_ptr<LabelTable> labels);

/// Display rule over per-layer label domains (epsilon closes the sentence).
Mdd display_mdd(const std::vector<std::vector<LabelId>>& domains, const RuleConfig& cfg,
                const FontMetrics& font, std::shared_ptr<LabelTable> labels);

/// Labels used on each layer of `mdd`, sorted by id.
std::vector<std::vector<LabelId>> layer_labels(const Mdd& mdd);

/// Words of a solution path, epsilons dropped.
std::vector<std::string> sentence_words(const LabelTable& labels, std::span<const LabelId> path);
/// Words joined by spaces, with the final period.
std::string sentence_text(std::span<const std::string> words);

struct MddStats {
  std::size_t arcs = 0;
  std::size_t nodes = 0;
  SolutionCount solutions = 0;
  std::size_t peak_rss_bytes = 0;
  double seconds = 0.0;
};

MddStats stats(const Mdd& mdd, double elapsed_seconds = 0.0);

/// High-water resident set size of this process, 0 when unknown.
std::size_t peak_rss_bytes();

}  // namespace mnread
