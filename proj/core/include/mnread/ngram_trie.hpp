#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mnread/corpus.hpp"
#include "mnread/mdd.hpp"

namespace mnread {

enum class WantPosition { kAny, kMiddle, kFinal };

/// Fixed-depth MDDs holding every stored n-gram, one trie per position
/// class. All three share one label table.
///
/// The initial trie seeds the first n words of a sentence, the middle trie
/// answers continuation queries and the final trie closes sentences. An
/// n-gram spanning a whole sentence is stored as both initial and final.
class NgramTrie {
 public:
  /// Throws MixedArityError when orders differ (or differ from a non-zero
  /// `order`). With no n-grams the order is `order`, or 5 when that is 0.
  /// Each trie is reduced.
  static NgramTrie build(std::span<const NGram> ngrams, std::size_t order = 0,
                         std::shared_ptr<LabelTable> labels = std::make_shared<LabelTable>());

  NgramTrie(std::size_t order, std::shared_ptr<LabelTable> labels,
            std::array<Mdd, 3> tries);

  std::size_t order() const noexcept { return order_; }
  const Mdd& trie(Position p) const { return tries_[static_cast<std::size_t>(p)]; }
  const std::shared_ptr<LabelTable>& label_table() const noexcept { return labels_; }
  const LabelTable& labels() const noexcept { return *labels_; }

  /// Words w such that (suffix..., w) is stored in a trie compatible with
  /// `want`; sorted by label id. `suffix` must hold order()-1 labels.
  std::vector<LabelId> successors(std::span<const LabelId> suffix,
                                  WantPosition want = WantPosition::kAny) const;
  std::vector<std::string> successors(std::span<const std::string> suffix,
                                      WantPosition want = WantPosition::kAny) const;

  /// Throws ArityError when g.order() != order().
  bool contains(const NGram& g) const;

  /// Every label that occurs in one of the tries.
  std::vector<LabelId> alphabet() const;

  /// Writes initial.mdd, middle.mdd, final.mdd and manifest.json into `dir`.
  void save(const std::filesystem::path& dir) const;
  static NgramTrie load(const std::filesystem::path& dir);

 private:
  std::size_t order_;
  std::shared_ptr<LabelTable> labels_;
  std::array<Mdd, 3> tries_;
};

/// Memoized suffix lookups against the middle and final tries. Not thread
/// safe: use one per worker.
class SuccessorCache {
 public:
  struct Entry {
    std::vector<LabelId> middle;  // sorted by id
    std::vector<LabelId> final;   // sorted by id
  };

  explicit SuccessorCache(const NgramTrie& trie) : trie_(&trie) {}

  const Entry& lookup(std::span<const LabelId> suffix);
  std::size_t size() const noexcept { return cache_.size(); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<LabelId>& key) const noexcept;
  };

  const NgramTrie* trie_;
  std::unordered_map<std::vector<LabelId>, Entry, KeyHash> cache_;
};

/// Hex digest of the label strings in id order; the trie manifest stores it.
std::string label_table_checksum(const LabelTable& labels);

}  // namespace mnread
