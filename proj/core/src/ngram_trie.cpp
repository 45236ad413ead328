#include "mnread/ngram_trie.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "mnread/digest.hpp"
#include "mnread/errors.hpp"

namespace mnread {
namespace {

constexpr std::array<const char*, 3> kTrieFiles{"initial.mdd", "middle.mdd", "final.mdd"};

void collect_children(const Mdd& mdd, std::span<const LabelId> suffix, std::vector<LabelId>& out) {
  auto node = mdd.walk(suffix);
  if (!node) return;
  for (const Arc& a : mdd.arcs(*node)) out.push_back(a.label);
}

}  // namespace

NgramTrie::NgramTrie(std::size_t order, std::shared_ptr<LabelTable> labels,
                     std::array<Mdd, 3> tries)
    : order_(order), labels_(std::move(labels)), tries_(std::move(tries)) {}

NgramTrie NgramTrie::build(std::span<const NGram> ngrams, std::size_t order,
                           std::shared_ptr<LabelTable> labels) {
  std::size_t n = order;
  for (const NGram& g : ngrams) {
    if (n == 0) n = g.order();
    if (g.order() != n) {
      throw MixedArityError("n-grams of order " + std::to_string(g.order()) + " and " +
                            std::to_string(n) + " cannot share a trie");
    }
  }
  if (n == 0) n = 5;
  if (n < 2) throw ArityError("n-gram order must be at least 2");

  std::array<Mdd, 3> tries{Mdd(n, labels), Mdd(n, labels), Mdd(n, labels)};
  std::vector<LabelId> tuple(n);
  for (const NGram& g : ngrams) {
    for (std::size_t i = 0; i < n; ++i) tuple[i] = labels->intern(g.words[i].surface);
    tries[static_cast<std::size_t>(g.position)].insert(std::span<const LabelId>(tuple));
  }
  for (auto& t : tries) t = t.reduce();
  return NgramTrie(n, std::move(labels), std::move(tries));
}

std::vector<LabelId> NgramTrie::successors(std::span<const LabelId> suffix,
                                           WantPosition want) const {
  if (suffix.size() + 1 != order_) {
    throw ArityError("successor query needs " + std::to_string(order_ - 1) + " words, got " +
                     std::to_string(suffix.size()));
  }
  std::vector<LabelId> out;
  switch (want) {
    case WantPosition::kMiddle:
      collect_children(trie(Position::kMiddle), suffix, out);
      return out;
    case WantPosition::kFinal:
      collect_children(trie(Position::kFinal), suffix, out);
      return out;
    case WantPosition::kAny:
      for (const Mdd& t : tries_) collect_children(t, suffix, out);
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
  }
  return out;
}

std::vector<std::string> NgramTrie::successors(std::span<const std::string> suffix,
                                               WantPosition want) const {
  if (suffix.size() + 1 != order_) {
    throw ArityError("successor query needs " + std::to_string(order_ - 1) + " words, got " +
                     std::to_string(suffix.size()));
  }
  std::vector<LabelId> ids;
  for (const auto& w : suffix) {
    auto id = labels_->find(w);
    if (!id) return {};
    ids.push_back(*id);
  }
  std::vector<std::string> out;
  for (LabelId id : successors(std::span<const LabelId>(ids), want)) {
    out.push_back(labels_->name(id));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool NgramTrie::contains(const NGram& g) const {
  if (g.order() != order_) {
    throw ArityError("n-gram of order " + std::to_string(g.order()) + " queried against a trie of order " +
                     std::to_string(order_));
  }
  std::vector<LabelId> ids;
  ids.reserve(order_);
  for (const Token& t : g.words) {
    auto id = labels_->find(t.surface);
    if (!id) return false;
    ids.push_back(*id);
  }
  return trie(g.position).contains(ids);
}

std::vector<LabelId> NgramTrie::alphabet() const {
  std::vector<LabelId> out;
  for (const Mdd& t : tries_) {
    for (NodeId v = 0; v < t.node_capacity(); ++v) {
      for (const Arc& a : t.arcs(v)) out.push_back(a.label);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void NgramTrie::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["format"] = "mnread-trie-bundle";
  manifest["version"] = 1;
  manifest["order"] = order_;
  manifest["labels"] = labels_->size();
  manifest["label_checksum"] = label_table_checksum(*labels_);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto file = dir / kTrieFiles[i];
    save_mdd(tries_[i], file.string());
    manifest["files"][kTrieFiles[i]] = sha256_file(file);
    manifest["paths"][std::string(to_string(static_cast<Position>(i)))] =
        tries_[i].count_paths().str();
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

NgramTrie NgramTrie::load(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw IoError("missing trie manifest in " + dir.string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad trie manifest: ") + e.what(), 0);
  }
  if (manifest.value("format", "") != "mnread-trie-bundle") {
    throw FormatError("not a trie bundle manifest", 0);
  }
  const auto order = manifest.at("order").get<std::size_t>();
  for (const char* name : kTrieFiles) {
    const auto expected = manifest.at("files").at(name).get<std::string>();
    if (sha256_file(dir / name) != expected) {
      throw FormatError(std::string(name) + " does not match its manifest checksum", 0);
    }
  }
  auto first = load_mdd((dir / kTrieFiles[0]).string());
  auto labels = first.label_table();
  std::array<Mdd, 3> tries{std::move(first), load_mdd((dir / kTrieFiles[1]).string(), labels),
                           load_mdd((dir / kTrieFiles[2]).string(), labels)};
  for (const Mdd& t : tries) {
    if (t.depth() != order) throw FormatError("trie depth disagrees with manifest order", 0);
  }
  if (label_table_checksum(*labels) != manifest.at("label_checksum").get<std::string>()) {
    throw FormatError("label table checksum mismatch", 0);
  }
  return NgramTrie(order, std::move(labels), std::move(tries));
}

const SuccessorCache::Entry& SuccessorCache::lookup(std::span<const LabelId> suffix) {
  std::vector<LabelId> key(suffix.begin(), suffix.end());
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Entry e{trie_->successors(suffix, WantPosition::kMiddle),
          trie_->successors(suffix, WantPosition::kFinal)};
  return cache_.emplace(std::move(key), std::move(e)).first->second;
}

std::size_t SuccessorCache::KeyHash::operator()(const std::vector<LabelId>& key) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (LabelId id : key) {
    h ^= id;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string label_table_checksum(const LabelTable& labels) {
  Sha256 h;
  for (LabelId id = 0; id < labels.size(); ++id) {
    h.update(labels.name(id));
    h.update(std::string_view("\n", 1));
  }
  return h.hex();
}

}  // namespace mnread
