#include "mnread/compiler.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "mnread/errors.hpp"
#include "mnread/unicode.hpp"

namespace mnread {
namespace {

constexpr NodeId kNone = std::numeric_limits<NodeId>::max();

struct WordInfo {
  int chars = 0;
  std::int64_t width = 0;
  bool non_terminal = false;
};

struct Vocabulary {
  std::vector<WordInfo> info;  // indexed by label id
  std::vector<LabelId> words;  // alphabet without epsilon
  int min_chars = 0;
  int max_chars = 0;
  std::int64_t period_width = 0;
};

Vocabulary measure_vocabulary(const NgramTrie& trie, const RuleConfig& cfg,
                              const FontMetrics& font) {
  cfg.validate();
  const LabelTable& labels = trie.labels();
  Vocabulary v;
  v.info.resize(labels.size());
  for (LabelId id : trie.alphabet()) {
    if (id == kEpsilon) continue;
    const std::string& w = labels.name(id);
    if (!font.covers(w)) throw ConfigError("font metrics do not cover the word '" + w + "'");
    WordInfo& wi = v.info[id];
    wi.chars = static_cast<int>(unicode::length(w));
    wi.width = font.word_width(w);
    wi.non_terminal = cfg.non_terminal_words.contains(w);
    v.words.push_back(id);
  }
  if (cfg.count_period_width) {
    if (!font.covers(U'.')) throw ConfigError("font metrics do not cover '.'");
    v.period_width = font.width(U'.');
  }
  if (!v.words.empty()) {
    auto [mn, mx] = std::minmax_element(v.words.begin(), v.words.end(), [&](LabelId a, LabelId b) {
      return v.info[a].chars < v.info[b].chars;
    });
    v.min_chars = v.info[*mn].chars;
    v.max_chars = v.info[*mx].chars;
  }
  return v;
}

struct LineState {
  std::int16_t line = 0;
  std::int16_t gaps = 0;
  std::int64_t width = 0;

  friend auto operator<=>(const LineState&, const LineState&) = default;
};

/// Line-break bookkeeping of the unfolding. A state carries the set of
/// (line, gaps, width) configurations reachable by some break placement, so
/// the emitted diagram stays deterministic while every placement is kept.
class DisplayRule {
 public:
  DisplayRule(const RuleConfig& cfg, std::int64_t period_width)
      : n_lines_(cfg.n_lines), period_(cfg.count_period_width ? period_width : 0) {
    for (int g = 0; g <= cfg.max_words; ++g) windows_.push_back(line_window(cfg, g));
  }

  void advance(const std::vector<LineState>& in, bool first, std::int64_t w, int words_left,
               std::vector<LineState>& out) const {
    out.clear();
    if (first) {
      if (fits_below_max(0, 0, w)) out.push_back({0, 0, w});
    } else {
      for (const LineState& c : in) {
        const int g = c.gaps + 1;
        if (fits_below_max(c.line, g, c.width + w)) {
          out.push_back({c.line, static_cast<std::int16_t>(g), c.width + w});
        }
        const int next_line = c.line + 1;
        if (next_line < n_lines_ && windows_[c.gaps].contains(c.width) &&
            fits_below_max(next_line, 0, w)) {
          out.push_back({static_cast<std::int16_t>(next_line), 0, w});
        }
      }
    }
    std::erase_if(out, [&](const LineState& c) { return n_lines_ - 1 - c.line > words_left; });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

  bool can_close(const std::vector<LineState>& lines) const {
    return std::any_of(lines.begin(), lines.end(), [&](const LineState& c) {
      return c.line == n_lines_ - 1 && windows_[c.gaps].contains(c.width + period_);
    });
  }

 private:
  bool fits_below_max(int line, int gaps, std::int64_t width) const {
    if (static_cast<std::size_t>(gaps) >= windows_.size()) return false;
    const std::int64_t extra = line == n_lines_ - 1 ? period_ : 0;
    return Rational(width + extra) <= windows_[gaps].hi;
  }

  int n_lines_;
  std::int64_t period_;
  std::vector<LineWindow> windows_;
};

struct UnfoldKey {
  std::vector<LabelId> suffix;
  std::int32_t char_sum = 0;
  std::vector<LineState> lines;

  friend bool operator==(const UnfoldKey&, const UnfoldKey&) = default;
};

struct UnfoldKeyHash {
  std::size_t operator()(const UnfoldKey& k) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(k.char_sum);
    auto mix = [&h](std::uint64_t v) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    for (LabelId id : k.suffix) mix(id);
    for (const LineState& c : k.lines) {
      mix((static_cast<std::uint64_t>(static_cast<std::uint16_t>(c.line)) << 48) ^
          (static_cast<std::uint64_t>(static_cast<std::uint16_t>(c.gaps)) << 32) ^
          static_cast<std::uint64_t>(c.width));
    }
    return static_cast<std::size_t>(h);
  }
};

/// One candidate next word with the position classes its window satisfies.
struct Candidate {
  LabelId label;
  NodeId initial_child;
  bool continues;
  bool ends;
};

/// Candidates after `k` emitted words. The first n words follow the initial
/// trie; later words need the new window in the middle trie (to continue) or
/// the final trie (to end).
void gather_candidates(const NgramTrie& trie, SuccessorCache& cache, std::size_t k,
                       std::span<const LabelId> suffix, NodeId initial_node,
                       std::vector<Candidate>& out) {
  out.clear();
  const std::size_t n = trie.order();
  if (k + 1 < n) {
    for (const Arc& a : trie.trie(Position::kInitial).arcs(initial_node)) {
      out.push_back({a.label, a.child, true, false});
    }
    return;
  }
  const auto& entry = cache.lookup(suffix);
  if (k + 1 == n) {
    for (const Arc& a : trie.trie(Position::kInitial).arcs(initial_node)) {
      const bool ends = std::binary_search(entry.final.begin(), entry.final.end(), a.label);
      out.push_back({a.label, kNone, true, ends});
    }
    return;
  }
  auto m = entry.middle.begin();
  auto f = entry.final.begin();
  while (m != entry.middle.end() || f != entry.final.end()) {
    if (f == entry.final.end() || (m != entry.middle.end() && *m < *f)) {
      out.push_back({*m++, kNone, true, false});
    } else if (m == entry.middle.end() || *f < *m) {
      out.push_back({*f++, kNone, false, true});
    } else {
      out.push_back({*m, kNone, true, true});
      ++m;
      ++f;
    }
  }
}

void push_suffix(std::vector<LabelId>& suffix, LabelId label, std::size_t keep) {
  suffix.push_back(label);
  if (suffix.size() > keep) suffix.erase(suffix.begin());
}

/// Chain of epsilon-only nodes, one per layer, ending in the terminal.
class DoneChain {
 public:
  explicit DoneChain(Mdd& mdd) : mdd_(mdd), nodes_(mdd.depth() + 1, kNone) {
    nodes_[mdd.depth()] = mdd.terminal();
  }

  NodeId at(std::size_t layer) {
    if (nodes_[layer] != kNone) return nodes_[layer];
    const NodeId below = at(layer + 1);
    nodes_[layer] = mdd_.add_node(static_cast<std::uint32_t>(layer));
    mdd_.add_arc(nodes_[layer], kEpsilon, below);
    return nodes_[layer];
  }

 private:
  Mdd& mdd_;
  std::vector<NodeId> nodes_;
};

struct SuccessionKey {
  std::vector<LabelId> suffix;
  bool can_end = false;
  friend bool operator==(const SuccessionKey&, const SuccessionKey&) = default;
};

struct SuccessionKeyHash {
  std::size_t operator()(const SuccessionKey& k) const noexcept {
    std::size_t h = k.can_end ? 0x51ed27 : 0x2545f491;
    for (LabelId id : k.suffix) h = h * 1000003u ^ id;
    return h;
  }
};

using DisplayConfig = std::tuple<int, int, std::int64_t>;

struct DisplayKey {
  std::vector<DisplayConfig> configs;
  bool ended = false;
  friend auto operator<=>(const DisplayKey&, const DisplayKey&) = default;
};

}  // namespace

SentenceVerdict check_sentence(std::span<const std::string> words, const RuleConfig& cfg,
                               const FontMetrics& font) {
  SentenceVerdict v;
  const std::size_t count = words.size();
  std::size_t chars = 0;
  for (const auto& w : words) chars += unicode::length(w);
  v.char_count = count == 0 ? 0 : chars + count - 1;
  v.word_count_ok = count >= static_cast<std::size_t>(cfg.min_words) &&
                    count <= static_cast<std::size_t>(cfg.max_words);
  v.char_budget_ok = count > 0 && v.char_count == static_cast<std::size_t>(cfg.char_budget);

  const auto lines = static_cast<std::size_t>(cfg.n_lines);
  if (count < lines) return v;
  for (const auto& w : words) {
    if (!font.covers(w)) return v;
  }
  if (cfg.count_period_width && !font.covers(U'.')) return v;
  const std::int64_t period = cfg.count_period_width ? font.width(U'.') : 0;

  std::vector<std::int64_t> prefix(count + 1, 0);
  for (std::size_t i = 0; i < count; ++i) prefix[i + 1] = prefix[i] + font.word_width(words[i]);

  // parent[l][i]: start of the l-th line when words [0, i) fill l lines
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<std::size_t>> parent(lines + 1,
                                               std::vector<std::size_t>(count + 1, kUnset));
  parent[0][0] = 0;
  for (std::size_t l = 1; l <= lines; ++l) {
    for (std::size_t i = l; i <= count; ++i) {
      for (std::size_t j = l - 1; j < i; ++j) {
        if (parent[l - 1][j] == kUnset) continue;
        std::int64_t width = prefix[i] - prefix[j];
        if (l == lines && i == count) width += period;
        const auto gaps = static_cast<int>(i - j - 1);
        if (line_window(cfg, gaps).contains(width)) {
          parent[l][i] = j;
          break;
        }
      }
    }
  }
  if (parent[lines][count] == kUnset) return v;
  v.display_ok = true;
  v.line_starts.assign(lines, 0);
  for (std::size_t l = lines, i = count; l > 0; --l) {
    i = parent[l][i];
    v.line_starts[l - 1] = i;
  }
  return v;
}

SentenceVerdict check_sentence(std::span<const Token> words, const RuleConfig& cfg,
                               const FontMetrics& font) {
  std::vector<std::string> surfaces;
  surfaces.reserve(words.size());
  for (const Token& t : words) surfaces.push_back(t.surface);
  return check_sentence(std::span<const std::string>(surfaces), cfg, font);
}

Mdd unfold(const NgramTrie& trie, const RuleConfig& cfg, const FontMetrics& font,
           UnfoldStats* stats) {
  const Vocabulary vocab = measure_vocabulary(trie, cfg, font);
  const std::size_t n = trie.order();
  const int max_words = cfg.max_words;
  const int budget = cfg.char_budget;
  Mdd out(static_cast<std::size_t>(max_words), trie.label_table());
  if (stats) *stats = UnfoldStats{};
  if (vocab.words.empty()) return out;

  const DisplayRule display(cfg, vocab.period_width);
  SuccessorCache cache(trie);
  DoneChain done(out);

  // Can `rest` more characters (spaces included) be spent on m more words,
  // for some m that keeps the word count legal?
  auto reachable = [&](int rest, int words) {
    const int lo = std::max(1, cfg.min_words - words);
    const int hi = max_words - words;
    for (int m = lo; m <= hi; ++m) {
      if (m * (1 + vocab.min_chars) <= rest && rest <= m * (1 + vocab.max_chars)) return true;
    }
    return false;
  };

  struct State {
    UnfoldKey key;
    NodeId node;
    NodeId initial_node;
  };
  std::vector<State> frontier{{UnfoldKey{}, out.root(), trie.trie(Position::kInitial).root()}};
  std::vector<Candidate> candidates;
  std::vector<LineState> lines;
  std::size_t queries = 0;

  for (int k = 0; k < max_words && !frontier.empty(); ++k) {
    if (stats) stats->states_per_layer.push_back(frontier.size());
    const int k1 = k + 1;
    std::vector<State> next;
    std::unordered_map<UnfoldKey, std::size_t, UnfoldKeyHash> index;
    for (const State& s : frontier) {
      gather_candidates(trie, cache, static_cast<std::size_t>(k), s.key.suffix, s.initial_node,
                        candidates);
      ++queries;
      for (const Candidate& c : candidates) {
        const WordInfo& wi = vocab.info[c.label];
        const int chars = s.key.char_sum + (k > 0 ? 1 : 0) + wi.chars;
        if (chars > budget) continue;
        const int rest = budget - chars;
        const bool end_ok = c.ends && rest == 0 && k1 >= cfg.min_words && !wi.non_terminal;
        const bool cont_ok = c.continues && rest > 0 && k1 < max_words && reachable(rest, k1);
        if (!end_ok && !cont_ok) continue;
        display.advance(s.key.lines, k == 0, wi.width, max_words - k1, lines);
        if (end_ok) {
          // rest == 0 here, so the path cannot also continue
          if (display.can_close(lines)) {
            out.add_arc(s.node, c.label, done.at(static_cast<std::size_t>(k1)));
          }
          continue;
        }
        if (lines.empty()) continue;
        UnfoldKey key{s.key.suffix, chars, lines};
        push_suffix(key.suffix, c.label, n - 1);
        auto [it, inserted] = index.try_emplace(std::move(key), next.size());
        if (inserted) {
          const NodeId node = out.add_node(static_cast<std::uint32_t>(k1));
          next.push_back(State{it->first, node, c.initial_child});
        }
        out.add_arc(s.node, c.label, next[it->second].node);
      }
    }
    frontier = std::move(next);
  }
  if (stats) {
    stats->successor_queries = queries;
    stats->distinct_suffixes = cache.size();
  }
  return out.reduce();
}

Mdd succession_mdd(const NgramTrie& trie, const RuleConfig& cfg) {
  cfg.validate();
  const std::size_t n = trie.order();
  const auto depth = static_cast<std::size_t>(cfg.max_words);
  Mdd out(depth, trie.label_table());
  SuccessorCache cache(trie);
  DoneChain done(out);

  using Key = SuccessionKey;
  using KeyHash = SuccessionKeyHash;
  struct State {
    Key key;
    NodeId node;
    NodeId initial_node;
  };

  std::vector<State> frontier{{Key{}, out.root(), trie.trie(Position::kInitial).root()}};
  std::vector<Candidate> candidates;
  for (std::size_t k = 0; k < depth && !frontier.empty(); ++k) {
    const std::size_t k1 = k + 1;
    std::vector<State> next;
    std::unordered_map<Key, std::size_t, KeyHash> index;
    for (const State& s : frontier) {
      if (s.key.can_end) out.add_arc(s.node, kEpsilon, done.at(k1));
      gather_candidates(trie, cache, k, s.key.suffix, s.initial_node, candidates);
      for (const Candidate& c : candidates) {
        const bool ends = c.ends && !cfg.non_terminal_words.contains(trie.labels().name(c.label));
        const bool continues = c.continues && k1 < depth;
        if (!continues) {
          if (ends) out.add_arc(s.node, c.label, done.at(k1));
          continue;
        }
        Key key{s.key.suffix, ends};
        push_suffix(key.suffix, c.label, n - 1);
        auto [it, inserted] = index.try_emplace(std::move(key), next.size());
        if (inserted) {
          next.push_back(State{it->first, out.add_node(static_cast<std::uint32_t>(k1)),
                               c.initial_child});
        }
        out.add_arc(s.node, c.label, next[it->second].node);
      }
    }
    frontier = std::move(next);
  }
  return out.reduce();
}

Mdd word_count_mdd(std::span<const LabelId> alphabet, const RuleConfig& cfg,
                   std::shared_ptr<LabelTable> labels) {
  std::vector<WeightedLabel> layer{{kEpsilon, 0}};
  for (LabelId id : alphabet) {
    if (id != kEpsilon) layer.push_back({id, 1});
  }
  std::vector<std::vector<WeightedLabel>> layers(static_cast<std::size_t>(cfg.max_words), layer);
  return build_weighted_sum_mdd(layers, cfg.min_words, cfg.max_words, std::move(labels));
}

Mdd char_budget_mdd(std::span<const LabelId> alphabet, const RuleConfig& cfg,
                    std::shared_ptr<LabelTable> labels) {
  std::vector<WeightedLabel> layer{{kEpsilon, 0}};
  for (LabelId id : alphabet) {
    if (id == kEpsilon) continue;
    layer.push_back({id, static_cast<std::int64_t>(unicode::length(labels->name(id))) + 1});
  }
  std::vector<std::vector<WeightedLabel>> layers(static_cast<std::size_t>(cfg.max_words), layer);
  const std::int64_t target = cfg.char_budget + 1;
  return build_weighted_sum_mdd(layers, target, target, std::move(labels));
}

namespace {

// A configuration is (line, gaps, width) of the line being filled; a state
// is the sorted set of configurations, or "ended" after epsilon.
class DisplayAutomaton {
 public:
  DisplayAutomaton(const RuleConfig& cfg, const FontMetrics& font, const LabelTable& labels,
                   std::size_t depth)
      : cfg_(cfg), font_(font), labels_(labels), depth_(depth),
        period_(cfg.count_period_width ? font.width(U'.') : 0) {}

  /// State after `label` on layer k; nullopt when no configuration survives.
  /// On the last layer a returned state means the sentence closes.
  std::optional<DisplayKey> step(const DisplayKey& state, LabelId label, std::size_t k) {
    const bool last = k + 1 == depth_;
    if (label == kEpsilon) {
      if (state.ended || closes(state.configs)) return DisplayKey{{}, true};
      return std::nullopt;
    }
    if (state.ended) return std::nullopt;
    const int n_lines = cfg_.n_lines;
    const auto words_left = static_cast<int>(depth_ - k - 1);
    const std::int64_t w = width(label);
    std::vector<DisplayConfig> configs;
    if (k == 0 && under_max(0, 0, w)) configs.emplace_back(0, 0, w);
    for (auto [line, gaps, width] : state.configs) {
      if (under_max(line, gaps + 1, width + w)) configs.emplace_back(line, gaps + 1, width + w);
      if (line + 1 < n_lines && line_window(cfg_, gaps).contains(width) &&
          under_max(line + 1, 0, w)) {
        configs.emplace_back(line + 1, 0, w);
      }
    }
    std::erase_if(configs, [&](const DisplayConfig& c) {
      return n_lines - 1 - std::get<0>(c) > words_left;
    });
    std::sort(configs.begin(), configs.end());
    configs.erase(std::unique(configs.begin(), configs.end()), configs.end());
    if (configs.empty()) return std::nullopt;
    if (last && !closes(configs)) return std::nullopt;
    return DisplayKey{std::move(configs), false};
  }

 private:
  bool closes(const std::vector<DisplayConfig>& configs) const {
    for (auto [line, gaps, width] : configs) {
      if (line == cfg_.n_lines - 1 && line_window(cfg_, gaps).contains(width + period_)) return true;
    }
    return false;
  }

  bool under_max(int line, int gaps, std::int64_t width) const {
    const std::int64_t extra = line == cfg_.n_lines - 1 ? period_ : 0;
    return Rational(width + extra) <= line_window(cfg_, gaps).hi;
  }

  std::int64_t width(LabelId label) {
    auto [it, inserted] = widths_.try_emplace(label, 0);
    if (inserted) it->second = font_.word_width(labels_.name(label));
    return it->second;
  }

  const RuleConfig& cfg_;
  const FontMetrics& font_;
  const LabelTable& labels_;
  std::size_t depth_;
  std::int64_t period_;
  std::unordered_map<LabelId, std::int64_t> widths_;
};

// Paths of `base` accepted by the display automaton, built as the product
// of the two without materializing the automaton's own diagram.
Mdd filter_display(const Mdd& base, const RuleConfig& cfg, const FontMetrics& font) {
  const std::size_t depth = base.depth();
  Mdd out(depth, base.label_table());
  DisplayAutomaton automaton(cfg, font, base.labels(), depth);
  using Pair = std::pair<NodeId, DisplayKey>;
  std::vector<std::pair<Pair, NodeId>> frontier{{{base.root(), DisplayKey{}}, out.root()}};
  for (std::size_t k = 0; k < depth && !frontier.empty(); ++k) {
    const bool last = k + 1 == depth;
    std::map<Pair, NodeId> next_ids;
    std::vector<std::pair<Pair, NodeId>> next;
    for (const auto& [pair, node] : frontier) {
      for (const Arc& arc : base.arcs(pair.first)) {
        auto key = automaton.step(pair.second, arc.label, k);
        if (!key) continue;
        if (last) {
          out.add_arc(node, arc.label, out.terminal());
          continue;
        }
        Pair child{arc.child, std::move(*key)};
        auto [it, inserted] = next_ids.try_emplace(child, 0);
        if (inserted) {
          it->second = out.add_node(static_cast<std::uint32_t>(k + 1));
          next.emplace_back(std::move(child), it->second);
        }
        out.add_arc(node, arc.label, it->second);
      }
    }
    frontier = std::move(next);
  }
  return out.reduce();
}

}  // namespace

Mdd display_mdd(const std::vector<std::vector<LabelId>>& domains, const RuleConfig& cfg,
                const FontMetrics& font, std::shared_ptr<LabelTable> labels) {
  cfg.validate();
  const std::size_t depth = domains.size();
  Mdd out(depth, labels);
  DisplayAutomaton automaton(cfg, font, *labels, depth);
  std::vector<std::pair<DisplayKey, NodeId>> frontier{{DisplayKey{}, out.root()}};
  for (std::size_t k = 0; k < depth && !frontier.empty(); ++k) {
    const bool last = k + 1 == depth;
    std::map<DisplayKey, NodeId> next_ids;
    std::vector<std::pair<DisplayKey, NodeId>> next;
    for (const auto& [state, node] : frontier) {
      for (LabelId label : domains[k]) {
        auto key = automaton.step(state, label, k);
        if (!key) continue;
        if (last) {
          out.add_arc(node, label, out.terminal());
          continue;
        }
        auto [it, inserted] = next_ids.try_emplace(*key, 0);
        if (inserted) {
          it->second = out.add_node(static_cast<std::uint32_t>(k + 1));
          next.emplace_back(std::move(*key), it->second);
        }
        out.add_arc(node, label, it->second);
      }
    }
    frontier = std::move(next);
  }
  return out.reduce();
}

std::vector<std::vector<LabelId>> layer_labels(const Mdd& mdd) {
  const Mdd live = mdd.trim();
  std::vector<std::vector<LabelId>> out(live.depth());
  for (NodeId v = 0; v < live.node_capacity(); ++v) {
    if (live.level(v) >= live.depth()) continue;
    for (const Arc& a : live.arcs(v)) out[live.level(v)].push_back(a.label);
  }
  for (auto& layer : out) {
    std::sort(layer.begin(), layer.end());
    layer.erase(std::unique(layer.begin(), layer.end()), layer.end());
  }
  return out;
}

Mdd compile_via_intersection(const NgramTrie& trie, const RuleConfig& cfg,
                             const FontMetrics& font) {
  const Vocabulary vocab = measure_vocabulary(trie, cfg, font);
  auto labels = trie.label_table();
  Mdd result = succession_mdd(trie, cfg);
  if (result.empty()) return result;
  result = intersect(result, char_budget_mdd(vocab.words, cfg, labels));
  if (result.empty()) return result;
  result = intersect(result, word_count_mdd(vocab.words, cfg, labels));
  if (result.empty()) return result;
  cfg.validate();
  return filter_display(result, cfg, font);
}

std::vector<std::string> sentence_words(const LabelTable& labels, std::span<const LabelId> path) {
  std::vector<std::string> out;
  for (LabelId id : path) {
    if (id != kEpsilon) out.push_back(labels.name(id));
  }
  return out;
}

std::string sentence_text(std::span<const std::string> words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  out += '.';
  return out;
}

MddStats stats(const Mdd& mdd, double elapsed_seconds) {
  MddStats s;
  s.arcs = mdd.arc_count();
  s.nodes = mdd.node_count();
  s.solutions = mdd.count_paths();
  s.peak_rss_bytes = peak_rss_bytes();
  s.seconds = elapsed_seconds;
  return s;
}

std::size_t peak_rss_bytes() {
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      std::istringstream fields(line.substr(6));
      std::size_t kb = 0;
      fields >> kb;
      return kb * 1024;
    }
  }
  return 0;
}

}  // namespace mnread
