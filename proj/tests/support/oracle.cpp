#include "oracle.hpp"

#include <functional>
#include <map>

#include "mnread/compiler.hpp"
#include "pipeline_config.hpp"

namespace oracle {

std::filesystem::path data_dir() { return MNREAD_TEST_DATA; }

std::size_t utf8_length(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

namespace {

std::vector<char32_t> decode(const std::string& s) {
  std::vector<char32_t> out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    const int extra = c < 0x80 ? 0 : c < 0xE0 ? 1 : c < 0xF0 ? 2 : 3;
    char32_t cp = extra == 0 ? c : extra == 1 ? (c & 0x1F) : extra == 2 ? (c & 0x0F) : (c & 0x07);
    for (int k = 1; k <= extra && i + static_cast<std::size_t>(k) < s.size(); ++k) {
      cp = (cp << 6) | (static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]) & 0x3F);
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(extra) + 1;
  }
  return out;
}

std::int64_t width_of(const std::string& word, const mnread::FontMetrics& font) {
  std::int64_t w = 0;
  for (char32_t c : decode(word)) w += font.width(c);
  return w;
}

bool line_fits(std::int64_t words_width, std::int64_t gaps, const mnread::RuleConfig& cfg) {
  const std::int64_t slack = cfg.box_width - words_width;
  if (gaps == 0) return slack == 0;
  const mnread::Rational factor(slack, gaps * cfg.space_width);
  return cfg.space_min_factor <= factor && factor <= cfg.space_max_factor;
}

}  // namespace

bool display_feasible(const Sentence& words, const mnread::RuleConfig& cfg,
                      const mnread::FontMetrics& font) {
  for (const auto& w : words) {
    if (!font.covers(w)) return false;
  }
  std::vector<std::int64_t> widths;
  for (const auto& w : words) widths.push_back(width_of(w, font));
  const std::int64_t period = cfg.count_period_width ? font.width(U'.') : 0;
  const auto lines = static_cast<std::size_t>(cfg.n_lines);

  std::function<bool(std::size_t, std::size_t)> place = [&](std::size_t start, std::size_t line) {
    const std::size_t remaining_lines = lines - line;
    if (remaining_lines == 1) {
      std::int64_t w = period;
      for (std::size_t i = start; i < widths.size(); ++i) w += widths[i];
      const auto count = static_cast<std::int64_t>(widths.size() - start);
      return count > 0 && line_fits(w, count - 1, cfg);
    }
    std::int64_t w = 0;
    for (std::size_t end = start + 1; end + remaining_lines - 1 <= widths.size(); ++end) {
      w += widths[end - 1];
      if (line_fits(w, static_cast<std::int64_t>(end - start - 1), cfg) && place(end, line + 1)) {
        return true;
      }
    }
    return false;
  };
  return words.size() >= lines && place(0, 0);
}

bool satisfies_rules(const Sentence& words, const mnread::RuleConfig& cfg,
                     const mnread::FontMetrics& font) {
  const auto count = static_cast<int>(words.size());
  if (count < cfg.min_words || count > cfg.max_words) return false;
  std::size_t chars = words.size() - 1;
  for (const auto& w : words) chars += utf8_length(w);
  if (chars != static_cast<std::size_t>(cfg.char_budget)) return false;
  if (cfg.non_terminal_words.contains(words.back())) return false;
  return display_feasible(words, cfg, font);
}

SentenceSet brute_force(const std::vector<mnread::NGram>& ngrams, std::size_t n,
                        const mnread::RuleConfig& cfg, const mnread::FontMetrics& font) {
  std::set<Sentence> initial, middle, final;
  std::map<Sentence, std::set<std::string>> next;  // (n-1)-word prefix -> words
  for (const auto& g : ngrams) {
    const Sentence s = g.surfaces();
    switch (g.position) {
      case mnread::Position::kInitial: initial.insert(s); break;
      case mnread::Position::kMiddle: middle.insert(s); break;
      case mnread::Position::kFinal: final.insert(s); break;
    }
    next[Sentence(s.begin(), s.end() - 1)].insert(s.back());
  }

  auto window = [&](const Sentence& s, std::size_t i) {
    return Sentence(s.begin() + static_cast<std::ptrdiff_t>(i),
                    s.begin() + static_cast<std::ptrdiff_t>(i + n));
  };
  auto chained = [&](const Sentence& s) {
    const std::size_t windows = s.size() - n + 1;
    if (windows == 1) return initial.contains(s) && final.contains(s);
    if (!initial.contains(window(s, 0)) || !final.contains(window(s, windows - 1))) return false;
    for (std::size_t i = 1; i + 1 < windows; ++i) {
      if (!middle.contains(window(s, i))) return false;
    }
    return true;
  };

  SentenceSet out;
  std::function<void(Sentence&, std::size_t)> grow = [&](Sentence& s, std::size_t chars) {
    if (chained(s) && satisfies_rules(s, cfg, font)) out.insert(s);
    if (static_cast<int>(s.size()) >= cfg.max_words) return;
    auto it = next.find(Sentence(s.end() - static_cast<std::ptrdiff_t>(n - 1), s.end()));
    if (it == next.end()) return;
    for (const auto& w : it->second) {
      const std::size_t c = chars + 1 + utf8_length(w);
      if (c > static_cast<std::size_t>(cfg.char_budget)) continue;
      s.push_back(w);
      grow(s, c);
      s.pop_back();
    }
  };
  for (const auto& g : initial) {
    Sentence s = g;
    std::size_t chars = s.size() - 1;
    for (const auto& w : s) chars += utf8_length(w);
    if (chars > static_cast<std::size_t>(cfg.char_budget)) continue;
    grow(s, chars);
  }
  return out;
}

SentenceSet mdd_sentences(const mnread::Mdd& mdd) {
  SentenceSet out;
  mdd.enumerate(std::nullopt, [&](std::span<const mnread::LabelId> path) {
    out.insert(mnread::sentence_words(mdd.labels(), path));
  });
  return out;
}

std::vector<mnread::LabelId> padded_path(const mnread::Mdd& mdd, const Sentence& words) {
  if (words.size() > mdd.depth()) return {};
  std::vector<mnread::LabelId> path;
  for (const auto& w : words) {
    auto id = mdd.labels().find(w);
    if (!id) return {};
    path.push_back(*id);
  }
  path.resize(mdd.depth(), mnread::kEpsilon);
  return path;
}

Fixture load_fixture(const std::string& name) {
  auto cfg = mnreadgen::load_config(data_dir() / name / "config.json");
  Fixture f;
  f.name = name;
  f.n = cfg.n;
  f.font = mnreadgen::load_font(cfg);
  f.rules = cfg.rules;
  const auto lex = mnread::build_lexicon(cfg.lexicon, cfg.inflections, cfg.case_policy);
  f.extraction = mnread::extract_corpus(cfg.corpus_dir, lex, cfg.rules, cfg.n);
  return f;
}

RandomMdd random_mdd(std::mt19937_64& rng, std::size_t max_paths) {
  static const std::vector<std::string> kAlphabet{"a", "b", "c", "d", "e"};
  for (;;) {
    const std::size_t depth = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    const std::size_t labels = std::uniform_int_distribution<std::size_t>(2, kAlphabet.size())(rng);
    // layers[i][k] = arcs (label index, child index in layer i+1) of node k
    std::vector<std::vector<std::vector<std::pair<std::size_t, std::size_t>>>> layers(depth);
    for (std::size_t i = 0; i < depth; ++i) {
      const std::size_t width = i == 0 ? 1 : std::uniform_int_distribution<std::size_t>(1, 6)(rng);
      const std::size_t below = i + 1 == depth ? 1 : std::uniform_int_distribution<std::size_t>(1, 6)(rng);
      layers[i].resize(width);
      if (i > 0 && layers[i - 1].size() > 0) {
        // keep child indices of the layer above within range
        for (auto& node : layers[i - 1]) {
          for (auto& arc : node) arc.second %= width;
        }
      }
      for (std::size_t k = 0; k < width; ++k) {
        if (k > 0 && std::bernoulli_distribution(0.3)(rng)) {
          layers[i][k] = layers[i][k - 1];  // a duplicate for reduce to merge
          continue;
        }
        for (std::size_t l = 0; l < labels; ++l) {
          if (std::bernoulli_distribution(0.55)(rng)) {
            layers[i][k].emplace_back(l, std::uniform_int_distribution<std::size_t>(0, below - 1)(rng));
          }
        }
      }
    }
    for (auto& node : layers[depth - 1]) {
      for (auto& arc : node) arc.second = 0;
    }

    std::set<std::vector<std::string>> paths;
    std::vector<std::string> cur;
    bool too_many = false;
    std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t i, std::size_t k) {
      if (too_many) return;
      if (i == depth) {
        paths.insert(cur);
        if (paths.size() > max_paths) too_many = true;
        return;
      }
      for (auto [l, child] : layers[i][k]) {
        cur.push_back(kAlphabet[l]);
        walk(i + 1, child);
        cur.pop_back();
      }
    };
    walk(0, 0);
    if (too_many) continue;

    mnread::Mdd mdd(depth);
    std::vector<std::vector<mnread::NodeId>> ids(depth + 1);
    ids[0] = {mdd.root()};
    ids[depth] = {mdd.terminal()};
    for (std::size_t i = 1; i < depth; ++i) {
      for (std::size_t k = 0; k < layers[i].size(); ++k) {
        ids[i].push_back(mdd.add_node(static_cast<std::uint32_t>(i)));
      }
    }
    for (std::size_t i = 0; i < depth; ++i) {
      for (std::size_t k = 0; k < layers[i].size(); ++k) {
        for (auto [l, child] : layers[i][k]) {
          mdd.add_arc(ids[i][k], mdd.labels().intern(kAlphabet[l]), ids[i + 1][child]);
        }
      }
    }
    return RandomMdd{std::move(mdd), std::move(paths)};
  }
}

}  // namespace oracle
