#include "mnread/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "mnread/errors.hpp"
#include "mnread/unicode.hpp"

namespace mnread {
namespace {

bool is_terminal(char32_t c) { return c == U'.' || c == U'?' || c == U'!'; }

bool is_closer(char32_t c) {
  return c == U'"' || c == U'\'' || c == U'”' || c == U'’' || c == U'»' || c == U')' ||
         c == U']';
}

bool is_apostrophe(char32_t c) { return c == U'\'' || c == U'’'; }

std::string_view trim_ascii(std::string_view s) {
  auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

/// Splits on Unicode whitespace.
std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::u32string current;
  auto flush = [&] {
    if (current.empty()) return;
    std::string word;
    for (char32_t c : current) word += unicode::encode(c);
    out.push_back(std::move(word));
    current.clear();
  };
  for (char32_t c : unicode::code_points(text)) {
    if (unicode::is_space(c)) {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return out;
}

/// "l'école" -> {"l'", "école"}.
std::vector<std::string> split_elisions(const std::string& word) {
  std::vector<std::string> parts;
  std::string current;
  for (char32_t c : unicode::code_points(word)) {
    current += unicode::encode(c);
    if (is_apostrophe(c)) {
      parts.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) parts.push_back(std::move(current));
  return parts;
}

std::string_view body_of(const RawSentence& s) {
  std::string_view body = trim_ascii(s.text);
  if (!body.empty() && body.back() == '.') body.remove_suffix(1);
  return body;
}

std::vector<std::string> words_of(const RawSentence& s, const RuleConfig& cfg) {
  auto words = split_words(body_of(s));
  if (cfg.apostrophe_policy != ApostrophePolicy::kSplit) return words;
  std::vector<std::string> out;
  for (const auto& w : words) {
    for (auto& part : split_elisions(w)) out.push_back(std::move(part));
  }
  return out;
}

struct DocumentResult {
  std::size_t sentences = 0;
  std::size_t accepted = 0;
  std::size_t ambiguous = 0;
  std::map<FilterReason, std::size_t> rejected;
  std::vector<std::vector<Token>> token_lists;
  std::vector<NGram> ngrams;
};

DocumentResult process_document(const std::string& source_id, const std::string& text,
                                const Lexicon& lex, const RuleConfig& cfg, std::size_t n) {
  DocumentResult result;
  for (const RawSentence& s : segment_sentences(unicode::nfc(text), source_id)) {
    ++result.sentences;
    const FilterReport report = filter_sentence(s, lex, cfg, n);
    if (!report.accepted) {
      ++result.rejected[report.reason];
      continue;
    }
    ++result.accepted;
    result.ambiguous += report.ambiguous_capital;
    auto tokens = tokenize(s, cfg);
    auto grams = extract_ngrams(tokens, n);
    result.ngrams.insert(result.ngrams.end(), std::make_move_iterator(grams.begin()),
                         std::make_move_iterator(grams.end()));
    result.token_lists.push_back(std::move(tokens));
  }
  return result;
}

}  // namespace

Token::Token(std::string s) : surface(std::move(s)), char_len(unicode::length(surface)) {
  if (surface.empty()) throw TokenizationError("empty token");
}

std::string_view to_string(Position p) {
  switch (p) {
    case Position::kInitial: return "initial";
    case Position::kMiddle: return "middle";
    case Position::kFinal: return "final";
  }
  return "middle";
}

std::optional<Position> parse_position(std::string_view s) {
  if (s == "initial") return Position::kInitial;
  if (s == "middle") return Position::kMiddle;
  if (s == "final") return Position::kFinal;
  return std::nullopt;
}

std::vector<std::string> NGram::surfaces() const {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const Token& t : words) out.push_back(t.surface);
  return out;
}

Lexicon::Lexicon(std::set<std::string> lemmas,
                 std::unordered_map<std::string, std::string> inflections, CasePolicy policy)
    : lemmas_(std::move(lemmas)), inflections_(std::move(inflections)), policy_(policy) {
  for (const auto& [surface, lemma] : inflections_) {
    if (!lemmas_.contains(lemma)) {
      throw FormatError("inflection " + surface + " -> " + lemma + " names an unknown lemma", 0);
    }
  }
}

std::optional<std::string> Lexicon::resolve(std::string_view surface) const {
  std::string key =
      policy_ == CasePolicy::kLowercase ? unicode::to_lower(surface) : std::string(surface);
  if (auto it = inflections_.find(key); it != inflections_.end()) return it->second;
  if (lemmas_.contains(key)) return key;
  return std::nullopt;
}

bool Lexicon::covers(std::string_view surface) const {
  if (resolve(surface)) return true;
  auto parts = split_elisions(std::string(surface));
  if (parts.size() < 2) return false;
  return std::all_of(parts.begin(), parts.end(), [&](const std::string& part) {
    if (resolve(part)) return true;
    auto cps = unicode::code_points(part);
    if (cps.size() > 1 && is_apostrophe(cps.back())) {
      std::string bare;
      for (std::size_t i = 0; i + 1 < cps.size(); ++i) bare += unicode::encode(cps[i]);
      return resolve(bare).has_value();
    }
    return false;
  });
}

Lexicon build_lexicon(const std::filesystem::path& lemma_file,
                      const std::optional<std::filesystem::path>& inflection_file,
                      CasePolicy policy) {
  auto normalize = [policy](std::string_view s) {
    auto v = unicode::nfc(s);
    return policy == CasePolicy::kLowercase ? unicode::to_lower(v) : v;
  };

  std::ifstream lemmas_in(lemma_file);
  if (!lemmas_in) throw IoError("cannot open lemma file " + lemma_file.string());
  std::set<std::string> lemmas;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lemmas_in, line)) {
    ++line_no;
    auto entry = trim_ascii(line);
    if (entry.empty()) continue;
    if (entry.find_first_of(" \t") != std::string_view::npos) {
      throw FormatError(lemma_file.string() + ": one lemma per line expected", line_no);
    }
    try {
      lemmas.insert(normalize(entry));
    } catch (const FormatError& e) {
      throw FormatError(lemma_file.string() + ": " + e.what(), line_no);
    }
  }

  std::unordered_map<std::string, std::string> inflections;
  if (inflection_file) {
    std::ifstream infl_in(*inflection_file);
    if (!infl_in) throw IoError("cannot open inflection file " + inflection_file->string());
    line_no = 0;
    while (std::getline(infl_in, line)) {
      ++line_no;
      auto row = trim_ascii(line);
      if (row.empty()) continue;
      const auto tab = row.find('\t');
      if (tab == std::string_view::npos || row.find('\t', tab + 1) != std::string_view::npos) {
        throw FormatError(inflection_file->string() + ": expected surface<TAB>lemma", line_no);
      }
      auto surface = trim_ascii(row.substr(0, tab));
      auto lemma = trim_ascii(row.substr(tab + 1));
      if (surface.empty() || lemma.empty()) {
        throw FormatError(inflection_file->string() + ": empty column", line_no);
      }
      auto lemma_key = normalize(lemma);
      if (!lemmas.contains(lemma_key)) {
        throw FormatError(inflection_file->string() + ": lemma '" + lemma_key +
                              "' is not in the lemma list",
                          line_no);
      }
      inflections[normalize(surface)] = std::move(lemma_key);
    }
  }
  return Lexicon(std::move(lemmas), std::move(inflections), policy);
}

std::string_view to_string(FilterReason r) {
  switch (r) {
    case FilterReason::kOk: return "ok";
    case FilterReason::kNotDeclarative: return "not_declarative";
    case FilterReason::kForbiddenPunctuation: return "forbidden_punctuation";
    case FilterReason::kProperNoun: return "proper_noun";
    case FilterReason::kOutOfLexicon: return "out_of_lexicon";
    case FilterReason::kTooShort: return "too_short";
  }
  return "unknown";
}

std::vector<RawSentence> segment_sentences(std::string_view text, std::string_view source_id) {
  std::vector<RawSentence> out;
  if (text.empty()) return out;

  // code points with their byte offsets
  std::vector<char32_t> cps;
  std::vector<std::size_t> offsets;
  {
    std::size_t pos = 0;
    for (char32_t c : unicode::code_points(text)) {
      cps.push_back(c);
      offsets.push_back(pos);
      pos += unicode::encode(c).size();
    }
    offsets.push_back(text.size());
  }
  const std::size_t n = cps.size();
  auto skip_space = [&](std::size_t i) {
    while (i < n && unicode::is_space(cps[i])) ++i;
    return i;
  };

  std::size_t start = skip_space(0);
  std::size_t i = start;
  while (i < n) {
    const char32_t c = cps[i];
    if (c == U'\n') {
      std::size_t j = i + 1;
      while (j < n && (cps[j] == U' ' || cps[j] == U'\t' || cps[j] == U'\r')) ++j;
      if (j < n && cps[j] == U'\n') {
        // blank line: drop any unterminated fragment
        start = skip_space(j);
        i = start;
        continue;
      }
      ++i;
      continue;
    }
    if (!is_terminal(c)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    std::size_t dots = 0;
    while (j < n && is_terminal(cps[j])) dots += cps[j++] == U'.';
    std::size_t k = j;
    while (k < n && is_closer(cps[k])) ++k;
    if (k < n && !unicode::is_space(cps[k])) {
      i = j;
      continue;
    }
    const std::size_t next = skip_space(k);
    if (dots >= 2 && next < n && unicode::is_lower(cps[next])) {
      i = j;
      continue;
    }
    auto span = trim_ascii(text.substr(offsets[start], offsets[j] - offsets[start]));
    if (!span.empty()) {
      out.push_back(RawSentence{std::string(span), std::string(source_id), out.size()});
    }
    start = next;
    i = next;
  }
  return out;
}

FilterReport filter_sentence(const RawSentence& s, const Lexicon& lex, const RuleConfig& cfg,
                             std::size_t min_tokens) {
  auto reject = [](FilterReason r) { return FilterReport{false, r, false}; };
  const std::string_view text = trim_ascii(s.text);
  if (text.empty() || text.back() != '.') return reject(FilterReason::kNotDeclarative);

  for (char32_t c : unicode::code_points(body_of(s))) {
    if (cfg.is_forbidden(c)) return reject(FilterReason::kForbiddenPunctuation);
  }

  const auto words = words_of(s, cfg);
  if (words.size() < std::max<std::size_t>(min_tokens, 1)) {
    return reject(FilterReason::kTooShort);
  }

  bool ambiguous = false;
  for (std::size_t i = 1; i < words.size(); ++i) {
    if (!unicode::starts_upper(words[i])) continue;
    if (!lex.covers(words[i])) return reject(FilterReason::kProperNoun);
    ambiguous = true;
  }
  for (const auto& w : words) {
    if (!lex.covers(w)) return reject(FilterReason::kOutOfLexicon);
  }
  return FilterReport{true, FilterReason::kOk, ambiguous};
}

std::vector<Token> tokenize(const RawSentence& s, const RuleConfig& cfg) {
  std::vector<Token> out;
  for (auto& word : words_of(s, cfg)) {
    for (char32_t c : unicode::code_points(word)) {
      if (cfg.is_forbidden(c)) {
        throw TokenizationError("token '" + word + "' contains forbidden character '" +
                                unicode::encode(c) + "'");
      }
    }
    out.emplace_back(std::move(word));
  }
  return out;
}

std::vector<NGram> extract_ngrams(const std::vector<Token>& tokens, std::size_t n) {
  if (n < 2) throw ConfigError("n-gram order must be at least 2");
  std::vector<NGram> out;
  if (tokens.size() < n) return out;
  const std::size_t windows = tokens.size() - n + 1;
  for (std::size_t i = 0; i < windows; ++i) {
    std::vector<Token> words(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                             tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
    if (windows == 1) {
      out.push_back(NGram{words, Position::kInitial});
      out.push_back(NGram{std::move(words), Position::kFinal});
    } else {
      const Position p = i == 0 ? Position::kInitial
                         : i + 1 == windows ? Position::kFinal
                                            : Position::kMiddle;
      out.push_back(NGram{std::move(words), p});
    }
  }
  return out;
}

Extraction extract_documents(const std::vector<std::pair<std::string, std::string>>& docs,
                             const Lexicon& lex, const RuleConfig& cfg, std::size_t n,
                             std::size_t jobs) {
  if (n < 2) throw ConfigError("n-gram order must be at least 2");
  std::vector<DocumentResult> results(docs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < docs.size(); i = next++) {
      results[i] = process_document(docs[i].first, docs[i].second, lex, cfg, n);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(docs.size(), 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  Extraction ex;
  ex.order = n;
  ex.report.files = docs.size();
  for (auto& r : results) {
    ex.report.sentences += r.sentences;
    ex.report.accepted += r.accepted;
    ex.report.ambiguous_capitals += r.ambiguous;
    for (auto [reason, count] : r.rejected) ex.report.rejected[reason] += count;
    ex.ngrams.insert(ex.ngrams.end(), std::make_move_iterator(r.ngrams.begin()),
                     std::make_move_iterator(r.ngrams.end()));
    for (auto& t : r.token_lists) ex.sentences.push_back(std::move(t));
  }
  std::sort(ex.ngrams.begin(), ex.ngrams.end());
  ex.ngrams.erase(std::unique(ex.ngrams.begin(), ex.ngrams.end()), ex.ngrams.end());
  for (const NGram& g : ex.ngrams) ++ex.report.distinct_ngrams[static_cast<std::size_t>(g.position)];
  return ex;
}

Extraction extract_corpus(const std::filesystem::path& dir, const Lexicon& lex,
                          const RuleConfig& cfg, std::size_t n, std::size_t jobs) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("corpus directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, std::string>> docs;
  docs.reserve(files.size());
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw IoError("cannot read " + f.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    docs.emplace_back(f.filename().string(), buf.str());
  }
  return extract_documents(docs, lex, cfg, n, jobs);
}

void write_ngram_file(const std::vector<NGram>& ngrams, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const NGram& g : ngrams) {
    out << to_string(g.position) << '\t';
    for (std::size_t i = 0; i < g.words.size(); ++i) {
      if (i) out << ' ';
      out << g.words[i].surface;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<NGram> read_ngram_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<NGram> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError("expected position<TAB>words", line_no);
    auto pos = parse_position(std::string_view(line).substr(0, tab));
    if (!pos) throw FormatError("unknown position '" + line.substr(0, tab) + "'", line_no);
    NGram g;
    g.position = *pos;
    std::istringstream words(line.substr(tab + 1));
    std::string w;
    while (words >> w) g.words.emplace_back(std::move(w));
    if (g.words.size() < 2) throw FormatError("n-gram needs at least two words", line_no);
    if (!out.empty() && out.front().order() != g.order()) {
      throw MixedArityError("n-gram file mixes orders " + std::to_string(out.front().order()) +
                            " and " + std::to_string(g.order()) + " (line " +
                            std::to_string(line_no) + ")");
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace mnread
