// mnreadgen: corpus -> n-grams -> tries -> solution MDD -> sentences -> scores.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mnread/compiler.hpp"
#include "mnread/corpus.hpp"
#include "mnread/digest.hpp"
#include "mnread/errors.hpp"
#include "mnread/mdd.hpp"
#include "mnread/ngram_trie.hpp"
#include "mnread/scoring.hpp"
#include "pipeline_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mnreadgen;

namespace {

enum class Format { kText, kJsonl };

struct Globals {
  std::string config_path;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> limit;
  std::string format = "text";

  Format fmt() const { return format == "jsonl" ? Format::kJsonl : Format::kText; }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

PipelineConfig resolve_config(const Globals& g) {
  PipelineConfig cfg;
  if (!g.config_path.empty()) {
    cfg = load_config(g.config_path);
  } else {
    cfg.output_dir = fs::current_path() / "out";
  }
  if (g.jobs) cfg.jobs = std::max<std::size_t>(1, *g.jobs);
  if (g.limit) cfg.limit = g.limit;
  return cfg;
}

fs::path manifest_of(const fs::path& artifact) {
  return artifact.parent_path() / (artifact.filename().string() + ".manifest.json");
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw mnread::IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw mnread::IoError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw mnread::FormatError(path.string() + ": " + e.what(), 0);
  }
}

/// Checks `artifact` against the sha256 its stage manifest recorded.
void verify_upstream(const fs::path& artifact) {
  if (!fs::exists(artifact)) throw mnread::IoError("missing input " + artifact.string());
  const fs::path m = manifest_of(artifact);
  if (!fs::exists(m)) {
    std::cerr << "warning: no manifest for " << artifact.string() << ", hash not verified\n";
    return;
  }
  const auto expected = read_json(m).at("sha256").get<std::string>();
  if (mnread::sha256_file(artifact) != expected) {
    throw mnread::FormatError(artifact.string() + " does not match the hash in its manifest", 0);
  }
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

std::string config_hash(const json& settings) { return mnread::sha256_hex(settings.dump()); }

std::string corpus_hash(const fs::path& dir) {
  mnread::Sha256 h;
  if (!fs::is_directory(dir)) return h.hex();
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    h.update(f.filename().string());
    h.update(mnread::sha256_file(f));
  }
  return h.hex();
}

std::string join(const std::vector<std::string>& words) {
  std::string s;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) s += ' ';
    s += words[i];
  }
  return s;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw mnread::IoError("cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

void print_mdd_table(std::ostream& out, const std::string& name, const mnread::MddStats& s) {
  out << std::left << std::setw(12) << name << std::right << std::setw(14) << s.arcs
      << std::setw(14) << s.nodes << std::setw(24) << s.solutions.str() << std::setw(10)
      << std::fixed << std::setprecision(3)
      << static_cast<double>(s.peak_rss_bytes) / (1024.0 * 1024.0 * 1024.0) << std::setw(10)
      << std::setprecision(2) << s.seconds << '\n';
}

void print_mdd_header(std::ostream& out) {
  out << std::left << std::setw(12) << "" << std::right << std::setw(14) << "arcs"
      << std::setw(14) << "nodes" << std::setw(24) << "solutions" << std::setw(10) << "GB"
      << std::setw(10) << "s" << '\n';
}

json stats_json(const std::string& name, const mnread::MddStats& s) {
  return json{{"mdd", name},
              {"arcs", s.arcs},
              {"nodes", s.nodes},
              {"solutions", s.solutions.str()},
              {"peak_rss_bytes", s.peak_rss_bytes},
              {"seconds", s.seconds}};
}

// ---- stages ---------------------------------------------------------------

mnread::Extraction run_extract(PipelineConfig& cfg) {
  if (cfg.lexicon.empty()) throw mnread::ConfigError("no lexicon configured");
  const auto lex = mnread::build_lexicon(cfg.lexicon, cfg.inflections, cfg.case_policy);
  if (!fs::is_directory(cfg.corpus_dir)) {
    throw mnread::IoError("corpus directory not found: " + cfg.corpus_dir.string());
  }
  return mnread::extract_corpus(cfg.corpus_dir, lex, cfg.rules, cfg.n, cfg.jobs);
}

json report_json(const mnread::ExtractionReport& r) {
  json rejected = json::object();
  for (auto reason : mnread::kAllFilterReasons) {
    if (reason == mnread::FilterReason::kOk) continue;
    auto it = r.rejected.find(reason);
    rejected[std::string(mnread::to_string(reason))] = it == r.rejected.end() ? 0 : it->second;
  }
  return json{{"files", r.files},
              {"sentences", r.sentences},
              {"accepted", r.accepted},
              {"ambiguous_capitals", r.ambiguous_capitals},
              {"rejected", rejected},
              {"ngrams",
               {{"initial", r.distinct_ngrams[0]},
                {"middle", r.distinct_ngrams[1]},
                {"final", r.distinct_ngrams[2]}}}};
}

int cmd_extract(const Globals& g, const std::string& out_opt) {
  auto cfg = resolve_config(g);
  const auto t0 = Clock::now();
  const auto ex = run_extract(cfg);
  const fs::path out = out_opt.empty() ? cfg.ngrams_path() : fs::path(out_opt);
  ensure_parent(out);
  mnread::write_ngram_file(ex.ngrams, out);

  const fs::path corpus_out = out.parent_path() / "corpus_sentences.txt";
  {
    std::ofstream cs(corpus_out);
    if (!cs) throw mnread::IoError("cannot write " + corpus_out.string());
    for (const auto& s : ex.sentences) {
      std::vector<std::string> words;
      for (const auto& t : s) words.push_back(t.surface);
      cs << join(words) << '\n';
    }
  }
  if (ex.report.files == 0 || ex.ngrams.empty()) {
    std::cerr << "warning: no n-grams extracted from " << cfg.corpus_dir.string() << '\n';
  }
  json settings = extraction_settings(cfg);
  settings["lexicon_sha256"] = mnread::sha256_file(cfg.lexicon);
  if (cfg.inflections) settings["inflections_sha256"] = mnread::sha256_file(*cfg.inflections);
  const json report = report_json(ex.report);
  write_json(manifest_of(out), json{{"stage", "extract"},
                                    {"config_hash", config_hash(settings)},
                                    {"corpus_hash", corpus_hash(cfg.corpus_dir)},
                                    {"order", cfg.n},
                                    {"sha256", mnread::sha256_file(out)},
                                    {"corpus_sentences_sha256", mnread::sha256_file(corpus_out)},
                                    {"report", report},
                                    {"seconds", seconds_since(t0)}});
  if (g.fmt() == Format::kJsonl) {
    std::cout << json{{"ngrams", out.string()}, {"report", report}}.dump() << '\n';
  } else {
    std::cout << "files " << ex.report.files << ", sentences " << ex.report.sentences
              << ", accepted " << ex.report.accepted << '\n';
    for (const auto& [reason, count] : report["rejected"].items()) {
      std::cout << "  rejected " << reason << ": " << count.get<std::size_t>() << '\n';
    }
    std::cout << "n-grams: initial " << ex.report.distinct_ngrams[0] << ", middle "
              << ex.report.distinct_ngrams[1] << ", final " << ex.report.distinct_ngrams[2]
              << " -> " << out.string() << '\n';
  }
  return 0;
}

void print_trie_stats(const Globals& g, const mnread::NgramTrie& trie, double seconds) {
  const char* names[] = {"initial", "middle", "final"};
  if (g.fmt() == Format::kJsonl) {
    for (int p = 0; p < 3; ++p) {
      std::cout << stats_json(names[p], mnread::stats(trie.trie(static_cast<mnread::Position>(p)), seconds)).dump()
                << '\n';
    }
    return;
  }
  print_mdd_header(std::cout);
  for (int p = 0; p < 3; ++p) {
    print_mdd_table(std::cout, names[p],
                    mnread::stats(trie.trie(static_cast<mnread::Position>(p)), seconds));
  }
}

int cmd_build_trie(const Globals& g, const std::string& in_opt, const std::string& out_opt) {
  auto cfg = resolve_config(g);
  const fs::path in = in_opt.empty() ? cfg.ngrams_path() : fs::path(in_opt);
  const fs::path out = out_opt.empty() ? cfg.trie_dir() : fs::path(out_opt);
  verify_upstream(in);
  const auto t0 = Clock::now();
  const auto ngrams = mnread::read_ngram_file(in);
  const auto trie = mnread::NgramTrie::build(ngrams, ngrams.empty() ? cfg.n : 0);
  const double secs = seconds_since(t0);
  trie.save(out);
  json manifest = read_json(out / "manifest.json");
  manifest["source_sha256"] = mnread::sha256_file(in);
  write_json(out / "manifest.json", manifest);
  print_trie_stats(g, trie, secs);
  return 0;
}

mnread::Mdd compile_with(const std::string& method, const mnread::NgramTrie& trie,
                         const mnread::RuleConfig& rules, const mnread::FontMetrics& font) {
  if (method == "unfold") return mnread::unfold(trie, rules, font);
  if (method == "intersect") return mnread::compile_via_intersection(trie, rules, font);
  throw mnread::ConfigError("unknown compile method '" + method + "'");
}

void check_invariants(const mnread::Mdd& mdd) {
  const auto violations = mnread::validate(mdd);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << violations.size() << " structural violations, first: "
      << mnread::to_string(violations.front().kind) << " at node " << violations.front().node
      << " " << violations.front().detail;
  throw mnread::InvariantError(msg.str());
}

int cmd_compile(const Globals& g, const std::string& in_opt, const std::string& out_opt,
                const std::string& method) {
  auto cfg = resolve_config(g);
  const auto font = load_font(cfg);
  const fs::path in = in_opt.empty() ? cfg.trie_dir() : fs::path(in_opt);
  const fs::path out = out_opt.empty() ? cfg.solutions_path() : fs::path(out_opt);
  const auto trie = mnread::NgramTrie::load(in);
  if (trie.order() != cfg.n) {
    std::cerr << "warning: trie order " << trie.order() << " differs from configured n " << cfg.n
              << '\n';
  }
  const auto t0 = Clock::now();
  const auto mdd = compile_with(method, trie, cfg.rules, font);
  const double secs = seconds_since(t0);
  check_invariants(mdd);
  ensure_parent(out);
  mnread::save_mdd(mdd, out.string());
  const auto s = mnread::stats(mdd, secs);
  json settings = compile_settings(cfg);
  settings["font_sha256"] = mnread::sha256_file(cfg.font);
  write_json(manifest_of(out), json{{"stage", "compile"},
                                    {"method", method},
                                    {"config_hash", config_hash(settings)},
                                    {"rules", rules_to_json(cfg.rules)},
                                    {"trie_manifest_sha256", mnread::sha256_file(in / "manifest.json")},
                                    {"sha256", mnread::sha256_file(out)},
                                    {"arcs", s.arcs},
                                    {"nodes", s.nodes},
                                    {"solutions", s.solutions.str()},
                                    {"peak_rss_bytes", s.peak_rss_bytes},
                                    {"seconds", secs}});
  if (g.fmt() == Format::kJsonl) {
    std::cout << stats_json("solutions", s).dump() << '\n';
  } else {
    print_mdd_header(std::cout);
    print_mdd_table(std::cout, "solutions", s);
  }
  return 0;
}

std::vector<std::string> enumerate_sentences(const mnread::Mdd& mdd, std::optional<std::size_t> limit) {
  std::vector<std::string> out;
  mdd.enumerate(limit, [&](std::span<const mnread::LabelId> path) {
    out.push_back(mnread::sentence_text(mnread::sentence_words(mdd.labels(), path)));
  });
  return out;
}

int cmd_enumerate(const Globals& g, const std::string& in_opt, const std::string& out_opt) {
  auto cfg = resolve_config(g);
  const fs::path in = in_opt.empty() ? cfg.solutions_path() : fs::path(in_opt);
  const fs::path out = out_opt.empty() ? cfg.sentences_path() : fs::path(out_opt);
  verify_upstream(in);
  const auto mdd = mnread::load_mdd(in.string());
  const auto sentences = enumerate_sentences(mdd, cfg.limit);
  ensure_parent(out);
  {
    std::ofstream f(out);
    if (!f) throw mnread::IoError("cannot write " + out.string());
    for (const auto& s : sentences) f << s << '\n';
  }
  if (g.fmt() == Format::kJsonl) {
    std::cout << json{{"sentences", sentences.size()}, {"file", out.string()}}.dump() << '\n';
  } else {
    std::cout << sentences.size() << " sentences -> " << out.string() << '\n';
  }
  return 0;
}

std::unique_ptr<mnread::Scorer> make_scorer(const PipelineConfig& cfg, const fs::path& corpus_sentences) {
  switch (cfg.scorer.kind) {
    case ScorerKind::kMarkov: {
      std::vector<std::vector<std::string>> corpus;
      for (const auto& line : read_lines(corpus_sentences)) {
        corpus.push_back(mnread::split_sentence(line));
      }
      auto model = mnread::MarkovModel::train(corpus, cfg.scorer.markov_order, cfg.scorer.markov_alpha);
      return std::make_unique<mnread::MarkovScorer>(std::move(model), cfg.jobs);
    }
    case ScorerKind::kHttp:
      return std::make_unique<mnread::HttpScorer>(mnread::Endpoint::parse(cfg.scorer.endpoint));
    case ScorerKind::kSubprocess:
      return std::make_unique<mnread::SubprocessScorer>(cfg.scorer.command);
  }
  throw mnread::ConfigError("unknown scorer");
}

int cmd_score(const Globals& g, const std::string& in_opt, const std::string& out_opt,
              const std::string& corpus_opt, bool table) {
  auto cfg = resolve_config(g);
  const fs::path in = in_opt.empty() ? cfg.sentences_path() : fs::path(in_opt);
  const fs::path out = out_opt.empty() ? cfg.scores_path() : fs::path(out_opt);
  const fs::path corpus =
      corpus_opt.empty() ? cfg.output_dir / "corpus_sentences.txt" : fs::path(corpus_opt);
  auto lines = read_lines(in);
  if (cfg.limit && lines.size() > *cfg.limit) lines.resize(*cfg.limit);
  std::vector<std::vector<std::string>> sentences;
  for (const auto& l : lines) sentences.push_back(mnread::split_sentence(l));
  auto scorer = make_scorer(cfg, corpus);
  const auto ranked = mnread::score_and_rank(sentences, *scorer, cfg.scorer.batch_size);
  ensure_parent(out);
  std::ofstream f(out);
  if (!f) throw mnread::IoError("cannot write " + out.string());
  for (const auto& r : ranked) {
    const json rec{{"rank", r.rank},
                   {"text", r.text()},
                   {"words", r.words},
                   {"ppl", r.ppl},
                   {"band", mnread::band(r.ppl, cfg.scorer.bands)},
                   {"scorer_id", r.scorer_id}};
    f << rec.dump() << '\n';
    if (g.fmt() == Format::kJsonl) std::cout << rec.dump() << '\n';
  }
  if (g.fmt() == Format::kText) {
    if (table) {
      for (const auto& r : ranked) {
        std::cout << std::setw(6) << r.rank << "  " << std::fixed << std::setprecision(2)
                  << std::setw(9) << r.ppl << "  " << r.text() << '\n';
      }
    }
    std::cout << ranked.size() << " sentences scored by "
              << (ranked.empty() ? scorer->id() : ranked.front().scorer_id) << " -> "
              << out.string() << '\n';
  }
  return 0;
}

int cmd_validate(const Globals& g, const std::string& file) {
  auto cfg = resolve_config(g);
  const auto font = load_font(cfg);
  cfg.rules.validate();
  std::size_t passed = 0;
  const auto lines = read_lines(file);
  for (const auto& line : lines) {
    const auto words = mnread::split_sentence(line);
    const auto v = mnread::check_sentence(std::span<const std::string>(words), cfg.rules, font);
    if (v.pass()) ++passed;
    if (g.fmt() == Format::kJsonl) {
      std::cout << json{{"text", line},
                        {"pass", v.pass()},
                        {"words", words.size()},
                        {"chars", v.char_count},
                        {"word_count_ok", v.word_count_ok},
                        {"char_budget_ok", v.char_budget_ok},
                        {"display_ok", v.display_ok},
                        {"line_starts", v.line_starts}}
                       .dump()
                << '\n';
    } else {
      std::cout << (v.pass() ? "PASS" : "FAIL") << "  words=" << words.size()
                << " chars=" << v.char_count << " count=" << (v.word_count_ok ? "ok" : "bad")
                << " budget=" << (v.char_budget_ok ? "ok" : "bad")
                << " display=" << (v.display_ok ? "ok" : "bad") << "  " << line << '\n';
    }
  }
  if (g.fmt() == Format::kText) {
    std::cout << passed << "/" << lines.size() << " sentences pass\n";
  }
  return 0;
}

int cmd_stats(const Globals& g, const std::string& mdd_path, const std::string& trie_path) {
  auto cfg = resolve_config(g);
  if (!trie_path.empty() || mdd_path.empty()) {
    const fs::path dir = trie_path.empty() ? cfg.trie_dir() : fs::path(trie_path);
    if (fs::exists(dir / "manifest.json")) {
      const auto t0 = Clock::now();
      print_trie_stats(g, mnread::NgramTrie::load(dir), seconds_since(t0));
    }
  }
  const fs::path mp = mdd_path.empty() ? cfg.solutions_path() : fs::path(mdd_path);
  if ((!mdd_path.empty() || trie_path.empty()) && fs::exists(mp)) {
    const auto t0 = Clock::now();
    const auto mdd = mnread::load_mdd(mp.string());
    const auto s = mnread::stats(mdd, seconds_since(t0));
    if (g.fmt() == Format::kJsonl) {
      std::cout << stats_json("solutions", s).dump() << '\n';
    } else {
      print_mdd_header(std::cout);
      print_mdd_table(std::cout, "solutions", s);
    }
  }
  return 0;
}

/// extract -> trie -> compile -> enumerate in one process, no artifacts.
int cmd_run(const Globals& g, const std::string& method, const std::string& out_opt) {
  auto cfg = resolve_config(g);
  const auto font = load_font(cfg);
  const auto ex = run_extract(cfg);
  const auto trie = mnread::NgramTrie::build(ex.ngrams, cfg.n);
  const auto mdd = compile_with(method, trie, cfg.rules, font);
  check_invariants(mdd);
  const auto sentences = enumerate_sentences(mdd, cfg.limit);
  std::ofstream file;
  if (!out_opt.empty()) {
    file.open(out_opt);
    if (!file) throw mnread::IoError("cannot write " + out_opt);
  }
  std::ostream& out = out_opt.empty() ? std::cout : file;
  for (const auto& s : sentences) out << s << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate standardized reading-test sentences from a corpus"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Pipeline configuration (JSON)");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--limit", g.limit, "Maximum number of sentences");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "jsonl"}));

  std::string in, out, method = "unfold", corpus, mdd_path, trie_path;
  bool table = false;

  auto* extract = app.add_subcommand("extract", "Extract typed n-grams from the corpus");
  extract->add_option("--out", out, "N-gram file (default <output_dir>/ngrams.tsv)");

  auto* build = app.add_subcommand("build-trie", "Build the initial/middle/final tries");
  build->add_option("--ngrams", in, "N-gram file");
  build->add_option("--out", out, "Trie bundle directory");

  auto* compile = app.add_subcommand("compile", "Compile the solution MDD");
  compile->add_option("--trie", in, "Trie bundle directory");
  compile->add_option("--out", out, "Solution MDD file");
  compile->add_option("--method", method, "unfold or intersect")
      ->check(CLI::IsMember({"unfold", "intersect"}));

  auto* enumerate = app.add_subcommand("enumerate", "Write every solution as a sentence");
  enumerate->add_option("--mdd", in, "Solution MDD file");
  enumerate->add_option("--out", out, "Sentence file");

  auto* score = app.add_subcommand("score", "Rank sentences by perplexity");
  score->add_option("--sentences", in, "Sentence file");
  score->add_option("--out", out, "JSONL output");
  score->add_option("--corpus-sentences", corpus, "Training sentences for the Markov scorer");
  score->add_flag("--table", table, "Print a ranked table");

  auto* validate = app.add_subcommand("validate", "Check sentences against the rules");
  validate->add_option("file", in, "Sentence file")->required();

  auto* stats = app.add_subcommand("stats", "Arcs, nodes and solutions of stored MDDs");
  stats->add_option("--mdd", mdd_path, "Solution MDD file");
  stats->add_option("--trie", trie_path, "Trie bundle directory");

  auto* run = app.add_subcommand("run", "All stages in memory; sentences to stdout");
  run->add_option("--method", method, "unfold or intersect")
      ->check(CLI::IsMember({"unfold", "intersect"}));
  run->add_option("--out", out, "Sentence file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*extract) return cmd_extract(g, out);
    if (*build) return cmd_build_trie(g, in, out);
    if (*compile) return cmd_compile(g, in, out, method);
    if (*enumerate) return cmd_enumerate(g, in, out);
    if (*score) return cmd_score(g, in, out, corpus, table);
    if (*validate) return cmd_validate(g, in);
    if (*stats) return cmd_stats(g, mdd_path, trie_path);
    if (*run) return cmd_run(g, method, out);
  } catch (const mnread::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const mnread::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
