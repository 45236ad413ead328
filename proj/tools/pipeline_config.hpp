#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mnread/corpus.hpp"
#include "mnread/rules.hpp"
#include "mnread/scoring.hpp"

namespace mnreadgen {

enum class ScorerKind { kMarkov, kHttp, kSubprocess };

struct ScorerConfig {
  ScorerKind kind = ScorerKind::kMarkov;
  int markov_order = 2;
  double markov_alpha = 0.1;
  std::string endpoint;                // http
  std::vector<std::string> command;    // subprocess
  std::size_t batch_size = 64;
  mnread::PplBands bands;
};

/// Everything a stage needs. Relative paths in the JSON file are resolved
/// against the file's directory.
struct PipelineConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path lexicon;
  std::optional<std::filesystem::path> inflections;
  mnread::CasePolicy case_policy = mnread::CasePolicy::kLowercase;
  std::size_t n = 5;
  std::filesystem::path font;
  mnread::RuleConfig rules;
  ScorerConfig scorer;
  std::filesystem::path output_dir = "out";
  std::size_t jobs = 1;
  std::optional<std::size_t> limit;
  std::uint64_t seed = 0;

  std::filesystem::path ngrams_path() const { return output_dir / "ngrams.tsv"; }
  std::filesystem::path trie_dir() const { return output_dir / "trie"; }
  std::filesystem::path solutions_path() const { return output_dir / "solutions.mdd"; }
  std::filesystem::path sentences_path() const { return output_dir / "sentences.txt"; }
  std::filesystem::path scores_path() const { return output_dir / "scores.jsonl"; }
};

/// Throws ConfigError on unknown keys, bad types or n < 2.
PipelineConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

nlohmann::json rules_to_json(const mnread::RuleConfig& cfg);
mnread::RuleConfig rules_from_json(const nlohmann::json& j);

/// Canonical JSON of the settings that shape each artifact.
nlohmann::json extraction_settings(const PipelineConfig& cfg);
nlohmann::json compile_settings(const PipelineConfig& cfg);

/// Loads the font and fills box/space widths from its directives when the
/// rules leave them at 0.
mnread::FontMetrics load_font(PipelineConfig& cfg);

}  // namespace mnreadgen
