#include "pipeline_config.hpp"

#include <fstream>
#include <set>

#include "mnread/errors.hpp"
#include "mnread/unicode.hpp"

namespace mnreadgen {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw mnread::ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw mnread::ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw mnread::ConfigError(where + "." + key + ": " + e.what());
  }
}

mnread::Rational rational_field(const json& j) {
  if (j.is_string()) return mnread::parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return mnread::Rational(j.get<std::int64_t>());
  throw mnread::ConfigError("factors are written as strings (\"4/5\", \"0.8\") or integers");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

json rules_to_json(const mnread::RuleConfig& cfg) {
  std::string punct;
  for (char32_t c : cfg.forbidden_punct) punct += mnread::unicode::encode(c);
  return json{
      {"min_words", cfg.min_words},
      {"max_words", cfg.max_words},
      {"char_budget", cfg.char_budget},
      {"n_lines", cfg.n_lines},
      {"space_min_factor", mnread::to_string(cfg.space_min_factor)},
      {"space_max_factor", mnread::to_string(cfg.space_max_factor)},
      {"box_width", cfg.box_width},
      {"space_width", cfg.space_width},
      {"forbidden_punct", punct},
      {"non_terminal_words", cfg.non_terminal_words},
      {"apostrophe_policy",
       cfg.apostrophe_policy == mnread::ApostrophePolicy::kKeep ? "keep" : "split"},
      {"count_period_width", cfg.count_period_width},
  };
}

mnread::RuleConfig rules_from_json(const json& j) {
  const std::string where = "rules";
  reject_unknown(j,
                 {"min_words", "max_words", "char_budget", "n_lines", "space_min_factor",
                  "space_max_factor", "box_width", "space_width", "forbidden_punct",
                  "non_terminal_words", "apostrophe_policy", "count_period_width"},
                 where);
  mnread::RuleConfig cfg;
  if (j.contains("min_words")) cfg.min_words = get<int>(j, "min_words", where);
  if (j.contains("max_words")) cfg.max_words = get<int>(j, "max_words", where);
  if (j.contains("char_budget")) cfg.char_budget = get<int>(j, "char_budget", where);
  if (j.contains("n_lines")) cfg.n_lines = get<int>(j, "n_lines", where);
  if (j.contains("space_min_factor")) cfg.space_min_factor = rational_field(j["space_min_factor"]);
  if (j.contains("space_max_factor")) cfg.space_max_factor = rational_field(j["space_max_factor"]);
  if (j.contains("box_width")) cfg.box_width = get<std::int64_t>(j, "box_width", where);
  if (j.contains("space_width")) cfg.space_width = get<std::int64_t>(j, "space_width", where);
  if (j.contains("forbidden_punct")) {
    const auto cps = mnread::unicode::code_points(get<std::string>(j, "forbidden_punct", where));
    cfg.forbidden_punct.assign(cps.begin(), cps.end());
  }
  if (j.contains("non_terminal_words")) {
    cfg.non_terminal_words = get<std::set<std::string>>(j, "non_terminal_words", where);
  }
  if (j.contains("apostrophe_policy")) {
    const auto p = get<std::string>(j, "apostrophe_policy", where);
    if (p == "keep") {
      cfg.apostrophe_policy = mnread::ApostrophePolicy::kKeep;
    } else if (p == "split") {
      cfg.apostrophe_policy = mnread::ApostrophePolicy::kSplit;
    } else {
      throw mnread::ConfigError("apostrophe_policy is 'keep' or 'split'");
    }
  }
  if (j.contains("count_period_width")) {
    cfg.count_period_width = get<bool>(j, "count_period_width", where);
  }
  return cfg;
}

PipelineConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  const std::string where = "config";
  reject_unknown(j,
                 {"corpus_dir", "lexicon", "inflections", "case_policy", "n", "font", "rules",
                  "scorer", "output_dir", "jobs", "limit", "seed"},
                 where);
  PipelineConfig cfg;
  if (j.contains("corpus_dir")) cfg.corpus_dir = resolve(base_dir, get<std::string>(j, "corpus_dir", where));
  if (j.contains("lexicon")) cfg.lexicon = resolve(base_dir, get<std::string>(j, "lexicon", where));
  if (j.contains("inflections") && !j["inflections"].is_null()) {
    cfg.inflections = resolve(base_dir, get<std::string>(j, "inflections", where));
  }
  if (j.contains("case_policy")) {
    const auto p = get<std::string>(j, "case_policy", where);
    if (p == "lowercase") {
      cfg.case_policy = mnread::CasePolicy::kLowercase;
    } else if (p == "exact") {
      cfg.case_policy = mnread::CasePolicy::kExact;
    } else {
      throw mnread::ConfigError("case_policy is 'lowercase' or 'exact'");
    }
  }
  if (j.contains("n")) {
    const auto n = get<long long>(j, "n", where);
    if (n < 2) throw mnread::ConfigError("n must be at least 2");
    cfg.n = static_cast<std::size_t>(n);
  }
  if (j.contains("font")) cfg.font = resolve(base_dir, get<std::string>(j, "font", where));
  if (j.contains("rules")) cfg.rules = rules_from_json(j["rules"]);
  if (j.contains("output_dir")) cfg.output_dir = resolve(base_dir, get<std::string>(j, "output_dir", where));
  else cfg.output_dir = resolve(base_dir, "out");
  if (j.contains("jobs")) cfg.jobs = std::max<std::size_t>(1, get<std::size_t>(j, "jobs", where));
  if (j.contains("limit") && !j["limit"].is_null()) cfg.limit = get<std::size_t>(j, "limit", where);
  if (j.contains("seed")) cfg.seed = get<std::uint64_t>(j, "seed", where);

  if (j.contains("scorer")) {
    const json& s = j["scorer"];
    const std::string sw = "scorer";
    reject_unknown(s, {"kind", "order", "alpha", "endpoint", "command", "batch_size", "bands"}, sw);
    ScorerConfig& sc = cfg.scorer;
    const auto kind = s.contains("kind") ? get<std::string>(s, "kind", sw) : "markov";
    if (kind == "markov") {
      sc.kind = ScorerKind::kMarkov;
    } else if (kind == "http") {
      sc.kind = ScorerKind::kHttp;
    } else if (kind == "subprocess") {
      sc.kind = ScorerKind::kSubprocess;
    } else {
      throw mnread::ConfigError("scorer.kind is 'markov', 'http' or 'subprocess'");
    }
    if (s.contains("order")) sc.markov_order = get<int>(s, "order", sw);
    if (s.contains("alpha")) sc.markov_alpha = get<double>(s, "alpha", sw);
    if (s.contains("endpoint")) sc.endpoint = get<std::string>(s, "endpoint", sw);
    if (s.contains("command")) sc.command = get<std::vector<std::string>>(s, "command", sw);
    if (s.contains("batch_size")) sc.batch_size = get<std::size_t>(s, "batch_size", sw);
    if (s.contains("bands")) {
      const auto b = get<std::vector<double>>(s, "bands", sw);
      if (b.size() != 2 || !(b[0] < b[1])) throw mnread::ConfigError("scorer.bands is [good, fair]");
      sc.bands = {b[0], b[1]};
    }
    if (sc.kind == ScorerKind::kHttp && sc.endpoint.empty()) {
      throw mnread::ConfigError("scorer.endpoint is required for the http scorer");
    }
    if (sc.kind == ScorerKind::kSubprocess && sc.command.empty()) {
      throw mnread::ConfigError("scorer.command is required for the subprocess scorer");
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw mnread::IoError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw mnread::ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

json extraction_settings(const PipelineConfig& cfg) {
  json rules = rules_to_json(cfg.rules);
  return json{
      {"n", cfg.n},
      {"case_policy", cfg.case_policy == mnread::CasePolicy::kLowercase ? "lowercase" : "exact"},
      {"forbidden_punct", rules["forbidden_punct"]},
      {"apostrophe_policy", rules["apostrophe_policy"]},
  };
}

json compile_settings(const PipelineConfig& cfg) {
  return json{{"n", cfg.n}, {"rules", rules_to_json(cfg.rules)}};
}

mnread::FontMetrics load_font(PipelineConfig& cfg) {
  if (cfg.font.empty()) throw mnread::ConfigError("no font metrics file configured");
  if (!std::filesystem::exists(cfg.font)) {
    throw mnread::IoError("font metrics file not found: " + cfg.font.string());
  }
  auto font = mnread::load_font_metrics(cfg.font.string());
  if (cfg.rules.box_width == 0 && font.box_width_directive) {
    cfg.rules.box_width = *font.box_width_directive;
  }
  if (cfg.rules.space_width == 0 && font.space_width_directive) {
    cfg.rules.space_width = *font.space_width_directive;
  }
  return font;
}

}  // namespace mnreadgen
