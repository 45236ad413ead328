#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

#include <boost/rational.hpp>

namespace mnread {

using Rational = boost::rational<std::int64_t>;

/// Parses "0.80", "5/4" or "2" exactly.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

enum class ApostrophePolicy {
  kKeep,   // "l'école" stays one token
  kSplit,  // "l'" + "école"
};

/// Numeric parameters of the standardized-sentence rules. Defaults are the
/// MNREAD values; `box_width` and `space_width` come from the font unless
/// set explicitly.
struct RuleConfig {
  int min_words = 9;
  int max_words = 15;
  int char_budget = 59;  // characters with inter-word spaces, period excluded
  int n_lines = 3;
  Rational space_min_factor{4, 5};
  Rational space_max_factor{5, 4};
  std::int64_t box_width = 0;
  std::int64_t space_width = 0;
  std::u32string forbidden_punct = U",;:.…!?\"«»“”„()[]{}";
  std::set<std::string> non_terminal_words{"and", "or", "to", "et", "ou"};
  ApostrophePolicy apostrophe_policy = ApostrophePolicy::kKeep;
  /// Whether the final period's glyph takes part in last-line justification.
  bool count_period_width = false;

  /// Throws ConfigError naming the first broken invariant.
  void validate() const;
  bool is_forbidden(char32_t c) const;
};

/// Per-character advance widths in integer units.
class FontMetrics {
 public:
  FontMetrics() = default;
  explicit FontMetrics(std::unordered_map<char32_t, std::int64_t> widths,
                       std::optional<std::int64_t> default_width = std::nullopt);

  void set_width(char32_t c, std::int64_t width);
  void set_default_width(std::optional<std::int64_t> width) { default_width_ = width; }

  bool covers(char32_t c) const;
  bool covers(std::string_view word) const;
  /// Throws ConfigError for an uncovered character.
  std::int64_t width(char32_t c) const;
  std::int64_t word_width(std::string_view word) const;

  std::optional<std::int64_t> space_width_directive;
  std::optional<std::int64_t> box_width_directive;

  /// Copies the `#space_width` / `#box_width` directives into `cfg`.
  void apply_directives(RuleConfig& cfg) const;

 private:
  std::unordered_map<char32_t, std::int64_t> widths_;
  std::optional<std::int64_t> default_width_;
};

/// TSV "character<TAB>width"; `#space_width N`, `#box_width N` and
/// `#default_width N` are directives, other lines starting with "# " are
/// comments.
FontMetrics load_font_metrics(const std::string& path);
FontMetrics parse_font_metrics(std::string_view text);

/// Range of summed word widths that a line with `gaps` inter-word spaces
/// can have and still be justified to exactly the box width.
struct LineWindow {
  Rational lo;
  Rational hi;
  bool contains(std::int64_t width) const { return lo <= width && Rational(width) <= hi; }
};

LineWindow line_window(const RuleConfig& cfg, int gaps);

}  // namespace mnread
