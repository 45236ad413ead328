#include "mnread/rules.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mnread/errors.hpp"
#include "mnread/unicode.hpp"

namespace mnread {
namespace {

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("bad " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto den = parse_int(text.substr(slash + 1), "denominator");
    if (den == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash), "numerator"), den);
  }
  bool negative = false;
  if (text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  std::string digits(text.substr(0, dot));
  std::int64_t den = 1;
  if (dot != std::string_view::npos) {
    auto frac = text.substr(dot + 1);
    if (frac.size() > 15) throw ConfigError("too many decimals in '" + std::string(text) + "'");
    digits += frac;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  }
  if (digits.empty()) throw ConfigError("bad rational '" + std::string(text) + "'");
  const auto num = parse_int(digits, "rational");
  return Rational(negative ? -num : num, den);
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

void RuleConfig::validate() const {
  if (min_words <= 0 || min_words > max_words) {
    throw ConfigError("need 0 < min_words <= max_words");
  }
  if (char_budget <= 0) throw ConfigError("char_budget must be positive");
  if (n_lines <= 0) throw ConfigError("n_lines must be positive");
  if (space_min_factor <= 0 || !(space_min_factor < space_max_factor)) {
    throw ConfigError("need 0 < space_min_factor < space_max_factor");
  }
  if (box_width <= 0) throw ConfigError("box_width must be positive (set it or use #box_width)");
  if (space_width <= 0) {
    throw ConfigError("space_width must be positive (set it or use #space_width)");
  }
}

bool RuleConfig::is_forbidden(char32_t c) const {
  return forbidden_punct.find(c) != std::u32string::npos;
}

FontMetrics::FontMetrics(std::unordered_map<char32_t, std::int64_t> widths,
                         std::optional<std::int64_t> default_width)
    : widths_(std::move(widths)), default_width_(default_width) {
  for (const auto& [c, w] : widths_) {
    if (w <= 0) throw ConfigError("font widths must be positive");
  }
  if (default_width_ && *default_width_ <= 0) throw ConfigError("default width must be positive");
}

void FontMetrics::set_width(char32_t c, std::int64_t width) {
  if (width <= 0) throw ConfigError("font widths must be positive");
  widths_[c] = width;
}

bool FontMetrics::covers(char32_t c) const {
  return default_width_.has_value() || widths_.contains(c);
}

bool FontMetrics::covers(std::string_view word) const {
  if (default_width_) return true;
  for (char32_t c : unicode::code_points(word)) {
    if (!widths_.contains(c)) return false;
  }
  return true;
}

std::int64_t FontMetrics::width(char32_t c) const {
  if (auto it = widths_.find(c); it != widths_.end()) return it->second;
  if (default_width_) return *default_width_;
  throw ConfigError("font has no width for '" + unicode::encode(c) + "'");
}

std::int64_t FontMetrics::word_width(std::string_view word) const {
  std::int64_t total = 0;
  for (char32_t c : unicode::code_points(word)) total += width(c);
  return total;
}

void FontMetrics::apply_directives(RuleConfig& cfg) const {
  if (space_width_directive) cfg.space_width = *space_width_directive;
  if (box_width_directive) cfg.box_width = *box_width_directive;
}

FontMetrics parse_font_metrics(std::string_view text) {
  FontMetrics font;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    if (line.front() == '#' && line.size() > 1 && line[1] != '\t') {
      auto rest = line.substr(1);
      const auto sep = rest.find_first_of(" \t");
      const auto key = rest.substr(0, sep);
      if (key.empty()) continue;  // "# comment"
      if (key != "space_width" && key != "box_width" && key != "default_width") continue;
      if (sep == std::string_view::npos) throw FormatError("directive without value", line_no);
      std::int64_t value = 0;
      try {
        value = parse_int(trim(rest.substr(sep + 1)), key);
      } catch (const ConfigError& e) {
        throw FormatError(e.what(), line_no);
      }
      if (value <= 0) throw FormatError("directive value must be positive", line_no);
      if (key == "space_width") font.space_width_directive = value;
      if (key == "box_width") font.box_width_directive = value;
      if (key == "default_width") font.set_default_width(value);
      continue;
    }

    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw FormatError("expected character<TAB>width", line_no);
    const auto chars = unicode::code_points(unicode::nfc(line.substr(0, tab)));
    if (chars.size() != 1) throw FormatError("first column must be one character", line_no);
    std::int64_t value = 0;
    try {
      value = parse_int(trim(line.substr(tab + 1)), "width");
    } catch (const ConfigError& e) {
      throw FormatError(e.what(), line_no);
    }
    if (value <= 0) throw FormatError("width must be positive", line_no);
    font.set_width(chars.front(), value);
  }
  return font;
}

FontMetrics load_font_metrics(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open font metrics " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_font_metrics(buf.str());
}

LineWindow line_window(const RuleConfig& cfg, int gaps) {
  const Rational stretch = Rational(static_cast<std::int64_t>(gaps) * cfg.space_width);
  const Rational box(cfg.box_width);
  return LineWindow{box - cfg.space_max_factor * stretch, box - cfg.space_min_factor * stretch};
}

}  // namespace mnread
