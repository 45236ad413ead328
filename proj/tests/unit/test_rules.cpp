#include <gtest/gtest.h>

#include "mnread/errors.hpp"
#include "mnread/rules.hpp"

using namespace mnread;

TEST(Rational, Parses) {
  EXPECT_EQ(parse_rational("0.80"), Rational(4, 5));
  EXPECT_EQ(parse_rational("5/4"), Rational(5, 4));
  EXPECT_EQ(parse_rational("2"), Rational(2));
  EXPECT_EQ(parse_rational("-0.5"), Rational(-1, 2));
  EXPECT_EQ(to_string(Rational(6, 8)), "3/4");
  EXPECT_THROW(parse_rational("x"), ConfigError);
  EXPECT_THROW(parse_rational("1/0"), ConfigError);
}

TEST(RuleConfig, DefaultsAndValidation) {
  RuleConfig cfg;
  EXPECT_EQ(cfg.min_words, 9);
  EXPECT_EQ(cfg.max_words, 15);
  EXPECT_EQ(cfg.char_budget, 59);
  EXPECT_EQ(cfg.n_lines, 3);
  EXPECT_THROW(cfg.validate(), ConfigError);  // no box yet
  cfg.box_width = 100;
  cfg.space_width = 5;
  EXPECT_NO_THROW(cfg.validate());
  cfg.min_words = 16;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.min_words = 9;
  cfg.space_min_factor = Rational(3, 2);
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_TRUE(cfg.is_forbidden(U','));
  EXPECT_TRUE(cfg.is_forbidden(U'«'));
  EXPECT_FALSE(cfg.is_forbidden(U'\''));
}

TEST(LineWindow, ExactBounds) {
  RuleConfig cfg;
  cfg.box_width = 100;
  cfg.space_width = 5;
  const auto w0 = line_window(cfg, 0);
  EXPECT_EQ(w0.lo, Rational(100));
  EXPECT_EQ(w0.hi, Rational(100));
  const auto w4 = line_window(cfg, 4);  // spaces stretch between 16 and 25
  EXPECT_EQ(w4.lo, Rational(75));
  EXPECT_EQ(w4.hi, Rational(84));
  EXPECT_TRUE(w4.contains(75));
  EXPECT_TRUE(w4.contains(84));
  EXPECT_FALSE(w4.contains(85));
  EXPECT_FALSE(w4.contains(74));
  cfg.space_width = 3;
  const auto w1 = line_window(cfg, 1);  // [100 - 15/4, 100 - 12/5]
  EXPECT_FALSE(w1.contains(96));
  EXPECT_TRUE(w1.contains(97));
  EXPECT_FALSE(w1.contains(98));
}

TEST(Font, ParsesDirectivesAndComments) {
  const auto font = parse_font_metrics(
      "# a comment\n#space_width 250\n#box_width 8650\na\t444\n#\t500\n\xC3\xA9\t444\n");
  EXPECT_EQ(font.space_width_directive, 250);
  EXPECT_EQ(font.box_width_directive, 8650);
  EXPECT_EQ(font.width(U'a'), 444);
  EXPECT_EQ(font.width(U'#'), 500);
  EXPECT_EQ(font.word_width("a\xC3\xA9"), 888);
  EXPECT_TRUE(font.covers("aa"));
  EXPECT_FALSE(font.covers("ab"));
  EXPECT_THROW(font.width(U'b'), ConfigError);
  RuleConfig cfg;
  font.apply_directives(cfg);
  EXPECT_EQ(cfg.box_width, 8650);
  EXPECT_EQ(cfg.space_width, 250);
}

TEST(Font, DefaultWidthCoversEverything) {
  const auto font = parse_font_metrics("#default_width 7\nx\t3\n");
  EXPECT_TRUE(font.covers("anything"));
  EXPECT_EQ(font.word_width("xy"), 10);
}

TEST(Font, MalformedLines) {
  EXPECT_THROW(parse_font_metrics("a 444\n"), FormatError);
  EXPECT_THROW(parse_font_metrics("ab\t444\n"), FormatError);
  EXPECT_THROW(parse_font_metrics("a\t-1\n"), FormatError);
  try {
    parse_font_metrics("a\t1\nb\tx\n");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}
