#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "mnread/corpus.hpp"
#include "mnread/errors.hpp"
#include "mnread/unicode.hpp"
#include "oracle.hpp"

using namespace mnread;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mnread_corpus_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

Lexicon small_lexicon() {
  return Lexicon({"the", "cat", "sleep", "on", "mat", "a", "dog", "rose", "école", "le", "eau"},
                 {{"sleeps", "sleep"}, {"l'", "le"}});
}

std::vector<std::string> surfaces(const std::vector<Token>& t) {
  std::vector<std::string> out;
  for (const auto& x : t) out.push_back(x.surface);
  return out;
}

}  // namespace

TEST(Unicode, NfcComposesAndRejectsInvalid) {
  EXPECT_EQ(unicode::nfc("e\xCC\x81"), "\xC3\xA9");  // e + combining acute -> é
  EXPECT_THROW(unicode::nfc("\xFF\xFE"), FormatError);
  EXPECT_EQ(unicode::length("école"), 5u);
  EXPECT_EQ(unicode::to_lower("ÉCOLE"), "école");
}

TEST(Segment, SplitsOnTerminators) {
  auto s = segment_sentences("The cat sleeps. Does it? Yes!  The dog sleeps.", "f");
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].text, "The cat sleeps.");
  EXPECT_EQ(s[1].text, "Does it?");
  EXPECT_EQ(s[3].text, "The dog sleeps.");
  EXPECT_EQ(s[3].index, 3u);
  EXPECT_EQ(s[3].source_id, "f");
}

TEST(Segment, EllipsisBeforeLowercaseContinues) {
  auto s = segment_sentences("The cat... sleeps on the mat. Then it wakes.");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].text, "The cat... sleeps on the mat.");
}

TEST(Segment, DropsUnterminatedFragment) {
  auto s = segment_sentences("A heading\n\nThe cat sleeps.\nno end");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].text, "The cat sleeps.");
}

TEST(Segment, DecimalPointDoesNotSplit) {
  auto s = segment_sentences("It costs 3.50 today. Fine.");
  ASSERT_EQ(s.size(), 2u);
}

TEST(Filter, Reasons) {
  const Lexicon lex = small_lexicon();
  const RuleConfig cfg;
  auto reason = [&](const std::string& text) {
    return filter_sentence(RawSentence{text, "", 0}, lex, cfg, 3).reason;
  };
  EXPECT_EQ(reason("The cat sleeps on the mat."), FilterReason::kOk);
  EXPECT_EQ(reason("Does the cat sleep?"), FilterReason::kNotDeclarative);
  EXPECT_EQ(reason("The cat, the dog."), FilterReason::kForbiddenPunctuation);
  EXPECT_EQ(reason("The cat."), FilterReason::kTooShort);
  EXPECT_EQ(reason("The cat sleeps on Pierre."), FilterReason::kProperNoun);
  EXPECT_EQ(reason("The cat sleeps on the sofa."), FilterReason::kOutOfLexicon);
}

TEST(Filter, CapitalizedLexiconWordIsAmbiguous) {
  const auto r = filter_sentence(RawSentence{"The cat sleeps on Rose.", "", 0}, small_lexicon(),
                                 RuleConfig{}, 1);
  EXPECT_TRUE(r.accepted);
  EXPECT_TRUE(r.ambiguous_capital);
}

TEST(Filter, ElisionCoveredByPieces) {
  const Lexicon lex = small_lexicon();
  EXPECT_TRUE(lex.covers("l'école"));
  EXPECT_TRUE(lex.covers("l'eau"));
  EXPECT_FALSE(lex.covers("d'eau"));
}

TEST(Tokenize, KeepsOrSplitsElisions) {
  RuleConfig cfg;
  const RawSentence s{"Le chat dort à l'école.", "", 0};
  EXPECT_EQ(surfaces(tokenize(s, cfg)),
            (std::vector<std::string>{"Le", "chat", "dort", "à", "l'école"}));
  cfg.apostrophe_policy = ApostrophePolicy::kSplit;
  EXPECT_EQ(surfaces(tokenize(s, cfg)),
            (std::vector<std::string>{"Le", "chat", "dort", "à", "l'", "école"}));
}

TEST(Tokenize, ForbiddenCharacterThrows) {
  EXPECT_THROW(tokenize(RawSentence{"The cat; the dog.", "", 0}, RuleConfig{}), TokenizationError);
}

TEST(Token, CountsCodePoints) {
  EXPECT_EQ(Token("école").char_len, 5u);
  EXPECT_THROW(Token(""), TokenizationError);
}

TEST(Extract, PositionsOfWindows) {
  std::vector<Token> t;
  for (const char* w : {"a", "b", "c", "d", "e"}) t.emplace_back(w);
  const auto g = extract_ngrams(t, 3);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].position, Position::kInitial);
  EXPECT_EQ(g[1].position, Position::kMiddle);
  EXPECT_EQ(g[2].position, Position::kFinal);
  EXPECT_EQ(g[2].surfaces(), (std::vector<std::string>{"c", "d", "e"}));
}

TEST(Extract, ExactLengthSentenceIsInitialAndFinal) {
  std::vector<Token> t;
  for (const char* w : {"a", "b", "c"}) t.emplace_back(w);
  const auto g = extract_ngrams(t, 3);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].position, Position::kInitial);
  EXPECT_EQ(g[1].position, Position::kFinal);
  EXPECT_TRUE(extract_ngrams(t, 4).empty());
  EXPECT_THROW(extract_ngrams(t, 1), ConfigError);
}

TEST(Extract, HandCountedDocument) {
  const Lexicon lex = small_lexicon();
  // "the cat sleeps on the mat" -> 4 windows of 3; "a dog sleeps" -> initial + final
  const auto ex = extract_documents(
      {{"d", "The cat sleeps on the mat. A dog sleeps. The sofa sleeps."}}, lex, RuleConfig{}, 3);
  EXPECT_EQ(ex.report.sentences, 3u);
  EXPECT_EQ(ex.report.accepted, 2u);
  EXPECT_EQ(ex.report.rejected.at(FilterReason::kOutOfLexicon), 1u);
  EXPECT_EQ(ex.report.distinct_ngrams[0], 2u);
  EXPECT_EQ(ex.report.distinct_ngrams[1], 2u);
  EXPECT_EQ(ex.report.distinct_ngrams[2], 2u);
  EXPECT_EQ(ex.ngrams.size(), 6u);
  EXPECT_TRUE(std::is_sorted(ex.ngrams.begin(), ex.ngrams.end()));
}

TEST(Extract, ResultIndependentOfJobs) {
  const auto fx = oracle::load_fixture("en");
  auto cfg_dir = oracle::data_dir() / "en";
  const auto lex = build_lexicon(cfg_dir / "lexicon.txt", cfg_dir / "inflections.tsv");
  const auto one = extract_corpus(cfg_dir / "corpus", lex, fx.rules, 3, 1);
  const auto four = extract_corpus(cfg_dir / "corpus", lex, fx.rules, 3, 4);
  EXPECT_EQ(one.ngrams, four.ngrams);
  EXPECT_EQ(one.sentences.size(), four.sentences.size());
  EXPECT_EQ(one.report.rejected, four.report.rejected);
}

TEST(Extract, MissingDirectoryThrows) {
  EXPECT_THROW(extract_corpus("/nonexistent/corpus", small_lexicon(), RuleConfig{}, 3), IoError);
}

TEST(Extract, EmptyDirectoryGivesNothing) {
  const auto dir = temp_dir("empty");
  const auto ex = extract_corpus(dir, small_lexicon(), RuleConfig{}, 3);
  EXPECT_TRUE(ex.ngrams.empty());
  EXPECT_EQ(ex.report.files, 0u);
}

TEST(Lexicon, FileErrorsNameTheLine) {
  const auto dir = temp_dir("lex");
  write(dir / "lemmas.txt", "cat\n\ntwo words\n");
  try {
    build_lexicon(dir / "lemmas.txt");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  write(dir / "lemmas.txt", "cat\nsleep\n");
  write(dir / "infl.tsv", "sleeps\tsleep\ncats\tdog\n");
  try {
    build_lexicon(dir / "lemmas.txt", dir / "infl.tsv");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  write(dir / "infl.tsv", "sleeps sleep\n");
  EXPECT_THROW(build_lexicon(dir / "lemmas.txt", dir / "infl.tsv"), FormatError);
  EXPECT_THROW(build_lexicon(dir / "missing.txt"), IoError);
}

TEST(Lexicon, CasePolicy) {
  const Lexicon lower({"cat"}, {}, CasePolicy::kLowercase);
  const Lexicon exact({"cat"}, {}, CasePolicy::kExact);
  EXPECT_TRUE(lower.covers("Cat"));
  EXPECT_FALSE(exact.covers("Cat"));
  EXPECT_TRUE(exact.covers("cat"));
}

TEST(NgramFile, RoundTripAndErrors) {
  const auto dir = temp_dir("ngrams");
  std::vector<NGram> g;
  g.push_back(NGram{{Token("a"), Token("b")}, Position::kInitial});
  g.push_back(NGram{{Token("b"), Token("école")}, Position::kFinal});
  write_ngram_file(g, dir / "g.tsv");
  EXPECT_EQ(read_ngram_file(dir / "g.tsv"), g);

  write(dir / "mixed.tsv", "initial\ta b\nmiddle\ta b c\n");
  EXPECT_THROW(read_ngram_file(dir / "mixed.tsv"), MixedArityError);
  write(dir / "bad.tsv", "nowhere\ta b\n");
  EXPECT_THROW(read_ngram_file(dir / "bad.tsv"), FormatError);
}
