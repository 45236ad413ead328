#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "mnread/errors.hpp"
#include "mnread/scoring.hpp"

using namespace mnread;

namespace {

class ConstantModel : public ConditionalModel {
 public:
  explicit ConstantModel(double p) : p_(p) {}
  double log_prob(std::span<const std::string>, const std::string&) const override {
    return std::log(p_);
  }

 private:
  double p_;
};

std::vector<std::string> repeat(std::size_t n) { return std::vector<std::string>(n, "w"); }

/// In-process HTTP scorer on an ephemeral port.
class StubServer {
 public:
  explicit StubServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post("/score", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }
  Endpoint endpoint() const {
    Endpoint e;
    e.host = "127.0.0.1";
    e.port = port_;
    return e;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

RetryPolicy fast_retry() {
  RetryPolicy r;
  r.attempts = 3;
  r.initial_backoff = std::chrono::milliseconds(5);
  r.timeout = std::chrono::seconds(5);
  return r;
}

void echo_ones(const httplib::Request& req, httplib::Response& res) {
  const auto body = nlohmann::json::parse(req.body);
  nlohmann::json ppl = nlohmann::json::array();
  for (std::size_t i = 0; i < body.at("texts").size(); ++i) ppl.push_back(1.0);
  res.set_content(nlohmann::json{{"ppl", ppl}, {"model", "stub-1"}}.dump(), "application/json");
}

/// Fails any batch holding `bad`; ppl is the text length otherwise.
class PickyScorer : public Scorer {
 public:
  explicit PickyScorer(std::string bad) : bad_(std::move(bad)) {}
  std::string id() const override { return "picky"; }
  std::vector<double> score(const std::vector<std::string>& texts) override {
    std::vector<double> out;
    for (const auto& t : texts) {
      if (t == bad_) throw ProtocolError("rejected");
      out.push_back(static_cast<double>(t.size()));
    }
    return out;
  }

 private:
  std::string bad_;
};

}  // namespace

TEST(Perplexity, HalfProbabilityGivesTwo) {
  const ConstantModel half(0.5);
  for (std::size_t n = 1; n <= 50; ++n) {
    EXPECT_NEAR(perplexity(half, repeat(n)), 2.0, 1e-9) << n;
  }
}

TEST(Perplexity, CertainWordsGiveOne) {
  const ConstantModel one(1.0);
  EXPECT_DOUBLE_EQ(perplexity(one, repeat(12)), 1.0);
  const std::vector<double> lps{std::log(0.25), std::log(0.5), std::log(1.0)};
  EXPECT_NEAR(perplexity_from_log_probs(lps), std::pow(8.0, 1.0 / 3.0), 1e-12);
}

TEST(Perplexity, EmptyOrImpossible) {
  EXPECT_THROW(perplexity_from_log_probs({}), ScoringError);
  const ConstantModel zero(0.0);
  EXPECT_THROW(perplexity(zero, repeat(3)), ScoringError);
}

TEST(Markov, HandArithmetic) {
  // types {a, b, c}: V = 4 with the unseen slot
  const auto m = MarkovModel::train({{"a", "b"}, {"a", "c"}, {"b", "a"}}, 1, 0.5);
  EXPECT_EQ(m.vocab_size(), 4u);
  const std::vector<std::string> start;
  const std::vector<std::string> after_a{"a"};
  // ctx <s>: a twice, b once, total 3
  EXPECT_NEAR(m.probability(start, "a"), (2 + 0.5) / (3 + 2.0), 1e-12);
  // ctx a: b once, c once, total 2
  EXPECT_NEAR(m.probability(after_a, "b"), (1 + 0.5) / (2 + 2.0), 1e-12);
  EXPECT_NEAR(m.probability(after_a, "zzz"), 0.5 / 4.0, 1e-12);
  const std::vector<std::string> s{"a", "b"};
  const double expect = std::exp(-(std::log(2.5 / 5.0) + std::log(1.5 / 4.0)) / 2.0);
  EXPECT_NEAR(perplexity(m, s), expect, 1e-9);
}

TEST(Markov, SecondOrderContextsArePadded) {
  const auto m = MarkovModel::train({{"x", "y", "z"}}, 2, 1.0);
  const std::vector<std::string> hist{"x", "y"};
  // ctx (x, y): z once; V = 4
  EXPECT_NEAR(m.probability(hist, "z"), 2.0 / 5.0, 1e-12);
  const std::vector<std::string> one{"x"};
  // ctx (<s>, x): y once
  EXPECT_NEAR(m.probability(one, "y"), 2.0 / 5.0, 1e-12);
  // unseen context is uniform
  const std::vector<std::string> other{"q", "q"};
  EXPECT_NEAR(m.probability(other, "x"), 0.25, 1e-12);
}

TEST(Markov, DistributionsSumToOne) {
  const auto m = MarkovModel::train({{"a", "b", "a"}, {"b", "b"}, {"c"}}, 2, 0.1);
  for (const auto& ctx : std::vector<std::vector<std::string>>{{}, {"a"}, {"a", "b"}, {"b", "b"}, {"n", "o"}}) {
    double total = 0.0;
    for (const auto& w : m.vocabulary()) total += m.probability(ctx, w);
    total += m.probability(ctx, "<unseen>");
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Markov, TrainErrors) {
  EXPECT_THROW(MarkovModel::train({{"a"}}, 0), ConfigError);
  EXPECT_THROW(MarkovModel::train({{"a"}}, 1, 0.0), ConfigError);
  EXPECT_THROW(MarkovModel::train({{}, {}}, 1), EmptyCorpusError);
}

TEST(MarkovScorer, ThreadsDoNotChangeScores) {
  auto model = MarkovModel::train({{"the", "cat", "sleeps"}, {"the", "dog", "sleeps"}}, 2);
  std::vector<std::string> texts;
  for (int i = 0; i < 40; ++i) texts.push_back(i % 2 ? "the cat sleeps." : "the dog runs.");
  MarkovScorer one(model, 1);
  MarkovScorer four(model, 4);
  EXPECT_EQ(one.score(texts), four.score(texts));
  EXPECT_EQ(one.id(), "markov-k2-alpha0.1");
}

TEST(SplitSentence, DropsFinalPeriod) {
  EXPECT_EQ(split_sentence("The cat sleeps."), (std::vector<std::string>{"The", "cat", "sleeps"}));
  EXPECT_EQ(split_sentence("  a  b . "), (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(split_sentence("").empty());
}

TEST(Ranking, SortsByPplThenText) {
  PickyScorer s("");
  const std::vector<std::vector<std::string>> in{{"bb"}, {"aa"}, {"c"}, {"dddd"}};
  const auto r = score_and_rank(in, s, 3);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0].text(), "c.");
  EXPECT_EQ(r[1].text(), "aa.");
  EXPECT_EQ(r[2].text(), "bb.");
  EXPECT_EQ(r[3].text(), "dddd.");
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_EQ(r[i].rank, i + 1);
    EXPECT_EQ(r[i].scorer_id, "picky");
  }
}

TEST(Ranking, IndependentOfInputOrder) {
  PickyScorer s("");
  std::vector<std::vector<std::string>> in{{"x", "y"}, {"ab"}, {"ba"}, {"q"}, {"zz", "z"}};
  const auto first = score_and_rank(in, s);
  std::reverse(in.begin(), in.end());
  const auto second = score_and_rank(in, s, 2);
  ASSERT_EQ(first.size(), second.size());
  for (std::size_t i = 0; i < first.size(); ++i) EXPECT_EQ(first[i].text(), second[i].text());
}

TEST(Ranking, FailingSentenceIsNamed) {
  PickyScorer s("bad one.");
  try {
    score_and_rank({{"fine"}, {"bad", "one"}, {"also", "fine"}}, s);
    FAIL();
  } catch (const ScoringError& e) {
    EXPECT_NE(std::string(e.what()).find("bad one."), std::string::npos);
  }
}

TEST(Bands, Thresholds) {
  EXPECT_EQ(band(14.99), "good");
  EXPECT_EQ(band(15.0), "fair");
  EXPECT_EQ(band(29.9), "fair");
  EXPECT_EQ(band(30.0), "poor");
  EXPECT_EQ(band(10.0, PplBands{5.0, 8.0}), "poor");
}

TEST(Endpoint, Parses) {
  const auto e = Endpoint::parse("http://localhost:9000/v1/score");
  EXPECT_EQ(e.host, "localhost");
  EXPECT_EQ(e.port, 9000);
  EXPECT_EQ(e.path, "/v1/score");
  EXPECT_EQ(Endpoint::parse("http://h").path, "/score");
  EXPECT_THROW(Endpoint::parse("https://h/score"), ConfigError);
}

TEST(Http, EchoesOnes) {
  StubServer server(echo_ones);
  const auto r = external_score(server.endpoint(), {"a b.", "c d e."}, fast_retry());
  EXPECT_EQ(r.ppl, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(r.model, "stub-1");
  HttpScorer scorer(server.endpoint(), fast_retry());
  const auto ranked = score_and_rank({{"a", "b"}, {"c"}}, scorer);
  EXPECT_EQ(ranked[0].scorer_id, "external:stub-1");
  EXPECT_EQ(ranked[0].ppl, 1.0);
}

TEST(Http, EmptyListNeedsNoRequest) {
  Endpoint nowhere;
  nowhere.port = 1;
  EXPECT_TRUE(external_score(nowhere, {}, fast_retry()).ppl.empty());
}

TEST(Http, RetriesServerErrors) {
  std::atomic<int> calls = 0;
  StubServer server([&](const httplib::Request& req, httplib::Response& res) {
    if (calls++ == 0) {
      res.status = 503;
      return;
    }
    echo_ones(req, res);
  });
  EXPECT_EQ(external_score(server.endpoint(), {"x."}, fast_retry()).ppl.size(), 1u);
  EXPECT_EQ(calls.load(), 2);
}

TEST(Http, PersistentServerErrorIsTransport) {
  std::atomic<int> calls = 0;
  StubServer server([&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 500;
  });
  EXPECT_THROW(external_score(server.endpoint(), {"x."}, fast_retry()), TransportError);
  EXPECT_EQ(calls.load(), 3);
}

TEST(Http, MalformedRepliesAreProtocolErrors) {
  std::string reply;
  int status = 200;
  StubServer server([&](const httplib::Request&, httplib::Response& res) {
    res.status = status;
    res.set_content(reply, "application/json");
  });
  for (const char* bad : {"not json", "{\"model\": \"m\"}", "{\"ppl\": [1.0, 2.0]}",
                          "{\"ppl\": [\"x\"]}", "{\"ppl\": [-1.0]}", "{\"ppl\": 3}",
                          "{\"ppl\": [1.0], \"model\": 7}"}) {
    reply = bad;
    EXPECT_THROW(external_score(server.endpoint(), {"x."}, fast_retry()), ProtocolError) << bad;
  }
  status = 400;
  reply = "{}";
  EXPECT_THROW(external_score(server.endpoint(), {"x."}, fast_retry()), ProtocolError);
}

TEST(Http, UnreachableIsTransportError) {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  Endpoint e;
  e.port = port;
  EXPECT_THROW(external_score(e, {"x."}, fast_retry()), TransportError);
}

TEST(Subprocess, MatchesRepliesById) {
  SubprocessScorer s({STUB_SCORER_PATH, "--window", "3"}, 3);
  // the stub answers each full window in reverse order
  const std::vector<std::string> texts{"a.", "a b.", "a b c.", "a b c d.", "x y.", "z."};
  EXPECT_EQ(s.score(texts), (std::vector<double>{2, 3, 4, 5, 3, 2}));
  EXPECT_EQ(s.score({"one two three.", "u.", "v w."}), (std::vector<double>{4, 2, 3}));
}

TEST(Subprocess, BadRecordIsProtocolError) {
  SubprocessScorer s({STUB_SCORER_PATH, "--bad", "zap"});
  EXPECT_THROW(s.score({"a zap."}), ProtocolError);
}

TEST(Subprocess, MissingCommandIsTransportError) {
  SubprocessScorer s({"/nonexistent/scorer"});
  EXPECT_THROW(s.score({"a."}), TransportError);
}
