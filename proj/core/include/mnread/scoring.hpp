#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mnread {

/// Natural-log conditional probabilities of a word given its history.
class ConditionalModel {
 public:
  virtual ~ConditionalModel() = default;
  /// log P(word | history); history holds the words before `word`.
  virtual double log_prob(std::span<const std::string> history, const std::string& word) const = 0;
};

/// exp(-mean(log_probs)). Throws ScoringError on an empty sequence or a
/// non-finite result.
double perplexity_from_log_probs(std::span<const double> log_probs);

/// (1 / P(w1..wn))^(1/n) with P chained from the model's conditionals,
/// computed in log space.
double perplexity(const ConditionalModel& model, std::span<const std::string> words);

/// Order-k word model with additive smoothing:
///   P(w | ctx) = (count(ctx, w) + alpha) / (count(ctx) + alpha * V)
/// Contexts are padded with "<s>"; V counts the training types plus one
/// slot for unseen words, so every context's distribution sums to 1.
class MarkovModel : public ConditionalModel {
 public:
  static constexpr const char* kBoundary = "<s>";

  /// Throws ConfigError for k < 1 or alpha <= 0, EmptyCorpusError when no
  /// sentence holds a word.
  static MarkovModel train(const std::vector<std::vector<std::string>>& sentences, int k,
                           double alpha = 0.1);

  int order() const noexcept { return k_; }
  double alpha() const noexcept { return alpha_; }
  std::size_t vocab_size() const noexcept { return vocab_.size() + 1; }
  const std::vector<std::string>& vocabulary() const noexcept { return vocab_; }

  double probability(std::span<const std::string> context, const std::string& word) const;
  double log_prob(std::span<const std::string> history, const std::string& word) const override;

 private:
  MarkovModel(int k, double alpha) : k_(k), alpha_(alpha) {}
  std::vector<std::string> context_of(std::span<const std::string> history) const;

  struct ContextCounts {
    std::size_t total = 0;
    std::map<std::string, std::size_t> next;
  };

  int k_;
  double alpha_;
  std::vector<std::string> vocab_;  // sorted
  std::map<std::vector<std::string>, ContextCounts> counts_;
};

/// Scores whole sentences (text with final period) to perplexities.
class Scorer {
 public:
  virtual ~Scorer() = default;
  /// Identity reported with every score, including the model version when
  /// known.
  virtual std::string id() const = 0;
  /// One PPL per text, aligned with the input.
  virtual std::vector<double> score(const std::vector<std::string>& texts) = 0;
};

class MarkovScorer : public Scorer {
 public:
  explicit MarkovScorer(MarkovModel model, std::size_t jobs = 1);
  std::string id() const override;
  std::vector<double> score(const std::vector<std::string>& texts) override;
  const MarkovModel& model() const noexcept { return model_; }

 private:
  MarkovModel model_;
  std::size_t jobs_;
};

/// Words of a sentence text: whitespace split, final period removed.
std::vector<std::string> split_sentence(const std::string& text);

struct Endpoint {
  std::string host = "127.0.0.1";
  int port = 8000;
  std::string path = "/score";

  /// "http://host:port/path"; path defaults to /score. Throws ConfigError.
  static Endpoint parse(const std::string& url);
};

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  double multiplier = 2.0;
  std::chrono::seconds timeout{60};
};

struct ExternalScores {
  std::vector<double> ppl;
  std::string model;
};

/// POST {"texts": [...]} to the endpoint. Connection failures and 5xx
/// replies are retried with exponential backoff, then TransportError;
/// malformed replies raise ProtocolError.
ExternalScores external_score(const Endpoint& endpoint, const std::vector<std::string>& texts,
                              const RetryPolicy& retry = {});

class HttpScorer : public Scorer {
 public:
  explicit HttpScorer(Endpoint endpoint, RetryPolicy retry = {});
  std::string id() const override;
  std::vector<double> score(const std::vector<std::string>& texts) override;

 private:
  Endpoint endpoint_;
  RetryPolicy retry_;
  std::string model_;
};

/// Child process speaking newline-delimited JSON on its standard streams:
/// {"id": i, "text": s} in, {"id": i, "ppl": x} out.
class SubprocessScorer : public Scorer {
 public:
  /// Throws TransportError when the command cannot be started.
  explicit SubprocessScorer(std::vector<std::string> argv, std::size_t window = 64);
  ~SubprocessScorer() override;
  SubprocessScorer(const SubprocessScorer&) = delete;
  SubprocessScorer& operator=(const SubprocessScorer&) = delete;

  std::string id() const override;
  std::vector<double> score(const std::vector<std::string>& texts) override;

 private:
  struct Process;
  std::vector<std::string> argv_;
  std::size_t window_;
  std::unique_ptr<Process> proc_;
  long long next_id_ = 0;
};

struct ScoredSentence {
  std::vector<std::string> words;
  double ppl = 0.0;
  std::string scorer_id;
  std::size_t rank = 0;  // 1-based

  std::string text() const;
};

/// Scores in batches of `batch_size` and sorts by ascending PPL, ties by
/// sentence text. A failing batch is rescored sentence by sentence so the
/// ScoringError names the offending sentence.
std::vector<ScoredSentence> score_and_rank(const std::vector<std::vector<std::string>>& sentences,
                                           Scorer& scorer, std::size_t batch_size = 64);

/// Report thresholds; corpus and model dependent, never a filter.
struct PplBands {
  double good = 15.0;
  double fair = 30.0;
};

std::string band(double ppl, const PplBands& bands = {});

}  // namespace mnread
