#include "mnread/scoring.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "httplib.h"
#include "json.hpp"
#include "mnread/errors.hpp"

namespace mnread {

double perplexity_from_log_probs(std::span<const double> log_probs) {
  if (log_probs.empty()) throw ScoringError("perplexity of an empty word sequence");
  double sum = 0.0;
  for (double lp : log_probs) sum += lp;
  const double ppl = std::exp(-sum / static_cast<double>(log_probs.size()));
  if (!std::isfinite(ppl)) throw ScoringError("non-finite perplexity");
  return ppl;
}

double perplexity(const ConditionalModel& model, std::span<const std::string> words) {
  std::vector<double> lps;
  lps.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    lps.push_back(model.log_prob(words.first(i), words[i]));
  }
  return perplexity_from_log_probs(lps);
}

MarkovModel MarkovModel::train(const std::vector<std::vector<std::string>>& sentences, int k,
                               double alpha) {
  if (k < 1) throw ConfigError("Markov order must be at least 1");
  if (!(alpha > 0.0)) throw ConfigError("smoothing alpha must be positive");
  MarkovModel m(k, alpha);
  std::set<std::string> types;
  for (const auto& s : sentences) {
    std::vector<std::string> ctx(static_cast<std::size_t>(k), kBoundary);
    for (const auto& w : s) {
      types.insert(w);
      auto& c = m.counts_[ctx];
      ++c.total;
      ++c.next[w];
      ctx.erase(ctx.begin());
      ctx.push_back(w);
    }
  }
  if (types.empty()) throw EmptyCorpusError("no words to train the Markov model on");
  m.vocab_.assign(types.begin(), types.end());
  return m;
}

std::vector<std::string> MarkovModel::context_of(std::span<const std::string> history) const {
  const auto k = static_cast<std::size_t>(k_);
  std::vector<std::string> ctx;
  ctx.reserve(k);
  for (std::size_t i = history.size(); i < k; ++i) ctx.emplace_back(kBoundary);
  const std::size_t from = history.size() > k ? history.size() - k : 0;
  for (std::size_t i = from; i < history.size(); ++i) ctx.push_back(history[i]);
  return ctx;
}

double MarkovModel::probability(std::span<const std::string> context,
                                const std::string& word) const {
  const auto ctx = context_of(context);
  std::size_t total = 0;
  std::size_t count = 0;
  if (auto it = counts_.find(ctx); it != counts_.end()) {
    total = it->second.total;
    if (auto w = it->second.next.find(word); w != it->second.next.end()) count = w->second;
  }
  return (static_cast<double>(count) + alpha_) /
         (static_cast<double>(total) + alpha_ * static_cast<double>(vocab_size()));
}

double MarkovModel::log_prob(std::span<const std::string> history, const std::string& word) const {
  return std::log(probability(history, word));
}

std::vector<std::string> split_sentence(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  if (!words.empty() && words.back().ends_with('.')) {
    words.back().pop_back();
    if (words.back().empty()) words.pop_back();
  }
  return words;
}

MarkovScorer::MarkovScorer(MarkovModel model, std::size_t jobs)
    : model_(std::move(model)), jobs_(std::max<std::size_t>(1, jobs)) {}

std::string MarkovScorer::id() const {
  std::ostringstream s;
  s << "markov-k" << model_.order() << "-alpha" << model_.alpha();
  return s.str();
}

std::vector<double> MarkovScorer::score(const std::vector<std::string>& texts) {
  std::vector<double> out(texts.size());
  auto run = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < texts.size(); i += step) {
      const auto words = split_sentence(texts[i]);
      out[i] = perplexity(model_, words);
    }
  };
  const std::size_t workers = std::min(jobs_, texts.size());
  if (workers <= 1) {
    run(0, 1);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          run(t, workers);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Endpoint Endpoint::parse(const std::string& url) {
  static const std::regex re(R"(^http://([^/:]+)(?::(\d+))?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw ConfigError("unsupported scorer endpoint: " + url);
  Endpoint e;
  e.host = m[1].str();
  e.port = m[2].matched ? std::stoi(m[2].str()) : 80;
  e.path = m[3].matched ? m[3].str() : "/score";
  return e;
}

namespace {

std::vector<double> checked_ppls(const nlohmann::json& values, std::size_t expected) {
  if (!values.is_array()) throw ProtocolError("\"ppl\" is not an array");
  if (values.size() != expected) {
    throw ProtocolError("scorer returned " + std::to_string(values.size()) + " values for " +
                        std::to_string(expected) + " texts");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : values) {
    if (!v.is_number()) throw ProtocolError("non-numeric perplexity in reply");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x <= 0.0) throw ProtocolError("perplexity is not a positive finite number");
    out.push_back(x);
  }
  return out;
}

}  // namespace

ExternalScores external_score(const Endpoint& endpoint, const std::vector<std::string>& texts,
                              const RetryPolicy& retry) {
  if (texts.empty()) return {};
  httplib::Client client(endpoint.host, endpoint.port);
  client.set_connection_timeout(retry.timeout);
  client.set_read_timeout(retry.timeout);
  client.set_write_timeout(retry.timeout);
  const std::string body = nlohmann::json{{"texts", texts}}.dump();

  auto backoff = retry.initial_backoff;
  std::string last_failure;
  for (int attempt = 0; attempt < std::max(1, retry.attempts); ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<long long>(static_cast<double>(backoff.count()) * retry.multiplier));
    }
    auto res = client.Post(endpoint.path, body, "application/json");
    if (!res) {
      last_failure = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ProtocolError("scorer replied HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError(std::string("malformed scorer reply: ") + e.what());
    }
    if (!reply.is_object() || !reply.contains("ppl")) throw ProtocolError("reply lacks \"ppl\"");
    ExternalScores out;
    out.ppl = checked_ppls(reply["ppl"], texts.size());
    if (reply.contains("model")) {
      if (!reply["model"].is_string()) throw ProtocolError("\"model\" is not a string");
      out.model = reply["model"].get<std::string>();
    }
    return out;
  }
  throw TransportError("scorer at " + endpoint.host + ":" + std::to_string(endpoint.port) +
                       " unreachable: " + last_failure);
}

HttpScorer::HttpScorer(Endpoint endpoint, RetryPolicy retry)
    : endpoint_(std::move(endpoint)), retry_(retry) {}

std::string HttpScorer::id() const {
  return "external:" + (model_.empty() ? endpoint_.host + ":" + std::to_string(endpoint_.port)
                                       : model_);
}

std::vector<double> HttpScorer::score(const std::vector<std::string>& texts) {
  auto res = external_score(endpoint_, texts, retry_);
  if (!res.model.empty()) model_ = res.model;
  return std::move(res.ppl);
}

struct SubprocessScorer::Process {
  pid_t pid = -1;
  FILE* to_child = nullptr;
  FILE* from_child = nullptr;

  ~Process() {
    if (to_child) std::fclose(to_child);
    if (from_child) std::fclose(from_child);
    if (pid > 0) {
      int status = 0;
      waitpid(pid, &status, 0);
    }
  }
};

SubprocessScorer::SubprocessScorer(std::vector<std::string> argv, std::size_t window)
    : argv_(std::move(argv)), window_(std::max<std::size_t>(1, window)) {
  if (argv_.empty()) throw ConfigError("empty scorer command");
  static std::once_flag ignore_sigpipe;
  std::call_once(ignore_sigpipe, [] { ::signal(SIGPIPE, SIG_IGN); });

  int in_pipe[2];
  int out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0) throw TransportError("pipe failed");
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw TransportError("pipe failed");
  }
  std::vector<char*> args;
  for (auto& a : argv_) args.push_back(a.data());
  args.push_back(nullptr);

  const pid_t pid = fork();
  if (pid < 0) throw TransportError("fork failed");
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    execvp(args[0], args.data());
    _exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  proc_ = std::make_unique<Process>();
  proc_->pid = pid;
  proc_->to_child = fdopen(in_pipe[1], "w");
  proc_->from_child = fdopen(out_pipe[0], "r");
  if (!proc_->to_child || !proc_->from_child) throw TransportError("fdopen failed");
}

SubprocessScorer::~SubprocessScorer() = default;

std::string SubprocessScorer::id() const { return "subprocess:" + argv_.front(); }

std::vector<double> SubprocessScorer::score(const std::vector<std::string>& texts) {
  std::vector<double> out(texts.size());
  for (std::size_t begin = 0; begin < texts.size(); begin += window_) {
    const std::size_t end = std::min(texts.size(), begin + window_);
    std::unordered_map<long long, std::size_t> pending;
    for (std::size_t i = begin; i < end; ++i) {
      const long long id = next_id_++;
      pending.emplace(id, i);
      const std::string line = nlohmann::json{{"id", id}, {"text", texts[i]}}.dump() + "\n";
      if (std::fwrite(line.data(), 1, line.size(), proc_->to_child) != line.size()) {
        throw TransportError("scorer process closed its input");
      }
    }
    if (std::fflush(proc_->to_child) != 0) throw TransportError("scorer process closed its input");

    std::string line;
    while (!pending.empty()) {
      line.clear();
      int c;
      while ((c = std::fgetc(proc_->from_child)) != EOF && c != '\n') line.push_back(static_cast<char>(c));
      if (c == EOF && line.empty()) throw TransportError("scorer process ended early");
      nlohmann::json rec;
      try {
        rec = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw ProtocolError(std::string("malformed scorer record: ") + e.what());
      }
      if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_number_integer()) {
        throw ProtocolError("scorer record lacks an integer id");
      }
      auto it = pending.find(rec["id"].get<long long>());
      if (it == pending.end()) throw ProtocolError("scorer record with unexpected id");
      if (!rec.contains("ppl")) throw ProtocolError("scorer record lacks \"ppl\"");
      out[it->second] = checked_ppls(nlohmann::json::array({rec["ppl"]}), 1).front();
      pending.erase(it);
    }
  }
  return out;
}

std::string ScoredSentence::text() const {
  std::string s;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) s += ' ';
    s += words[i];
  }
  return s + '.';
}

std::vector<ScoredSentence> score_and_rank(const std::vector<std::vector<std::string>>& sentences,
                                           Scorer& scorer, std::size_t batch_size) {
  batch_size = std::max<std::size_t>(1, batch_size);
  std::vector<ScoredSentence> out(sentences.size());
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    out[i].words = sentences[i];
    texts.push_back(out[i].text());
  }
  for (std::size_t begin = 0; begin < texts.size(); begin += batch_size) {
    const std::size_t end = std::min(texts.size(), begin + batch_size);
    std::vector<std::string> batch(texts.begin() + static_cast<std::ptrdiff_t>(begin),
                                   texts.begin() + static_cast<std::ptrdiff_t>(end));
    std::vector<double> ppl;
    try {
      ppl = scorer.score(batch);
    } catch (const ScoringError&) {
      ppl.clear();
      for (const auto& t : batch) {
        try {
          ppl.push_back(scorer.score({t}).front());
        } catch (const ScoringError& e) {
          throw ScoringError("scoring \"" + t + "\" failed: " + e.what());
        }
      }
    }
    if (ppl.size() != batch.size()) throw ProtocolError("scorer returned a misaligned batch");
    for (std::size_t i = begin; i < end; ++i) out[i].ppl = ppl[i - begin];
  }
  const std::string id = scorer.id();
  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (out[a].ppl != out[b].ppl) return out[a].ppl < out[b].ppl;
    return texts[a] < texts[b];
  });
  std::vector<ScoredSentence> ranked;
  ranked.reserve(out.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    ranked.push_back(std::move(out[order[r]]));
    ranked.back().scorer_id = id;
    ranked.back().rank = r + 1;
  }
  return ranked;
}

std::string band(double ppl, const PplBands& bands) {
  if (ppl < bands.good) return "good";
  if (ppl < bands.fair) return "fair";
  return "poor";
}

}  // namespace mnread
