#include "unacc/scorer.h"

#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>

#include "unacc/util.h"

extern char **environ;

namespace unacc {

namespace {

constexpr double kLn10 = std::numbers::ln10;

std::string Trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return std::string(text);
}

}  // namespace

const char *ModeName(NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::kNone:
      return "none";
    case NormalizationMode::kLpDiv:
      return "lp-div";
    case NormalizationMode::kSlor:
      return "slor";
  }
  return "?";
}

NormalizationMode ParseNormalizationMode(std::string_view name) {
  if (name == "none") return NormalizationMode::kNone;
  if (name == "lp-div") return NormalizationMode::kLpDiv;
  if (name == "slor") return NormalizationMode::kSlor;
  throw ValidationError("unknown normalization '" + std::string(name) + "'");
}

const char *ModeName(ScoreMode mode) {
  return mode == ScoreMode::kSentence ? "sentence" : "final-token";
}

ScoreMode ParseScoreMode(std::string_view name) {
  if (name == "sentence") return ScoreMode::kSentence;
  if (name == "final-token") return ScoreMode::kFinalToken;
  throw ValidationError("unknown score mode '" + std::string(name) + "'");
}

std::vector<double> NgramScorer::Score(std::span<const ProbeSentence> sentences) {
  std::vector<double> out;
  out.reserve(sentences.size());
  for (const ProbeSentence &s : sentences) {
    const double log10p = mode_ == ScoreMode::kSentence
                              ? ScoreSentence(model_, s.tokens)
                              : ScoreFinalToken(model_, s.tokens);
    out.push_back(log10p * kLn10);
  }
  return out;
}

ExternalScorer::ExternalScorer(std::string command)
    : command_(std::move(command)) {
  if (command_.empty()) throw ValidationError("external scorer command is empty");
}

ExternalScorer::~ExternalScorer() {
  if (fd_ >= 0) ::close(fd_);
  if (pid_ > 0) {
    ::kill(pid_, SIGTERM);
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
}

void ExternalScorer::Start() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    throw Error(std::string("socketpair: ") + std::strerror(errno));
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
  std::string sh = "/bin/sh";
  std::string flag = "-c";
  char *argv[] = {sh.data(), flag.data(), command_.data(), nullptr};
  pid_t pid = 0;
  const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(fds[1]);
  if (rc != 0) {
    ::close(fds[0]);
    throw ProtocolError("cannot start external scorer: " +
                        std::string(std::strerror(rc)));
  }
  fd_ = fds[0];
  pid_ = pid;
}

bool ExternalScorer::ReadLine(std::string *line) {
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      *line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return true;
    }
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      if (buffer_.empty()) return false;
      *line = std::move(buffer_);
      buffer_.clear();
      return true;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

int ExternalScorer::Wait() {
  int status = 0;
  while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
  }
  pid_ = -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

std::vector<double> ExternalScorer::Score(
    std::span<const ProbeSentence> sentences) {
  if (fd_ < 0) Start();
  std::vector<double> out;
  out.reserve(sentences.size());
  for (const ProbeSentence &s : sentences) {
    const std::string request = s.text + '\n';
    std::size_t sent = 0;
    while (sent < request.size()) {
      const ssize_t n = ::send(fd_, request.data() + sent, request.size() - sent,
                               MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        throw ProtocolError("external scorer closed its input after " +
                            std::to_string(out.size()) + " sentences");
      }
      sent += static_cast<std::size_t>(n);
    }
    std::string reply;
    if (!ReadLine(&reply)) {
      ::close(fd_);
      fd_ = -1;
      const int code = Wait();
      throw ProtocolError("external scorer stopped after " +
                          std::to_string(out.size()) + " of " +
                          std::to_string(sentences.size()) +
                          " lines (exit status " + std::to_string(code) + ")");
    }
    const std::string value = Trim(reply);
    if (value.starts_with("ERR")) {
      throw ProtocolError("external scorer reported: " + value);
    }
    double logp = 0.0;
    if (!ParseDouble(value, &logp) || !std::isfinite(logp) || logp > 0.0) {
      throw ProtocolError("external scorer returned '" + value +
                          "', expected a finite natural-log probability <= 0");
    }
    out.push_back(logp);
  }
  return out;
}

void ExternalScorer::Finish() {
  if (fd_ < 0) return;
  ::shutdown(fd_, SHUT_WR);
  std::string extra;
  std::string line;
  while (ReadLine(&line)) {
    if (!Trim(line).empty()) extra = line;
  }
  ::close(fd_);
  fd_ = -1;
  const int code = Wait();
  if (!extra.empty()) {
    throw ProtocolError("external scorer wrote unexpected output: '" + extra + "'");
  }
  if (code != 0) {
    throw ProtocolError("external scorer exited with status " +
                        std::to_string(code));
  }
}

FileScorer::FileScorer(std::istream &in) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = StripCR(raw);
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    double logp = 0.0;
    if (tab == std::string_view::npos ||
        !ParseDouble(line.substr(tab + 1), &logp) || !std::isfinite(logp) ||
        logp > 0.0) {
      throw ParseError(line_no, "expected sentence<TAB>logprob");
    }
    scores_[std::string(line.substr(0, tab))] = logp;
  }
}

std::vector<double> FileScorer::Score(std::span<const ProbeSentence> sentences) {
  std::vector<double> out;
  out.reserve(sentences.size());
  for (const ProbeSentence &s : sentences) {
    auto it = scores_.find(s.text);
    if (it == scores_.end()) {
      throw ProtocolError("no precomputed score for '" + s.text + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

double Normalize(const ScoreRecord &record, NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::kNone:
      return record.logp_model;
    case NormalizationMode::kLpDiv:
      if (record.logp_unigram == 0.0 || std::isnan(record.logp_unigram)) {
        throw Error("degenerate unigram probability");
      }
      return -record.logp_model / record.logp_unigram;
    case NormalizationMode::kSlor:
      if (std::isnan(record.logp_unigram)) {
        throw Error("SLOR needs a unigram probability");
      }
      return (record.logp_model - record.logp_unigram) /
             static_cast<double>(record.length);
  }
  return record.logp_model;
}

std::vector<ScoreRecord> ScoreBatch(SentenceScorer &scorer,
                                    std::span<const ProbeSentence> sentences,
                                    const UnigramModel *unigram,
                                    NormalizationMode mode,
                                    ScoreMode score_mode) {
  if (sentences.empty()) throw Error("empty scoring batch");
  if (mode != NormalizationMode::kNone && unigram == nullptr) {
    throw ValidationError(std::string(ModeName(mode)) +
                          " normalization needs a unigram model");
  }
  const std::vector<double> logps = scorer.Score(sentences);
  if (logps.size() != sentences.size()) {
    throw ProtocolError("scorer returned " + std::to_string(logps.size()) +
                        " scores for " + std::to_string(sentences.size()) +
                        " sentences");
  }
  std::vector<ScoreRecord> records;
  records.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    ScoreRecord r;
    r.sentence = sentences[i];
    r.logp_model = logps[i];
    r.length = sentences[i].tokens.size();
    if (r.length == 0) throw Error("probe with no tokens: '" + sentences[i].text + "'");
    if (unigram == nullptr) {
      r.logp_unigram = std::numeric_limits<double>::quiet_NaN();
    } else if (score_mode == ScoreMode::kSentence) {
      r.logp_unigram = unigram->Log10Score(r.sentence.tokens, true) * kLn10;
    } else {
      r.logp_unigram = unigram->Log10Prob(kEosToken) * kLn10;
    }
    r.normalized = Normalize(r, mode);
    records.push_back(std::move(r));
  }
  return records;
}

void WriteScores(const std::vector<ScoreRecord> &records, std::ostream &out) {
  for (const ScoreRecord &r : records) {
    const ProbeSentence &s = r.sentence;
    out << s.verb << '\t' << RoleName(s.role) << '\t' << s.noun << '\t'
        << s.text << '\t' << FormatDouble(r.logp_model) << '\t'
        << FormatDouble(r.logp_unigram) << '\t' << r.length << '\t'
        << FormatDouble(r.normalized) << '\n';
  }
}

std::vector<ScoreRecord> ReadScores(std::istream &in) {
  std::vector<ScoreRecord> records;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = StripCR(raw);
    if (line.empty()) continue;
    const std::vector<std::string> cols = Split(line, '\t');
    ScoreRecord r;
    long long length = 0;
    const bool ok = cols.size() == 8 && ParseDouble(cols[4], &r.logp_model) &&
                    ParseDouble(cols[5], &r.logp_unigram) &&
                    ParseInt(cols[6], &length) && length > 0 &&
                    ParseDouble(cols[7], &r.normalized);
    if (!ok) throw ParseError(line_no, "malformed score record");
    r.sentence.verb = cols[0];
    try {
      r.sentence.role = ParseRole(cols[1]);
    } catch (const Error &e) {
      throw ParseError(line_no, e.what());
    }
    r.sentence.noun = cols[2];
    r.sentence.text = cols[3];
    r.sentence.tokens = Tokenize(cols[3]);
    r.length = static_cast<std::size_t>(length);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace unacc
