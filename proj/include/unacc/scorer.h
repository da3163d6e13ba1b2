#ifndef UNACC_SCORER_H_
#define UNACC_SCORER_H_

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "unacc/ngram.h"
#include "unacc/probe.h"

namespace unacc {

enum class NormalizationMode { kNone, kLpDiv, kSlor };
enum class ScoreMode { kSentence, kFinalToken };

const char *ModeName(NormalizationMode mode);
NormalizationMode ParseNormalizationMode(std::string_view name);
const char *ModeName(ScoreMode mode);
ScoreMode ParseScoreMode(std::string_view name);

// Sentence-level natural-log probabilities, one per input, in order.
class SentenceScorer {
 public:
  virtual ~SentenceScorer() = default;
  virtual std::vector<double> Score(std::span<const ProbeSentence> sentences) = 0;
  // Releases external resources and reports deferred failures.
  virtual void Finish() {}
};

class NgramScorer : public SentenceScorer {
 public:
  NgramScorer(const NgramModel &model, ScoreMode mode)
      : model_(model), mode_(mode) {}
  std::vector<double> Score(std::span<const ProbeSentence> sentences) override;

 private:
  const NgramModel &model_;
  ScoreMode mode_;
};

// Runs `/bin/sh -c command` and speaks the line protocol: one sentence
// written per line, one decimal natural-log probability read back per line.
// Any deviation, an "ERR" line, or a nonzero exit raises ProtocolError.
class ExternalScorer : public SentenceScorer {
 public:
  explicit ExternalScorer(std::string command);
  ~ExternalScorer() override;
  ExternalScorer(const ExternalScorer &) = delete;
  ExternalScorer &operator=(const ExternalScorer &) = delete;

  std::vector<double> Score(std::span<const ProbeSentence> sentences) override;
  void Finish() override;

 private:
  void Start();
  bool ReadLine(std::string *line);
  int Wait();

  std::string command_;
  int fd_ = -1;
  int pid_ = -1;
  std::string buffer_;
};

// Precomputed scores from TSV `sentence<TAB>logprob`.
class FileScorer : public SentenceScorer {
 public:
  explicit FileScorer(std::istream &in);
  std::vector<double> Score(std::span<const ProbeSentence> sentences) override;

 private:
  std::unordered_map<std::string, double> scores_;
};

struct ScoreRecord {
  ProbeSentence sentence;
  double logp_model = 0.0;    // ln P_m
  double logp_unigram = 0.0;  // ln P_u, NaN when no unigram model is used
  std::size_t length = 0;     // content tokens, final period included
  double normalized = 0.0;
};

// LP-div = -ln P_m / ln P_u; SLOR = (ln P_m - ln P_u) / length. kNone
// returns logp_model.
double Normalize(const ScoreRecord &record, NormalizationMode mode);

// Scores sentences and fills every record field. The unigram term covers the
// same events as the model score: all tokens plus </s> for whole sentences,
// </s> alone under final-token scoring. `unigram` may be null only for
// NormalizationMode::kNone.
std::vector<ScoreRecord> ScoreBatch(SentenceScorer &scorer,
                                    std::span<const ProbeSentence> sentences,
                                    const UnigramModel *unigram,
                                    NormalizationMode mode,
                                    ScoreMode score_mode = ScoreMode::kSentence);

// TSV `verb<TAB>role<TAB>noun<TAB>text<TAB>logp_model<TAB>logp_unigram
// <TAB>length<TAB>normalized`.
void WriteScores(const std::vector<ScoreRecord> &records, std::ostream &out);
std::vector<ScoreRecord> ReadScores(std::istream &in);

}  // namespace unacc

#endif  // UNACC_SCORER_H_
