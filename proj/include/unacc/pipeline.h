#ifndef UNACC_PIPELINE_H_
#define UNACC_PIPELINE_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "unacc/classify.h"
#include "unacc/embed.h"
#include "unacc/eval.h"
#include "unacc/ngram.h"
#include "unacc/scorer.h"

namespace unacc {

// Everything a full run needs. Empty paths mean "not given".
struct RunConfig {
  std::vector<std::string> conllu;  // parsed corpus files
  std::string vectors;
  std::string nouns;           // noun lexicon; default: corpus NOUN lemmas
  std::string verbs;           // verb list; default: every mined verb
  std::string lm_corpus;       // one tokenized sentence per line
  std::string lm_arpa;         // existing model, skips training
  std::string unigram_corpus;  // default: lm_corpus
  std::string gold;
  std::string irregulars;
  std::string out_dir = "out";

  ExpansionParams expansion;
  int order = 5;
  double unk_floor = 1e-7;
  std::string scorer = "builtin";  // builtin | external:<cmd> | file:<path>
  NormalizationMode normalization = NormalizationMode::kNone;
  ScoreMode score_mode = ScoreMode::kSentence;
  bool balance_sides = false;
  double sample_fraction = 1.0;
  std::uint64_t seed = 0;
  int threads = 1;
};

// Throws ValidationError on missing files or inconsistent options, before
// anything is written.
void ValidateRunConfig(const RunConfig &config);

enum class ScorerKind { kBuiltin, kExternal, kFile };
struct ScorerSpec {
  ScorerKind kind = ScorerKind::kBuiltin;
  std::string argument;  // command or path
};
ScorerSpec ParseScorerSpec(const std::string &spec);

// Writes `path` through a temporary file renamed into place.
void WriteFileAtomic(const std::string &path,
                     const std::function<void(std::ostream &)> &writer);

// Individual stages; each reads and writes the TSV/ARPA artifacts.

struct ExtractSummary {
  std::size_t sentences = 0;
  std::size_t triples = 0;
  std::size_t verbs = 0;
};
ExtractSummary RunExtractFrames(const std::vector<std::string> &conllu_paths,
                                const std::string &frames_out,
                                const std::string &nouns_out);

struct ExpandSummary {
  std::size_t expanded = 0;
  std::size_t abstained = 0;
};
ExpandSummary RunExpand(const std::string &frames_path,
                        const std::string &vectors_path,
                        const std::string &nouns_path,
                        const std::string &verbs_path,
                        const ExpansionParams &params, int threads,
                        const std::string &expanded_out,
                        const std::string &failures_out);

std::size_t RunGenerateProbes(const std::string &expanded_path,
                              const std::string &irregulars_path,
                              const std::string &probes_out);

void RunTrainLm(const std::string &corpus_path, int order, double unk_floor,
                const std::string &model_out, const std::string &unigram_out);

struct ScoreStageOptions {
  std::string scorer = "builtin";
  std::string lm_path;       // ARPA, builtin scorer only
  std::string unigram_path;  // ARPA 1-grams, optional for kNone
  NormalizationMode normalization = NormalizationMode::kNone;
  ScoreMode score_mode = ScoreMode::kSentence;
};
std::size_t RunScore(const std::string &probes_path,
                     const ScoreStageOptions &options,
                     const std::string &scores_out);

std::vector<VerbVerdict> RunClassify(const std::string &scores_path,
                                     const std::string &failures_path,
                                     NormalizationMode mode, bool balance_sides,
                                     const std::string &verdicts_out);

ClassMetrics RunEvaluate(const std::string &verdicts_path,
                         const std::string &gold_path, double sample_fraction,
                         std::uint64_t seed, const std::string &metrics_out);

struct RunAllResult {
  std::vector<VerbVerdict> verdicts;
  bool evaluated = false;
  ClassMetrics metrics;
};

// All stages in order, artifacts written under config.out_dir:
// frames.tsv nouns.txt expanded.tsv abstentions.tsv probes.tsv model.arpa
// unigram.arpa scores.tsv verdicts.tsv metrics.tsv.
RunAllResult RunAll(const RunConfig &config);

}  // namespace unacc

#endif  // UNACC_PIPELINE_H_
