#ifndef UNACC_CLASSIFY_H_
#define UNACC_CLASSIFY_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unacc/corpus.h"
#include "unacc/embed.h"
#include "unacc/probe.h"
#include "unacc/scorer.h"

namespace unacc {

enum class Label { kUnaccusative, kUnergative, kAbstain };

const char *LabelName(Label label);
Label ParseLabel(std::string_view name);  // throws Error

struct VerbVerdict {
  std::string verb;
  Label label = Label::kAbstain;
  double agent_total = 0.0;
  double patient_total = 0.0;
  std::size_t n_agent = 0;
  std::size_t n_patient = 0;
  NormalizationMode mode = NormalizationMode::kNone;
  std::string reason;  // why the verb abstained, empty otherwise

  bool operator==(const VerbVerdict &) const = default;
};

// Total for one side. kNone: log of the summed probabilities (log-sum-exp
// over the natural-log scores). Normalized modes: mean normalized score.
double Aggregate(std::span<const ScoreRecord> records, NormalizationMode mode);

// Unaccusative iff patient_total > agent_total; ties go to unergative.
Label ClassifyVerb(double agent_total, double patient_total);

// Groups scored probes by verb and labels each one. With balance_sides both
// sides keep only as many leading probes as the smaller side has.
std::vector<VerbVerdict> ClassifyScored(std::span<const ScoreRecord> records,
                                        NormalizationMode mode,
                                        bool balance_sides = false);

struct Abstention {
  std::string verb;
  std::string reason;
};

struct ClassifyConfig {
  ExpansionParams expansion;
  NormalizationMode normalization = NormalizationMode::kNone;
  ScoreMode score_mode = ScoreMode::kSentence;
  bool balance_sides = false;
  int threads = 1;
};

struct ClassifyResult {
  std::vector<VerbVerdict> verdicts;  // sorted by verb
  std::vector<ExpandedSets> expanded;
  std::vector<Abstention> abstentions;
  std::vector<ScoreRecord> records;
};

// Seeds, expansion, probes, scoring and the decision rule for each verb.
// Verbs without frames, seeds or a usable expansion abstain with a reason.
// `space` should already be restricted to nouns.
ClassifyResult ClassifyAll(const std::vector<std::string> &verbs,
                           const VerbFrameTable &table,
                           const EmbeddingSpace &space, SentenceScorer &scorer,
                           const UnigramModel *unigram,
                           const Inflector &inflector,
                           const ClassifyConfig &config);

// Runs only the seed and expansion steps; failures become abstentions.
void ExpandVerbs(const std::vector<std::string> &verbs,
                 const VerbFrameTable &table, const EmbeddingSpace &space,
                 const ExpansionParams &params, int threads,
                 std::vector<ExpandedSets> *expanded,
                 std::vector<Abstention> *abstentions);

// Verdicts for abstentions merged with the classified verbs, sorted by verb.
std::vector<VerbVerdict> MergeAbstentions(std::vector<VerbVerdict> verdicts,
                                          const std::vector<Abstention> &abstentions,
                                          NormalizationMode mode);

// TSV `verb<TAB>label<TAB>agent_total<TAB>patient_total<TAB>n_agent
// <TAB>n_patient<TAB>reason`; reason is "-" for classified verbs.
void WriteVerdicts(const std::vector<VerbVerdict> &verdicts, std::ostream &out);
std::vector<VerbVerdict> ReadVerdicts(std::istream &in);

// TSV `verb<TAB>reason`.
void WriteAbstentions(const std::vector<Abstention> &abstentions,
                      std::ostream &out);
std::vector<Abstention> ReadAbstentions(std::istream &in);

}  // namespace unacc

#endif  // UNACC_CLASSIFY_H_
