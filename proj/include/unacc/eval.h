#ifndef UNACC_EVAL_H_
#define UNACC_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "unacc/classify.h"

namespace unacc {

struct GoldEntry {
  std::string verb;
  Label label = Label::kUnaccusative;

  bool operator==(const GoldEntry &) const = default;
};

// TSV `verb<TAB>label`, label unaccusative|unergative. Repeated verbs must
// agree. Entries come back sorted by verb.
std::vector<GoldEntry> LoadGoldTsv(std::istream &in);

// floor(fraction * n) entries drawn uniformly without replacement; input
// order is kept.
std::vector<GoldEntry> SampleGold(const std::vector<GoldEntry> &entries,
                                  double fraction, std::uint64_t rng_seed);

struct ClassRow {
  Label label = Label::kUnaccusative;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t support = 0;  // gold verbs with this label
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_defined = false;  // false when the class was never predicted
};

struct ClassMetrics {
  ClassRow unaccusative{Label::kUnaccusative};
  ClassRow unergative{Label::kUnergative};
  std::size_t abstained = 0;   // gold verbs predicted as abstain
  std::size_t missing = 0;     // gold verbs with no verdict at all
  std::size_t unattested = 0;  // labelled verbs not in gold

  const ClassRow &row(Label label) const {
    return label == Label::kUnaccusative ? unaccusative : unergative;
  }
};

// Per-class precision, recall and F1 over gold verbs. Abstentions and
// missing verdicts count against recall only; predictions on verbs outside
// the gold set are only counted in `unattested`.
ClassMetrics Evaluate(std::span<const VerbVerdict> verdicts,
                      std::span<const GoldEntry> gold);

// TSV rows `class<TAB>precision<TAB>recall<TAB>f1<TAB>tp<TAB>fp<TAB>fn
// <TAB>support<TAB>precision_defined`, then '#' summary lines.
void WriteMetricsTsv(const ClassMetrics &metrics, std::ostream &out);

// Class x P/R/F1 table for the terminal.
void PrintMetricsTable(const ClassMetrics &metrics, std::ostream &out);

}  // namespace unacc

#endif  // UNACC_EVAL_H_
