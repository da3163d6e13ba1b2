// Comparisons between the library and the test oracles, shared by the unit
// tests and the acceptance runner.
#ifndef UNACC_TESTS_CHECKS_H_
#define UNACC_TESTS_CHECKS_H_

#include <string>
#include <vector>

#include "kn_oracle.h"
#include "unacc/ngram.h"

namespace testing_util {

unacc::NgramModel TrainOn(const std::vector<oracle::Words> &corpus, int order,
                          double unk_floor = 1e-7);

std::vector<unacc::WordId> Ids(const unacc::NgramModel &model,
                               const oracle::Words &words);

struct OracleDiff {
  double max_abs = 0.0;
  std::size_t compared = 0;
  std::string worst;  // "history -> word" of the largest difference
};

// Every seen history plus `extra_histories` random ones (drawn with `seed`,
// including an out-of-vocabulary word) against every vocabulary word.
OracleDiff CompareWithOracle(const std::vector<oracle::Words> &corpus, int order,
                             unsigned long long seed, int extra_histories = 20);

// Largest |sum_w P(w|h) - 1| over contexts with a stored backoff weight.
double MaxNormalizationError(const unacc::NgramModel &model);

}  // namespace testing_util

#endif  // UNACC_TESTS_CHECKS_H_
