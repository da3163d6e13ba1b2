// Brute-force interpolated modified Kneser-Ney over plain strings. Counts
// are recomputed by scanning the padded text, probabilities by direct
// recursion; nothing is shared with the library's estimator.
#ifndef UNACC_TESTS_KN_ORACLE_H_
#define UNACC_TESTS_KN_ORACLE_H_

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Words = std::vector<std::string>;

class KnOracle {
 public:
  KnOracle(const std::vector<Words> &sentences, int order, double unk_floor);

  // P(word | history); only the last order-1 history words matter, unknown
  // words act as <unk>.
  double Prob(const Words &history, const std::string &word) const;

  // Every word with nonzero probability: corpus types, </s>, <unk>.
  const std::set<std::string> &vocabulary() const { return vocab_; }
  // Histories of length order-1 seen before a predicted token.
  const std::set<Words> &histories() const { return histories_; }
  // {D1, D2, D3+} used at order k.
  std::array<double, 3> discount(int k) const { return discounts_[k - 1]; }

 private:
  double ProbAt(int k, const Words &context, const std::string &word) const;

  int order_;
  double unk_floor_;
  bool unk_seen_ = false;
  std::vector<std::map<Words, long>> counts_;  // counts_[k-1]
  std::vector<std::array<double, 3>> discounts_;
  std::set<std::string> vocab_;
  std::set<Words> histories_;
};

// Random corpus of `sentences` sentences drawn from w0..w{vocab-1}, at most
// max_tokens tokens overall.
std::vector<Words> RandomCorpus(unsigned long long seed, int vocab,
                                int max_tokens);

}  // namespace oracle

#endif  // UNACC_TESTS_KN_ORACLE_H_
