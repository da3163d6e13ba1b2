#ifndef UNACC_EMBED_H_
#define UNACC_EMBED_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "unacc/corpus.h"
#include "unacc/error.h"

namespace unacc {

// Word vectors with unit-length rows, immutable once loaded.
class EmbeddingSpace {
 public:
  EmbeddingSpace() = default;

  // Rows are normalized here. Throws Error on duplicates, ragged rows or a
  // zero vector.
  EmbeddingSpace(std::vector<std::string> words, std::size_t dimension,
                 std::vector<double> values);

  std::size_t size() const { return words_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<std::string> &words() const { return words_; }
  const std::string &word(std::size_t i) const { return words_[i]; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dimension_, dimension_};
  }
  std::optional<std::size_t> Find(const std::string &word) const;
  bool Contains(const std::string &word) const { return Find(word).has_value(); }

 private:
  std::vector<std::string> words_;
  std::size_t dimension_ = 0;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

// `word v1 ... vd` per line.
EmbeddingSpace LoadVectors(std::istream &in);

// Keeps words of `space` found in `nouns`, in their original order.
EmbeddingSpace FilterNouns(const EmbeddingSpace &space,
                           const std::set<std::string> &nouns);

// One word per line; blank lines and '#' comments skipped.
std::set<std::string> ReadWordList(std::istream &in);

enum class Side { kAgent, kPatient, kBoth };
const char *SideName(Side side);

// S' = V ∩ S \ O and O' = V ∩ O \ S for one verb.
struct SeedSets {
  std::string verb;
  std::set<std::string> agent_seeds;
  std::set<std::string> patient_seeds;
};

class InsufficientSeeds : public Error {
 public:
  InsufficientSeeds(const std::string &verb, Side side)
      : Error("insufficient seeds for '" + verb + "' (" + SideName(side) +
              ")"),
        side_(side) {}
  Side side() const { return side_; }

 private:
  Side side_;
};

class ExpansionFailed : public Error {
 public:
  ExpansionFailed(const std::string &verb, Side side)
      : Error("expansion failed for '" + verb + "' (" + SideName(side) + ")"),
        side_(side) {}
  Side side() const { return side_; }

 private:
  Side side_;
};

// Throws Error if the verb is not in the table, InsufficientSeeds if either
// side comes out empty.
SeedSets MakeSeedSets(const std::string &verb, const VerbFrameTable &table,
                      const EmbeddingSpace &space);

struct ScoredWord {
  std::string word;
  double score = 0.0;

  bool operator==(const ScoredWord &) const = default;
};

// 3CosMul with positive terms only: score(c) = prod_p (cos(c, p) + 1) / 2.
// Returns the k best words outside `positives`, best first, ties in
// vocabulary order.
std::vector<ScoredWord> CosMulNeighbours(const EmbeddingSpace &space,
                                         const std::set<std::string> &positives,
                                         std::size_t k);

struct ExpansionParams {
  std::size_t n_samples = 20;
  std::size_t sample_size = 10;
  std::size_t neighbours_per_sample = 50;
  std::size_t final_size = 30;
  std::uint64_t rng_seed = 0;
};

struct ExpandedSets {
  std::string verb;
  std::vector<ScoredWord> agent_nouns;    // S+, best first
  std::vector<ScoredWord> patient_nouns;  // O+, best first

  bool operator==(const ExpandedSets &) const = default;
};

// Sampled 3CosMul expansion of both seed sets. Candidates found on both
// sides are dropped before each side is cut to params.final_size. Throws
// ExpansionFailed if a side ends up empty.
ExpandedSets ExpandSets(const SeedSets &seeds, const EmbeddingSpace &space,
                        const ExpansionParams &params);

// TSV `verb<TAB>agent|patient<TAB>noun<TAB>score`, sides in rank order.
void WriteExpandedSets(const std::vector<ExpandedSets> &sets, std::ostream &out);
std::vector<ExpandedSets> ReadExpandedSets(std::istream &in);

}  // namespace unacc

#endif  // UNACC_EMBED_H_
