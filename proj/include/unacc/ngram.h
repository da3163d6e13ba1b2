#ifndef UNACC_NGRAM_H_
#define UNACC_NGRAM_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "unacc/error.h"

namespace unacc {

inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::string_view kBosToken = "<s>";
inline constexpr std::string_view kEosToken = "</s>";

// ARPA's stand-in for log10(0), used for <s>.
inline constexpr double kLog10Zero = -99.0;

inline constexpr int kMaxOrder = 6;

using WordId = std::uint32_t;
using Ngram = std::vector<WordId>;

struct NgramHash {
  std::size_t operator()(const Ngram &ngram) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (WordId w : ngram) {
      h ^= w;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

template <typename T>
using NgramMap = std::unordered_map<Ngram, T, NgramHash>;

// String <-> id map. Ids 0, 1, 2 are always <unk>, <s>, </s>.
class Vocabulary {
 public:
  static constexpr WordId kUnk = 0;
  static constexpr WordId kBos = 1;
  static constexpr WordId kEos = 2;

  Vocabulary();

  WordId Insert(std::string_view word);
  std::optional<WordId> Find(std::string_view word) const;
  // Unknown words map to <unk>.
  WordId Lookup(std::string_view word) const;
  const std::string &Word(WordId id) const { return words_[id]; }
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> ids_;
};

// Lowercases and splits on whitespace. Literal <s> and </s> are dropped.
std::vector<std::string> Tokenize(std::string_view line);

// Counts for an order-N model. The top order holds raw counts; every lower
// order holds continuation counts (distinct left extensions).
struct NgramCounts {
  int order = 0;
  Vocabulary vocab;
  std::vector<NgramMap<std::uint64_t>> counts;  // counts[k - 1]: k-grams

  const NgramMap<std::uint64_t> &table(int k) const { return counts[k - 1]; }
};

// Each sentence is padded with order-1 <s> and one </s>. Throws Error on an
// empty corpus or an order outside [1, kMaxOrder].
NgramCounts CountNgrams(std::span<const std::vector<std::string>> sentences,
                        int order);
// One sentence per line, tokenized with Tokenize; blank lines are skipped.
NgramCounts CountNgrams(std::istream &corpus, int order);

struct OrderDiscount {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3plus = 0.0;
  bool fallback = false;  // single absolute discount

  double For(std::uint64_t count) const {
    return count == 0 ? 0.0 : count == 1 ? d1 : count == 2 ? d2 : d3plus;
  }
};

struct Discounts {
  std::vector<OrderDiscount> orders;  // orders[k - 1]

  const OrderDiscount &at(int k) const { return orders[k - 1]; }
};

class InsufficientCounts : public Error {
 public:
  explicit InsufficientCounts(int order)
      : Error("corpus too small for modified KN at order " +
              std::to_string(order) +
              " (a count-of-counts n1..n4 is zero or a discount is out of "
              "range); retry with the fallback discount policy"),
        order_(order) {}
  int order() const { return order_; }

 private:
  int order_;
};

// Chen & Goodman closed forms from counts-of-counts n1..n4:
//   Y = n1 / (n1 + 2 n2), D1 = 1 - 2Y n2/n1, D2 = 2 - 3Y n3/n2,
//   D3+ = 3 - 4Y n4/n3.
// Throws InsufficientCounts(order) if an n is zero or a Dk leaves [0, k].
OrderDiscount ModifiedKneserNeyDiscount(const std::array<std::uint64_t, 4> &n,
                                        int order = 0);

enum class DiscountPolicy {
  kStrict,
  // Orders that fail the closed forms use one absolute discount D = Y
  // (0.5 when Y is undefined or zero).
  kFallback,
};

std::array<std::uint64_t, 4> CountsOfCounts(const NgramMap<std::uint64_t> &table);

Discounts EstimateDiscounts(const NgramCounts &counts,
                            DiscountPolicy policy = DiscountPolicy::kStrict);

// Backoff model: log10 probabilities and backoff weights per stored n-gram.
class NgramModel {
 public:
  struct Entry {
    double log10_prob = kLog10Zero;
    double log10_backoff = 0.0;
    bool has_backoff = false;
  };

  explicit NgramModel(int order);

  int order() const { return order_; }
  const Vocabulary &vocab() const { return vocab_; }
  WordId Intern(std::string_view word) { return vocab_.Insert(word); }

  // Adds or replaces an entry; the n-gram length picks the table.
  void Set(const Ngram &ngram, double log10_prob);
  void SetBackoff(const Ngram &ngram, double log10_backoff);

  const Entry *Find(const Ngram &ngram) const;
  const NgramMap<Entry> &entries(int k) const { return tables_[k - 1]; }

  // log10 P(word | context) by backoff. `context` lists preceding words
  // oldest first; only the last order-1 matter. Contexts without a stored
  // backoff weight contribute 0.
  double Log10Prob(std::span<const WordId> context, WordId word) const;

 private:
  int order_;
  Vocabulary vocab_;
  std::vector<NgramMap<Entry>> tables_;
};

struct EstimateOptions {
  // Unnormalized probability given to <unk> when the corpus has no <unk>
  // token; all unigrams are then rescaled by 1 / (1 + floor).
  double unk_floor = 1e-7;
};

// Interpolated modified Kneser-Ney, stored in backoff form: each stored
// n-gram carries its interpolated probability and each context its
// interpolation weight as backoff.
NgramModel EstimateModel(const NgramCounts &counts, const Discounts &discounts,
                         const EstimateOptions &options = {});

// Count, estimate discounts (with fallback), estimate.
NgramModel TrainModel(std::istream &corpus, int order,
                      const EstimateOptions &options = {});

// Per-position log10 terms for tokens followed by </s>; OOVs become <unk>.
std::vector<double> ScoreTerms(const NgramModel &model,
                               std::span<const std::string> tokens);

// Sum of ScoreTerms. Throws Error on an empty sentence.
double ScoreSentence(const NgramModel &model,
                     std::span<const std::string> tokens);

// log10 P(</s> | history) only.
double ScoreFinalToken(const NgramModel &model,
                       std::span<const std::string> tokens);

void WriteArpa(const NgramModel &model, std::ostream &out);
NgramModel ReadArpa(std::istream &in);

// Token -> log10 probability, including </s> and <unk>.
class UnigramModel {
 public:
  UnigramModel() = default;

  // Relative frequencies over the corpus tokens and </s>, with the <unk>
  // floor applied as in EstimateOptions.
  static UnigramModel Estimate(std::span<const std::vector<std::string>> sentences,
                               double unk_floor = 1e-7);
  static UnigramModel Estimate(std::istream &corpus, double unk_floor = 1e-7);

  // Takes the 1-gram section of a model; <s> is skipped.
  static UnigramModel FromModel(const NgramModel &model);
  NgramModel ToModel() const;

  // OOV tokens score as <unk>.
  double Log10Prob(std::string_view token) const;
  using Table = std::map<std::string, double, std::less<>>;
  const Table &table() const { return log10_probs_; }

  // Sum over tokens, plus </s> when include_eos.
  double Log10Score(std::span<const std::string> tokens, bool include_eos) const;

 private:
  Table log10_probs_;
};

}  // namespace unacc

#endif  // UNACC_NGRAM_H_
