#include "checks.h"

#include <cmath>
#include <random>

namespace testing_util {

unacc::NgramModel TrainOn(const std::vector<oracle::Words> &corpus, int order,
                          double unk_floor) {
  const unacc::NgramCounts counts = unacc::CountNgrams(corpus, order);
  return unacc::EstimateModel(
      counts, unacc::EstimateDiscounts(counts, unacc::DiscountPolicy::kFallback),
      {unk_floor});
}

std::vector<unacc::WordId> Ids(const unacc::NgramModel &model,
                               const oracle::Words &words) {
  std::vector<unacc::WordId> ids;
  for (const std::string &w : words) ids.push_back(model.vocab().Lookup(w));
  return ids;
}

OracleDiff CompareWithOracle(const std::vector<oracle::Words> &corpus, int order,
                             unsigned long long seed, int extra_histories) {
  const unacc::NgramModel model = TrainOn(corpus, order);
  const oracle::KnOracle kn(corpus, order, 1e-7);

  std::vector<oracle::Words> histories(kn.histories().begin(),
                                       kn.histories().end());
  std::vector<std::string> pool(kn.vocabulary().begin(), kn.vocabulary().end());
  pool.push_back("<s>");
  pool.push_back("never-seen");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < extra_histories; ++i) {
    oracle::Words h;
    for (int j = 0; j < order - 1; ++j) h.push_back(pool[pick(rng)]);
    histories.push_back(std::move(h));
  }

  OracleDiff diff;
  for (const oracle::Words &h : histories) {
    const auto context = Ids(model, h);
    for (const std::string &w : kn.vocabulary()) {
      const double got =
          std::pow(10.0, model.Log10Prob(context, model.vocab().Lookup(w)));
      const double want = kn.Prob(h, w);
      const double d = std::abs(got - want);
      ++diff.compared;
      if (d > diff.max_abs || diff.worst.empty()) {
        diff.max_abs = std::max(diff.max_abs, d);
        std::string name;
        for (const auto &x : h) name += x + " ";
        diff.worst = name + "-> " + w;
      }
    }
  }
  return diff;
}

double MaxNormalizationError(const unacc::NgramModel &model) {
  double worst = 0.0;
  const auto &vocab = model.vocab();
  for (int k = 1; k < model.order(); ++k) {
    for (const auto &[context, entry] : model.entries(k)) {
      if (!entry.has_backoff) continue;
      double sum = 0.0;
      for (unacc::WordId w = 0; w < vocab.size(); ++w) {
        if (w == unacc::Vocabulary::kBos) continue;
        sum += std::pow(10.0, model.Log10Prob(context, w));
      }
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  // The empty context: unigrams alone.
  double sum = 0.0;
  for (unacc::WordId w = 0; w < vocab.size(); ++w) {
    if (w == unacc::Vocabulary::kBos) continue;
    sum += std::pow(10.0, model.Log10Prob({}, w));
  }
  return std::max(worst, std::abs(sum - 1.0));
}

}  // namespace testing_util
