#include "kn_oracle.h"

#include <algorithm>
#include <random>

namespace oracle {

namespace {

const std::string kBos = "<s>";
const std::string kEos = "</s>";
const std::string kUnk = "<unk>";

std::array<double, 3> Discount(const std::map<Words, long> &counts) {
  double n[5] = {0, 0, 0, 0, 0};
  for (const auto &entry : counts) {
    if (entry.second <= 4) n[entry.second] += 1;
  }
  const double y_den = n[1] + 2 * n[2];
  const double y = y_den > 0 ? n[1] / y_den : 0;
  bool ok = n[1] > 0 && n[2] > 0 && n[3] > 0 && n[4] > 0;
  std::array<double, 3> d{};
  if (ok) {
    d = {1 - 2 * y * n[2] / n[1], 2 - 3 * y * n[3] / n[2],
         3 - 4 * y * n[4] / n[3]};
    ok = d[0] >= 0 && d[0] <= 1 && d[1] >= 0 && d[1] <= 2 && d[2] >= 0 &&
         d[2] <= 3;
  }
  if (!ok) {
    const double fallback = y > 0 ? y : 0.5;
    d = {fallback, fallback, fallback};
  }
  return d;
}

double DiscountFor(const std::array<double, 3> &d, long c) {
  if (c <= 0) return 0;
  return c == 1 ? d[0] : c == 2 ? d[1] : d[2];
}

}  // namespace

KnOracle::KnOracle(const std::vector<Words> &sentences, int order,
                   double unk_floor)
    : order_(order), unk_floor_(unk_floor), counts_(order) {
  std::vector<std::map<Words, std::set<std::string>>> left(order);
  for (const Words &sentence : sentences) {
    if (sentence.empty()) continue;
    Words text(order - 1, kBos);
    text.insert(text.end(), sentence.begin(), sentence.end());
    text.push_back(kEos);
    for (std::size_t j = order - 1; j < text.size(); ++j) {
      histories_.insert(Words(text.begin() + (j - (order - 1)), text.begin() + j));
      for (int k = 1; k <= order; ++k) {
        Words gram(text.begin() + (j + 1 - k), text.begin() + j + 1);
        if (k == order) {
          ++counts_[k - 1][gram];
        } else {
          left[k - 1][gram].insert(text[j - k]);
        }
      }
    }
  }
  for (int k = 1; k < order; ++k) {
    for (const auto &[gram, lefts] : left[k - 1]) {
      counts_[k - 1][gram] = static_cast<long>(lefts.size());
    }
  }
  for (int k = 1; k <= order; ++k) discounts_.push_back(Discount(counts_[k - 1]));
  for (const auto &entry : counts_[0]) vocab_.insert(entry.first[0]);
  unk_seen_ = vocab_.count(kUnk) > 0;
  vocab_.insert(kUnk);
}

double KnOracle::ProbAt(int k, const Words &context,
                        const std::string &word) const {
  const auto &table = counts_[k - 1];
  const auto &d = discounts_[k - 1];
  if (k == 1) {
    if (word == kBos) return 0;
    double total = 0;
    double n[3] = {0, 0, 0};
    for (const auto &entry : table) {
      total += entry.second;
      n[std::min<long>(entry.second, 3) - 1] += 1;
    }
    const double gamma = (d[0] * n[0] + d[1] * n[1] + d[2] * n[2]) / total;
    const double scale = unk_seen_ ? 1.0 : 1.0 / (1.0 + unk_floor_);
    auto it = table.find(Words{word});
    if (it == table.end()) {
      if (word == kUnk) return unk_floor_ * scale;
      return 0;
    }
    const double c = static_cast<double>(it->second);
    const double p = std::max(c - DiscountFor(d, it->second), 0.0) / total +
                     gamma / static_cast<double>(table.size());
    return p * scale;
  }
  // Context statistics by a full scan of the order-k table.
  const Words lower(context.begin() + 1, context.end());
  double total = 0;
  double mass = 0;
  long count = 0;
  for (const auto &entry : table) {
    if (!std::equal(context.begin(), context.end(), entry.first.begin())) continue;
    total += entry.second;
    mass += DiscountFor(d, entry.second);
    if (entry.first.back() == word) count = entry.second;
  }
  if (total == 0) return ProbAt(k - 1, lower, word);
  const double discounted =
      std::max(static_cast<double>(count) - DiscountFor(d, count), 0.0);
  return discounted / total + (mass / total) * ProbAt(k - 1, lower, word);
}

double KnOracle::Prob(const Words &history, const std::string &word) const {
  auto known = [&](const std::string &w) {
    if (w == kBos) return w;
    return vocab_.count(w) ? w : kUnk;
  };
  Words context;
  const std::size_t n = std::min<std::size_t>(history.size(), order_ - 1);
  for (std::size_t i = history.size() - n; i < history.size(); ++i) {
    context.push_back(known(history[i]));
  }
  // Short histories use the highest order they fill.
  return ProbAt(static_cast<int>(context.size()) + 1, context, known(word));
}

std::vector<Words> RandomCorpus(unsigned long long seed, int vocab,
                                int max_tokens) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> word(0, vocab - 1);
  std::uniform_int_distribution<int> length(1, 8);
  std::vector<Words> corpus;
  int used = 0;
  while (true) {
    const int n = length(rng);
    if (used + n > max_tokens) break;
    Words sentence;
    for (int i = 0; i < n; ++i) sentence.push_back("w" + std::to_string(word(rng)));
    corpus.push_back(std::move(sentence));
    used += n;
  }
  if (corpus.empty()) corpus.push_back({"w0"});
  return corpus;
}

}  // namespace oracle
