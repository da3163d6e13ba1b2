#include "unacc/ngram.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "unacc/util.h"

namespace unacc {

namespace {

struct ContextStats {
  double total = 0.0;
  std::array<std::uint64_t, 3> n{};  // words seen once, twice, 3+ times

  void Add(std::uint64_t count) {
    total += static_cast<double>(count);
    ++n[std::min<std::uint64_t>(count, 3) - 1];
  }

  double Gamma(const OrderDiscount &d) const {
    return (d.d1 * n[0] + d.d2 * n[1] + d.d3plus * n[2]) / total;
  }
};

double Discounted(std::uint64_t count, const OrderDiscount &d) {
  return std::max(static_cast<double>(count) - d.For(count), 0.0);
}

std::vector<std::string> Words(const NgramModel &model, const Ngram &ngram) {
  std::vector<std::string> words;
  words.reserve(ngram.size());
  for (WordId w : ngram) words.push_back(model.vocab().Word(w));
  return words;
}

std::string JoinWords(const std::vector<std::string> &words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i];
  }
  return out;
}

}  // namespace

Vocabulary::Vocabulary() {
  Insert(kUnkToken);
  Insert(kBosToken);
  Insert(kEosToken);
}

WordId Vocabulary::Insert(std::string_view word) {
  auto [it, inserted] =
      ids_.emplace(std::string(word), static_cast<WordId>(words_.size()));
  if (inserted) words_.emplace_back(word);
  return it->second;
}

std::optional<WordId> Vocabulary::Find(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

WordId Vocabulary::Lookup(std::string_view word) const {
  return Find(word).value_or(kUnk);
}

std::vector<std::string> Tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  for (std::string &t : SplitWhitespace(ToLowerAscii(line))) {
    if (t == kBosToken || t == kEosToken) continue;
    tokens.push_back(std::move(t));
  }
  return tokens;
}

NgramCounts CountNgrams(std::span<const std::vector<std::string>> sentences,
                        int order) {
  if (order < 1 || order > kMaxOrder) {
    throw Error("n-gram order must be in [1, " + std::to_string(kMaxOrder) +
                "], got " + std::to_string(order));
  }
  NgramCounts counts;
  counts.order = order;
  counts.counts.resize(order);

  std::size_t used = 0;
  std::vector<WordId> padded;
  for (const std::vector<std::string> &sentence : sentences) {
    padded.assign(order - 1, Vocabulary::kBos);
    for (const std::string &token : sentence) {
      if (token == kBosToken || token == kEosToken) continue;
      padded.push_back(counts.vocab.Insert(token));
    }
    if (padded.size() == static_cast<std::size_t>(order - 1)) continue;
    padded.push_back(Vocabulary::kEos);
    ++used;
    for (std::size_t i = order - 1; i < padded.size(); ++i) {
      Ngram window(padded.begin() + (i + 1 - order), padded.begin() + i + 1);
      ++counts.counts[order - 1][window];
    }
  }
  if (used == 0) throw Error("empty corpus");

  // Each distinct (k+1)-gram adds one left extension to its k-gram suffix.
  for (int k = order - 1; k >= 1; --k) {
    for (const auto &[ngram, count] : counts.counts[k]) {
      ++counts.counts[k - 1][Ngram(ngram.begin() + 1, ngram.end())];
    }
  }
  return counts;
}

NgramCounts CountNgrams(std::istream &corpus, int order) {
  std::vector<std::vector<std::string>> sentences;
  std::string line;
  while (std::getline(corpus, line)) {
    std::vector<std::string> tokens = Tokenize(line);
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
  }
  return CountNgrams(sentences, order);
}

OrderDiscount ModifiedKneserNeyDiscount(const std::array<std::uint64_t, 4> &n,
                                        int order) {
  if (n[0] == 0 || n[1] == 0 || n[2] == 0 || n[3] == 0) {
    throw InsufficientCounts(order);
  }
  const double n1 = static_cast<double>(n[0]);
  const double n2 = static_cast<double>(n[1]);
  const double n3 = static_cast<double>(n[2]);
  const double n4 = static_cast<double>(n[3]);
  const double y = n1 / (n1 + 2.0 * n2);
  OrderDiscount d;
  d.d1 = 1.0 - 2.0 * y * n2 / n1;
  d.d2 = 2.0 - 3.0 * y * n3 / n2;
  d.d3plus = 3.0 - 4.0 * y * n4 / n3;
  if (d.d1 < 0.0 || d.d1 > 1.0 || d.d2 < 0.0 || d.d2 > 2.0 || d.d3plus < 0.0 ||
      d.d3plus > 3.0) {
    throw InsufficientCounts(order);
  }
  return d;
}

std::array<std::uint64_t, 4> CountsOfCounts(
    const NgramMap<std::uint64_t> &table) {
  std::array<std::uint64_t, 4> n{};
  for (const auto &[ngram, count] : table) {
    if (count >= 1 && count <= 4) ++n[count - 1];
  }
  return n;
}

Discounts EstimateDiscounts(const NgramCounts &counts, DiscountPolicy policy) {
  Discounts discounts;
  for (int k = 1; k <= counts.order; ++k) {
    const auto n = CountsOfCounts(counts.table(k));
    try {
      discounts.orders.push_back(ModifiedKneserNeyDiscount(n, k));
    } catch (const InsufficientCounts &) {
      if (policy == DiscountPolicy::kStrict) throw;
      const double denom = static_cast<double>(n[0]) + 2.0 * n[1];
      double y = denom > 0.0 ? static_cast<double>(n[0]) / denom : 0.0;
      if (!(y > 0.0)) y = 0.5;
      discounts.orders.push_back({y, y, y, true});
    }
  }
  return discounts;
}

NgramModel::NgramModel(int order) : order_(order), tables_(order) {
  if (order < 1 || order > kMaxOrder) {
    throw Error("n-gram order must be in [1, " + std::to_string(kMaxOrder) +
                "], got " + std::to_string(order));
  }
}

void NgramModel::Set(const Ngram &ngram, double log10_prob) {
  tables_[ngram.size() - 1][ngram].log10_prob = log10_prob;
}

void NgramModel::SetBackoff(const Ngram &ngram, double log10_backoff) {
  Entry &e = tables_[ngram.size() - 1][ngram];
  e.log10_backoff = log10_backoff;
  e.has_backoff = true;
}

const NgramModel::Entry *NgramModel::Find(const Ngram &ngram) const {
  if (ngram.empty() || ngram.size() > tables_.size()) return nullptr;
  const auto &table = tables_[ngram.size() - 1];
  auto it = table.find(ngram);
  return it == table.end() ? nullptr : &it->second;
}

double NgramModel::Log10Prob(std::span<const WordId> context,
                             WordId word) const {
  const std::size_t n =
      std::min(context.size(), static_cast<std::size_t>(order_ - 1));
  const auto history = context.last(n);
  double backoff = 0.0;
  Ngram key;
  for (std::size_t len = n;; --len) {
    key.assign(history.end() - len, history.end());
    key.push_back(word);
    if (const Entry *e = Find(key)) return backoff + e->log10_prob;
    if (len == 0) return backoff + kLog10Zero;
    key.pop_back();
    if (const Entry *ctx = Find(key); ctx != nullptr && ctx->has_backoff) {
      backoff += ctx->log10_backoff;
    }
  }
}

NgramModel EstimateModel(const NgramCounts &counts, const Discounts &discounts,
                         const EstimateOptions &options) {
  const int order = counts.order;
  if (static_cast<int>(discounts.orders.size()) != order) {
    throw Error("discounts do not match the model order");
  }
  NgramModel model(order);
  for (WordId id = 0; id < counts.vocab.size(); ++id) {
    model.Intern(counts.vocab.Word(id));
  }

  // Unigrams: discounted counts interpolated with the uniform distribution.
  {
    const auto &table = counts.table(1);
    const OrderDiscount &d = discounts.at(1);
    ContextStats stats;
    for (const auto &[ngram, count] : table) stats.Add(count);
    const double gamma = stats.Gamma(d);
    const double uniform = 1.0 / static_cast<double>(table.size());
    const bool unk_seen = table.contains(Ngram{Vocabulary::kUnk});
    if (!unk_seen && !(options.unk_floor > 0.0)) {
      throw Error("<unk> floor must be positive");
    }
    const double scale = unk_seen ? 1.0 : 1.0 / (1.0 + options.unk_floor);
    for (const auto &[ngram, count] : table) {
      const double p = Discounted(count, d) / stats.total + gamma * uniform;
      model.Set(ngram, std::log10(p * scale));
    }
    if (!unk_seen) {
      model.Set({Vocabulary::kUnk}, std::log10(options.unk_floor * scale));
    }
    model.Set({Vocabulary::kBos}, kLog10Zero);
  }

  for (int k = 2; k <= order; ++k) {
    const auto &table = counts.table(k);
    const OrderDiscount &d = discounts.at(k);
    NgramMap<ContextStats> contexts;
    for (const auto &[ngram, count] : table) {
      contexts[Ngram(ngram.begin(), ngram.end() - 1)].Add(count);
    }
    NgramMap<double> gammas;
    for (const auto &[context, stats] : contexts) {
      const double gamma = stats.Gamma(d);
      gammas.emplace(context, gamma);
      // Contexts made only of <s> padding are never predicted themselves.
      if (model.Find(context) == nullptr) model.Set(context, kLog10Zero);
      model.SetBackoff(context, std::log10(gamma));
    }
    for (const auto &[ngram, count] : table) {
      const Ngram context(ngram.begin(), ngram.end() - 1);
      const double lower = std::pow(
          10.0, model.Log10Prob(std::span<const WordId>(context).subspan(1),
                                ngram.back()));
      const double p = Discounted(count, d) / contexts.at(context).total +
                       gammas.at(context) * lower;
      model.Set(ngram, std::log10(p));
    }
  }
  return model;
}

NgramModel TrainModel(std::istream &corpus, int order,
                      const EstimateOptions &options) {
  const NgramCounts counts = CountNgrams(corpus, order);
  return EstimateModel(counts,
                       EstimateDiscounts(counts, DiscountPolicy::kFallback),
                       options);
}

std::vector<double> ScoreTerms(const NgramModel &model,
                               std::span<const std::string> tokens) {
  std::vector<WordId> history(model.order() - 1, Vocabulary::kBos);
  std::vector<double> terms;
  terms.reserve(tokens.size() + 1);
  for (const std::string &token : tokens) {
    const WordId id = model.vocab().Lookup(token);
    terms.push_back(model.Log10Prob(history, id));
    history.push_back(id);
  }
  terms.push_back(model.Log10Prob(history, Vocabulary::kEos));
  return terms;
}

double ScoreSentence(const NgramModel &model,
                     std::span<const std::string> tokens) {
  if (tokens.empty()) throw Error("cannot score an empty sentence");
  double total = 0.0;
  for (double term : ScoreTerms(model, tokens)) total += term;
  return total;
}

double ScoreFinalToken(const NgramModel &model,
                       std::span<const std::string> tokens) {
  if (tokens.empty()) throw Error("cannot score an empty sentence");
  std::vector<WordId> history(model.order() - 1, Vocabulary::kBos);
  for (const std::string &token : tokens) {
    history.push_back(model.vocab().Lookup(token));
  }
  return model.Log10Prob(history, Vocabulary::kEos);
}

void WriteArpa(const NgramModel &model, std::ostream &out) {
  out << "\\data\\\n";
  for (int k = 1; k <= model.order(); ++k) {
    out << "ngram " << k << '=' << model.entries(k).size() << '\n';
  }
  for (int k = 1; k <= model.order(); ++k) {
    using Row = std::pair<std::vector<std::string>, const NgramModel::Entry *>;
    std::vector<Row> rows;
    rows.reserve(model.entries(k).size());
    for (const auto &[ngram, entry] : model.entries(k)) {
      rows.emplace_back(Words(model, ngram), &entry);
    }
    std::sort(rows.begin(), rows.end(),
              [](const Row &a, const Row &b) { return a.first < b.first; });
    out << "\n\\" << k << "-grams:\n";
    for (const auto &[words, entry] : rows) {
      out << FormatFixed(entry->log10_prob, 6) << '\t' << JoinWords(words);
      if (entry->has_backoff) {
        out << '\t' << FormatFixed(entry->log10_backoff, 6);
      }
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

NgramModel ReadArpa(std::istream &in) {
  std::string raw;
  std::size_t line_no = 0;
  auto next = [&](std::string_view *line) {
    if (!std::getline(in, raw)) return false;
    ++line_no;
    *line = StripCR(raw);
    return true;
  };

  std::string_view line;
  bool found = false;
  while (next(&line)) {
    if (line == "\\data\\") {
      found = true;
      break;
    }
  }
  if (!found) throw ParseError(line_no, "missing \\data\\ header");

  std::vector<std::size_t> declared;
  while (next(&line)) {
    if (line.empty()) {
      if (declared.empty()) continue;
      break;
    }
    if (!line.starts_with("ngram ")) {
      throw ParseError(line_no, "expected 'ngram k=count'");
    }
    const auto eq = line.find('=');
    long long k = 0;
    long long n = 0;
    if (eq == std::string_view::npos || !ParseInt(line.substr(6, eq - 6), &k) ||
        !ParseInt(line.substr(eq + 1), &n) || n < 0 ||
        k != static_cast<long long>(declared.size()) + 1) {
      throw ParseError(line_no, "malformed count line");
    }
    declared.push_back(static_cast<std::size_t>(n));
  }
  if (declared.empty()) throw ParseError(line_no, "no n-gram counts declared");
  if (declared.size() > static_cast<std::size_t>(kMaxOrder)) {
    throw ParseError(line_no, "order above " + std::to_string(kMaxOrder));
  }

  NgramModel model(static_cast<int>(declared.size()));
  int section = 0;
  std::size_t seen = 0;
  auto close_section = [&] {
    if (section > 0 && seen != declared[section - 1]) {
      throw ParseError(line_no, std::to_string(section) + "-gram section has " +
                                    std::to_string(seen) + " entries, header says " +
                                    std::to_string(declared[section - 1]));
    }
  };
  bool ended = false;
  while (next(&line)) {
    if (line.empty()) continue;
    if (line == "\\end\\") {
      close_section();
      ended = true;
      break;
    }
    if (line.front() == '\\') {
      close_section();
      const std::string expected = "\\" + std::to_string(section + 1) + "-grams:";
      if (line != expected) {
        throw ParseError(line_no, "expected section header " + expected);
      }
      ++section;
      seen = 0;
      continue;
    }
    if (section == 0) throw ParseError(line_no, "entry outside a section");
    const std::vector<std::string> fields = SplitWhitespace(line);
    const std::size_t k = static_cast<std::size_t>(section);
    double logprob = 0.0;
    if ((fields.size() != k + 1 && fields.size() != k + 2) ||
        !ParseDouble(fields[0], &logprob)) {
      throw ParseError(line_no, "malformed " + std::to_string(k) + "-gram entry");
    }
    Ngram ngram;
    for (std::size_t i = 1; i <= k; ++i) ngram.push_back(model.Intern(fields[i]));
    model.Set(ngram, logprob);
    if (fields.size() == k + 2) {
      double backoff = 0.0;
      if (!ParseDouble(fields[k + 1], &backoff)) {
        throw ParseError(line_no, "malformed backoff weight");
      }
      model.SetBackoff(ngram, backoff);
    }
    ++seen;
  }
  if (!ended) throw ParseError(line_no, "truncated ARPA file: missing \\end\\");
  if (section != model.order()) {
    throw ParseError(line_no, "missing n-gram sections");
  }
  return model;
}

UnigramModel UnigramModel::Estimate(
    std::span<const std::vector<std::string>> sentences, double unk_floor) {
  std::map<std::string, double, std::less<>> counts;
  double total = 0.0;
  for (const std::vector<std::string> &sentence : sentences) {
    if (sentence.empty()) continue;
    for (const std::string &token : sentence) {
      counts[token] += 1.0;
      total += 1.0;
    }
    counts[std::string(kEosToken)] += 1.0;
    total += 1.0;
  }
  if (total == 0.0) throw Error("empty corpus");
  const bool unk_seen = counts.contains(kUnkToken);
  if (!unk_seen && !(unk_floor > 0.0)) throw Error("<unk> floor must be positive");
  const double scale = unk_seen ? 1.0 : 1.0 / (1.0 + unk_floor);
  UnigramModel model;
  for (const auto &[token, count] : counts) {
    model.log10_probs_[token] = std::log10(count / total * scale);
  }
  if (!unk_seen) {
    model.log10_probs_[std::string(kUnkToken)] = std::log10(unk_floor * scale);
  }
  return model;
}

UnigramModel UnigramModel::Estimate(std::istream &corpus, double unk_floor) {
  std::vector<std::vector<std::string>> sentences;
  std::string line;
  while (std::getline(corpus, line)) sentences.push_back(Tokenize(line));
  return Estimate(sentences, unk_floor);
}

UnigramModel UnigramModel::FromModel(const NgramModel &model) {
  UnigramModel out;
  for (const auto &[ngram, entry] : model.entries(1)) {
    if (ngram[0] == Vocabulary::kBos) continue;
    out.log10_probs_[model.vocab().Word(ngram[0])] = entry.log10_prob;
  }
  if (out.log10_probs_.empty()) throw Error("model has no unigrams");
  return out;
}

NgramModel UnigramModel::ToModel() const {
  NgramModel model(1);
  for (const auto &[token, logp] : log10_probs_) {
    model.Set({model.Intern(token)}, logp);
  }
  model.Set({Vocabulary::kBos}, kLog10Zero);
  return model;
}

double UnigramModel::Log10Prob(std::string_view token) const {
  if (auto it = log10_probs_.find(token); it != log10_probs_.end()) {
    return it->second;
  }
  if (auto it = log10_probs_.find(kUnkToken); it != log10_probs_.end()) {
    return it->second;
  }
  return kLog10Zero;
}

double UnigramModel::Log10Score(std::span<const std::string> tokens,
                                bool include_eos) const {
  double total = 0.0;
  for (const std::string &token : tokens) total += Log10Prob(token);
  if (include_eos) total += Log10Prob(kEosToken);
  return total;
}

}  // namespace unacc
