#include "unacc/embed.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include "unacc/util.h"

namespace unacc {

namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

bool BetterThan(const ScoredWord &a, const ScoredWord &b) {
  if (a.score != b.score) return a.score > b.score;
  return a.word < b.word;
}

// Top-k by product of shifted cosines. `excluded[i]` removes word i from the
// ranking; positives are always excluded.
std::vector<ScoredWord> RankCosMul(const EmbeddingSpace &space,
                                   const std::vector<std::size_t> &positives,
                                   std::size_t k,
                                   const std::vector<bool> *excluded) {
  struct Candidate {
    std::size_t id;
    double score;
  };
  std::vector<bool> skip(space.size(), false);
  if (excluded != nullptr) skip = *excluded;
  for (std::size_t p : positives) skip[p] = true;

  std::vector<Candidate> candidates;
  candidates.reserve(space.size());
  for (std::size_t c = 0; c < space.size(); ++c) {
    if (skip[c]) continue;
    double score = 1.0;
    for (std::size_t p : positives) {
      score *= (Dot(space.row(c), space.row(p)) + 1.0) / 2.0;
    }
    candidates.push_back({c, score});
  }
  const std::size_t keep = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + keep,
                    candidates.end(),
                    [](const Candidate &a, const Candidate &b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.id < b.id;
                    });
  std::vector<ScoredWord> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.push_back({space.word(candidates[i].id), candidates[i].score});
  }
  return out;
}

// Union of per-sample neighbour lists, each candidate keeping its best score.
std::map<std::string, double> CollectCandidates(
    const std::set<std::string> &seeds, const EmbeddingSpace &space,
    const ExpansionParams &params, std::mt19937_64 rng) {
  std::vector<std::size_t> seed_ids;
  std::vector<bool> excluded(space.size(), false);
  for (const std::string &seed : seeds) {
    const std::size_t id = *space.Find(seed);
    seed_ids.push_back(id);
    excluded[id] = true;
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (space.word(i).find('_') != std::string::npos) excluded[i] = true;
  }

  std::map<std::string, double> candidates;
  std::vector<std::size_t> pool = seed_ids;
  for (std::size_t s = 0; s < params.n_samples; ++s) {
    std::vector<std::size_t> sample;
    if (seed_ids.size() <= params.sample_size) {
      sample = seed_ids;
    } else {
      // Partial Fisher-Yates over the seed pool.
      pool = seed_ids;
      for (std::size_t i = 0; i < params.sample_size; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
      }
      sample.assign(pool.begin(), pool.begin() + params.sample_size);
    }
    for (const ScoredWord &n : RankCosMul(space, sample,
                                          params.neighbours_per_sample,
                                          &excluded)) {
      auto [it, inserted] = candidates.emplace(n.word, n.score);
      if (!inserted) it->second = std::max(it->second, n.score);
    }
  }
  return candidates;
}

std::vector<ScoredWord> TopSurvivors(const std::map<std::string, double> &own,
                                     const std::map<std::string, double> &other,
                                     std::size_t final_size) {
  std::vector<ScoredWord> survivors;
  for (const auto &[word, score] : own) {
    if (!other.contains(word)) survivors.push_back({word, score});
  }
  std::sort(survivors.begin(), survivors.end(), BetterThan);
  if (survivors.size() > final_size) survivors.resize(final_size);
  return survivors;
}

}  // namespace

EmbeddingSpace::EmbeddingSpace(std::vector<std::string> words,
                               std::size_t dimension,
                               std::vector<double> values)
    : words_(std::move(words)), dimension_(dimension),
      values_(std::move(values)) {
  if (dimension_ == 0) throw Error("embedding dimension must be positive");
  if (values_.size() != words_.size() * dimension_) {
    throw Error("embedding matrix does not match vocabulary size");
  }
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw Error("duplicate word '" + words_[i] + "' in embedding space");
    }
    std::span<double> r(values_.data() + i * dimension_, dimension_);
    double norm = 0.0;
    for (double v : r) norm += v * v;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error("word '" + words_[i] + "' has a zero or non-finite vector");
    }
    for (double &v : r) v /= norm;
  }
}

std::optional<std::size_t> EmbeddingSpace::Find(const std::string &word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingSpace LoadVectors(std::istream &in) {
  std::vector<std::string> words;
  std::vector<double> values;
  std::size_t dimension = 0;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::vector<std::string> fields = SplitWhitespace(raw);
    if (fields.empty()) continue;
    if (fields.size() < 2) throw ParseError(line_no, "word without a vector");
    const std::size_t d = fields.size() - 1;
    if (dimension == 0) {
      dimension = d;
    } else if (d != dimension) {
      throw ParseError(line_no, "expected " + std::to_string(dimension) +
                                    " components, found " + std::to_string(d));
    }
    if (!seen.insert(fields[0]).second) {
      throw ParseError(line_no, "duplicate word '" + fields[0] + "'");
    }
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      if (!ParseDouble(fields[i], &v) || !std::isfinite(v)) {
        throw ParseError(line_no, "non-numeric component '" + fields[i] + "'");
      }
      values.push_back(v);
    }
    words.push_back(std::move(fields[0]));
  }
  if (words.empty()) throw ParseError(0, "empty vector file");
  try {
    return EmbeddingSpace(std::move(words), dimension, std::move(values));
  } catch (const ParseError &) {
    throw;
  } catch (const Error &e) {
    throw ParseError(0, e.what());
  }
}

EmbeddingSpace FilterNouns(const EmbeddingSpace &space,
                           const std::set<std::string> &nouns) {
  if (nouns.empty()) throw Error("noun vocabulary is empty");
  std::vector<std::string> words;
  std::vector<double> values;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!nouns.contains(space.word(i))) continue;
    words.push_back(space.word(i));
    const auto r = space.row(i);
    values.insert(values.end(), r.begin(), r.end());
  }
  if (words.empty()) throw Error("no nouns retained");
  return EmbeddingSpace(std::move(words), space.dimension(), std::move(values));
}

std::set<std::string> ReadWordList(std::istream &in) {
  std::set<std::string> words;
  std::string raw;
  while (std::getline(in, raw)) {
    const std::string_view line = StripCR(raw);
    if (line.empty() || line.front() == '#') continue;
    words.emplace(line);
  }
  return words;
}

const char *SideName(Side side) {
  switch (side) {
    case Side::kAgent:
      return "agent";
    case Side::kPatient:
      return "patient";
    case Side::kBoth:
      return "both";
  }
  return "?";
}

SeedSets MakeSeedSets(const std::string &verb, const VerbFrameTable &table,
                      const EmbeddingSpace &space) {
  auto it = table.find(verb);
  if (it == table.end()) throw Error("verb '" + verb + "' has no frames");
  const VerbFrames &frames = it->second;
  SeedSets seeds;
  seeds.verb = verb;
  for (const auto &[noun, count] : frames.subjects) {
    if (space.Contains(noun) && !frames.objects.contains(noun)) {
      seeds.agent_seeds.insert(noun);
    }
  }
  for (const auto &[noun, count] : frames.objects) {
    if (space.Contains(noun) && !frames.subjects.contains(noun)) {
      seeds.patient_seeds.insert(noun);
    }
  }
  const bool no_agent = seeds.agent_seeds.empty();
  const bool no_patient = seeds.patient_seeds.empty();
  if (no_agent || no_patient) {
    throw InsufficientSeeds(verb, no_agent && no_patient ? Side::kBoth
                                  : no_agent             ? Side::kAgent
                                                         : Side::kPatient);
  }
  return seeds;
}

std::vector<ScoredWord> CosMulNeighbours(const EmbeddingSpace &space,
                                         const std::set<std::string> &positives,
                                         std::size_t k) {
  if (positives.empty()) throw Error("3CosMul needs at least one positive");
  std::vector<std::size_t> ids;
  for (const std::string &p : positives) {
    auto id = space.Find(p);
    if (!id) throw Error("positive '" + p + "' is not in the vocabulary");
    ids.push_back(*id);
  }
  return RankCosMul(space, ids, k, nullptr);
}

ExpandedSets ExpandSets(const SeedSets &seeds, const EmbeddingSpace &space,
                        const ExpansionParams &params) {
  if (params.n_samples == 0 || params.sample_size == 0 ||
      params.neighbours_per_sample == 0 || params.final_size == 0) {
    throw ValidationError("expansion parameters must be positive");
  }
  if (seeds.agent_seeds.empty() || seeds.patient_seeds.empty()) {
    throw InsufficientSeeds(seeds.verb, seeds.agent_seeds.empty()
                                            ? Side::kAgent
                                            : Side::kPatient);
  }
  for (const auto *side : {&seeds.agent_seeds, &seeds.patient_seeds}) {
    for (const std::string &w : *side) {
      if (!space.Contains(w)) {
        throw Error("seed '" + w + "' is not in the embedding space");
      }
    }
  }

  const auto agent_candidates = CollectCandidates(
      seeds.agent_seeds, space, params,
      KeyedRng(params.rng_seed, {"expand", seeds.verb, "agent"}));
  const auto patient_candidates = CollectCandidates(
      seeds.patient_seeds, space, params,
      KeyedRng(params.rng_seed, {"expand", seeds.verb, "patient"}));

  ExpandedSets out;
  out.verb = seeds.verb;
  out.agent_nouns =
      TopSurvivors(agent_candidates, patient_candidates, params.final_size);
  out.patient_nouns =
      TopSurvivors(patient_candidates, agent_candidates, params.final_size);
  const bool no_agent = out.agent_nouns.empty();
  const bool no_patient = out.patient_nouns.empty();
  if (no_agent || no_patient) {
    throw ExpansionFailed(seeds.verb, no_agent && no_patient ? Side::kBoth
                                      : no_agent             ? Side::kAgent
                                                             : Side::kPatient);
  }
  return out;
}

void WriteExpandedSets(const std::vector<ExpandedSets> &sets,
                       std::ostream &out) {
  for (const ExpandedSets &s : sets) {
    for (const ScoredWord &w : s.agent_nouns) {
      out << s.verb << "\tagent\t" << w.word << '\t' << FormatDouble(w.score)
          << '\n';
    }
    for (const ScoredWord &w : s.patient_nouns) {
      out << s.verb << "\tpatient\t" << w.word << '\t' << FormatDouble(w.score)
          << '\n';
    }
  }
}

std::vector<ExpandedSets> ReadExpandedSets(std::istream &in) {
  std::map<std::string, ExpandedSets> by_verb;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = StripCR(raw);
    if (line.empty()) continue;
    const std::vector<std::string> cols = Split(line, '\t');
    double score = 0.0;
    if (cols.size() != 4 || !ParseDouble(cols[3], &score)) {
      throw ParseError(line_no,
                       "expected verb<TAB>agent|patient<TAB>noun<TAB>score");
    }
    ExpandedSets &s = by_verb[cols[0]];
    s.verb = cols[0];
    if (cols[1] == "agent") {
      s.agent_nouns.push_back({cols[2], score});
    } else if (cols[1] == "patient") {
      s.patient_nouns.push_back({cols[2], score});
    } else {
      throw ParseError(line_no, "unknown role '" + cols[1] + "'");
    }
  }
  std::vector<ExpandedSets> out;
  for (auto &[verb, s] : by_verb) out.push_back(std::move(s));
  return out;
}

}  // namespace unacc
