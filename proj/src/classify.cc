#include "unacc/classify.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include "unacc/util.h"

namespace unacc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double LogSumExp(std::span<const ScoreRecord> records) {
  double peak = -std::numeric_limits<double>::infinity();
  for (const ScoreRecord &r : records) peak = std::max(peak, r.logp_model);
  if (std::isinf(peak)) return peak;
  double sum = 0.0;
  for (const ScoreRecord &r : records) sum += std::exp(r.logp_model - peak);
  return peak + std::log(sum);
}

VerbVerdict AbstainVerdict(const std::string &verb, const std::string &reason,
                           NormalizationMode mode) {
  VerbVerdict v;
  v.verb = verb;
  v.label = Label::kAbstain;
  v.agent_total = kNaN;
  v.patient_total = kNaN;
  v.mode = mode;
  v.reason = reason;
  return v;
}

}  // namespace

const char *LabelName(Label label) {
  switch (label) {
    case Label::kUnaccusative:
      return "unaccusative";
    case Label::kUnergative:
      return "unergative";
    case Label::kAbstain:
      return "abstain";
  }
  return "?";
}

Label ParseLabel(std::string_view name) {
  if (name == "unaccusative") return Label::kUnaccusative;
  if (name == "unergative") return Label::kUnergative;
  if (name == "abstain") return Label::kAbstain;
  throw Error("unknown label '" + std::string(name) + "'");
}

double Aggregate(std::span<const ScoreRecord> records, NormalizationMode mode) {
  if (records.empty()) throw Error("cannot aggregate an empty side");
  const Role role = records.front().sentence.role;
  for (const ScoreRecord &r : records) {
    if (r.sentence.role != role) throw Error("aggregate mixes agent and patient records");
  }
  if (mode == NormalizationMode::kNone) return LogSumExp(records);
  double sum = 0.0;
  for (const ScoreRecord &r : records) sum += Normalize(r, mode);
  return sum / static_cast<double>(records.size());
}

Label ClassifyVerb(double agent_total, double patient_total) {
  if (!std::isfinite(agent_total) || !std::isfinite(patient_total)) {
    throw Error("side totals must be finite");
  }
  return patient_total > agent_total ? Label::kUnaccusative : Label::kUnergative;
}

std::vector<VerbVerdict> ClassifyScored(std::span<const ScoreRecord> records,
                                        NormalizationMode mode,
                                        bool balance_sides) {
  struct Sides {
    std::vector<ScoreRecord> agent;
    std::vector<ScoreRecord> patient;
  };
  std::map<std::string, Sides> by_verb;
  for (const ScoreRecord &r : records) {
    Sides &s = by_verb[r.sentence.verb];
    (r.sentence.role == Role::kAgent ? s.agent : s.patient).push_back(r);
  }
  std::vector<VerbVerdict> verdicts;
  for (auto &[verb, sides] : by_verb) {
    if (sides.agent.empty() || sides.patient.empty()) {
      verdicts.push_back(AbstainVerdict(
          verb, std::string("missing-side:") +
                    (sides.agent.empty() ? "agent" : "patient"),
          mode));
      continue;
    }
    if (balance_sides) {
      const std::size_t n = std::min(sides.agent.size(), sides.patient.size());
      sides.agent.resize(n);
      sides.patient.resize(n);
    }
    VerbVerdict v;
    v.verb = verb;
    v.mode = mode;
    v.n_agent = sides.agent.size();
    v.n_patient = sides.patient.size();
    v.agent_total = Aggregate(sides.agent, mode);
    v.patient_total = Aggregate(sides.patient, mode);
    if (std::isfinite(v.agent_total) && std::isfinite(v.patient_total)) {
      v.label = ClassifyVerb(v.agent_total, v.patient_total);
    } else {
      v.label = Label::kAbstain;
      v.reason = "non-finite-score";
    }
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

void ExpandVerbs(const std::vector<std::string> &verbs,
                 const VerbFrameTable &table, const EmbeddingSpace &space,
                 const ExpansionParams &params, int threads,
                 std::vector<ExpandedSets> *expanded,
                 std::vector<Abstention> *abstentions) {
  const std::set<std::string> unique(verbs.begin(), verbs.end());
  const std::vector<std::string> ordered(unique.begin(), unique.end());
  std::vector<std::optional<ExpandedSets>> results(ordered.size());
  std::vector<std::string> reasons(ordered.size());

  ParallelFor(ordered.size(), threads, [&](std::size_t i) {
    const std::string &verb = ordered[i];
    if (!table.contains(verb)) {
      reasons[i] = "no-frames";
      return;
    }
    try {
      results[i] = ExpandSets(MakeSeedSets(verb, table, space), space, params);
    } catch (const InsufficientSeeds &e) {
      reasons[i] = std::string("insufficient-seeds:") + SideName(e.side());
    } catch (const ExpansionFailed &e) {
      reasons[i] = std::string("expansion-failed:") + SideName(e.side());
    }
  });

  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (results[i]) {
      expanded->push_back(std::move(*results[i]));
    } else {
      abstentions->push_back({ordered[i], reasons[i]});
    }
  }
}

std::vector<VerbVerdict> MergeAbstentions(std::vector<VerbVerdict> verdicts,
                                          const std::vector<Abstention> &abstentions,
                                          NormalizationMode mode) {
  for (const Abstention &a : abstentions) {
    verdicts.push_back(AbstainVerdict(a.verb, a.reason, mode));
  }
  std::sort(verdicts.begin(), verdicts.end(),
            [](const VerbVerdict &a, const VerbVerdict &b) { return a.verb < b.verb; });
  return verdicts;
}

ClassifyResult ClassifyAll(const std::vector<std::string> &verbs,
                           const VerbFrameTable &table,
                           const EmbeddingSpace &space, SentenceScorer &scorer,
                           const UnigramModel *unigram,
                           const Inflector &inflector,
                           const ClassifyConfig &config) {
  ClassifyResult result;
  ExpandVerbs(verbs, table, space, config.expansion, config.threads,
              &result.expanded, &result.abstentions);

  std::vector<ProbeSentence> probes;
  for (const ExpandedSets &e : result.expanded) {
    for (ProbeSentence &p : GenerateProbes(e, inflector)) {
      probes.push_back(std::move(p));
    }
  }
  if (!probes.empty()) {
    result.records = ScoreBatch(scorer, probes, unigram, config.normalization,
                                config.score_mode);
  }
  result.verdicts = MergeAbstentions(
      ClassifyScored(result.records, config.normalization, config.balance_sides),
      result.abstentions, config.normalization);
  return result;
}

void WriteVerdicts(const std::vector<VerbVerdict> &verdicts, std::ostream &out) {
  for (const VerbVerdict &v : verdicts) {
    out << v.verb << '\t' << LabelName(v.label) << '\t'
        << FormatDouble(v.agent_total) << '\t' << FormatDouble(v.patient_total)
        << '\t' << v.n_agent << '\t' << v.n_patient << '\t'
        << (v.reason.empty() ? "-" : v.reason) << '\n';
  }
}

std::vector<VerbVerdict> ReadVerdicts(std::istream &in) {
  std::vector<VerbVerdict> verdicts;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = StripCR(raw);
    if (line.empty()) continue;
    const std::vector<std::string> cols = Split(line, '\t');
    VerbVerdict v;
    long long n_agent = 0;
    long long n_patient = 0;
    const bool ok = cols.size() == 7 && ParseDouble(cols[2], &v.agent_total) &&
                    ParseDouble(cols[3], &v.patient_total) &&
                    ParseInt(cols[4], &n_agent) && n_agent >= 0 &&
                    ParseInt(cols[5], &n_patient) && n_patient >= 0;
    if (!ok) throw ParseError(line_no, "malformed verdict line");
    v.verb = cols[0];
    try {
      v.label = ParseLabel(cols[1]);
    } catch (const Error &e) {
      throw ParseError(line_no, e.what());
    }
    v.n_agent = static_cast<std::size_t>(n_agent);
    v.n_patient = static_cast<std::size_t>(n_patient);
    if (cols[6] != "-") v.reason = cols[6];
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

void WriteAbstentions(const std::vector<Abstention> &abstentions,
                      std::ostream &out) {
  for (const Abstention &a : abstentions) out << a.verb << '\t' << a.reason << '\n';
}

std::vector<Abstention> ReadAbstentions(std::istream &in) {
  std::vector<Abstention> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = StripCR(raw);
    if (line.empty()) continue;
    const std::vector<std::string> cols = Split(line, '\t');
    if (cols.size() != 2) throw ParseError(line_no, "expected verb<TAB>reason");
    out.push_back({cols[0], cols[1]});
  }
  return out;
}

}  // namespace unacc
