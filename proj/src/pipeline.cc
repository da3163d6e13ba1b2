#include "unacc/pipeline.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "unacc/corpus.h"
#include "unacc/probe.h"
#include "unacc/util.h"

namespace unacc {

namespace fs = std::filesystem;

namespace {

std::ifstream OpenInput(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

void RequireFile(const std::string &path, const std::string &what) {
  if (path.empty()) throw ValidationError(what + " path is required");
  if (!fs::is_regular_file(path)) {
    throw ValidationError(what + " '" + path + "' does not exist");
  }
}

void OptionalFile(const std::string &path, const std::string &what) {
  if (!path.empty()) RequireFile(path, what);
}

std::string Join(const std::string &dir, const std::string &name) {
  return (fs::path(dir) / name).string();
}

}  // namespace

ScorerSpec ParseScorerSpec(const std::string &spec) {
  if (spec == "builtin") return {ScorerKind::kBuiltin, ""};
  if (spec.starts_with("external:") && spec.size() > 9) {
    return {ScorerKind::kExternal, spec.substr(9)};
  }
  if (spec.starts_with("file:") && spec.size() > 5) {
    return {ScorerKind::kFile, spec.substr(5)};
  }
  throw ValidationError("scorer must be builtin, external:<command> or "
                        "file:<path>, got '" + spec + "'");
}

void ValidateRunConfig(const RunConfig &config) {
  if (config.conllu.empty()) throw ValidationError("no CoNLL-U corpus given");
  for (const std::string &path : config.conllu) RequireFile(path, "corpus");
  RequireFile(config.vectors, "vectors");
  OptionalFile(config.nouns, "noun lexicon");
  OptionalFile(config.verbs, "verb list");
  OptionalFile(config.gold, "gold file");
  OptionalFile(config.irregulars, "irregular verb table");
  OptionalFile(config.lm_corpus, "LM corpus");
  OptionalFile(config.lm_arpa, "LM ARPA file");
  OptionalFile(config.unigram_corpus, "unigram corpus");

  const ScorerSpec scorer = ParseScorerSpec(config.scorer);
  if (scorer.kind == ScorerKind::kBuiltin && config.lm_corpus.empty() &&
      config.lm_arpa.empty()) {
    throw ValidationError("the builtin scorer needs an LM corpus or ARPA file");
  }
  if (scorer.kind == ScorerKind::kFile) RequireFile(scorer.argument, "score file");
  if (scorer.kind != ScorerKind::kBuiltin &&
      config.score_mode == ScoreMode::kFinalToken) {
    throw ValidationError("final-token scoring needs the builtin scorer");
  }
  if (config.normalization != NormalizationMode::kNone &&
      config.unigram_corpus.empty() && config.lm_corpus.empty()) {
    throw ValidationError("normalization needs a unigram or LM corpus");
  }
  if (config.order < 1 || config.order > kMaxOrder) {
    throw ValidationError("LM order must be in [1, " + std::to_string(kMaxOrder) + "]");
  }
  if (!(config.unk_floor > 0.0)) throw ValidationError("unk floor must be positive");
  const ExpansionParams &p = config.expansion;
  if (p.n_samples == 0 || p.sample_size == 0 || p.neighbours_per_sample == 0 ||
      p.final_size == 0) {
    throw ValidationError("expansion parameters must be positive");
  }
  if (!(config.sample_fraction > 0.0 && config.sample_fraction <= 1.0)) {
    throw ValidationError("sample fraction must be in (0, 1]");
  }
  if (config.threads < 1) throw ValidationError("threads must be >= 1");
  if (config.out_dir.empty()) throw ValidationError("output directory is required");
}

void WriteFileAtomic(const std::string &path,
                     const std::function<void(std::ostream &)> &writer) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    writer(out);
    out.flush();
    if (!out) throw Error("write failed for '" + path + "'");
  }
  fs::rename(tmp, path);
}

ExtractSummary RunExtractFrames(const std::vector<std::string> &conllu_paths,
                                const std::string &frames_out,
                                const std::string &nouns_out) {
  std::vector<DepSentence> sentences;
  for (const std::string &path : conllu_paths) {
    std::ifstream in = OpenInput(path);
    try {
      for (DepSentence &s : ParseConllu(in)) sentences.push_back(std::move(s));
    } catch (const ParseError &e) {
      throw ParseError(e.line(), path + ": " + e.what());
    }
  }
  const std::vector<FrameTriple> triples = ExtractFrames(sentences);
  const VerbFrameTable table = BuildFrameTable(triples);
  WriteFileAtomic(frames_out, [&](std::ostream &out) { WriteFrameTable(table, out); });
  if (!nouns_out.empty()) {
    const std::set<std::string> nouns = CollectNouns(sentences);
    WriteFileAtomic(nouns_out, [&](std::ostream &out) {
      for (const std::string &n : nouns) out << n << '\n';
    });
  }
  return {sentences.size(), triples.size(), table.size()};
}

ExpandSummary RunExpand(const std::string &frames_path,
                        const std::string &vectors_path,
                        const std::string &nouns_path,
                        const std::string &verbs_path,
                        const ExpansionParams &params, int threads,
                        const std::string &expanded_out,
                        const std::string &failures_out) {
  VerbFrameTable table;
  {
    std::ifstream in = OpenInput(frames_path);
    table = ReadFrameTable(in);
  }
  EmbeddingSpace space;
  {
    std::ifstream in = OpenInput(vectors_path);
    space = LoadVectors(in);
  }
  if (!nouns_path.empty()) {
    std::ifstream in = OpenInput(nouns_path);
    space = FilterNouns(space, ReadWordList(in));
  }
  std::vector<std::string> verbs;
  if (verbs_path.empty()) {
    for (const auto &[verb, frames] : table) verbs.push_back(verb);
  } else {
    std::ifstream in = OpenInput(verbs_path);
    for (const std::string &v : ReadWordList(in)) verbs.push_back(v);
  }
  std::vector<ExpandedSets> expanded;
  std::vector<Abstention> abstentions;
  ExpandVerbs(verbs, table, space, params, threads, &expanded, &abstentions);
  WriteFileAtomic(expanded_out,
                  [&](std::ostream &out) { WriteExpandedSets(expanded, out); });
  if (!failures_out.empty()) {
    WriteFileAtomic(failures_out,
                    [&](std::ostream &out) { WriteAbstentions(abstentions, out); });
  }
  return {expanded.size(), abstentions.size()};
}

std::size_t RunGenerateProbes(const std::string &expanded_path,
                              const std::string &irregulars_path,
                              const std::string &probes_out) {
  Inflector inflector;
  if (!irregulars_path.empty()) {
    std::ifstream in = OpenInput(irregulars_path);
    inflector = Inflector::FromStream(in);
  }
  std::vector<ExpandedSets> expanded;
  {
    std::ifstream in = OpenInput(expanded_path);
    expanded = ReadExpandedSets(in);
  }
  std::vector<ProbeSentence> probes;
  for (const ExpandedSets &e : expanded) {
    for (ProbeSentence &p : GenerateProbes(e, inflector)) {
      probes.push_back(std::move(p));
    }
  }
  WriteFileAtomic(probes_out, [&](std::ostream &out) { WriteProbes(probes, out); });
  return probes.size();
}

void RunTrainLm(const std::string &corpus_path, int order, double unk_floor,
                const std::string &model_out, const std::string &unigram_out) {
  EstimateOptions options;
  options.unk_floor = unk_floor;
  if (!model_out.empty()) {
    std::ifstream in = OpenInput(corpus_path);
    const NgramCounts counts = CountNgrams(in, order);
    const Discounts discounts =
        EstimateDiscounts(counts, DiscountPolicy::kFallback);
    for (int k = 1; k <= order; ++k) {
      if (discounts.at(k).fallback) {
        std::cerr << "warning: order " << k
                  << " uses absolute discounting (too few counts for "
                     "modified Kneser-Ney)\n";
      }
    }
    const NgramModel model = EstimateModel(counts, discounts, options);
    WriteFileAtomic(model_out, [&](std::ostream &out) { WriteArpa(model, out); });
  }
  if (!unigram_out.empty()) {
    std::ifstream in = OpenInput(corpus_path);
    const UnigramModel unigram = UnigramModel::Estimate(in, unk_floor);
    WriteFileAtomic(unigram_out,
                    [&](std::ostream &out) { WriteArpa(unigram.ToModel(), out); });
  }
}

std::size_t RunScore(const std::string &probes_path,
                     const ScoreStageOptions &options,
                     const std::string &scores_out) {
  std::vector<ProbeSentence> probes;
  {
    std::ifstream in = OpenInput(probes_path);
    probes = ReadProbes(in);
  }
  std::unique_ptr<UnigramModel> unigram;
  if (!options.unigram_path.empty()) {
    std::ifstream in = OpenInput(options.unigram_path);
    unigram = std::make_unique<UnigramModel>(UnigramModel::FromModel(ReadArpa(in)));
  }
  const ScorerSpec spec = ParseScorerSpec(options.scorer);
  std::vector<ScoreRecord> records;
  if (!probes.empty()) {
    std::unique_ptr<NgramModel> model;
    std::unique_ptr<SentenceScorer> scorer;
    switch (spec.kind) {
      case ScorerKind::kBuiltin: {
        if (options.lm_path.empty()) {
          throw ValidationError("the builtin scorer needs --lm");
        }
        std::ifstream in = OpenInput(options.lm_path);
        model = std::make_unique<NgramModel>(ReadArpa(in));
        scorer = std::make_unique<NgramScorer>(*model, options.score_mode);
        break;
      }
      case ScorerKind::kExternal:
        scorer = std::make_unique<ExternalScorer>(spec.argument);
        break;
      case ScorerKind::kFile: {
        std::ifstream in = OpenInput(spec.argument);
        scorer = std::make_unique<FileScorer>(in);
        break;
      }
    }
    if (spec.kind != ScorerKind::kBuiltin &&
        options.score_mode == ScoreMode::kFinalToken) {
      throw ValidationError("final-token scoring needs the builtin scorer");
    }
    records = ScoreBatch(*scorer, probes, unigram.get(), options.normalization,
                         options.score_mode);
    scorer->Finish();
  }
  WriteFileAtomic(scores_out, [&](std::ostream &out) { WriteScores(records, out); });
  return records.size();
}

std::vector<VerbVerdict> RunClassify(const std::string &scores_path,
                                     const std::string &failures_path,
                                     NormalizationMode mode, bool balance_sides,
                                     const std::string &verdicts_out) {
  std::vector<ScoreRecord> records;
  {
    std::ifstream in = OpenInput(scores_path);
    records = ReadScores(in);
  }
  std::vector<Abstention> abstentions;
  if (!failures_path.empty()) {
    std::ifstream in = OpenInput(failures_path);
    abstentions = ReadAbstentions(in);
  }
  std::vector<VerbVerdict> verdicts = MergeAbstentions(
      ClassifyScored(records, mode, balance_sides), abstentions, mode);
  WriteFileAtomic(verdicts_out,
                  [&](std::ostream &out) { WriteVerdicts(verdicts, out); });
  return verdicts;
}

ClassMetrics RunEvaluate(const std::string &verdicts_path,
                         const std::string &gold_path, double sample_fraction,
                         std::uint64_t seed, const std::string &metrics_out) {
  std::vector<VerbVerdict> verdicts;
  {
    std::ifstream in = OpenInput(verdicts_path);
    verdicts = ReadVerdicts(in);
  }
  std::vector<GoldEntry> gold;
  {
    std::ifstream in = OpenInput(gold_path);
    gold = LoadGoldTsv(in);
  }
  if (sample_fraction < 1.0) gold = SampleGold(gold, sample_fraction, seed);
  const ClassMetrics metrics = Evaluate(verdicts, gold);
  if (!metrics_out.empty()) {
    WriteFileAtomic(metrics_out,
                    [&](std::ostream &out) { WriteMetricsTsv(metrics, out); });
  }
  return metrics;
}

RunAllResult RunAll(const RunConfig &config) {
  ValidateRunConfig(config);
  fs::create_directories(config.out_dir);
  auto out = [&](const char *name) { return Join(config.out_dir, name); };

  RunExtractFrames(config.conllu, out("frames.tsv"), out("nouns.txt"));
  ExpansionParams params = config.expansion;
  params.rng_seed = config.seed;
  RunExpand(out("frames.tsv"), config.vectors,
            config.nouns.empty() ? out("nouns.txt") : config.nouns, config.verbs,
            params, config.threads, out("expanded.tsv"), out("abstentions.tsv"));
  RunGenerateProbes(out("expanded.tsv"), config.irregulars, out("probes.tsv"));

  ScoreStageOptions score;
  score.scorer = config.scorer;
  score.normalization = config.normalization;
  score.score_mode = config.score_mode;
  if (ParseScorerSpec(config.scorer).kind == ScorerKind::kBuiltin) {
    if (config.lm_arpa.empty()) {
      RunTrainLm(config.lm_corpus, config.order, config.unk_floor,
                 out("model.arpa"), "");
      score.lm_path = out("model.arpa");
    } else {
      score.lm_path = config.lm_arpa;
    }
  }
  const std::string &unigram_corpus =
      config.unigram_corpus.empty() ? config.lm_corpus : config.unigram_corpus;
  if (!unigram_corpus.empty()) {
    RunTrainLm(unigram_corpus, 1, config.unk_floor, "", out("unigram.arpa"));
    score.unigram_path = out("unigram.arpa");
  }
  RunScore(out("probes.tsv"), score, out("scores.tsv"));

  RunAllResult result;
  result.verdicts = RunClassify(out("scores.tsv"), out("abstentions.tsv"),
                                config.normalization, config.balance_sides,
                                out("verdicts.tsv"));
  if (!config.gold.empty()) {
    result.metrics = RunEvaluate(out("verdicts.tsv"), config.gold,
                                 config.sample_fraction, config.seed,
                                 out("metrics.tsv"));
    result.evaluated = true;
  }
  return result;
}

}  // namespace unacc
