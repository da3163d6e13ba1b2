// Command line front end: one subcommand per pipeline stage plus run-all.
//
//   unacc extract-frames --conllu corpus.conllu --out frames.tsv
//   unacc run-all --config run.ini
//
// Exit codes: 0 success, 1 validation, 2 runtime, 3 external scorer protocol.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "unacc/eval.h"
#include "unacc/pipeline.h"

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kRuntime = 2, kProtocol = 3 };

void AddExpansionFlags(CLI::App *cmd, unacc::ExpansionParams *p) {
  cmd->add_option("--n-samples", p->n_samples, "Seed samples per side")
      ->capture_default_str();
  cmd->add_option("--sample-size", p->sample_size, "Seeds per sample")
      ->capture_default_str();
  cmd->add_option("--neighbours", p->neighbours_per_sample,
                  "3CosMul neighbours per sample")
      ->capture_default_str();
  cmd->add_option("--final-size", p->final_size, "Expanded nouns kept per side")
      ->capture_default_str();
}

void RequireExisting(const std::string &path, const char *what) {
  if (!path.empty() && !std::filesystem::is_regular_file(path)) {
    throw unacc::ValidationError(std::string(what) + " '" + path +
                                 "' does not exist");
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Unsupervised unaccusative/unergative verb classification"};
  app.set_config("--config", "", "INI run configuration; [section] per subcommand");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int threads = 1;
  app.add_option("--seed", seed, "Random seed for every sampled step")
      ->capture_default_str();
  app.add_option("--threads", threads, "Worker threads")->capture_default_str();

  // extract-frames
  std::vector<std::string> conllu;
  std::string frames_out = "frames.tsv";
  std::string nouns_out;
  auto *extract = app.add_subcommand("extract-frames", "Mine (subject, verb, object) frames");
  extract->add_option("--conllu", conllu, "CoNLL-U files")->required();
  extract->add_option("--out", frames_out, "Frame table TSV")->capture_default_str();
  extract->add_option("--nouns-out", nouns_out, "Write NOUN lemmas here");

  // expand
  std::string frames_in;
  std::string vectors;
  std::string nouns;
  std::string verbs;
  std::string expanded_out = "expanded.tsv";
  std::string failures_out;
  unacc::ExpansionParams params;
  auto *expand = app.add_subcommand("expand", "Expand agent and patient noun sets");
  expand->add_option("--frames", frames_in, "Frame table TSV")->required();
  expand->add_option("--vectors", vectors, "Word vectors, text format")->required();
  expand->add_option("--nouns", nouns, "Noun list restricting the vectors");
  expand->add_option("--verbs", verbs, "Verbs to expand (default: all)");
  AddExpansionFlags(expand, &params);
  expand->add_option("--out", expanded_out, "Expanded sets TSV")->capture_default_str();
  expand->add_option("--failures-out", failures_out, "Abstentions TSV");

  // generate-probes
  std::string expanded_in;
  std::string irregulars;
  std::string probes_out = "probes.tsv";
  auto *probes = app.add_subcommand("generate-probes", "Instantiate probing sentences");
  probes->add_option("--expanded", expanded_in, "Expanded sets TSV")->required();
  probes->add_option("--irregulars", irregulars, "Irregular 3sg table");
  probes->add_option("--out", probes_out, "Probe TSV")->capture_default_str();

  // train-lm
  std::string lm_corpus;
  int order = 5;
  double unk_floor = 1e-7;
  std::string model_out = "model.arpa";
  std::string unigram_out;
  auto *train = app.add_subcommand("train-lm", "Train a modified Kneser-Ney model");
  train->add_option("--corpus", lm_corpus, "One tokenized sentence per line")->required();
  train->add_option("--order", order, "N-gram order (1-6)")->capture_default_str();
  train->add_option("--unk-floor", unk_floor, "<unk> probability before renormalization")
      ->capture_default_str();
  train->add_option("--out", model_out, "ARPA output")->capture_default_str();
  train->add_option("--unigram-out", unigram_out, "Also write an MLE unigram ARPA");

  // score
  std::string probes_in;
  unacc::ScoreStageOptions score_options;
  std::string normalize = "none";
  std::string score_mode = "sentence";
  std::string scores_out = "scores.tsv";
  auto *score = app.add_subcommand("score", "Score probing sentences");
  score->add_option("--probes", probes_in, "Probe TSV")->required();
  score->add_option("--scorer", score_options.scorer,
                    "builtin | external:<command> | file:<path>")
      ->capture_default_str();
  score->add_option("--lm", score_options.lm_path, "ARPA model for the builtin scorer");
  score->add_option("--unigram", score_options.unigram_path, "Unigram ARPA for normalization");
  score->add_option("--normalize", normalize, "none | lp-div | slor")->capture_default_str();
  score->add_option("--score-mode", score_mode, "sentence | final-token")
      ->capture_default_str();
  score->add_option("--out", scores_out, "Scores TSV")->capture_default_str();

  // classify
  std::string scores_in;
  std::string failures_in;
  bool balance_sides = false;
  std::string verdicts_out = "verdicts.tsv";
  auto *classify = app.add_subcommand("classify", "Apply the decision rule");
  classify->add_option("--scores", scores_in, "Scores TSV")->required();
  classify->add_option("--failures", failures_in, "Abstentions TSV from expand");
  classify->add_option("--normalize", normalize, "none | lp-div | slor")
      ->capture_default_str();
  classify->add_flag("--balance-sides", balance_sides,
                     "Compare equally many fillers per side");
  classify->add_option("--out", verdicts_out, "Verdicts TSV")->capture_default_str();

  // evaluate
  std::string verdicts_in;
  std::string gold;
  double sample = 1.0;
  std::string metrics_out;
  auto *evaluate = app.add_subcommand("evaluate", "Per-class precision, recall, F1");
  evaluate->add_option("--verdicts", verdicts_in, "Verdicts TSV")->required();
  evaluate->add_option("--gold", gold, "Gold TSV verb<TAB>label")->required();
  evaluate->add_option("--sample", sample, "Fraction of gold verbs to sample")
      ->capture_default_str();
  evaluate->add_option("--out", metrics_out, "Metrics TSV");

  // run-all
  unacc::RunConfig run;
  std::string run_normalize = "none";
  std::string run_score_mode = "sentence";
  auto *all = app.add_subcommand("run-all", "Run every stage");
  all->add_option("--conllu", run.conllu, "CoNLL-U files");
  all->add_option("--vectors", run.vectors, "Word vectors");
  all->add_option("--nouns", run.nouns, "Noun lexicon (default: corpus NOUN lemmas)");
  all->add_option("--verbs", run.verbs, "Verb list (default: all mined verbs)");
  all->add_option("--lm-corpus", run.lm_corpus, "LM training corpus");
  all->add_option("--lm", run.lm_arpa, "Existing ARPA model");
  all->add_option("--unigram-corpus", run.unigram_corpus,
                  "Corpus for the normalizing unigram model");
  all->add_option("--gold", run.gold, "Gold TSV");
  all->add_option("--irregulars", run.irregulars, "Irregular 3sg table");
  all->add_option("--out-dir", run.out_dir, "Artifact directory")->capture_default_str();
  AddExpansionFlags(all, &run.expansion);
  all->add_option("--order", run.order, "N-gram order")->capture_default_str();
  all->add_option("--unk-floor", run.unk_floor, "<unk> floor")->capture_default_str();
  all->add_option("--scorer", run.scorer, "builtin | external:<command> | file:<path>")
      ->capture_default_str();
  all->add_option("--normalize", run_normalize, "none | lp-div | slor")
      ->capture_default_str();
  all->add_option("--score-mode", run_score_mode, "sentence | final-token")
      ->capture_default_str();
  all->add_flag("--balance-sides", run.balance_sides, "Equal filler counts per side");
  all->add_option("--sample", run.sample_fraction, "Gold sampling fraction")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }

  try {
    if (threads < 1) throw unacc::ValidationError("--threads must be >= 1");
    if (*extract) {
      for (const std::string &p : conllu) RequireExisting(p, "corpus");
      const auto s = unacc::RunExtractFrames(conllu, frames_out, nouns_out);
      std::cerr << s.sentences << " sentences, " << s.triples << " frames, "
                << s.verbs << " verbs\n";
    } else if (*expand) {
      RequireExisting(frames_in, "frame table");
      RequireExisting(vectors, "vectors");
      RequireExisting(nouns, "noun list");
      RequireExisting(verbs, "verb list");
      params.rng_seed = seed;
      const auto s = unacc::RunExpand(frames_in, vectors, nouns, verbs, params,
                                      threads, expanded_out, failures_out);
      std::cerr << s.expanded << " verbs expanded, " << s.abstained
                << " abstained\n";
    } else if (*probes) {
      RequireExisting(expanded_in, "expanded sets");
      RequireExisting(irregulars, "irregular table");
      const auto n = unacc::RunGenerateProbes(expanded_in, irregulars, probes_out);
      std::cerr << n << " probing sentences\n";
    } else if (*train) {
      RequireExisting(lm_corpus, "LM corpus");
      if (order < 1 || order > unacc::kMaxOrder) {
        throw unacc::ValidationError("--order must be in [1, 6]");
      }
      if (!(unk_floor > 0.0)) throw unacc::ValidationError("--unk-floor must be positive");
      unacc::RunTrainLm(lm_corpus, order, unk_floor, model_out, unigram_out);
    } else if (*score) {
      RequireExisting(probes_in, "probes");
      RequireExisting(score_options.lm_path, "LM");
      RequireExisting(score_options.unigram_path, "unigram model");
      score_options.normalization = unacc::ParseNormalizationMode(normalize);
      score_options.score_mode = unacc::ParseScoreMode(score_mode);
      unacc::ParseScorerSpec(score_options.scorer);
      if (score_options.normalization != unacc::NormalizationMode::kNone &&
          score_options.unigram_path.empty()) {
        throw unacc::ValidationError("--normalize " + normalize + " needs --unigram");
      }
      const auto n = unacc::RunScore(probes_in, score_options, scores_out);
      std::cerr << n << " sentences scored\n";
    } else if (*classify) {
      RequireExisting(scores_in, "scores");
      RequireExisting(failures_in, "abstentions");
      const auto mode = unacc::ParseNormalizationMode(normalize);
      const auto verdicts = unacc::RunClassify(scores_in, failures_in, mode,
                                               balance_sides, verdicts_out);
      std::cerr << verdicts.size() << " verdicts\n";
    } else if (*evaluate) {
      RequireExisting(verdicts_in, "verdicts");
      RequireExisting(gold, "gold");
      if (!(sample > 0.0 && sample <= 1.0)) {
        throw unacc::ValidationError("--sample must be in (0, 1]");
      }
      const auto metrics =
          unacc::RunEvaluate(verdicts_in, gold, sample, seed, metrics_out);
      unacc::PrintMetricsTable(metrics, std::cout);
    } else if (*all) {
      run.normalization = unacc::ParseNormalizationMode(run_normalize);
      run.score_mode = unacc::ParseScoreMode(run_score_mode);
      run.seed = seed;
      run.threads = threads;
      const auto result = unacc::RunAll(run);
      std::size_t abstained = 0;
      for (const auto &v : result.verdicts) {
        if (v.label == unacc::Label::kAbstain) ++abstained;
      }
      std::cerr << result.verdicts.size() << " verbs, " << abstained
                << " abstained; artifacts in " << run.out_dir << '\n';
      if (result.evaluated) unacc::PrintMetricsTable(result.metrics, std::cout);
    }
  } catch (const unacc::ValidationError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const unacc::ProtocolError &e) {
    std::cerr << "scorer protocol error: " << e.what() << '\n';
    return kProtocol;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
