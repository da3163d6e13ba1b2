#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "unacc/probe.h"
#include "unacc/scorer.h"

using namespace unacc;

namespace {

std::vector<ProbeSentence> Probes() {
  return GenerateProbes({"pop", {{"child", 1}}, {{"balloon", 1}, {"tyre", 1}}});
}

ScoreRecord Record(double model, double unigram, std::size_t length) {
  ScoreRecord r;
  r.logp_model = model;
  r.logp_unigram = unigram;
  r.length = length;
  return r;
}

std::vector<double> ExternalScores(const std::string &command) {
  ExternalScorer scorer(command);
  const auto probes = Probes();
  auto out = scorer.Score(probes);
  scorer.Finish();
  return out;
}

}  // namespace

TEST_CASE("normalization formulas") {
  const ScoreRecord r = Record(-20.0, -30.0, 5);
  CHECK(Normalize(r, NormalizationMode::kSlor) == 2.0);
  CHECK(Normalize(r, NormalizationMode::kLpDiv) == -2.0 / 3.0);
  CHECK(Normalize(r, NormalizationMode::kNone) == -20.0);
  CHECK(Normalize(Record(-7.5, -7.5, 4), NormalizationMode::kSlor) == 0.0);
  CHECK_THROWS_WITH(Normalize(Record(-3.0, 0.0, 4), NormalizationMode::kLpDiv),
                    doctest::Contains("degenerate unigram probability"));
}

TEST_CASE("SLOR ignores a shared shift, both modes increase with the model score") {
  for (double c : {-5.0, 0.25, 3.0}) {
    CHECK(Normalize(Record(-20.0 + c, -30.0 + c, 5), NormalizationMode::kSlor) ==
          doctest::Approx(2.0).epsilon(1e-14));
  }
  for (auto mode : {NormalizationMode::kSlor, NormalizationMode::kLpDiv}) {
    double previous = -std::numeric_limits<double>::infinity();
    for (double m = -40.0; m <= -1.0; m += 1.5) {
      const double v = Normalize(Record(m, -30.0, 5), mode);
      CHECK(v > previous);
      previous = v;
    }
  }
}

TEST_CASE("mode names") {
  CHECK(ParseNormalizationMode("lp-div") == NormalizationMode::kLpDiv);
  CHECK(ParseNormalizationMode("slor") == NormalizationMode::kSlor);
  CHECK(std::string(ModeName(NormalizationMode::kNone)) == "none");
  CHECK(ParseScoreMode("final-token") == ScoreMode::kFinalToken);
  CHECK_THROWS_AS(ParseNormalizationMode("log"), ValidationError);
  CHECK_THROWS_AS(ParseScoreMode("word"), ValidationError);
}

TEST_CASE("builtin scorer converts log10 to natural log") {
  std::istringstream corpus("the balloon pops .\nthe child sleeps .\n");
  const NgramModel model = TrainModel(corpus, 1);
  NgramScorer scorer(model, ScoreMode::kSentence);
  ProbeSentence one;
  one.text = "balloon";
  one.tokens = {"balloon"};
  const auto got = scorer.Score(std::span(&one, 1));
  const double want = std::log(std::pow(10.0, model.Log10Prob({}, model.vocab().Lookup("balloon")))) +
                      std::log(std::pow(10.0, model.Log10Prob({}, Vocabulary::kEos)));
  REQUIRE(got.size() == 1);
  CHECK(got[0] == doctest::Approx(want).epsilon(1e-12));

  NgramScorer final_token(model, ScoreMode::kFinalToken);
  CHECK(final_token.Score(std::span(&one, 1))[0] ==
        doctest::Approx(std::log(10.0) * model.Log10Prob({}, Vocabulary::kEos)).epsilon(1e-12));
}

TEST_CASE("score batch fills every field") {
  std::istringstream corpus("the balloon pops .\nthe child sleeps .\nthe tyre pops .\n");
  const NgramModel model = TrainModel(corpus, 3);
  std::istringstream again("the balloon pops .\nthe child sleeps .\nthe tyre pops .\n");
  const UnigramModel unigram = UnigramModel::Estimate(again);
  NgramScorer scorer(model, ScoreMode::kSentence);
  const auto probes = Probes();
  const auto records = ScoreBatch(scorer, probes, &unigram, NormalizationMode::kSlor);
  REQUIRE(records.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto &r = records[i];
    CHECK(r.sentence == probes[i]);
    CHECK(r.length == 4);
    CHECK(r.logp_unigram ==
          doctest::Approx(std::log(10.0) * unigram.Log10Score(probes[i].tokens, true)).epsilon(1e-12));
    CHECK(r.normalized == Normalize(r, NormalizationMode::kSlor));
  }

  NgramScorer last(model, ScoreMode::kFinalToken);
  const auto final_records = ScoreBatch(last, probes, &unigram, NormalizationMode::kLpDiv,
                                        ScoreMode::kFinalToken);
  CHECK(final_records[0].logp_unigram ==
        doctest::Approx(std::log(10.0) * unigram.Log10Prob("</s>")).epsilon(1e-12));

  CHECK_THROWS(ScoreBatch(scorer, std::span<const ProbeSentence>(), &unigram,
                          NormalizationMode::kNone));
  CHECK_THROWS_AS(ScoreBatch(scorer, probes, nullptr, NormalizationMode::kSlor),
                  ValidationError);
  const auto plain = ScoreBatch(scorer, probes, nullptr, NormalizationMode::kNone);
  CHECK(std::isnan(plain[0].logp_unigram));
  CHECK(plain[0].normalized == plain[0].logp_model);
}

TEST_CASE("scores TSV round trip") {
  std::istringstream corpus("the balloon pops .\n");
  const NgramModel model = TrainModel(corpus, 2);
  NgramScorer scorer(model, ScoreMode::kSentence);
  const auto records = ScoreBatch(scorer, Probes(), nullptr, NormalizationMode::kNone);
  std::ostringstream out;
  WriteScores(records, out);
  std::istringstream in(out.str());
  const auto back = ReadScores(in);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].sentence == records[i].sentence);
    CHECK(back[i].logp_model == records[i].logp_model);
    CHECK(std::isnan(back[i].logp_unigram));
    CHECK(back[i].length == records[i].length);
  }
}

TEST_CASE("external scorer line protocol") {
  const auto echo = ExternalScores("while read -r line; do echo -1.0; done");
  CHECK(echo == std::vector<double>{-1.0, -1.0, -1.0});

  // Reads the words back: more words, lower score.
  const auto counted = ExternalScores(
      "while read -r line; do set -- $line; echo \"-$#\"; done");
  CHECK(counted == std::vector<double>{-4.0, -4.0, -4.0});

  const auto probes = Probes();
  ExternalScorer scorer("while read -r line; do echo -2.5; done");
  const auto records = ScoreBatch(scorer, probes, nullptr, NormalizationMode::kNone);
  scorer.Finish();
  for (const auto &r : records) CHECK(r.logp_model == -2.5);
}

TEST_CASE("external scorer protocol violations") {
  CHECK_THROWS_AS(ExternalScores("read -r line; echo -1.0"), ProtocolError);
  CHECK_THROWS_AS(ExternalScores("while read -r line; do echo abc; done"), ProtocolError);
  CHECK_THROWS_AS(ExternalScores("while read -r line; do echo ERR model failed; done"),
                  ProtocolError);
  CHECK_THROWS_AS(ExternalScores("while read -r line; do echo 0.5; done"), ProtocolError);
  CHECK_THROWS_AS(ExternalScores("while read -r line; do echo -1; done; exit 4"),
                  ProtocolError);
  CHECK_THROWS_AS(ExternalScores("exit 0"), ProtocolError);
  CHECK_THROWS_AS(ExternalScores("while read -r line; do echo -1 -2; done"), ProtocolError);
  CHECK_THROWS_AS(ExternalScorer(""), ValidationError);
}

TEST_CASE("precomputed scores") {
  std::istringstream in(
      "The child pops .\t-3.5\nThe balloon pops .\t-1.25\nThe tyre pops .\t-2\n");
  FileScorer scorer(in);
  CHECK(scorer.Score(Probes()) == std::vector<double>{-3.5, -1.25, -2.0});
  std::istringstream partial("The child pops .\t-3.5\n");
  FileScorer missing(partial);
  CHECK_THROWS_AS(missing.Score(Probes()), ProtocolError);
  std::istringstream bad("The child pops . -3.5\n");
  CHECK_THROWS(FileScorer{bad});
}
