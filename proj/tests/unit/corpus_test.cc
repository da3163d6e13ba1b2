#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "unacc/corpus.h"
#include "unacc/error.h"

using namespace unacc;

namespace {

std::string Row(int id, const std::string &form, const std::string &lemma,
                const std::string &upos, int head, const std::string &deprel) {
  return std::to_string(id) + "\t" + form + "\t" + lemma + "\t" + upos +
         "\t_\t_\t" + std::to_string(head) + "\t" + deprel + "\t_\t_\n";
}

std::vector<DepSentence> Parse(const std::string &text) {
  std::istringstream in(text);
  return ParseConllu(in);
}

// The committee approved the budget .
const std::string kApproved =
    "# sent_id = s1\n" + Row(1, "The", "the", "DET", 2, "det") +
    Row(2, "committee", "committee", "NOUN", 3, "nsubj") +
    Row(3, "approved", "approve", "VERB", 0, "root") +
    Row(4, "the", "the", "DET", 5, "det") +
    Row(5, "budget", "budget", "NOUN", 3, "obj") +
    Row(6, ".", ".", "PUNCT", 3, "punct") + "\n";

// Hannah popped the balloon .
const std::string kPopped =
    Row(1, "Hannah", "Hannah", "PROPN", 2, "nsubj") +
    Row(2, "popped", "pop", "VERB", 0, "root") +
    Row(3, "the", "the", "DET", 4, "det") +
    Row(4, "balloon", "balloon", "NOUN", 2, "obj") +
    Row(5, ".", ".", "PUNCT", 2, "punct") + "\n";

// the law that parliament adopted
std::string RelativeClause(bool with_subject) {
  std::string text = Row(1, "the", "the", "DET", 2, "det") +
                     Row(2, "law", "law", "NOUN", 0, "root") +
                     Row(3, "that", "that", "PRON", 5, "obj");
  text += with_subject ? Row(4, "parliament", "parliament", "NOUN", 5, "nsubj")
                       : Row(4, "budget", "budget", "NOUN", 5, "obj");
  text += Row(5, "adopted", "adopt", "VERB", 2, "acl:relcl") + "\n";
  return text;
}

// Independent re-derivation: scan all token pairs directly.
std::vector<FrameTriple> BruteTriples(const std::vector<DepSentence> &sentences) {
  std::vector<FrameTriple> out;
  for (const DepSentence &s : sentences) {
    for (const Token &v : s.tokens) {
      if (v.upos != "VERB") continue;
      const Token *subj = nullptr;
      for (const Token &t : s.tokens) {
        if (t.head == v.index && t.deprel == "nsubj") {
          subj = &t;
          break;
        }
      }
      if (!subj && v.deprel == "acl:relcl" && v.head > 0) subj = &s.tokens[v.head - 1];
      for (const Token &o : s.tokens) {
        if (o.head != v.index || o.deprel != "obj") continue;
        if (!subj || subj->upos != "NOUN" || o.upos != "NOUN") continue;
        out.push_back({subj->lemma, v.lemma, o.lemma});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DepSentence> RandomTrees(unsigned long long seed, int n) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> upos = {"NOUN", "VERB", "PROPN", "DET"};
  const std::vector<std::string> rels = {"nsubj", "obj", "det", "acl:relcl", "obl"};
  const std::vector<std::string> lemmas = {"dog", "cat", "eat", "see", "law"};
  std::vector<DepSentence> out;
  for (int i = 0; i < n; ++i) {
    DepSentence s;
    const int len = 2 + static_cast<int>(rng() % 8);
    const int root = 1 + static_cast<int>(rng() % len);
    for (int t = 1; t <= len; ++t) {
      Token tok;
      tok.index = t;
      tok.lemma = lemmas[rng() % lemmas.size()];
      tok.form = tok.lemma;
      tok.upos = upos[rng() % upos.size()];
      if (t == root) {
        tok.head = 0;
        tok.deprel = "root";
      } else {
        do {
          tok.head = 1 + static_cast<int>(rng() % len);
        } while (tok.head == t);
        tok.deprel = rels[rng() % rels.size()];
      }
      s.tokens.push_back(tok);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<FrameTriple> Sorted(std::vector<FrameTriple> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("two-token block") {
  const auto sentences = Parse(Row(1, "Hannah", "Hannah", "PROPN", 2, "nsubj") +
                               Row(2, "slept", "sleep", "VERB", 0, "root"));
  REQUIRE(sentences.size() == 1);
  REQUIRE(sentences[0].tokens.size() == 2);
  CHECK(sentences[0].at(2).head == 0);
  CHECK(sentences[0].at(2).lemma == "sleep");
  CHECK(sentences[0].at(1).head == 2);
}

TEST_CASE("empty input") { CHECK(Parse("").empty()); }

TEST_CASE("range and empty-node lines are dropped") {
  const std::string text = Row(1, "I", "I", "PRON", 2, "nsubj") +
                           Row(2, "saw", "see", "VERB", 0, "root") +
                           "3-4\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n" +
                           Row(3, "de", "de", "ADP", 4, "case") +
                           Row(4, "el", "el", "DET", 2, "obl") +
                           "4.1\tx\tx\tX\t_\t_\t_\t_\t_\t_\n";
  const auto sentences = Parse(text);
  REQUIRE(sentences.size() == 1);
  REQUIRE(sentences[0].tokens.size() == 4);
  CHECK(sentences[0].at(3).form == "de");
  CHECK(sentences[0].at(4).form == "el");
}

TEST_CASE("malformed input names the line") {
  try {
    Parse("# c\n" + Row(1, "a", "a", "X", 0, "root") + "2\tb\tb\n");
    FAIL("accepted a short line");
  } catch (const ParseError &e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(Parse("1\ta\ta\tX\t_\t_\tzero\troot\t_\t_\n"), ParseError);
  CHECK_THROWS_AS(Parse(Row(1, "a", "a", "X", 0, "root") + Row(2, "b", "b", "X", 7, "dep")),
                  ParseError);
  CHECK_THROWS_AS(Parse(Row(1, "a", "a", "X", 1, "dep")), ParseError);
  CHECK_THROWS_AS(Parse(Row(1, "a", "a", "X", 2, "dep") + Row(2, "b", "b", "X", 1, "dep")),
                  ParseError);
  CHECK_THROWS_AS(Parse(Row(2, "a", "a", "X", 0, "root")), ParseError);
}

TEST_CASE("transitive frame with a common-noun subject") {
  CHECK(ExtractFrames(Parse(kApproved)) ==
        std::vector<FrameTriple>{{"committee", "approve", "budget"}});
}

TEST_CASE("proper-noun subjects yield nothing") {
  CHECK(ExtractFrames(Parse(kPopped)).empty());
}

TEST_CASE("relative clauses") {
  // The object is the relative pronoun, so nothing is emitted with nsubj.
  CHECK(ExtractFrames(Parse(RelativeClause(true))).empty());
  // No nsubj: the modified noun is the subject.
  CHECK(ExtractFrames(Parse(RelativeClause(false))) ==
        std::vector<FrameTriple>{{"law", "adopt", "budget"}});

  // With a noun object and an nsubj child, nsubj wins over the head.
  const std::string both = Row(1, "law", "law", "NOUN", 0, "root") +
                           Row(2, "parliament", "parliament", "NOUN", 3, "nsubj") +
                           Row(3, "adopted", "adopt", "VERB", 1, "acl:relcl") +
                           Row(4, "amendments", "amendment", "NOUN", 3, "obj");
  CHECK(ExtractFrames(Parse(both)) ==
        std::vector<FrameTriple>{{"parliament", "adopt", "amendment"}});
}

TEST_CASE("frame lemmas are lowercased") {
  const std::string text = Row(1, "Dogs", "Dog", "NOUN", 2, "nsubj") +
                           Row(2, "Chase", "Chase", "VERB", 0, "root") +
                           Row(3, "Cats", "Cat", "NOUN", 2, "obj");
  CHECK(ExtractFrames(Parse(text)) == std::vector<FrameTriple>{{"dog", "chase", "cat"}});
}

TEST_CASE("frame table") {
  const auto table = BuildFrameTable(
      {{"committee", "approve", "budget"}, {"council", "approve", "budget"}});
  REQUIRE(table.size() == 1);
  const VerbFrames &f = table.at("approve");
  CHECK(f.SubjectSet() == std::set<std::string>{"committee", "council"});
  CHECK(f.ObjectSet() == std::set<std::string>{"budget"});
  CHECK(f.frame_count == 2);

  CHECK(BuildFrameTable({}).empty());

  const auto overlap = BuildFrameTable({{"report", "concern", "report"}});
  CHECK(overlap.at("concern").SubjectSet() == std::set<std::string>{"report"});
  CHECK(overlap.at("concern").ObjectSet() == std::set<std::string>{"report"});
}

TEST_CASE("frame table TSV round trip") {
  const auto table = BuildFrameTable({{"committee", "approve", "budget"},
                                      {"council", "approve", "budget"},
                                      {"dog", "chase", "cat"}});
  std::ostringstream out;
  WriteFrameTable(table, out);
  CHECK(out.str() ==
        "approve\tO\tbudget\t2\napprove\tS\tcommittee\t1\napprove\tS\tcouncil\t1\n"
        "chase\tO\tcat\t1\nchase\tS\tdog\t1\n");
  std::istringstream in(out.str());
  const auto back = ReadFrameTable(in);
  CHECK(back.at("approve").subjects == table.at("approve").subjects);
  CHECK(back.at("approve").objects == table.at("approve").objects);
  CHECK(back.at("approve").frame_count == 2);

  std::istringstream bad("approve\tX\tbudget\t1\n");
  CHECK_THROWS_AS(ReadFrameTable(bad), ParseError);
}

TEST_CASE("nouns are collected lowercased") {
  CHECK(CollectNouns(Parse(kApproved + kPopped)) ==
        std::set<std::string>{"balloon", "budget", "committee"});
}

TEST_CASE("parse, write, parse is stable") {
  const auto first = Parse(kApproved + kPopped + RelativeClause(false));
  std::ostringstream out;
  WriteConllu(first, out);
  const auto second = Parse(out.str());
  REQUIRE(second.size() == first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(second[i].tokens == first[i].tokens);
    CHECK(second[i].sentence_id == first[i].sentence_id);
  }
}

TEST_CASE("extraction agrees with a brute-force scan on random trees") {
  for (unsigned long long seed = 1; seed <= 20; ++seed) {
    const auto trees = RandomTrees(seed, 30);
    std::ostringstream out;
    WriteConllu(trees, out);
    const auto parsed = Parse(out.str());
    CHECK(Sorted(ExtractFrames(parsed)) == BruteTriples(parsed));
  }
}

TEST_CASE("extraction ignores sentence order") {
  auto trees = RandomTrees(77, 60);
  const auto before = Sorted(ExtractFrames(trees));
  std::shuffle(trees.begin(), trees.end(), std::mt19937_64(3));
  CHECK(Sorted(ExtractFrames(trees)) == before);
}
