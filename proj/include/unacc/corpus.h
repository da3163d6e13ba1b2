#ifndef UNACC_CORPUS_H_
#define UNACC_CORPUS_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace unacc {

// One word line of a CoNLL-U block. Columns we do not use (XPOS, FEATS,
// DEPS, MISC) are dropped on read.
struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string lemma;
  std::string upos;
  int head = 0;  // 0 = root
  std::string deprel;

  bool operator==(const Token &) const = default;
};

struct DepSentence {
  std::string sentence_id;
  std::vector<Token> tokens;

  // tokens[index - 1]
  const Token &at(int index) const { return tokens[index - 1]; }
};

// (subject, verb, object) lemmas of one transitive clause, lowercased.
struct FrameTriple {
  std::string subject;
  std::string verb;
  std::string object;

  auto operator<=>(const FrameTriple &) const = default;
};

// Subjects (S) and objects (O) seen with one verb. The maps count how many
// triples contributed each noun; the key sets are S and O.
struct VerbFrames {
  std::map<std::string, std::size_t> subjects;
  std::map<std::string, std::size_t> objects;
  std::size_t frame_count = 0;

  std::set<std::string> SubjectSet() const;
  std::set<std::string> ObjectSet() const;
};

using VerbFrameTable = std::map<std::string, VerbFrames>;

// Reads CoNLL-U. Multiword ranges ("3-4") and empty nodes ("5.1") are
// skipped, only the sent_id comment is kept. Throws ParseError on a wrong
// column count, non-integer ids or heads, and dangling heads.
std::vector<DepSentence> ParseConllu(std::istream &in);

// Writes the columns kept by ParseConllu; the rest become "_".
void WriteConllu(const std::vector<DepSentence> &sentences, std::ostream &out);

// Transitive frames: a VERB with an `obj` child, its subject taken from an
// `nsubj` child or, failing that, from the head it modifies through
// `acl:relcl`. Emitted only when subject and object are both NOUN.
std::vector<FrameTriple> ExtractFrames(const std::vector<DepSentence> &sentences);

VerbFrameTable BuildFrameTable(const std::vector<FrameTriple> &triples);

// Lowercased lemmas of every NOUN token, for restricting the vector space.
std::set<std::string> CollectNouns(const std::vector<DepSentence> &sentences);

// TSV `verb<TAB>S|O<TAB>noun<TAB>count`, sorted by verb, role, noun.
void WriteFrameTable(const VerbFrameTable &table, std::ostream &out);
VerbFrameTable ReadFrameTable(std::istream &in);

}  // namespace unacc

#endif  // UNACC_CORPUS_H_
