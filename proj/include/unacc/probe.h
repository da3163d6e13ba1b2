#ifndef UNACC_PROBE_H_
#define UNACC_PROBE_H_

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "unacc/embed.h"

namespace unacc {

enum class Role { kAgent, kPatient };

const char *RoleName(Role role);
Role ParseRole(std::string_view name);  // throws Error

// Intransitive probe "The <noun> <verb>s ." for one filler.
struct ProbeSentence {
  std::string verb;
  std::string noun;
  Role role = Role::kAgent;
  std::string text;                 // surface form, capitalized "The"
  std::vector<std::string> tokens;  // LM tokens, lowercased

  bool operator==(const ProbeSentence &) const = default;
};

// Present-tense third person singular. Irregular forms come from a table;
// the regular rules are consonant+y -> ies, s/x/z/ch/sh -> +es, else +s.
class Inflector {
 public:
  // be, have, go, do.
  Inflector();
  explicit Inflector(std::map<std::string, std::string> irregulars);

  // Lines `lemma<TAB>form`; '#' comments and blank lines skipped.
  static Inflector FromStream(std::istream &in);

  std::string ThirdPersonSingular(std::string_view lemma) const;

 private:
  std::map<std::string, std::string, std::less<>> irregulars_;
};

std::string Inflect3sg(std::string_view lemma);

// Agent fillers first, then patient fillers, each in rank order. Throws
// Error("cannot probe verb ...") if a side is empty.
std::vector<ProbeSentence> GenerateProbes(const ExpandedSets &expanded,
                                          const Inflector &inflector = {});

// TSV `verb<TAB>role<TAB>noun<TAB>text`.
void WriteProbes(const std::vector<ProbeSentence> &probes, std::ostream &out);
std::vector<ProbeSentence> ReadProbes(std::istream &in);

}  // namespace unacc

#endif  // UNACC_PROBE_H_
