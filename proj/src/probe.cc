#include "unacc/probe.h"

#include <istream>
#include <ostream>

#include "unacc/ngram.h"
#include "unacc/util.h"

namespace unacc {

namespace {

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

ProbeSentence MakeProbe(const std::string &verb, const std::string &verb_form,
                        const std::string &noun, Role role) {
  ProbeSentence probe;
  probe.verb = verb;
  probe.noun = noun;
  probe.role = role;
  probe.text = "The " + noun + " " + verb_form + " .";
  probe.tokens = Tokenize(probe.text);
  return probe;
}

}  // namespace

const char *RoleName(Role role) {
  return role == Role::kAgent ? "agent" : "patient";
}

Role ParseRole(std::string_view name) {
  if (name == "agent") return Role::kAgent;
  if (name == "patient") return Role::kPatient;
  throw Error("unknown role '" + std::string(name) + "'");
}

Inflector::Inflector()
    : irregulars_{{"be", "is"}, {"have", "has"}, {"go", "goes"}, {"do", "does"}} {}

Inflector::Inflector(std::map<std::string, std::string> irregulars)
    : irregulars_(irregulars.begin(), irregulars.end()) {}

Inflector Inflector::FromStream(std::istream &in) {
  std::map<std::string, std::string> table;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = StripCR(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::vector<std::string> cols = Split(line, '\t');
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
      throw ParseError(line_no, "expected lemma<TAB>form");
    }
    table[cols[0]] = cols[1];
  }
  return Inflector(std::move(table));
}

std::string Inflector::ThirdPersonSingular(std::string_view lemma) const {
  if (lemma.empty()) throw Error("cannot inflect an empty lemma");
  if (auto it = irregulars_.find(lemma); it != irregulars_.end()) {
    return it->second;
  }
  std::string form(lemma);
  const std::size_t n = form.size();
  if (n >= 2 && form[n - 1] == 'y' && !IsVowel(form[n - 2])) {
    form.replace(n - 1, 1, "ies");
  } else if (form.ends_with("s") || form.ends_with("x") ||
             form.ends_with("z") || form.ends_with("ch") ||
             form.ends_with("sh")) {
    form += "es";
  } else {
    form += "s";
  }
  return form;
}

std::string Inflect3sg(std::string_view lemma) {
  static const Inflector kDefault;
  return kDefault.ThirdPersonSingular(lemma);
}

std::vector<ProbeSentence> GenerateProbes(const ExpandedSets &expanded,
                                          const Inflector &inflector) {
  if (expanded.agent_nouns.empty() || expanded.patient_nouns.empty()) {
    throw Error("cannot probe verb '" + expanded.verb +
                "': an expanded side is empty");
  }
  const std::string form = inflector.ThirdPersonSingular(expanded.verb);
  std::vector<ProbeSentence> probes;
  probes.reserve(expanded.agent_nouns.size() + expanded.patient_nouns.size());
  for (const ScoredWord &w : expanded.agent_nouns) {
    probes.push_back(MakeProbe(expanded.verb, form, w.word, Role::kAgent));
  }
  for (const ScoredWord &w : expanded.patient_nouns) {
    probes.push_back(MakeProbe(expanded.verb, form, w.word, Role::kPatient));
  }
  return probes;
}

void WriteProbes(const std::vector<ProbeSentence> &probes, std::ostream &out) {
  for (const ProbeSentence &p : probes) {
    out << p.verb << '\t' << RoleName(p.role) << '\t' << p.noun << '\t'
        << p.text << '\n';
  }
}

std::vector<ProbeSentence> ReadProbes(std::istream &in) {
  std::vector<ProbeSentence> probes;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = StripCR(raw);
    if (line.empty()) continue;
    const std::vector<std::string> cols = Split(line, '\t');
    if (cols.size() != 4) {
      throw ParseError(line_no, "expected verb<TAB>role<TAB>noun<TAB>text");
    }
    ProbeSentence p;
    p.verb = cols[0];
    try {
      p.role = ParseRole(cols[1]);
    } catch (const Error &e) {
      throw ParseError(line_no, e.what());
    }
    p.noun = cols[2];
    p.text = cols[3];
    p.tokens = Tokenize(p.text);
    if (p.tokens.empty()) throw ParseError(line_no, "empty probe text");
    probes.push_back(std::move(p));
  }
  return probes;
}

}  // namespace unacc
