#include "unacc/corpus.h"

#include <istream>
#include <ostream>

#include "unacc/error.h"
#include "unacc/util.h"

namespace unacc {

namespace {

bool IsRangeId(const std::string &id) {
  return id.find('-') != std::string::npos;
}

bool IsEmptyNodeId(const std::string &id) {
  return id.find('.') != std::string::npos;
}

// Validates a finished block: ids 1..n, heads in range, at least one root.
void CheckSentence(const DepSentence &sentence, std::size_t first_line) {
  const int n = static_cast<int>(sentence.tokens.size());
  bool has_root = false;
  for (int i = 0; i < n; ++i) {
    const Token &token = sentence.tokens[i];
    if (token.index != i + 1) {
      throw ParseError(first_line + i,
                       "token ids must be contiguous from 1, got " +
                           std::to_string(token.index));
    }
    if (token.head < 0 || token.head > n) {
      throw ParseError(first_line + i,
                       "head " + std::to_string(token.head) +
                           " refers to no token in the sentence");
    }
    if (token.head == token.index) {
      throw ParseError(first_line + i, "token is its own head");
    }
    if (token.head == 0) has_root = true;
  }
  if (!has_root) throw ParseError(first_line, "sentence has no root");
}

}  // namespace

std::set<std::string> VerbFrames::SubjectSet() const {
  std::set<std::string> out;
  for (const auto &[noun, count] : subjects) out.insert(noun);
  return out;
}

std::set<std::string> VerbFrames::ObjectSet() const {
  std::set<std::string> out;
  for (const auto &[noun, count] : objects) out.insert(noun);
  return out;
}

std::vector<DepSentence> ParseConllu(std::istream &in) {
  std::vector<DepSentence> sentences;
  DepSentence current;
  std::size_t first_line = 0;  // line of the first token of `current`
  bool in_block = false;
  std::string raw;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (!current.tokens.empty()) {
      CheckSentence(current, first_line);
      sentences.push_back(std::move(current));
    }
    current = DepSentence();
    in_block = false;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = StripCR(raw);
    if (line.empty()) {
      flush();
      continue;
    }
    in_block = true;
    if (line.front() == '#') {
      std::string_view body = line.substr(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      if (body.starts_with("sent_id")) {
        const auto eq = body.find('=');
        if (eq != std::string_view::npos) {
          std::string_view value = body.substr(eq + 1);
          while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
          current.sentence_id = std::string(value);
        }
      }
      continue;
    }
    const std::vector<std::string> cols = Split(line, '\t');
    if (cols.size() != 10) {
      throw ParseError(line_no, "expected 10 tab-separated columns, found " +
                                    std::to_string(cols.size()));
    }
    if (IsRangeId(cols[0]) || IsEmptyNodeId(cols[0])) continue;

    Token token;
    long long value = 0;
    if (!ParseInt(cols[0], &value) || value < 1) {
      throw ParseError(line_no, "invalid token id '" + cols[0] + "'");
    }
    token.index = static_cast<int>(value);
    if (!ParseInt(cols[6], &value) || value < 0) {
      throw ParseError(line_no, "invalid head '" + cols[6] + "'");
    }
    token.head = static_cast<int>(value);
    token.form = cols[1];
    token.lemma = cols[2];
    token.upos = cols[3];
    token.deprel = cols[7];
    if (token.deprel.empty() || token.deprel == "_") {
      throw ParseError(line_no, "missing dependency relation");
    }
    if (current.tokens.empty()) first_line = line_no;
    current.tokens.push_back(std::move(token));
  }
  if (in_block) flush();
  return sentences;
}

void WriteConllu(const std::vector<DepSentence> &sentences, std::ostream &out) {
  for (const DepSentence &sentence : sentences) {
    if (!sentence.sentence_id.empty()) {
      out << "# sent_id = " << sentence.sentence_id << '\n';
    }
    for (const Token &t : sentence.tokens) {
      out << t.index << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos
          << "\t_\t_\t" << t.head << '\t' << t.deprel << "\t_\t_\n";
    }
    out << '\n';
  }
}

std::vector<FrameTriple> ExtractFrames(
    const std::vector<DepSentence> &sentences) {
  std::vector<FrameTriple> triples;
  for (const DepSentence &sentence : sentences) {
    const int n = static_cast<int>(sentence.tokens.size());
    std::vector<std::vector<int>> children(n + 1);
    for (const Token &t : sentence.tokens) children[t.head].push_back(t.index);

    for (const Token &verb : sentence.tokens) {
      if (verb.upos != "VERB") continue;
      const Token *subject = nullptr;
      std::vector<const Token *> objects;
      for (int child : children[verb.index]) {
        const Token &c = sentence.at(child);
        if (c.deprel == "nsubj" && subject == nullptr) subject = &c;
        if (c.deprel == "obj") objects.push_back(&c);
      }
      if (objects.empty()) continue;
      if (subject == nullptr && verb.deprel == "acl:relcl" && verb.head > 0) {
        subject = &sentence.at(verb.head);
      }
      if (subject == nullptr || subject->upos != "NOUN") continue;
      for (const Token *object : objects) {
        if (object->upos != "NOUN") continue;
        triples.push_back({ToLowerAscii(subject->lemma),
                           ToLowerAscii(verb.lemma),
                           ToLowerAscii(object->lemma)});
      }
    }
  }
  return triples;
}

VerbFrameTable BuildFrameTable(const std::vector<FrameTriple> &triples) {
  VerbFrameTable table;
  for (const FrameTriple &t : triples) {
    VerbFrames &frames = table[t.verb];
    ++frames.subjects[t.subject];
    ++frames.objects[t.object];
    ++frames.frame_count;
  }
  return table;
}

std::set<std::string> CollectNouns(const std::vector<DepSentence> &sentences) {
  std::set<std::string> nouns;
  for (const DepSentence &sentence : sentences) {
    for (const Token &t : sentence.tokens) {
      if (t.upos == "NOUN") nouns.insert(ToLowerAscii(t.lemma));
    }
  }
  return nouns;
}

void WriteFrameTable(const VerbFrameTable &table, std::ostream &out) {
  for (const auto &[verb, frames] : table) {
    for (const auto &[noun, count] : frames.objects) {
      out << verb << "\tO\t" << noun << '\t' << count << '\n';
    }
    for (const auto &[noun, count] : frames.subjects) {
      out << verb << "\tS\t" << noun << '\t' << count << '\n';
    }
  }
}

VerbFrameTable ReadFrameTable(std::istream &in) {
  VerbFrameTable table;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = StripCR(raw);
    if (line.empty()) continue;
    const std::vector<std::string> cols = Split(line, '\t');
    long long count = 0;
    if (cols.size() != 4 || !ParseInt(cols[3], &count) || count < 1) {
      throw ParseError(line_no, "expected verb<TAB>S|O<TAB>noun<TAB>count");
    }
    VerbFrames &frames = table[cols[0]];
    if (cols[1] == "S") {
      frames.subjects[cols[2]] += static_cast<std::size_t>(count);
      frames.frame_count += static_cast<std::size_t>(count);
    } else if (cols[1] == "O") {
      frames.objects[cols[2]] += static_cast<std::size_t>(count);
    } else {
      throw ParseError(line_no, "role must be S or O, got '" + cols[1] + "'");
    }
  }
  for (const auto &[verb, frames] : table) {
    std::size_t object_total = 0;
    for (const auto &[noun, count] : frames.objects) object_total += count;
    if (object_total != frames.frame_count) {
      throw ParseError(0, "frame table: subject and object counts of '" +
                              verb + "' disagree");
    }
  }
  return table;
}

}  // namespace unacc
