#include "unacc/fixture.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "unacc/error.h"
#include "unacc/probe.h"
#include "unacc/util.h"

namespace unacc {

namespace {

std::string NounName(const char *prefix, int i) {
  std::string digits = std::to_string(i);
  if (digits.size() < 2) digits.insert(0, "0");
  return prefix + digits;
}

struct Builder {
  std::ostringstream conllu;
  std::ostringstream text;
  int next_id = 1;

  // "The <subject> <verb>s the <object> ."
  void Transitive(const std::string &subject, const std::string &verb,
                  const std::string &object) {
    const std::string form = Inflect3sg(verb);
    conllu << "# sent_id = s" << next_id++ << '\n'
           << "1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_\n"
           << "2\t" << subject << '\t' << subject << "\tNOUN\t_\t_\t3\tnsubj\t_\t_\n"
           << "3\t" << form << '\t' << verb << "\tVERB\t_\t_\t0\troot\t_\t_\n"
           << "4\tthe\tthe\tDET\t_\t_\t5\tdet\t_\t_\n"
           << "5\t" << object << '\t' << object << "\tNOUN\t_\t_\t3\tobj\t_\t_\n"
           << "6\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_\n\n";
    text << "The " << subject << ' ' << form << " the " << object << " .\n";
  }

  // "The <subject> <verb>s ."
  void Intransitive(const std::string &subject, const std::string &verb) {
    const std::string form = Inflect3sg(verb);
    conllu << "# sent_id = s" << next_id++ << '\n'
           << "1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_\n"
           << "2\t" << subject << '\t' << subject << "\tNOUN\t_\t_\t3\tnsubj\t_\t_\n"
           << "3\t" << form << '\t' << verb << "\tVERB\t_\t_\t0\troot\t_\t_\n"
           << "4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_\n\n";
    text << "The " << subject << ' ' << form << " .\n";
  }
};

}  // namespace

SyntheticFixture MakeSyntheticFixture(const SyntheticOptions &options) {
  if (options.seeds_per_verb > options.cluster_size) {
    throw Error("seeds_per_verb exceeds cluster_size");
  }
  SyntheticFixture fixture;
  fixture.unaccusative = {"dissolve", "freeze", "melt", "shatter", "sink"};
  fixture.unergative = {"cry", "dance", "laugh", "sleep", "swim"};

  std::vector<std::string> agents;
  std::vector<std::string> patients;
  for (int i = 0; i < options.cluster_size; ++i) {
    agents.push_back(NounName("agent", i));
    patients.push_back(NounName("patient", i));
  }

  Builder b;
  const int n = options.seeds_per_verb;
  auto add_verb = [&](const std::string &verb, int shift, bool unaccusative) {
    for (int i = 0; i < n; ++i) {
      b.Transitive(agents[i], verb, patients[(i + shift) % n]);
    }
    const auto &fillers = unaccusative ? patients : agents;
    for (int r = 0; r < options.intransitive_repeats; ++r) {
      for (const std::string &noun : fillers) b.Intransitive(noun, verb);
    }
  };
  int shift = 0;
  for (const std::string &v : fixture.unaccusative) add_verb(v, shift++, true);
  for (const std::string &v : fixture.unergative) add_verb(v, shift++, false);
  fixture.conllu = b.conllu.str();
  fixture.lm_corpus = b.text.str();

  // Two tight clusters around orthogonal axes, plus non-noun distractors.
  auto rng = KeyedRng(options.seed, {"fixture", "vectors"});
  std::normal_distribution<double> noise(0.0, 0.15);
  std::ostringstream vectors;
  auto emit = [&](const std::string &word, int axis) {
    vectors << word;
    for (int d = 0; d < options.dimension; ++d) {
      const double base = d == axis ? 1.0 : 0.0;
      vectors << ' ' << FormatDouble(base + noise(rng));
    }
    vectors << '\n';
  };
  for (const std::string &a : agents) emit(a, 0);
  for (const std::string &p : patients) emit(p, 1);
  int axis = 2;
  for (const auto *verbs : {&fixture.unaccusative, &fixture.unergative}) {
    for (const std::string &v : *verbs) emit(v, axis++ % options.dimension);
  }
  emit("the", options.dimension - 1);
  fixture.vectors = vectors.str();

  std::ostringstream gold;
  for (const std::string &v : fixture.unaccusative) gold << v << "\tunaccusative\n";
  for (const std::string &v : fixture.unergative) gold << v << "\tunergative\n";
  fixture.gold = gold.str();
  return fixture;
}

void WriteSyntheticFixture(const SyntheticFixture &fixture,
                           const std::string &dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const char *name, const std::string &content) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write fixture file " + std::string(name));
    out << content;
  };
  write("corpus.conllu", fixture.conllu);
  write("vectors.txt", fixture.vectors);
  write("lm.txt", fixture.lm_corpus);
  write("gold.tsv", fixture.gold);
}

}  // namespace unacc
