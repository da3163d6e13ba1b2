#ifndef UNACC_FIXTURE_H_
#define UNACC_FIXTURE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace unacc {

// A small artificial world with known answers. Agent nouns ("agentNN") and
// patient nouns ("patientNN") form two tight clusters in the vector space.
// Every verb is seen transitively with agents as subjects and patients as
// objects; unaccusative verbs are also seen intransitively with every patient
// as subject, unergative verbs with every agent.
struct SyntheticFixture {
  std::string conllu;
  std::string vectors;
  std::string lm_corpus;
  std::string gold;
  std::vector<std::string> unaccusative;
  std::vector<std::string> unergative;
};

struct SyntheticOptions {
  int cluster_size = 64;    // nouns per role
  int seeds_per_verb = 12;  // distinct subjects and objects per verb
  int intransitive_repeats = 2;
  int dimension = 8;
  std::uint64_t seed = 7;
};

SyntheticFixture MakeSyntheticFixture(const SyntheticOptions &options = {});

// corpus.conllu, vectors.txt, lm.txt, gold.tsv
void WriteSyntheticFixture(const SyntheticFixture &fixture,
                           const std::string &dir);

}  // namespace unacc

#endif  // UNACC_FIXTURE_H_
