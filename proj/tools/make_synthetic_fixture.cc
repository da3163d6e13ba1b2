// Writes the synthetic end-to-end fixture (corpus.conllu, vectors.txt,
// lm.txt, gold.tsv) into a directory.

#include <iostream>

#include "unacc/error.h"
#include "unacc/fixture.h"

int main(int argc, char **argv) {
  if (argc != 2) {
    std::cerr << "usage: " << argv[0] << " OUTPUT_DIR\n";
    return 1;
  }
  try {
    unacc::WriteSyntheticFixture(unacc::MakeSyntheticFixture(), argv[1]);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
