#include <cstdio>
#include <exception>

#include "irrep/fixtures.hpp"

// regenerates the JSON fixture corpus; run from the repository root or pass
// an explicit output directory
int main(int argc, char** argv) {
  const std::string directory = argc > 1 ? argv[1] : "fixtures";
  try {
    irrep::write_fixture_corpus(directory);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fixture generation failed: %s\n", e.what());
    return 1;
  }
  std::printf("fixture corpus written to %s\n", directory.c_str());
  return 0;
}
