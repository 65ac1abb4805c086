// Acceptance suite: one pass/fail line per criterion.

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "toposforge/verify.hpp"

int main() {
  using namespace toposforge;
  std::uint64_t seed = 20260809;
  if (const char* envSeed = std::getenv("TOPOSFORGE_SEED")) seed = std::stoull(envSeed);

  static const char* names[] = {
      "",
      "soundness of the inference rules + excluded-middle probe",
      "locality and monotonicity",
      "geometricity: stalks vs neighborhoods vs internal truth",
      "nuclei: axioms, negneg = IntClos, sublocale frames",
      "box-translation theorem over sublocale frames",
      "sheafification: separated / sheaf / injectivity laws",
      "spectrum: frame and point counts",
      "structure sheaf, tilde and the generic-filter metaproperty",
      "internal ring properties of the structure sheaf",
      "quasicoherator laws and fixed points",
      "prime-ideal-elimination table",
  };

  int failed = 0;
  for (int k = 1; k <= 11; ++k) {
    auto t0 = std::chrono::steady_clock::now();
    Report rep = acceptance_criterion(k, seed);
    auto dt =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    bool pass = rep.all_pass();
    std::cout << "CRITERION " << k << " " << (pass ? "PASS" : "FAIL") << " [" << names[k] << ", "
              << rep.lines.size() << " checks, " << dt.count() / 1000.0 << " s]\n";
    if (!pass) {
      ++failed;
      for (auto& l : rep.lines)
        if (!l.pass) std::cout << "  FAIL " << l.name << (l.detail.empty() ? "" : ": " + l.detail)
                               << "\n";
    }
  }
  return failed;
}
