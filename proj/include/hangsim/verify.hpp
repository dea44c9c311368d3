#pragma once

#include "hangsim/wnorms.hpp"

#include <string>
#include <vector>

namespace hangsim {

struct LemmaResult {
  std::string name;
  bool pass = true;
  double worst_slack = 0.0;
  int checks = 0;
};

// Randomized corpus over (q, h, a, u) families; one deterministic RNG stream
// per trial.  threads <= 0 reads HANGSIM_THREADS (default 1).
std::vector<LemmaResult> verify_lemmas(unsigned long seed, int trials, int threads = 0);

}  // namespace hangsim
